#include "mflab/bch.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace mflab {

std::vector<Rational> bernoulli(int up_to) {
  if (up_to < 0) throw Error("bernoulli: negative index");
  std::vector<Rational> B(up_to + 1);
  std::vector<BigInt> binom(up_to + 2);
  B[0] = 1;
  for (int m = 1; m <= up_to; ++m) {
    // binom(m+1, j) for j = 0..m
    binom[0] = 1;
    for (int j = 1; j <= m; ++j) binom[j] = binom[j - 1] * (m + 2 - j) / j;
    Rational s = 0;
    for (int j = 0; j < m; ++j) s += Rational(binom[j]) * B[j];
    B[m] = -s / Rational(binom[m]);
  }
  return B;
}

BchSeries<Matrix> bch_matrix(const Matrix& a, const Matrix& b, int k, double bracket_scale) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("bch_matrix: shape mismatch");
  auto bracket = [bracket_scale](const Matrix& x, const Matrix& y) -> Matrix {
    return bracket_scale * (x * y - y * x);
  };
  BchSeries<Matrix> series;
  series.kind = bracket_scale == 1.0 ? BracketKind::Commutator : BracketKind::ScaledCommutator;
  series.bracket_scale = bracket_scale;
  series.coeffs = bch_coefficients(a, b, bracket, k);
  return series;
}

BchSeries<Polynomial> classical_bch(const Polynomial& a_inf, const Polynomial& b_inf, double t,
                                    int k, const MatrixBasis& basis) {
  Polynomial ta = t * a_inf;
  auto bracket = [&basis](const Polynomial& f, const Polynomial& g) {
    return poisson_bracket(f, g, basis);
  };
  BchSeries<Polynomial> series;
  series.kind = BracketKind::Poisson;
  series.coeffs = bch_coefficients(ta, b_inf, bracket, k);
  return series;
}

MajorantSeries majorant_gamma(int n_max) {
  if (n_max < 1) throw Error("majorant_gamma: n_max must be >= 1");
  MajorantSeries ms;
  auto& g = ms.gamma;
  g.assign(n_max, Rational(0));
  g[0] = 1;

  auto bern = bernoulli(n_max + 1);
  std::vector<Rational> fact(n_max + 2);
  fact[0] = 1;
  for (int i = 1; i <= n_max + 1; ++i) fact[i] = fact[i - 1] * i;

  // pows[p][n] = [z^n] y^{2p}, filled in step order so every lookup is ready;
  // pows[0] is y^2 built directly from gamma.
  std::vector<std::vector<Rational>> pows;
  auto coeff_y = [&](int n) -> Rational { return (n >= 1 && n <= n_max) ? g[n - 1] : Rational(0); };

  for (int n = 1; n < n_max; ++n) {
    // extend power tables to order n
    std::size_t pmax = static_cast<std::size_t>(n / 2);
    while (pows.size() < pmax) pows.push_back(std::vector<Rational>(n_max + 1, Rational(0)));
    for (std::size_t pi = 0; pi < pmax; ++pi) {
      Rational v = 0;
      if (pi == 0) {
        for (int i = 1; i < n; ++i) v += coeff_y(i) * coeff_y(n - i);
      } else {
        for (int i = 1; i < n; ++i) v += pows[pi - 1][i] * pows[0][n - i];
      }
      pows[pi][n] = v;
    }

    Rational s = g[n - 1] / 2;
    for (int p = 1; 2 * p <= n; ++p) {
      Rational bp = bern[2 * p];
      if (bp < 0) bp = -bp;
      s += bp / fact[2 * p] * pows[p - 1][n];
    }
    g[n] = s / (n + 1);
  }

  // ratio test over the last up-to-10 ratios
  std::vector<double> ratios;
  for (int n = std::max(1, n_max - 10); n < n_max; ++n) {
    Rational r = g[n - 1] / g[n];
    ratios.push_back(r.convert_to<double>());
  }
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    std::size_t m = ratios.size();
    ms.delta_est = (m % 2 == 1) ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  }
  return ms;
}

double majorant_bound(int m, double alpha, double M, const MajorantSeries& gamma) {
  if (m < 1 || m > gamma.n_max())
    throw TableRangeError("majorant_bound: extend the gamma table");
  return std::pow(M, m - 1) * std::pow(2.0 * alpha, m) * gamma.at(m).convert_to<double>();
}

double tail_bound(int k, double alpha, double M, const MajorantSeries& gamma) {
  if (alpha == 0.0) return 0.0;
  if (!(2.0 * M * alpha < gamma.delta_est))
    throw ConvergenceDomainError("tail_bound: 2 M alpha >= delta_est");
  if (k < 0) throw Error("tail_bound: negative truncation order");
  const int nmax = gamma.n_max();
  double sum = 0.0;
  for (int m = k + 1; m <= nmax; ++m) sum += majorant_bound(m, alpha, M, gamma);
  if (k + 1 <= nmax && nmax >= 2) {
    double last = majorant_bound(nmax, alpha, M, gamma);
    double prev = majorant_bound(nmax - 1, alpha, M, gamma);
    double q = prev > 0.0 ? last / prev : 0.0;
    if (q > 0.0 && q < 1.0) sum += last * q / (1.0 - q);
  }
  return sum;
}

double matrix_bch_check(const Matrix& a, const Matrix& b, int k) {
  if (hermiticity_defect(a) > 1e-12 || hermiticity_defect(b) > 1e-12)
    throw Error("matrix_bch_check expects Hermitian inputs");
  auto series = bch_matrix(a, b, k);
  Matrix z = series.truncation(k);
  Matrix lhs = a.exp() * b.exp();
  Matrix rhs = z.exp();
  return general_op_norm(lhs - rhs);
}

}  // namespace mflab
