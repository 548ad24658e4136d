#include "mflab/quantize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <sstream>

#include "mflab/errors.hpp"
#include "mflab/parallel.hpp"

namespace mflab {

namespace {

long long checked_pow(int ell, int n) {
  long long d = 1;
  for (int i = 0; i < n; ++i) {
    d *= ell;
    if (d > kDenseDimBudget) {
      std::ostringstream os;
      os << "dense dimension " << ell << "^" << n << " exceeds budget " << kDenseDimBudget;
      throw SizeError(os.str());
    }
  }
  return d;
}

// expand a monomial exponent vector into a sorted word of generator indices
std::vector<int> word_of(const std::vector<int>& exps) {
  std::vector<int> w;
  for (int a = 0; a < static_cast<int>(exps.size()); ++a)
    for (int r = 0; r < exps[a]; ++r) w.push_back(a);
  return w;
}

double falling_factorial_inverse(int n, int L) {
  double v = 1.0;
  for (int i = 0; i < L; ++i) v /= static_cast<double>(n - i);
  return v;
}

void hermitize(Matrix& m) { m = 0.5 * (m + m.adjoint().eval()); }

// --- spin-sector machinery (ell = 2) ---------------------------------------

// collective operators 2*S_{x,y,z} in the spin-j block, j = twice_j/2
std::array<Matrix, 3> collective_spin(int twice_j) {
  const int d = twice_j + 1;
  const double j = 0.5 * twice_j;
  Matrix sz = Matrix::Zero(d, d), sp = Matrix::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    double m = j - r;  // row r is |j, m>
    sz(r, r) = m;
    if (r >= 1) {
      double mm = j - r;  // S+ |j,m> = sqrt(j(j+1)-m(m+1)) |j,m+1>
      sp(r - 1, r) = std::sqrt(j * (j + 1) - mm * (mm + 1));
    }
  }
  Matrix sm = sp.adjoint();
  const std::complex<double> I(0.0, 1.0);
  return {sp + sm, -I * (sp - sm), 2.0 * sz};
}

// Distinct-ordered-tuple sums D(word) within one sector, via the contraction
// recursion: appending a letter multiplies by the collective operator and
// subtracts the single-site merges through the product tensor.
class SectorWordSums {
 public:
  SectorWordSums(int n_sites, int twice_j, const MatrixBasis& basis)
      : n_(n_sites), basis_(basis), t_(collective_spin(twice_j)) {
    dim_ = twice_j + 1;
  }

  const Matrix& get(std::vector<int> word) {
    std::sort(word.begin(), word.end());
    auto it = memo_.find(word);
    if (it != memo_.end()) return it->second;
    Matrix val = compute(word);
    return memo_.emplace(std::move(word), std::move(val)).first->second;
  }

 private:
  Matrix compute(const std::vector<int>& word) {
    const int L = static_cast<int>(word.size());
    if (L == 0) return Matrix::Identity(dim_, dim_);
    int a = word.back();
    std::vector<int> head(word.begin(), word.end() - 1);
    Matrix r = get(head) * t_[a];
    for (int i = 0; i < L - 1; ++i) {
      int b = head[i];
      std::vector<int> dropped = head;
      dropped.erase(dropped.begin() + i);
      std::complex<double> p0 = basis_.product_identity(b, a);
      if (p0 != 0.0) r -= p0 * static_cast<double>(n_ - (L - 2)) * get(dropped);
      for (int c = 0; c < basis_.dim(); ++c) {
        std::complex<double> pc = basis_.product(b, a, c);
        if (pc == 0.0) continue;
        std::vector<int> merged = dropped;
        merged.push_back(c);
        r -= pc * get(merged);
      }
    }
    return r;
  }

  int n_;
  int dim_;
  const MatrixBasis& basis_;
  std::array<Matrix, 3> t_;
  std::map<std::vector<int>, Matrix> memo_;
};

}  // namespace

long long dense_dim(int ell, int n_sites) {
  if (n_sites < 0) throw Error("negative site count");
  return checked_pow(ell, n_sites);
}

DenseOperator symmetrize(const DenseOperator& a, int n_sites) {
  const int M = a.n_sites;
  const int N = n_sites;
  const int ell = a.ell;
  if (M > N) throw DimensionError("symmetrize: source has more sites than target");
  const long long dim_n = dense_dim(ell, N);
  const long long dim_rest = dim_n / checked_pow(ell, M);

  DenseOperator out;
  out.n_sites = N;
  out.ell = ell;
  out.matrix = Matrix::Zero(dim_n, dim_n);

  // strides of each global site (site 0 = leftmost tensor factor)
  std::vector<long long> stride(N);
  for (int s = 0; s < N; ++s) {
    long long v = 1;
    for (int i = s + 1; i < N; ++i) v *= ell;
    stride[s] = v;
  }

  std::vector<int> tuple;
  std::vector<bool> used(N, false);
  std::vector<int> rest_sites;

  std::function<void()> place = [&]() {
    if (static_cast<int>(tuple.size()) == M) {
      rest_sites.clear();
      for (int s = 0; s < N; ++s)
        if (!used[s]) rest_sites.push_back(s);
      for (long long ra = 0; ra < a.matrix.rows(); ++ra)
        for (long long ca = 0; ca < a.matrix.cols(); ++ca) {
          std::complex<double> v = a.matrix(ra, ca);
          if (v == 0.0) continue;
          long long rbase = 0, cbase = 0;
          long long rr = ra, cc = ca;
          for (int i = M - 1; i >= 0; --i) {
            rbase += (rr % ell) * stride[tuple[i]];
            cbase += (cc % ell) * stride[tuple[i]];
            rr /= ell;
            cc /= ell;
          }
          for (long long rest = 0; rest < dim_rest; ++rest) {
            long long off = 0, q = rest;
            for (int i = static_cast<int>(rest_sites.size()) - 1; i >= 0; --i) {
              off += (q % ell) * stride[rest_sites[i]];
              q /= ell;
            }
            out.matrix(rbase + off, cbase + off) += v;
          }
        }
      return;
    }
    for (int s = 0; s < N; ++s) {
      if (used[s]) continue;
      used[s] = true;
      tuple.push_back(s);
      place();
      tuple.pop_back();
      used[s] = false;
    }
  };
  place();

  out.matrix *= falling_factorial_inverse(N, M);
  return out;
}

DenseOperator quantize_dense(const Polynomial& p, int n_sites, const MatrixBasis& basis) {
  if (p.nvars() != basis.dim())
    throw DimensionError("polynomial variable count does not match the basis");
  const int ell = basis.ell();
  const long long dim = dense_dim(ell, n_sites);

  DenseOperator out;
  out.n_sites = n_sites;
  out.ell = ell;
  out.matrix = Matrix::Zero(dim, dim);

  p.for_each_term([&](const std::vector<int>& exps, double c) {
    std::vector<int> w = word_of(exps);
    const int L = static_cast<int>(w.size());
    if (L > n_sites) return;  // Q_N kills monomials of degree > N
    Matrix elem = Matrix::Identity(1, 1);
    for (int i = 0; i < L; ++i) {
      Matrix next(elem.rows() * ell, elem.cols() * ell);
      for (long long r = 0; r < elem.rows(); ++r)
        for (long long cc = 0; cc < elem.cols(); ++cc)
          next.block(r * ell, cc * ell, ell, ell) = elem(r, cc) * basis.generator(w[i]);
      elem = std::move(next);
    }
    DenseOperator piece{L, ell, std::move(elem)};
    out.matrix += c * symmetrize(piece, n_sites).matrix;
  });

  hermitize(out.matrix);
  return out;
}

BlockOperator quantize_block(const Polynomial& p, int n_sites, const MatrixBasis& basis,
                             int max_sites) {
  if (basis.ell() != 2)
    throw UnsupportedBackendError("spin-sector backend supports ell = 2 only");
  if (p.nvars() != basis.dim())
    throw DimensionError("polynomial variable count does not match the basis");
  if (n_sites < 1) throw Error("need at least one site");
  if (n_sites > max_sites) {
    std::ostringstream os;
    os << "block backend: N = " << n_sites << " exceeds the configured budget " << max_sites;
    throw SizeError(os.str());
  }

  BlockOperator out;
  out.n_sites = n_sites;
  out.blocks.resize(n_sites / 2 + 1);

  parallel_for(out.sector_count(), [&](int s) {
    const int twice_j = n_sites - 2 * s;
    SectorWordSums sums(n_sites, twice_j, basis);
    Matrix acc = Matrix::Zero(twice_j + 1, twice_j + 1);
    p.for_each_term([&](const std::vector<int>& exps, double c) {
      std::vector<int> w = word_of(exps);
      const int L = static_cast<int>(w.size());
      if (L > n_sites) return;
      acc += c * falling_factorial_inverse(n_sites, L) * sums.get(w);
    });
    hermitize(acc);
    out.blocks[s] = std::move(acc);
  });
  return out;
}

BigInt sector_multiplicity(int n_sites, int twice_j) {
  if (n_sites < 1) throw SectorError("need at least one site");
  if (twice_j < 0 || twice_j > n_sites || (n_sites - twice_j) % 2 != 0)
    throw SectorError("spin label incompatible with the site count");
  auto binom = [](int n, int k) -> BigInt {
    if (k < 0 || k > n) return 0;
    BigInt v = 1;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
  };
  int s = (n_sites - twice_j) / 2;
  return binom(n_sites, s) - binom(n_sites, s - 1);
}

double log_sector_multiplicity(int n_sites, int twice_j) {
  BigInt m = sector_multiplicity(n_sites, twice_j);
  return std::log(m.convert_to<double>());
}

double op_norm(const DenseOperator& a) { return hermitian_op_norm(a.matrix); }

double op_norm(const BlockOperator& a) {
  std::vector<double> norms(a.sector_count());
  parallel_for(a.sector_count(), [&](int s) { norms[s] = hermitian_op_norm(a.blocks[s]); });
  double m = 0.0;
  for (double v : norms) m = std::max(m, v);
  return m;
}

double trace_power(const DenseOperator& a, int m) {
  Matrix acc = Matrix::Identity(a.matrix.rows(), a.matrix.cols());
  for (int i = 0; i < m; ++i) acc = acc * a.matrix;
  return acc.trace().real();
}

double trace_power(const BlockOperator& a, int m) {
  double total = 0.0;
  for (int s = 0; s < a.sector_count(); ++s) {
    Matrix acc = Matrix::Identity(a.sector_dim(s), a.sector_dim(s));
    for (int i = 0; i < m; ++i) acc = acc * a.blocks[s];
    double mult = sector_multiplicity(a.n_sites, a.twice_j(s)).convert_to<double>();
    total += mult * acc.trace().real();
  }
  return total;
}

double trace_exp(const DenseOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues().array().exp().sum();
}

double trace_exp(const BlockOperator& a) {
  double total = 0.0;
  for (int s = 0; s < a.sector_count(); ++s) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.blocks[s], Eigen::EigenvaluesOnly);
    double mult = sector_multiplicity(a.n_sites, a.twice_j(s)).convert_to<double>();
    total += mult * es.eigenvalues().array().exp().sum();
  }
  return total;
}

namespace {

double dgr_defect_impl(const DenseOperator& qf, const DenseOperator& qg,
                       const DenseOperator& qbracket, int n_sites) {
  const std::complex<double> I(0.0, 1.0);
  Matrix diff = qbracket.matrix -
                I * static_cast<double>(n_sites) * (qf.matrix * qg.matrix - qg.matrix * qf.matrix);
  return hermitian_op_norm(diff);
}

template <>
double dgr_defect_impl(const BlockOperator& qf, const BlockOperator& qg,
                       const BlockOperator& qbracket, int n_sites) {
  const std::complex<double> I(0.0, 1.0);
  std::vector<double> norms(qf.sector_count());
  parallel_for(qf.sector_count(), [&](int s) {
    Matrix diff = qbracket.blocks[s] -
                  I * static_cast<double>(n_sites) *
                      (qf.blocks[s] * qg.blocks[s] - qg.blocks[s] * qf.blocks[s]);
    norms[s] = hermitian_op_norm(diff);
  });
  double m = 0.0;
  for (double v : norms) m = std::max(m, v);
  return m;
}

}  // namespace

double dgr_defect(const Polynomial& f, const Polynomial& g, int n_sites,
                  const MatrixBasis& basis, Backend backend) {
  Polynomial pb = poisson_bracket(f, g, basis);
  Backend use = resolve_backend(backend, basis.ell(), n_sites);
  if (use == Backend::Dense) {
    return dgr_defect_impl(quantize_dense(f, n_sites, basis), quantize_dense(g, n_sites, basis),
                           quantize_dense(pb, n_sites, basis), n_sites);
  }
  return dgr_defect_impl(quantize_block(f, n_sites, basis), quantize_block(g, n_sites, basis),
                         quantize_block(pb, n_sites, basis), n_sites);
}

double pairing(const StateCoords& x, const Polynomial& p, int n_sites) {
  // over distinct tuples a product state factorizes site by site, so the
  // expectation is N-independent once N reaches the monomial degree
  return p.evaluate_truncated(x.x, n_sites);
}

DenseOperator collective_dense(const Polynomial& h, int n_sites, const MatrixBasis& basis) {
  const int ell = basis.ell();
  const long long dim = dense_dim(ell, n_sites);
  std::vector<Matrix> collective(basis.dim());
  for (int a = 0; a < basis.dim(); ++a) {
    Polynomial xa = Polynomial::variable(basis.dim(), a);
    collective[a] = quantize_dense(xa, n_sites, basis).matrix;
  }
  DenseOperator out{n_sites, ell, Matrix::Zero(dim, dim)};
  h.for_each_term([&](const std::vector<int>& exps, double c) {
    Matrix acc = Matrix::Identity(dim, dim);
    for (int a = 0; a < basis.dim(); ++a)
      for (int r = 0; r < exps[a]; ++r) acc = acc * collective[a];
    out.matrix += c * acc;
  });
  hermitize(out.matrix);
  return out;
}

BlockOperator collective_block(const Polynomial& h, int n_sites, const MatrixBasis& basis,
                               int max_sites) {
  if (basis.ell() != 2)
    throw UnsupportedBackendError("spin-sector backend supports ell = 2 only");
  if (n_sites > max_sites) throw SizeError("block backend: N exceeds the configured budget");
  BlockOperator out;
  out.n_sites = n_sites;
  out.blocks.resize(n_sites / 2 + 1);
  parallel_for(out.sector_count(), [&](int s) {
    const int twice_j = n_sites - 2 * s;
    const int d = twice_j + 1;
    auto t = collective_spin(twice_j);
    Matrix acc = Matrix::Zero(d, d);
    h.for_each_term([&](const std::vector<int>& exps, double c) {
      Matrix m = Matrix::Identity(d, d);
      for (int a = 0; a < 3; ++a)
        for (int r = 0; r < exps[a]; ++r) m = m * (t[a] / static_cast<double>(n_sites));
      acc += c * m;
    });
    hermitize(acc);
    out.blocks[s] = std::move(acc);
  });
  return out;
}

}  // namespace mflab
