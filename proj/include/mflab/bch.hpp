#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <vector>

#include "mflab/errors.hpp"
#include "mflab/linalg.hpp"
#include "mflab/poly.hpp"

namespace mflab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact Bernoulli numbers B_0..B_up_to via the standard recurrence
// sum_{j<=m} binom(m+1, j) B_j = 0 (so B_1 = -1/2).
std::vector<Rational> bernoulli(int up_to);

enum class BracketKind { Commutator, ScaledCommutator, Poisson };

// Coefficients z(1)..z(k) of log(e^a e^b) over an abstract bilinear
// antisymmetric bracket:
//   z(1) = a + b
//   z(n) = (1/2n)[a-b, z(n-1)]
//        + (1/n) sum_{p>=1, 2p<=n-1} B_{2p}/(2p)! *
//          sum_{k_1+..+k_{2p} = n-1} [z(k_1), [... [z(k_{2p}), a+b] ...]
// Scalar coefficients stay exact rationals until they multiply an algebra
// element.
template <typename Elem>
struct BchSeries {
  BracketKind kind = BracketKind::Commutator;
  double bracket_scale = 1.0;  // the N of a scaled commutator, else 1
  std::vector<Elem> coeffs;    // z(1)..z(k)

  Elem truncation(int k) const {
    if (k < 1 || k > static_cast<int>(coeffs.size()))
      throw TableRangeError("truncation order outside computed series");
    Elem acc = coeffs[0];
    for (int n = 1; n < k; ++n) acc = acc + coeffs[n];
    return acc;
  }
};

namespace detail {

// Composition enumeration with memoized nested brackets: the suffix
// (k_m..k_{2p}) of every composition indexes one cached bracket value.
template <typename Elem, typename Bracket>
class BchRecursion {
 public:
  BchRecursion(const Elem& a, const Elem& b, Bracket bracket, int k)
      : bracket_(std::move(bracket)) {
    if (k < 1) throw Error("bch order must be >= 1");
    apb_ = a + b;
    Elem amb = a - b;
    auto bern = bernoulli(k);
    std::vector<Rational> fact(k + 1);
    fact[0] = 1;
    for (int i = 1; i <= k; ++i) fact[i] = fact[i - 1] * i;

    z_.push_back(apb_);
    std::vector<int> comp;
    for (int n = 2; n <= k; ++n) {
      Elem acc = rational_to_double(Rational(1) / (2 * n)) * bracket_(amb, z_[n - 2]);
      for (int p = 1; 2 * p <= n - 1; ++p) {
        Rational coef = bern[2 * p] / fact[2 * p] / n;
        if (coef == 0) continue;
        Elem sum = zero_like(apb_);
        bool any = false;
        comp.assign(2 * p, 1);
        enumerate(n - 1, 2 * p, 0, comp, sum, any);
        if (any) acc = acc + rational_to_double(coef) * sum;
      }
      z_.push_back(acc);
    }
  }

  std::vector<Elem> take() { return std::move(z_); }

 private:
  static double rational_to_double(const Rational& r) {
    return r.template convert_to<double>();
  }
  static Elem zero_like(const Elem& e) { return 0.0 * e; }

  void enumerate(int total, int parts, int slot, std::vector<int>& comp, Elem& sum, bool& any) {
    if (slot == parts - 1) {
      comp[slot] = total;
      const Elem& v = nested(comp, slot);
      if (any)
        sum = sum + v;
      else
        sum = v;
      any = true;
      return;
    }
    for (int k = 1; k <= total - (parts - 1 - slot); ++k) {
      comp[slot] = k;
      enumerate(total - k, parts, slot + 1, comp, sum, any);
    }
  }

  // [z(comp[from]), [ ... [z(comp.back()), a+b] ... ]]
  const Elem& nested(const std::vector<int>& comp, int from) {
    if (from == static_cast<int>(comp.size())) return apb_;
    key_.assign(comp.begin() + from, comp.end());
    auto it = memo_.find(key_);
    if (it != memo_.end()) return it->second;
    Elem val = bracket_(z_[comp[from] - 1], nested(comp, from + 1));
    auto [ins, ok] = memo_.emplace(key_, std::move(val));
    return ins->second;
  }

  Bracket bracket_;
  Elem apb_;
  std::vector<Elem> z_;
  std::map<std::vector<int>, Elem> memo_;
  std::vector<int> key_;
};

}  // namespace detail

template <typename Elem, typename Bracket>
std::vector<Elem> bch_coefficients(const Elem& a, const Elem& b, Bracket&& bracket, int k) {
  detail::BchRecursion<Elem, std::decay_t<Bracket>> rec(a, b, std::forward<Bracket>(bracket), k);
  return rec.take();
}

// Matrix BCH with the plain commutator (bracket_scale 1) or the N-scaled
// commutator N[.,.].
BchSeries<Matrix> bch_matrix(const Matrix& a, const Matrix& b, int k, double bracket_scale = 1.0);

// Classical series z(t*a_inf, b_inf, {.,.}, n), n <= k, over the Lie-Poisson
// bracket of the basis.
BchSeries<Polynomial> classical_bch(const Polynomial& a_inf, const Polynomial& b_inf, double t,
                                    int k, const MatrixBasis& basis);

// Positive majorant coefficients gamma(n) of the comparison ODE
//   y' = 1/2 y + sum_p |B_2p|/(2p)! y^{2p}  (as a power series, gamma(1) = 1)
// kept exact; delta_est is the ratio-test estimate of the convergence radius
// (median of gamma(n)/gamma(n+1) over the last 10 ratios).
struct MajorantSeries {
  std::vector<Rational> gamma;  // gamma[n-1] = gamma(n)
  double delta_est = 0.0;
  int n_max() const { return static_cast<int>(gamma.size()); }
  const Rational& at(int n) const {
    if (n < 1 || n > n_max()) throw TableRangeError("gamma(n) outside computed table");
    return gamma[n - 1];
  }
};

MajorantSeries majorant_gamma(int n_max);

// M^{m-1} (2 alpha)^m gamma(m)
double majorant_bound(int m, double alpha, double M, const MajorantSeries& gamma);

// sum_{m > k} majorant_bound(m) plus a geometric remainder for the part beyond
// the table; requires 2 M alpha < delta_est.
double tail_bound(int k, double alpha, double M, const MajorantSeries& gamma);

// ||e^a e^b - e^{Z^k}|| in operator norm, the truncation defect of the series.
double matrix_bch_check(const Matrix& a, const Matrix& b, int k);

}  // namespace mflab
