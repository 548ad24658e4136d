#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mflab/lie_basis.hpp"

namespace mflab {

// Real-coefficient polynomial in the coordinates x_1..x_nvars of the state
// body. Terms are kept canonical: sorted by packed exponent key, no stored
// zero coefficients. Exponents are packed into a 64-bit key (8 bits per
// variable up to 8 variables, 4 bits up to 16), which covers every single-site
// dimension this laboratory targets.
class Polynomial {
 public:
  explicit Polynomial(int nvars);

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int index);  // x_{index+1}
  static Polynomial monomial(int nvars, const std::vector<int>& exps, double c);

  // Textual form, e.g. "1.5*x1^2*x3 - 0.25*x2". Whitespace-insensitive;
  // unknown variables are rejected. Throws ParseError with a byte offset.
  static Polynomial parse(const std::string& text, int nvars);

  int nvars() const { return nvars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  double coefficient(const std::vector<int>& exps) const;
  double max_abs_coefficient() const;

  double evaluate(const Vector& x) const;
  // evaluation of Q_N-compatible part: terms of degree > max_degree dropped
  double evaluate_truncated(const Vector& x, int max_degree) const;
  Polynomial derivative(int var) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);

  // f(exponents, coefficient) over canonical terms
  void for_each_term(const std::function<void(const std::vector<int>&, double)>& f) const;

  std::string to_string() const;

  bool coefficients_close(const Polynomial& o, double tol) const;

 private:
  friend Polynomial poisson_bracket(const Polynomial&, const Polynomial&, const MatrixBasis&);
  void unpack(std::uint64_t key, std::vector<int>& exps) const;
  std::uint64_t pack(const std::vector<int>& exps) const;
  void normalize();  // sort, merge, strip zeros

  int nvars_;
  int bits_;
  int max_exp_;
  std::vector<std::pair<std::uint64_t, double>> terms_;
};

// Lie-Poisson bracket {f,g}(x) = s * sum_{a,b,c} C_ab^c x_c d_a f d_b g with
// the calibrated orientation s from the basis.
Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g, const MatrixBasis& basis);

constexpr int kOrderInf = -1;

// Computable upper bound for the derivative norm of order k. The value is
//   sum_{|alpha| <= k} (1/alpha!) U(d^alpha f),  U(p) = sum of |coefficients|,
// which dominates the sup-norm version because |x_c| <= 1 on the state body.
struct NormBound {
  double value = 0.0;
  int order = kOrderInf;  // the k in the k-th order norm; kOrderInf for the limit
};
NormBound norm_upper(const Polynomial& f, int k = kOrderInf);

// M = 2 (ell^2-1)^3 max_{a,b,c} C_ab^c
double m_constant(const MatrixBasis& basis);

// Conservative membership test of the convergence set: the norm bound must be
// below delta_est / (2 M). May reject true members, never the reverse
// relative to the bound.
bool in_U(const Polynomial& f, double delta_est, const MatrixBasis& basis);

}  // namespace mflab
