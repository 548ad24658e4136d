#include "mflab/poly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "mflab/errors.hpp"

namespace mflab {

namespace {

int bits_for(int nvars) {
  if (nvars <= 0) throw DimensionError("polynomial needs at least one variable");
  if (nvars <= 8) return 8;
  if (nvars <= 16) return 4;
  throw DimensionError("more than 16 coordinates is unsupported");
}

int key_degree(std::uint64_t key, int nvars, int bits) {
  int deg = 0;
  std::uint64_t mask = (bits == 64) ? ~0ull : ((1ull << bits) - 1);
  for (int i = 0; i < nvars; ++i) deg += static_cast<int>((key >> (bits * i)) & mask);
  return deg;
}

}  // namespace

Polynomial::Polynomial(int nvars)
    : nvars_(nvars), bits_(bits_for(nvars)), max_exp_((1 << bits_) - 1) {}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  if (c != 0.0) p.terms_.push_back({0ull, c});
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  Polynomial p(nvars);
  if (index < 0 || index >= nvars) throw DimensionError("variable index out of range");
  p.terms_.push_back({1ull << (p.bits_ * index), 1.0});
  return p;
}

Polynomial Polynomial::monomial(int nvars, const std::vector<int>& exps, double c) {
  Polynomial p(nvars);
  if (static_cast<int>(exps.size()) != nvars)
    throw DimensionError("exponent vector has wrong length");
  if (c != 0.0) p.terms_.push_back({p.pack(exps), c});
  return p;
}

std::uint64_t Polynomial::pack(const std::vector<int>& exps) const {
  std::uint64_t key = 0;
  for (int i = 0; i < nvars_; ++i) {
    if (exps[i] < 0 || exps[i] > max_exp_) throw Error("exponent outside packing range");
    key |= static_cast<std::uint64_t>(exps[i]) << (bits_ * i);
  }
  return key;
}

void Polynomial::unpack(std::uint64_t key, std::vector<int>& exps) const {
  exps.assign(nvars_, 0);
  std::uint64_t mask = (1ull << bits_) - 1;
  for (int i = 0; i < nvars_; ++i) exps[i] = static_cast<int>((key >> (bits_ * i)) & mask);
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    std::uint64_t key = terms_[i].first;
    double c = 0.0;
    for (; i < terms_.size() && terms_[i].first == key; ++i) c += terms_[i].second;
    if (c != 0.0) terms_[out++] = {key, c};
  }
  terms_.resize(out);
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& [key, c] : terms_) deg = std::max(deg, key_degree(key, nvars_, bits_));
  return deg;
}

double Polynomial::coefficient(const std::vector<int>& exps) const {
  std::uint64_t key = pack(exps);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const auto& t, std::uint64_t k) { return t.first < k; });
  return (it != terms_.end() && it->first == key) ? it->second : 0.0;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::evaluate(const Vector& x) const {
  return evaluate_truncated(x, std::numeric_limits<int>::max());
}

double Polynomial::evaluate_truncated(const Vector& x, int max_degree) const {
  if (x.size() != nvars_) throw DimensionError("evaluation point has wrong dimension");
  double acc = 0.0;
  std::uint64_t mask = (1ull << bits_) - 1;
  for (const auto& [key, c] : terms_) {
    if (key_degree(key, nvars_, bits_) > max_degree) continue;
    double v = c;
    for (int i = 0; i < nvars_; ++i) {
      int e = static_cast<int>((key >> (bits_ * i)) & mask);
      for (int r = 0; r < e; ++r) v *= x(i);
    }
    acc += v;
  }
  return acc;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw DimensionError("derivative variable out of range");
  Polynomial out(nvars_);
  std::uint64_t mask = (1ull << bits_) - 1;
  out.terms_.reserve(terms_.size());
  for (const auto& [key, c] : terms_) {
    int e = static_cast<int>((key >> (bits_ * var)) & mask);
    if (e == 0) continue;
    out.terms_.push_back({key - (1ull << (bits_ * var)), c * e});
  }
  out.normalize();
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [key, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionError("polynomial variable counts differ");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionError("polynomial variable counts differ");
  terms_.reserve(terms_.size() + o.terms_.size());
  for (const auto& [key, c] : o.terms_) terms_.push_back({key, -c});
  normalize();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw DimensionError("polynomial variable counts differ");
  Polynomial out(a.nvars_);
  const int bits = a.bits_;
  const std::uint64_t mask = (1ull << bits) - 1;
  std::unordered_map<std::uint64_t, double> acc;
  acc.reserve(a.terms_.size() * 2);
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) {
        if (((ka >> (bits * i)) & mask) + ((kb >> (bits * i)) & mask) > mask)
          throw Error("product exponent outside packing range");
      }
      acc[ka + kb] += ca * cb;
    }
  out.terms_.reserve(acc.size());
  for (const auto& [k, c] : acc)
    if (c != 0.0) out.terms_.push_back({k, c});
  out.normalize();
  return out;
}

Polynomial operator*(double s, const Polynomial& p) {
  Polynomial out = p;
  if (s == 0.0) {
    out.terms_.clear();
    return out;
  }
  for (auto& [key, c] : out.terms_) c *= s;
  return out;
}

void Polynomial::for_each_term(
    const std::function<void(const std::vector<int>&, double)>& f) const {
  std::vector<int> exps;
  for (const auto& [key, c] : terms_) {
    unpack(key, exps);
    f(exps, c);
  }
}

bool Polynomial::coefficients_close(const Polynomial& o, double tol) const {
  if (o.nvars_ != nvars_) return false;
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j >= o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      if (std::abs(terms_[i].second) > tol) return false;
      ++i;
    } else if (i >= terms_.size() || terms_[j].first < terms_[i].first) {
      if (std::abs(o.terms_[j].second) > tol) return false;
      ++j;
    } else {
      if (std::abs(terms_[i].second - o.terms_[j].second) > tol) return false;
      ++i;
      ++j;
    }
  }
  return true;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  std::vector<int> exps;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    unpack(key, exps);
    double v = c;
    if (first) {
      if (v < 0) {
        os << "-";
        v = -v;
      }
    } else {
      os << (v < 0 ? " - " : " + ");
      v = std::abs(v);
    }
    first = false;
    bool any_var = key != 0;
    if (!any_var || v != 1.0) os << v;
    bool star = (!any_var || v != 1.0);
    for (int i = 0; i < nvars_; ++i) {
      if (exps[i] == 0) continue;
      if (star) os << "*";
      os << "x" << (i + 1);
      if (exps[i] > 1) os << "^" << exps[i];
      star = true;
    }
  }
  return os.str();
}

// --- parser -----------------------------------------------------------------

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
};

double parse_number(Cursor& cur) {
  cur.skip_ws();
  const char* begin = cur.s.data() + cur.pos;
  const char* end = cur.s.data() + cur.s.size();
  double value = 0.0;
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr == begin)
    throw ParseError("expected a number", cur.pos);
  cur.pos += static_cast<std::size_t>(res.ptr - begin);
  return value;
}

int parse_uint(Cursor& cur, const char* what) {
  cur.skip_ws();
  std::size_t start = cur.pos;
  int v = 0;
  while (cur.pos < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.pos]))) {
    v = v * 10 + (cur.s[cur.pos] - '0');
    if (v > 1'000'000) throw ParseError("number too large", start);
    ++cur.pos;
  }
  if (cur.pos == start) throw ParseError(std::string("expected ") + what, start);
  return v;
}

}  // namespace

Polynomial Polynomial::parse(const std::string& text, int nvars) {
  Polynomial result(nvars);
  Cursor cur{text};
  if (cur.eof()) throw ParseError("empty polynomial", 0);

  bool first_term = true;
  while (!cur.eof()) {
    double sign = 1.0;
    if (cur.accept('+')) {
      sign = 1.0;
    } else if (cur.accept('-')) {
      sign = -1.0;
    } else if (!first_term) {
      throw ParseError("expected '+' or '-' between terms", cur.pos);
    }
    first_term = false;

    // term: '*'-separated factors, each a number or x<i>[^<e>]
    double coeff = sign;
    std::vector<int> exps(nvars, 0);
    bool want_factor = true;
    while (want_factor) {
      cur.skip_ws();
      std::size_t fpos = cur.pos;
      char c = cur.peek();
      if (c == 'x' || c == 'X') {
        ++cur.pos;
        int index = parse_uint(cur, "variable index after 'x'");
        if (index < 1 || index > nvars) {
          std::ostringstream os;
          os << "unknown variable x" << index << " (valid: x1..x" << nvars << ")";
          throw ParseError(os.str(), fpos);
        }
        int e = 1;
        if (cur.accept('^')) e = parse_uint(cur, "exponent after '^'");
        exps[index - 1] += e;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coeff *= parse_number(cur);
      } else {
        throw ParseError("expected a number or variable", fpos);
      }
      want_factor = cur.accept('*');
      if (want_factor && cur.eof()) throw ParseError("dangling '*'", cur.pos);
    }
    result += Polynomial::monomial(nvars, exps, coeff);
  }
  return result;
}

// --- bracket and norms -------------------------------------------------------

Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g, const MatrixBasis& basis) {
  const int d = basis.dim();
  if (f.nvars() != d || g.nvars() != d)
    throw DimensionError("polynomial variable count does not match the basis");

  std::vector<Polynomial> df, dg;
  df.reserve(d);
  dg.reserve(d);
  for (int a = 0; a < d; ++a) {
    df.push_back(f.derivative(a));
    dg.push_back(g.derivative(a));
  }

  const double s = static_cast<double>(basis.bracket_sign());
  Polynomial out(d);
  for (const auto& e : basis.structure_nonzeros()) {
    if (df[e.a].is_zero() || dg[e.b].is_zero()) continue;
    Polynomial term = df[e.a] * dg[e.b];
    // multiply by x_c and scale
    Polynomial shifted = Polynomial::variable(d, e.c) * term;
    out += (s * e.value) * shifted;
  }
  return out;
}

NormBound norm_upper(const Polynomial& f, int k) {
  // For a monomial with exponent beta the bound contributes
  // |c| * sum_{j <= min(k,|beta|)} binom(|beta|, j); the j-sum collapses the
  // product-of-binomials count of derivative multi-indices with |alpha| = j.
  NormBound nb;
  nb.order = k;
  double total = 0.0;
  f.for_each_term([&](const std::vector<int>& exps, double c) {
    int deg = 0;
    for (int e : exps) deg += e;
    int kk = (k == kOrderInf) ? deg : std::min(k, deg);
    double weight = 0.0;
    double binom = 1.0;  // binom(deg, 0)
    for (int j = 0; j <= kk; ++j) {
      weight += binom;
      binom = binom * (deg - j) / (j + 1);
    }
    total += std::abs(c) * weight;
  });
  nb.value = total;
  return nb;
}

double m_constant(const MatrixBasis& basis) {
  double d = static_cast<double>(basis.dim());
  return 2.0 * d * d * d * basis.max_structure();
}

bool in_U(const Polynomial& f, double delta_est, const MatrixBasis& basis) {
  if (delta_est <= 0.0) throw Error("delta_est must be positive");
  return norm_upper(f, kOrderInf).value < delta_est / (2.0 * m_constant(basis));
}

}  // namespace mflab
