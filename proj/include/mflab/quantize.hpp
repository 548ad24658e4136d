#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "mflab/lie_basis.hpp"
#include "mflab/poly.hpp"

namespace mflab {

enum class Backend { Dense, Block, Auto };

// auto picks the spin-sector backend for qubits above the small-N regime
inline Backend resolve_backend(Backend b, int ell, int n_sites) {
  if (b != Backend::Auto) return b;
  return (ell == 2 && n_sites > 10) ? Backend::Block : Backend::Dense;
}

// Full-tensor Hermitian operator on (C^ell)^{otimes N}.
struct DenseOperator {
  int n_sites = 0;
  int ell = 2;
  Matrix matrix;
};

// Permutation-invariant Hermitian operator on (C^2)^{otimes N} stored through
// one (2j+1)x(2j+1) block per total-spin sector j = N/2 - s. Multiplicities
// enter traces as weights; blocks are stored once per j.
struct BlockOperator {
  int n_sites = 0;
  std::vector<Matrix> blocks;  // index s = 0..floor(N/2)

  int sector_count() const { return static_cast<int>(blocks.size()); }
  int twice_j(int s) const { return n_sites - 2 * s; }
  int sector_dim(int s) const { return n_sites - 2 * s + 1; }
};

constexpr long long kDenseDimBudget = 1 << 14;
constexpr int kDefaultBlockMaxSites = 400;

// checked ell^N against the dense budget
long long dense_dim(int ell, int n_sites);

// pi_N^M: embeds an M-site operator into N sites and symmetrizes, computed as
// the normalized sum over ordered M-tuples of distinct sites.
DenseOperator symmetrize(const DenseOperator& a, int n_sites);

// Q_N of a polynomial: each degree-L monomial maps through pi_N^L of the
// elementary generator tensor; degree > N contributes zero; the constant term
// maps to a multiple of the identity.
DenseOperator quantize_dense(const Polynomial& p, int n_sites, const MatrixBasis& basis);
BlockOperator quantize_block(const Polynomial& p, int n_sites, const MatrixBasis& basis,
                             int max_sites = kDefaultBlockMaxSites);

// number of spin-j copies inside (C^2)^{otimes N}
BigInt sector_multiplicity(int n_sites, int twice_j);
double log_sector_multiplicity(int n_sites, int twice_j);

double op_norm(const DenseOperator& a);
double op_norm(const BlockOperator& a);

double trace_power(const DenseOperator& a, int m);
double trace_power(const BlockOperator& a, int m);  // includes multiplicities
double trace_exp(const DenseOperator& a);
double trace_exp(const BlockOperator& a);

// || Q_N({f,g}) - i N [Q_N(f), Q_N(g)] ||
double dgr_defect(const Polynomial& f, const Polynomial& g, int n_sites,
                  const MatrixBasis& basis, Backend backend);

// Product-state expectation of Q_N(p) at single-site coordinates x: equals p
// evaluated at x with monomials of degree > N dropped.
double pairing(const StateCoords& x, const Polynomial& p, int n_sites);

// Mean-field Hamiltonian density h(collective averages): monomials evaluate as
// ordered products of the collective operators Q_N(x_a). Asymptotically
// equivalent to Q_N(h) with an O(1/N) gap; used for model comparisons.
DenseOperator collective_dense(const Polynomial& h, int n_sites, const MatrixBasis& basis);
BlockOperator collective_block(const Polynomial& h, int n_sites, const MatrixBasis& basis,
                               int max_sites = kDefaultBlockMaxSites);

}  // namespace mflab
