#pragma once
#include <complex>
#include <vector>

#include "mflab/linalg.hpp"

namespace mflab {

// Coordinates x_mu = Tr(rho * t_mu) of a state on the body Q_ell.
struct StateCoords {
  Vector x;
};

// Hermitian traceless generator system of M_ell(C), rescaled to unit operator
// norm, together with its structure constants and the single-site product
// expansion  t_a t_b = P0[a][b] 1 + sum_c P[a][b][c] t_c.
//
// For ell = 2 the generators are exactly (sigma_x, sigma_y, sigma_z); the
// commutators satisfy [t_a, t_b] = i sum_c C_ab^c t_c.
class MatrixBasis {
 public:
  static MatrixBasis build(int ell);

  int ell() const { return ell_; }
  int dim() const { return dim_; }  // ell^2 - 1

  const Matrix& generator(int a) const { return generators_[a]; }
  const std::vector<Matrix>& generators() const { return generators_; }

  double structure(int a, int b, int c) const { return c_[idx(a, b, c)]; }
  std::complex<double> product_identity(int a, int b) const { return p0_[a * dim_ + b]; }
  std::complex<double> product(int a, int b, int c) const { return p_[idx(a, b, c)]; }

  double max_structure() const { return max_c_; }
  double generator_square_trace(int a) const { return gram_[a]; }  // Tr(t_a^2)

  // Orientation s of the Lie-Poisson bracket {x_a, x_b} = s * sum_c C_ab^c x_c,
  // calibrated so that quantization intertwines bracket and N-scaled commutator
  // exactly on linear symbols.
  int bracket_sign() const { return bracket_sign_; }

  struct StructureEntry {
    int a, b, c;
    double value;  // C_ab^c, nonzero
  };
  const std::vector<StructureEntry>& structure_nonzeros() const { return nonzeros_; }

 private:
  MatrixBasis() = default;
  std::size_t idx(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * dim_ + b) * dim_ + c;
  }

  int ell_ = 0;
  int dim_ = 0;
  std::vector<Matrix> generators_;
  std::vector<double> c_;                  // C_ab^c
  std::vector<std::complex<double>> p0_;   // identity part of t_a t_b
  std::vector<std::complex<double>> p_;    // generator part of t_a t_b
  std::vector<double> gram_;               // Tr(t_a^2)
  std::vector<StructureEntry> nonzeros_;
  double max_c_ = 0.0;
  int bracket_sign_ = -1;
};

// x_mu = Tr(rho t_mu); rho must be Hermitian, PSD and unit trace within 1e-10.
StateCoords coords_of_density(const Matrix& rho, const MatrixBasis& basis);

// Inverse of the affine parametrization; throws OutOfBodyError when the
// reconstruction is not PSD. For ell = 2 this is rho = (1 + x.sigma)/2.
Matrix density_of_coords(const StateCoords& coords, const MatrixBasis& basis);

}  // namespace mflab
