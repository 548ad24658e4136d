#include "mflab/lie_basis.hpp"

#include <cmath>
#include <sstream>

#include "mflab/errors.hpp"

namespace mflab {

namespace {

constexpr double kCleanTol = 1e-13;

double clean(double v) { return std::abs(v) < kCleanTol ? 0.0 : v; }

std::complex<double> clean(std::complex<double> v) {
  return {clean(v.real()), clean(v.imag())};
}

}  // namespace

MatrixBasis MatrixBasis::build(int ell) {
  if (ell < 2) throw DimensionError("matrix basis requires ell >= 2");

  MatrixBasis b;
  b.ell_ = ell;
  b.dim_ = ell * ell - 1;
  const std::complex<double> I(0.0, 1.0);

  // Off-diagonal symmetric, off-diagonal antisymmetric, then diagonal.
  // Every generator is rescaled to unit operator norm; for ell = 2 this yields
  // the Pauli matrices in the order (sigma_x, sigma_y, sigma_z).
  for (int j = 0; j < ell; ++j)
    for (int k = j + 1; k < ell; ++k) {
      Matrix m = Matrix::Zero(ell, ell);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      b.generators_.push_back(m);
    }
  for (int j = 0; j < ell; ++j)
    for (int k = j + 1; k < ell; ++k) {
      Matrix m = Matrix::Zero(ell, ell);
      m(j, k) = -I;
      m(k, j) = I;
      b.generators_.push_back(m);
    }
  for (int m = 1; m < ell; ++m) {
    // diag(1/m, ..., 1/m, -1, 0, ...): traceless with spectral norm 1
    Matrix d = Matrix::Zero(ell, ell);
    for (int i = 0; i < m; ++i) d(i, i) = 1.0 / m;
    d(m, m) = -1.0;
    b.generators_.push_back(d);
  }

  const int dim = b.dim_;
  b.gram_.resize(dim);
  for (int a = 0; a < dim; ++a)
    b.gram_[a] = (b.generators_[a] * b.generators_[a]).trace().real();

  // Structure constants from [t_a, t_b] = i sum_c C_ab^c t_c via trace pairing
  // against the (orthogonal, not orthonormal) generator system.
  b.c_.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  b.p0_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  b.p_.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  for (int a = 0; a < dim; ++a)
    for (int bb = 0; bb < dim; ++bb) {
      Matrix prod = b.generators_[a] * b.generators_[bb];
      Matrix comm = prod - b.generators_[bb] * b.generators_[a];
      b.p0_[a * dim + bb] = clean(prod.trace() / static_cast<double>(ell));
      for (int c = 0; c < dim; ++c) {
        std::complex<double> cc = (comm * b.generators_[c]).trace() / (I * b.gram_[c]);
        if (std::abs(cc.imag()) > 1e-12)
          throw Error("structure constant came out non-real");
        b.c_[b.idx(a, bb, c)] = clean(cc.real());
        b.p_[b.idx(a, bb, c)] = clean((prod * b.generators_[c]).trace() / b.gram_[c]);
      }
    }

  // exact antisymmetrization in (a, b)
  for (int a = 0; a < dim; ++a)
    for (int bb = a; bb < dim; ++bb)
      for (int c = 0; c < dim; ++c) {
        double v = 0.5 * (b.c_[b.idx(a, bb, c)] - b.c_[b.idx(bb, a, c)]);
        b.c_[b.idx(a, bb, c)] = v;
        b.c_[b.idx(bb, a, c)] = -v;
      }

  b.max_c_ = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int bb = 0; bb < dim; ++bb)
      for (int c = 0; c < dim; ++c) {
        double v = b.c_[b.idx(a, bb, c)];
        b.max_c_ = std::max(b.max_c_, std::abs(v));
        if (v != 0.0) b.nonzeros_.push_back({a, bb, c, v});
      }

  // Verify the stored tensors reproduce commutators and products.
  for (int a = 0; a < dim; ++a)
    for (int bb = 0; bb < dim; ++bb) {
      Matrix comm = b.generators_[a] * b.generators_[bb] - b.generators_[bb] * b.generators_[a];
      Matrix rec = Matrix::Zero(ell, ell);
      Matrix recp = Matrix::Identity(ell, ell) * b.p0_[a * dim + bb];
      for (int c = 0; c < dim; ++c) {
        rec += I * b.c_[b.idx(a, bb, c)] * b.generators_[c];
        recp += b.p_[b.idx(a, bb, c)] * b.generators_[c];
      }
      if ((comm - rec).cwiseAbs().maxCoeff() > 1e-12)
        throw Error("structure tensor fails to reconstruct commutators");
      Matrix prod = b.generators_[a] * b.generators_[bb];
      if ((prod - recp).cwiseAbs().maxCoeff() > 1e-12)
        throw Error("product tensor fails to reconstruct products");
    }

  // Bracket orientation: pick s with i[t_a, t_b] = s sum_c C_ab^c t_c, the
  // single-site identity behind the vanishing of the quantization defect on
  // linear symbols.
  {
    double err_plus = 0.0, err_minus = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int bb = 0; bb < dim; ++bb) {
        Matrix lhs = I * (b.generators_[a] * b.generators_[bb] -
                          b.generators_[bb] * b.generators_[a]);
        Matrix rhs = Matrix::Zero(ell, ell);
        for (int c = 0; c < dim; ++c) rhs += b.c_[b.idx(a, bb, c)] * b.generators_[c];
        err_plus = std::max(err_plus, (lhs - rhs).cwiseAbs().maxCoeff());
        err_minus = std::max(err_minus, (lhs + rhs).cwiseAbs().maxCoeff());
      }
    b.bracket_sign_ = (err_minus < err_plus) ? -1 : 1;
    if (std::min(err_plus, err_minus) > 1e-12)
      throw Error("bracket sign calibration failed");
  }

  return b;
}

StateCoords coords_of_density(const Matrix& rho, const MatrixBasis& basis) {
  const int ell = basis.ell();
  if (rho.rows() != ell || rho.cols() != ell)
    throw DimensionError("density matrix has wrong dimension");
  if (hermiticity_defect(rho) > 1e-10)
    throw InvalidStateError("density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw InvalidStateError("density matrix does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-10)
    throw InvalidStateError("density matrix is not positive semidefinite");

  StateCoords coords;
  coords.x.resize(basis.dim());
  for (int a = 0; a < basis.dim(); ++a) {
    std::complex<double> v = (rho * basis.generator(a)).trace();
    if (std::abs(v.imag()) > 1e-10) throw InvalidStateError("non-real coordinate");
    coords.x(a) = v.real();
  }
  return coords;
}

Matrix density_of_coords(const StateCoords& coords, const MatrixBasis& basis) {
  if (coords.x.size() != basis.dim())
    throw DimensionError("coordinate vector has wrong length");
  const int ell = basis.ell();
  Matrix rho = Matrix::Identity(ell, ell) / static_cast<double>(ell);
  for (int a = 0; a < basis.dim(); ++a)
    rho += (coords.x(a) / basis.generator_square_trace(a)) * basis.generator(a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-12) {
    std::ostringstream os;
    os << "coordinates lie outside the state body (min eigenvalue "
       << es.eigenvalues()(0) << ")";
    throw OutOfBodyError(os.str());
  }
  return rho;
}

}  // namespace mflab
