#include "spinmeas/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace spinmeas {

namespace {

double max_abs(const MatC& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

bool normalized_within(const VecC& psi, double tol) {
  return std::abs(psi.squaredNorm() - 1.0) <= tol;
}

bool hermitian_within(const MatC& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol * std::max(1.0, max_abs(m));
}

bool unitary_within(const MatC& m, double tol) {
  if (m.rows() != m.cols()) return false;
  MatC res = m.adjoint() * m - MatC::Identity(m.rows(), m.cols());
  return max_abs(res) <= tol;
}

void require_normalized(const VecC& psi, double tol) {
  if (psi.size() == 0) throw std::invalid_argument("state is empty");
  if (!normalized_within(psi, tol)) throw std::invalid_argument("state is not normalized");
}

void require_hermitian(const MatC& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("operator is not square");
  if (!hermitian_within(m, tol)) throw std::invalid_argument("operator is not hermitian");
}

void require_unitary(const MatC& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("operator is not square");
  if (!unitary_within(m, tol)) throw std::invalid_argument("operator is not unitary");
}

MatC tensor(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

VecC tensor(const VecC& a, const VecC& b) {
  VecC out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Eigensystem spectral(const MatC& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<MatC> solver((h + MatC(h.adjoint())) / 2.0);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Eigensystem es{solver.eigenvalues(), solver.eigenvectors()};
  // fix each column's phase: leading sizable entry made real and positive
  for (Eigen::Index c = 0; c < es.eigenvectors.cols(); ++c) {
    auto col = es.eigenvectors.col(c);
    const double floor = 1e-8 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (std::abs(col(r)) > floor) {
        col *= std::conj(col(r)) / std::abs(col(r));
        break;
      }
    }
  }
  return es;
}

VecC evolve(const MatC& h, double t, const VecC& psi) {
  require_normalized(psi);
  if (h.rows() != psi.size()) throw std::invalid_argument("dimension mismatch");
  const Eigensystem es = spectral(h);
  VecC coeffs = es.eigenvectors.adjoint() * psi;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k)
    coeffs(k) *= std::exp(Cx(0, -es.eigenvalues(k) * t));
  return es.eigenvectors * coeffs;
}

MatC evolve_operator(const MatC& h, double t) {
  const Eigensystem es = spectral(h);
  VecC phases(es.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::exp(Cx(0, -es.eigenvalues(k) * t));
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

MatC partial_trace(const VecC& psi, int keep, int dim_left, int dim_right) {
  if (dim_left * dim_right != psi.size()) throw std::invalid_argument("dimension mismatch");
  if (keep != 0 && keep != 1) throw std::invalid_argument("keep must be 0 or 1");
  using RowMat = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> m(psi.data(), dim_left, dim_right);
  if (keep == 0) return m * m.adjoint();
  return (m.adjoint() * m).transpose();
}

MatC partial_trace(const MatC& rho, int keep, int dim_left, int dim_right) {
  if (dim_left * dim_right != rho.rows() || rho.rows() != rho.cols())
    throw std::invalid_argument("dimension mismatch");
  if (keep != 0 && keep != 1) throw std::invalid_argument("keep must be 0 or 1");
  if (keep == 0) {
    MatC out = MatC::Zero(dim_left, dim_left);
    for (int a = 0; a < dim_left; ++a)
      for (int c = 0; c < dim_left; ++c)
        for (int b = 0; b < dim_right; ++b) out(a, c) += rho(a * dim_right + b, c * dim_right + b);
    return out;
  }
  MatC out = MatC::Zero(dim_right, dim_right);
  for (int b = 0; b < dim_right; ++b)
    for (int d = 0; d < dim_right; ++d)
      for (int a = 0; a < dim_left; ++a) out(b, d) += rho(a * dim_right + b, a * dim_right + d);
  return out;
}

double fidelity(const MatC& rho, const VecC& pure) {
  require_normalized(pure);
  if (rho.rows() != pure.size()) throw std::invalid_argument("dimension mismatch");
  const Cx val = pure.adjoint() * rho * pure;
  if (std::abs(val.imag()) > 1e-12) throw std::invalid_argument("fidelity has an imaginary part");
  return std::min(1.0, std::max(0.0, val.real()));
}

double expectation(const MatC& op, const VecC& psi) {
  require_hermitian(op, 1e-10);
  const Cx val = psi.adjoint() * op * psi;
  return val.real();
}

Vec3 bloch_from_density(const MatC& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw std::invalid_argument("bloch needs a 2x2 density");
  return Vec3(2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real());
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) throw std::invalid_argument("degenerate abscissa");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (size_t i = 0; i < x.size(); ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.slope * x[i] - fit.intercept));
  return fit;
}

}  // namespace spinmeas
