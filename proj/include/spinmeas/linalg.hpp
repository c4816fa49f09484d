#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace spinmeas {

using Cx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = 3.141592653589793238462643383279502884;

bool normalized_within(const VecC& psi, double tol);
bool hermitian_within(const MatC& m, double tol);
bool unitary_within(const MatC& m, double tol);

void require_normalized(const VecC& psi, double tol = 1e-9);
void require_hermitian(const MatC& m, double tol = 1e-12);
void require_unitary(const MatC& m, double tol = 1e-10);

// kronecker products; the left factor is always the slow index
MatC tensor(const MatC& a, const MatC& b);
VecC tensor(const VecC& a, const VecC& b);

struct Eigensystem {
  Eigen::VectorXd eigenvalues;  // ascending
  MatC eigenvectors;            // orthonormal columns, leading sizable entry real >= 0
};

Eigensystem spectral(const MatC& h);

// e^{-i h t} psi, h hermitian
VecC evolve(const MatC& h, double t, const VecC& psi);
MatC evolve_operator(const MatC& h, double t);

// bipartite reduction; the state/density lives on dim_left (x) dim_right,
// left slow.  keep = 0 keeps the left factor, keep = 1 the right.
MatC partial_trace(const VecC& psi, int keep, int dim_left, int dim_right);
MatC partial_trace(const MatC& rho, int keep, int dim_left, int dim_right);

double fidelity(const MatC& rho, const VecC& pure);
double expectation(const MatC& op, const VecC& psi);

Vec3 bloch_from_density(const MatC& rho);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double max_residual = 0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace spinmeas
