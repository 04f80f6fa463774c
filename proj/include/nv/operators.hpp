#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace nv {

using cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector3 = Eigen::Vector3d;

enum class Spin { half, one };

struct SpinOps {
  Matrix x, y, z;
};

// standard angular-momentum matrices; dim 2 for half, 3 for one
SpinOps spin_operators(Spin s);

Matrix kron(const Matrix& a, const Matrix& b);

// op acting on `site`, identity elsewhere; total dim = prod(site_dims)
Matrix embed(const Matrix& op, int site, const std::vector<int>& site_dims);

// exp(-i H t) by Hermitian eigendecomposition; rejects non-Hermitian input
Matrix expm_hermitian(const Matrix& H, double t);

bool is_hermitian(const Matrix& H, double rel_tol = 1e-12);
bool is_unitary(const Matrix& U, double tol_per_dim = 1e-8);

// I . n for a spin-1/2 (2x2)
Matrix spin_dot(const Vector3& n);

// exp(+i angle * (I . axis)) for a spin-1/2; axis need not be normalized
Matrix spin_rotation(const Vector3& axis, double angle);

}  // namespace nv
