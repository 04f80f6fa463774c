#include "nv/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace nv {

SpinOps spin_operators(Spin s) {
  using namespace std::complex_literals;
  SpinOps ops;
  if (s == Spin::half) {
    ops.x = Matrix{{0.0, 0.5}, {0.5, 0.0}};
    ops.y = Matrix{{0.0, -0.5i}, {0.5i, 0.0}};
    ops.z = Matrix{{0.5, 0.0}, {0.0, -0.5}};
  } else {
    const double r = 1.0 / std::sqrt(2.0);
    ops.x = Matrix{{0.0, r, 0.0}, {r, 0.0, r}, {0.0, r, 0.0}};
    ops.y = Matrix{{0.0, -r * 1.0i, 0.0}, {r * 1.0i, 0.0, -r * 1.0i}, {0.0, r * 1.0i, 0.0}};
    ops.z = Matrix{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, -1.0}};
  }
  return ops;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix embed(const Matrix& op, int site, const std::vector<int>& site_dims) {
  if (site < 0 || site >= static_cast<int>(site_dims.size()))
    throw std::invalid_argument("embed: site index out of range");
  if (op.rows() != op.cols() || op.rows() != site_dims[site])
    throw std::invalid_argument("embed: operator dimension does not match site");
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(site_dims.size()); ++k) {
    if (k == site)
      out = kron(out, op);
    else
      out = kron(out, Matrix::Identity(site_dims[k], site_dims[k]));
  }
  return out;
}

Matrix expm_hermitian(const Matrix& H, double t) {
  if (!is_hermitian(H))
    throw std::invalid_argument("expm_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  Eigen::VectorXcd phases =
      (cx(0.0, -t) * es.eigenvalues().cast<cx>().array()).exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

bool is_hermitian(const Matrix& H, double rel_tol) {
  const double scale = std::max(H.norm(), 1e-300);
  return (H - H.adjoint()).norm() <= rel_tol * scale;
}

bool is_unitary(const Matrix& U, double tol_per_dim) {
  const Eigen::Index d = U.rows();
  return (U.adjoint() * U - Matrix::Identity(d, d)).norm() <=
         tol_per_dim * static_cast<double>(d);
}

Matrix spin_dot(const Vector3& n) {
  using namespace std::complex_literals;
  return Matrix{{0.5 * n.z(), 0.5 * (n.x() - 1.0i * n.y())},
                {0.5 * (n.x() + 1.0i * n.y()), -0.5 * n.z()}};
}

Matrix spin_rotation(const Vector3& axis, double angle) {
  using namespace std::complex_literals;
  const double norm = axis.norm();
  if (norm == 0.0) return Matrix::Identity(2, 2);
  const Vector3 n = axis / norm;
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  return c * Matrix::Identity(2, 2) + 2.0i * s * spin_dot(n);
}

}  // namespace nv
