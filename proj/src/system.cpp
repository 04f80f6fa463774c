#include "nv/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nv/rng.hpp"

namespace nv {

void SpinRegister::validate() const {
  if (ms != 1 && ms != -1)
    throw std::invalid_argument("SpinRegister: ms must be +1 or -1");
  for (const auto& nuc : nuclei) {
    if (nuc.position && nuc.hyperfine.norm() > 0) {
      // both present: they must agree under the dipolar map
      const Vector3 derived = hyperfine_vector(*nuc.position, gamma_e, nuc.gyro);
      if ((derived - nuc.hyperfine).norm() > 1e-6 * nuc.hyperfine.norm())
        throw std::invalid_argument(
            "Nucleus: position and hyperfine vector disagree");
    }
  }
}

void FieldConfig::validate() const {
  if (decouple.enabled()) {
    if (std::abs(decouple.n.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("FieldConfig: decoupling axis not unit length");
    if (!(Bz > 0.1))
      throw std::invalid_argument(
          "FieldConfig: decoupling requires Bz > 0.1 T");
  }
  if (control && std::abs(control->n_c.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("FieldConfig: control axis not unit length");
}

Vector3 hyperfine_vector(const Vector3& r_nm, double gamma_electron,
                         double gamma_nucleus) {
  const double r = r_nm.norm();
  if (r <= 0.1)
    throw std::invalid_argument("hyperfine_vector: |r| must exceed 0.1 nm");
  const Vector3 rhat = r_nm / r;
  const double radial = mu0_over_4pi * gamma_electron * gamma_nucleus * hbar_si *
                        1e27 / (r * r * r);
  return radial * (Vector3::UnitZ() - 3.0 * rhat.z() * rhat);
}

double internuclear_coupling(const Vector3& r_j, const Vector3& r_k) {
  const Vector3 d = r_j - r_k;
  const double r = d.norm();
  if (r < 1e-6)
    throw std::invalid_argument("internuclear_coupling: coincident nuclei");
  const double nz = d.z() / r;
  return internuclear_radial_nm3 / (r * r * r) * (1.0 - 3.0 * nz * nz);
}

namespace {

struct NuclearOps {
  std::vector<Matrix> x, y, z;
};

NuclearOps nuclear_ops(int n) {
  NuclearOps ops;
  const SpinOps half = spin_operators(Spin::half);
  std::vector<int> dims(n, 2);
  for (int j = 0; j < n; ++j) {
    ops.x.push_back(embed(half.x, j, dims));
    ops.y.push_back(embed(half.y, j, dims));
    ops.z.push_back(embed(half.z, j, dims));
  }
  return ops;
}

}  // namespace

double register_coupling(const SpinRegister& reg, int j, int k) {
  for (const auto& c : reg.couplings)
    if ((c.j == j && c.k == k) || (c.j == k && c.k == j)) return c.g;
  if (reg.nuclei[j].position && reg.nuclei[k].position)
    return internuclear_coupling(*reg.nuclei[j].position, *reg.nuclei[k].position);
  return 0.0;
}

Matrix secular_dipolar_hamiltonian(const SpinRegister& reg) {
  const int n = reg.size();
  const int dn = reg.nuclear_dim();
  Matrix h = Matrix::Zero(dn, dn);
  if (n < 2) {
    // single nucleus (or none): zero operator on the full space
    return kron(Matrix::Identity(2, 2), h);
  }
  const NuclearOps ops = nuclear_ops(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      const double g = register_coupling(reg, j, k);
      h += g * (ops.z[j] * ops.z[k] -
                0.5 * (ops.x[j] * ops.x[k] + ops.y[j] * ops.y[k]));
    }
  }
  return kron(Matrix::Identity(2, 2), h);
}

Matrix rotating_frame_hamiltonian(const SpinRegister& reg,
                                  const FieldConfig& fields, int F, double t) {
  const int n = reg.size();
  const int dn = reg.nuclear_dim();
  const NuclearOps ops = nuclear_ops(n);

  Matrix h_n = Matrix::Zero(dn, dn);        // acts on both electron branches
  Matrix h_hf = Matrix::Zero(dn, dn);       // multiplies (F sz + 1)/2 * ms
  for (int j = 0; j < n; ++j) {
    const double w = reg.nuclei[j].gyro * fields.Bz;
    h_n -= w * ops.z[j];
    const Vector3& a = reg.nuclei[j].hyperfine;
    h_hf += a.x() * ops.x[j] + a.y() * ops.y[j] + a.z() * ops.z[j];
  }
  if (fields.decouple.enabled()) {
    const double c = 2.0 * fields.decouple.Omega * std::cos(fields.decouple.omega_rf * t);
    const Vector3& nd = fields.decouple.n;
    for (int j = 0; j < n; ++j)
      h_n += c * (nd.x() * ops.x[j] + nd.y() * ops.y[j] + nd.z() * ops.z[j]);
  }
  if (fields.control) {
    const auto& ctl = *fields.control;
    const double c = 2.0 * ctl.lambda * std::cos(ctl.omega_c * t + ctl.phi_c);
    for (int j = 0; j < n; ++j)
      h_n += c * (ctl.n_c.x() * ops.x[j] + ctl.n_c.y() * ops.y[j] +
                  ctl.n_c.z() * ops.z[j]);
  }

  // electron basis {|0>, |ms>}: sigma_z = diag(-1, +1)
  Matrix h = kron(Matrix::Identity(2, 2), h_n);
  const double ms = reg.ms;
  Matrix branch0 = 0.5 * ms * (-F + 1.0) * h_hf;
  Matrix branch1 = 0.5 * ms * (+F + 1.0) * h_hf;
  h.topLeftCorner(dn, dn) += branch0;
  h.bottomRightCorner(dn, dn) += branch1;
  if (n >= 2) h += secular_dipolar_hamiltonian(reg);
  return h;
}

std::vector<Vector3> lattice_sites_in_shell(double r_min, double r_max) {
  if (!(r_min < r_max))
    throw std::invalid_argument("lattice shell: need r_min < r_max");
  // conventional cell: fcc + (1/4,1/4,1/4) basis
  static const double bas[8][3] = {{0, 0, 0},       {0, .5, .5},
                                   {.5, 0, .5},     {.5, .5, 0},
                                   {.25, .25, .25}, {.25, .75, .75},
                                   {.75, .25, .75}, {.75, .75, .25}};
  // simulation frame: z along the NV axis [111]
  const Vector3 ez = Vector3(1, 1, 1).normalized();
  const Vector3 ex = Vector3(1, -1, 0).normalized();
  const Vector3 ey = ez.cross(ex);

  std::vector<Vector3> sites;
  const int ncell = static_cast<int>(std::ceil(r_max / diamond_a)) + 1;
  for (int i = -ncell; i <= ncell; ++i)
    for (int j = -ncell; j <= ncell; ++j)
      for (int k = -ncell; k <= ncell; ++k)
        for (const auto& b : bas) {
          const Vector3 p = diamond_a * Vector3(i + b[0], j + b[1], k + b[2]);
          const double r = p.norm();
          if (r >= r_min && r <= r_max && r > 1e-9)
            sites.emplace_back(p.dot(ex), p.dot(ey), p.dot(ez));
        }
  std::sort(sites.begin(), sites.end(), [](const Vector3& a, const Vector3& b) {
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.z() < b.z();
  });
  return sites;
}

std::vector<Vector3> generate_sample(uint64_t seed, double abundance,
                                     double r_min, double r_max) {
  if (!(abundance >= 0.0 && abundance < 1.0))
    throw std::invalid_argument("generate_sample: abundance must be in [0,1)");
  const auto sites = lattice_sites_in_shell(r_min, r_max);
  if (sites.empty()) throw std::invalid_argument("generate_sample: empty shell");
  std::vector<Vector3> out;
  if (abundance == 0.0) return out;
  for (size_t i = 0; i < sites.size(); ++i)
    if (CounterRng::uniform(seed, i) < abundance) out.push_back(sites[i]);
  return out;
}

bool classify_sample(const std::vector<double>& a_z, double dA_min,
                     std::optional<double> A_max) {
  if (A_max) {
    for (double a : a_z)
      if (std::abs(a) > *A_max) return false;
  }
  if (a_z.size() < 3) return false;
  std::vector<double> v = a_z;
  std::sort(v.begin(), v.end());
  int count = 1;
  double last = v.front();
  for (double x : v) {
    if (x - last >= dA_min) {
      ++count;
      last = x;
      if (count >= 3) return true;
    }
  }
  return false;
}

}  // namespace nv
