#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nv/constants.hpp"
#include "nv/operators.hpp"

namespace nv {

struct Nucleus {
  std::optional<Vector3> position;  // nm, relative to the NV site
  Vector3 hyperfine = Vector3::Zero();  // rad/s
  double gyro = gamma_c13;              // rad/s/T
};

struct CouplingOverride {
  int j = 0, k = 0;
  double g = 0;  // rad/s
};

struct SpinRegister {
  std::vector<Nucleus> nuclei;
  int ms = +1;  // electron two-level subspace {|0>, |ms>}, ms = +/-1
  std::vector<CouplingOverride> couplings;  // pinned g_jk; else from positions

  int size() const { return static_cast<int>(nuclei.size()); }
  int nuclear_dim() const { return 1 << nuclei.size(); }
  int hilbert_dim() const { return 2 * nuclear_dim(); }
  void validate() const;
};

// pinned coupling if present, else computed from positions; 0 when neither
// nucleus pair carries the needed data
double register_coupling(const SpinRegister& reg, int j, int k);

struct DecoupleField {
  double Omega = 0;         // rad/s (half the field amplitude in freq units)
  Vector3 n = Vector3::UnitX();
  double omega_rf = 0;      // rad/s
  bool enabled() const { return Omega != 0.0; }
};

struct ControlField {
  double lambda = 0;        // rad/s
  double omega_c = 0;       // rad/s
  double phi_c = 0;         // rad
  Vector3 n_c = Vector3::UnitZ();
};

struct FieldConfig {
  double Bz = 0;            // tesla
  DecoupleField decouple;
  std::optional<ControlField> control;
  void validate() const;
};

// dipolar hyperfine vector prop. to [z - 3 (z.r)r]/r^3, rad/s; r in nm
Vector3 hyperfine_vector(const Vector3& r_nm, double gamma_electron = gamma_e,
                         double gamma_nucleus = gamma_c13);

// secular internuclear coupling coefficient g_{jk}, rad/s; positions in nm
double internuclear_coupling(const Vector3& r_j, const Vector3& r_k);

// sum_{j>k} g_jk [Iz Iz - (Ix Ix + Iy Iy)/2] on the full register space
Matrix secular_dipolar_hamiltonian(const SpinRegister& reg);

// H(t) in the electron rotating frame for modulation value F = +/-1
Matrix rotating_frame_hamiltonian(const SpinRegister& reg, const FieldConfig& fields,
                                  int F, double t);

// diamond-lattice sites in the shell, z axis along [111]; deterministic in seed
std::vector<Vector3> lattice_sites_in_shell(double r_min, double r_max);
std::vector<Vector3> generate_sample(uint64_t seed, double abundance, double r_min,
                                     double r_max);

// >= 3 nuclei pairwise separated by dA_min in A_z, all below the cap
bool classify_sample(const std::vector<double>& a_z, double dA_min,
                     std::optional<double> A_max);

}  // namespace nv
