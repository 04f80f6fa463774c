#pragma once

#include <utility>
#include <vector>

#include "nv/control.hpp"
#include "nv/effective.hpp"
#include "nv/operators.hpp"
#include "nv/system.hpp"

namespace nv {

struct EvolutionPolicy {
  double dt_max = 1e-6;        // s
  double phase_cap = 0.5;      // max ||H|| dt per step
  int samples_per_cycle = 40;  // fastest-oscillation subdivision
  enum class Method {
    split4,    // 4th-order splitting, cached exponentials (default engine)
    cf4,       // 4th-order commutator-free Magnus, per-step eigendecomposition
    midpoint   // 2nd-order exponential midpoint (reference / convergence checks)
  };
  Method method = Method::split4;
};

// time-ordered propagator of the rotating-frame Hamiltonian over [0, t_end].
// seq == nullptr propagates the free fields. Instantaneous sequences evolve
// the electron-conditioned blocks with the modulation function and reattach
// the ideal pulse product; finite sequences drive the pulse windows exactly.
Matrix evolve(const SpinRegister& reg, const FieldConfig& fields,
              const PulseSequence* seq, const EvolutionPolicy& policy,
              double t_end);

// electron-conditioned propagators (|0>, |ms> branches); instantaneous
// sequences only
std::pair<Matrix, Matrix> conditional_evolution(const SpinRegister& reg,
                                                const FieldConfig& fields,
                                                const PulseSequence* seq,
                                                const EvolutionPolicy& policy,
                                                double t_end);

// L = 1 - 2 Tr[rho(t) (P_x+ x id)] for rho0 = |+><+| x id/2^n
double coherence_L(const Matrix& U_full);

struct ScanPoint {
  double omega_drive;  // rad/s, harmonic drive frequency k*(2pi/tau)
  double L;
};

struct ScanSettings {
  Flavor flavor = Flavor::symmetric;
  int harmonic = 1;
  double f = 0;
  int repetitions = 0;
  PulseParams pulse;
  EvolutionPolicy policy;
  std::vector<double> grid;  // drive angular frequencies
  int threads = 1;
};

std::vector<ScanPoint> coherence_scan(const SpinRegister& reg,
                                      const FieldConfig& fields,
                                      const ScanSettings& settings);

// full-space propagator transformed into the nuclear interaction frames
Matrix realized_gate(const SpinRegister& reg, const FieldConfig& fields,
                     const PulseSequence& seq, const EvolutionPolicy& policy);

// frame transformation W(t) applied by realized_gate (exposed for tests)
Matrix interaction_frame(const SpinRegister& reg, const DressedParameters& dp,
                         double t);

struct GateSpec {
  int target = 0;        // nucleus index
  char axis = 'x';       // 'x' or 'y' in the nuclear frame
  double phi = 0;        // rotation angle
  bool entangling = true;  // exp(-i phi sz Il) vs exp(-i phi Il)
};

// target unitary in the same frame coordinates as realized_gate
Matrix target_gate(const SpinRegister& reg, const DressedParameters& dp,
                   const GateSpec& gate);

// F = |Tr(A B+)| / sqrt(Tr(A A+) Tr(B B+))
double gate_fidelity(const Matrix& a, const Matrix& b);

struct RwaCurves {
  std::vector<double> t;
  std::vector<double> refined;  // exact vs counter-rotating effective
  std::vector<double> rwa;      // exact vs plain rotating-wave
};

// single-nucleus decoupling-field study: exact H = -w Iz + 2 Omega (I.n) cos(w_rf t)
RwaCurves rwa_comparison(double Bz, double Delta_target, double tilt_rad,
                         const std::vector<double>& t_grid,
                         const EvolutionPolicy& policy);

}  // namespace nv
