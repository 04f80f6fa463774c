#pragma once

#include <iosfwd>
#include <vector>

#include "nv/constants.hpp"
#include "nv/operators.hpp"

namespace nv {

enum class Flavor { symmetric, antisymmetric };

struct Pulse {
  double center;    // s, within the supercycle [0, 4 tau)
  double duration;  // s, 0 for instantaneous
  double phase;     // rad, rotation axis in the electron xy plane
};

struct PulseParams {
  double rabi = pi / 12.5e-9;  // rad/s; pi flip in 12.5 ns
  double detuning = 0;         // rad/s, static offset (Lambda)
  double rabi_error = 0;       // fractional amplitude miscalibration
  bool instantaneous = false;
};

// One AXY-8 supercycle spans 4 periods tau (8 composite-5 blocks,
// XYXYYXYX): 10 pi-pulses per period, 40 per supercycle.
struct PulseSequence {
  Flavor flavor = Flavor::symmetric;
  double tau = 0;       // period of the modulation function, s
  int repetitions = 0;  // number of periods; evolution time = repetitions*tau
  std::vector<Pulse> pulses;  // one supercycle, centers in [0, 4*tau)
  double rabi = 0;
  double detuning = 0;
  double rabi_error = 0;

  double supercycle() const { return 4.0 * tau; }
  double t_end() const { return repetitions * tau; }
  bool instantaneous() const { return pulses.empty() || pulses[0].duration == 0; }
  double pulse_duration() const { return pulses.empty() ? 0.0 : pulses[0].duration; }
  double omega_eff() const { return rabi * (1.0 + rabi_error); }
};

// schedule with Fourier coefficient f_{k} = f_target of the ideal modulation
// function at harmonic k (k odd); the partner odd harmonic (3k for k=1, else
// the fundamental) is zeroed, which pins the two intra-block spacings
PulseSequence axy8_schedule(Flavor flavor, double tau, int k, double f_target,
                            const PulseParams& params, int repetitions);

// largest |f| reachable at harmonic k by the solver
double axy_f_max(int k);

// +1 before any pulse, sign flip at each pulse center
int modulation_value(const PulseSequence& seq, double t);

struct FourierPair {
  double cos_k = 0, sin_k = 0;
};

// exact Fourier integral of the piecewise-constant modulation function
FourierPair modulation_fourier_pair(const PulseSequence& seq, int k);

// flavor-matched coefficient (cos for symmetric, sin for antisymmetric)
double modulation_fourier(const PulseSequence& seq, int k);

// electron 2x2 drive Hamiltonian inside a pulse window (detuning excluded;
// the detuning term applies continuously)
Matrix pulse_hamiltonian(const PulseSequence& seq, const Pulse& p, double t);

// f needed for accumulated phase phi = (ms/4) f g_l N tau
double required_f(double phi_target, double g_l, int repetitions, double tau, int ms);

// product of the ideal pi rotations of the first `repetitions` periods
Matrix ideal_pulse_product(const PulseSequence& seq);

void export_schedule(const PulseSequence& seq, std::ostream& os);

}  // namespace nv
