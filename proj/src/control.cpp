#include "nv/control.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace nv {

namespace {

double sign_k(int k) { return (((k - 1) / 2) % 2 == 0) ? 1.0 : -1.0; }

// cos-series coefficient of the ideal symmetric block pattern
// {x1, x2, 1/4, 1/2-x2, 1/2-x1} (+1/2), for odd k
double f_sym(double x1, double x2, int k) {
  return 4.0 / (pi * k) *
         (2.0 * std::sin(twopi * k * x1) - 2.0 * std::sin(twopi * k * x2) +
          sign_k(k));
}

int partner_harmonic(int k) { return (k % 3 == 0) ? k / 3 : 3 * k; }

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0))
      lo = mid, flo = fm;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// inner solve: x2 such that the partner harmonic vanishes, given x1
bool solve_partner(double x1, int k, double& x2_out) {
  const int kp = partner_harmonic(k);
  auto fp = [&](double x2) { return f_sym(x1, x2, kp); };
  // bracket on the monotone branch containing the uniform solution
  double lo, hi;
  if (kp > k) {
    lo = 1.0 / (4.0 * kp / k) /* = k/(4 kp) */;
    lo = static_cast<double>(k) / (4.0 * kp);
    hi = 0.25;
    // monotone increasing branch for kp = 3k on (k/(4kp)*3 ...): use [1/(12/k)..]
    lo = 1.0 / 12.0;
  } else {
    lo = x1;
    hi = 0.25;
  }
  double flo = fp(lo), fhi = fp(hi);
  if ((flo > 0) == (fhi > 0)) return false;
  x2_out = bisect(fp, lo, hi, flo, 1e-15);
  return true;
}

struct BlockTimes {
  double x1, x2;
};

BlockTimes solve_block_times(int k, double f_target) {
  if (k < 1 || k % 2 == 0)
    throw std::invalid_argument("axy8_schedule: harmonic must be a positive odd integer");
  // outer solve on x1; feasible range where the inner solve brackets
  auto outer = [&](double x1) {
    double x2;
    if (!solve_partner(x1, k, x2)) return std::nan("");
    return f_sym(x1, x2, k) - f_target;
  };
  const int ngrid = 400;
  double prev_x = std::nan(""), prev_g = std::nan("");
  for (int i = 1; i <= ngrid; ++i) {
    const double x1 = 0.25 * i / (ngrid + 1);
    const double g = outer(x1);
    if (std::isnan(g)) {
      prev_x = std::nan("");
      continue;
    }
    if (!std::isnan(prev_g) && (g > 0) != (prev_g > 0)) {
      const double x1s = bisect(outer, prev_x, x1, prev_g, 1e-15);
      double x2;
      solve_partner(x1s, k, x2);
      if (!(x1s > 0 && x1s < x2 && x2 < 0.25))
        throw std::domain_error("axy8_schedule: solver left the ordered domain");
      return {x1s, x2};
    }
    prev_x = x1;
    prev_g = g;
  }
  throw std::domain_error("axy8_schedule: f_target unreachable at this harmonic");
}

constexpr double composite_phase[5] = {pi / 6, 0.0, pi / 2, 0.0, pi / 6};
constexpr int xy8_pattern[8] = {0, 1, 0, 1, 1, 0, 1, 0};  // 0 = X, 1 = Y

}  // namespace

double axy_f_max(int k) {
  double fmax = 0;
  for (int i = 1; i <= 400; ++i) {
    const double x1 = 0.25 * i / 401.0;
    double x2;
    if (!solve_partner(x1, k, x2)) continue;
    if (!(x1 < x2 && x2 < 0.25)) continue;
    fmax = std::max(fmax, std::abs(f_sym(x1, x2, k)));
  }
  return fmax;
}

PulseSequence axy8_schedule(Flavor flavor, double tau, int k, double f_target,
                            const PulseParams& params, int repetitions) {
  if (tau <= 0) throw std::invalid_argument("axy8_schedule: tau must be positive");
  if (repetitions < 1)
    throw std::invalid_argument("axy8_schedule: need at least one repetition");

  // the quarter-period shift that makes the pattern odd maps the cos
  // coefficient onto the sin one with a sign sin(k pi/2)
  double f_solve = f_target;
  if (flavor == Flavor::antisymmetric) f_solve = f_target / sign_k(k);
  const BlockTimes bt = solve_block_times(k, f_solve);

  PulseSequence seq;
  seq.flavor = flavor;
  seq.tau = tau;
  seq.repetitions = repetitions;
  seq.rabi = params.rabi;
  seq.detuning = params.detuning;
  seq.rabi_error = params.rabi_error;
  const double dur = params.instantaneous ? 0.0 : pi / params.rabi;

  const double in_block[5] = {bt.x1, bt.x2, 0.25, 0.5 - bt.x2, 0.5 - bt.x1};
  for (int period = 0; period < 4; ++period) {
    for (int half = 0; half < 2; ++half) {
      const int block = 2 * period + half;
      const double base = xy8_pattern[block] == 0 ? 0.0 : pi / 2;
      for (int p = 0; p < 5; ++p) {
        double c = (period + 0.5 * half + 0.5 * in_block[p]) * tau;
        if (flavor == Flavor::antisymmetric) {
          c += 0.25 * tau + 0.5 * dur;
          if (c > 4.0 * tau) c -= 4.0 * tau;
        }
        seq.pulses.push_back({c, dur, composite_phase[p] + base});
      }
    }
  }
  std::sort(seq.pulses.begin(), seq.pulses.end(),
            [](const Pulse& a, const Pulse& b) { return a.center < b.center; });

  if (dur > 0) {
    double min_gap = seq.pulses.front().center + (4 * tau - seq.pulses.back().center);
    for (size_t i = 1; i < seq.pulses.size(); ++i)
      min_gap = std::min(min_gap, seq.pulses[i].center - seq.pulses[i - 1].center);
    if (min_gap < dur)
      throw std::invalid_argument(
          "axy8_schedule: tau too short for finite-duration pulses");
  }
  return seq;
}

namespace {

// flip offsets within one period, in (0, tau]; ideal (center) positions
std::vector<double> flip_offsets(const PulseSequence& seq) {
  std::vector<double> offs;
  for (const auto& p : seq.pulses) {
    double c = p.center - 0.5 * p.duration * (seq.flavor == Flavor::antisymmetric ? 1.0 : 0.0);
    // fold the supercycle into one period
    double r = std::fmod(c, seq.tau);
    if (r <= 1e-300) r = seq.tau;
    offs.push_back(r);
  }
  std::sort(offs.begin(), offs.end());
  offs.erase(std::unique(offs.begin(), offs.end(),
                         [&](double a, double b) { return std::abs(a - b) < 1e-18; }),
             offs.end());
  return offs;
}

}  // namespace

int modulation_value(const PulseSequence& seq, double t) {
  if (t < 0) throw std::invalid_argument("modulation_value: t must be >= 0");
  const auto offs = flip_offsets(seq);
  const double r = t - seq.tau * std::floor(t / seq.tau);
  int count = 0;
  for (double o : offs)
    if (o <= r) ++count;
  return (count % 2 == 0) ? 1 : -1;
}

FourierPair modulation_fourier_pair(const PulseSequence& seq, int k) {
  if (k < 1) throw std::invalid_argument("modulation_fourier: k must be >= 1");
  const auto offs = flip_offsets(seq);
  const double w = twopi / seq.tau;
  FourierPair fp;
  double s = 1.0;
  for (double o : offs) {
    fp.cos_k += s * std::sin(k * w * o);
    fp.sin_k -= s * std::cos(k * w * o);
    s = -s;
  }
  fp.cos_k *= 2.0 / (pi * k);
  fp.sin_k *= 2.0 / (pi * k);
  return fp;
}

double modulation_fourier(const PulseSequence& seq, int k) {
  const FourierPair fp = modulation_fourier_pair(seq, k);
  return seq.flavor == Flavor::symmetric ? fp.cos_k : fp.sin_k;
}

Matrix pulse_hamiltonian(const PulseSequence& seq, const Pulse& p, double t) {
  if (p.duration <= 0)
    throw std::invalid_argument("pulse_hamiltonian: instantaneous pulse has no window");
  if (t < p.center - 0.5 * p.duration || t > p.center + 0.5 * p.duration)
    throw std::invalid_argument("pulse_hamiltonian: t outside the pulse window");
  const double omega_eff = seq.omega_eff();
  const SpinOps s = spin_operators(Spin::half);
  // electron basis {|0>, |ms>}: sigma_z = diag(-1, +1)
  return omega_eff * (std::cos(p.phase) * s.x + std::sin(p.phase) * s.y) -
         seq.detuning * s.z;
}

double required_f(double phi_target, double g_l, int repetitions, double tau, int ms) {
  if (g_l == 0.0 || repetitions < 1 || tau == 0.0 || ms == 0)
    throw std::invalid_argument("required_f: division by zero");
  return 4.0 * phi_target / (ms * g_l * repetitions * tau);
}

Matrix ideal_pulse_product(const PulseSequence& seq) {
  using namespace std::complex_literals;
  const SpinOps s = spin_operators(Spin::half);
  Matrix u = Matrix::Identity(2, 2);
  const double t_end = seq.t_end();
  const double cyc = seq.supercycle();
  const int ncyc = static_cast<int>(std::ceil(t_end / cyc - 1e-12));
  std::vector<std::pair<double, double>> events;  // (time, phase)
  for (int n = 0; n < ncyc; ++n)
    for (const auto& p : seq.pulses) {
      const double t = n * cyc + p.center;
      if (t <= t_end * (1 + 1e-15)) events.emplace_back(t, p.phase);
    }
  std::sort(events.begin(), events.end());
  for (const auto& [t, phase] : events) {
    const Matrix rot =
        -2.0i * (std::cos(phase) * s.x + std::sin(phase) * s.y);
    u = rot * u;
  }
  return u;
}

void export_schedule(const PulseSequence& seq, std::ostream& os) {
  os << "# axy8 schedule: flavor="
     << (seq.flavor == Flavor::symmetric ? "symmetric" : "antisymmetric")
     << " tau_s=" << seq.tau << " repetitions=" << seq.repetitions
     << " pulses_per_period=10\n";
  os << "# center_s\tduration_s\tphase_rad\n";
  os.precision(17);
  for (const auto& p : seq.pulses)
    os << p.center << '\t' << p.duration << '\t' << p.phase << '\n';
}

}  // namespace nv
