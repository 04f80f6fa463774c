#include "nv/propagate.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace nv {

namespace {

// triple-jump composition coefficients (4th order)
const double W1 = 1.0 / (2.0 - std::cbrt(2.0));
const double W0 = 1.0 - 2.0 * W1;
// Gauss nodes / weights for the CF4 step
const double GC1 = 0.5 - std::sqrt(3.0) / 6.0;
const double GC2 = 0.5 + std::sqrt(3.0) / 6.0;
const double GA1 = 0.25 - std::sqrt(3.0) / 6.0;
const double GA2 = 0.25 + std::sqrt(3.0) / 6.0;

struct Eig {
  Matrix raw;
  Matrix vec;
  Eigen::VectorXd val;
  double norm = 0;  // spectral bound

  void compute(const Matrix& h) {
    raw = h;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    vec = es.eigenvectors();
    val = es.eigenvalues();
    norm = std::max(std::abs(val.minCoeff()), std::abs(val.maxCoeff()));
  }
  Matrix exp(double x) const {
    Eigen::VectorXcd ph = (cx(0.0, -x) * val.cast<cx>().array()).exp();
    return vec * ph.asDiagonal() * vec.adjoint();
  }
};

struct Drive {
  double amp = 0;    // coefficient amplitude (2 Omega or 2 lambda)
  double freq = 0;   // rad/s
  double phase = 0;  // rad
  bool active = false;
  double operator()(double t) const { return amp * std::cos(freq * t + phase); }
};

// H(t) = A + cd(t) Vd + cc(t) Vc on one space; steps the accumulated unitary
struct Stepper {
  Eig a;           // static part
  const Eig* vd = nullptr;
  const Eig* vc = nullptr;
  Drive cd, cc;

  double norm_bound() const {
    double nb = a.norm;
    if (cd.active && vd) nb += std::abs(cd.amp) * vd->norm;
    if (cc.active && vc) nb += std::abs(cc.amp) * vc->norm;
    return nb;
  }

  Matrix assemble(double t) const {
    Matrix h = a.raw;
    if (cd.active && vd) h += cd(t) * vd->raw;
    if (cc.active && vc) h += cc(t) * vc->raw;
    return h;
  }

  // advance U over [t0, t0 + n dt] with the chosen method
  void run(Matrix& u, double t0, double dt, long nsteps,
           EvolutionPolicy::Method method) const {
    const bool has_d = cd.active && vd;
    const bool has_c = cc.active && vc;
    if (method == EvolutionPolicy::Method::split4) {
      if (!has_d && !has_c) {
        u = a.exp(dt * nsteps) * u;
        return;
      }
      if (has_d && has_c) {
        run_split_two(u, t0, dt, nsteps);
        return;
      }
      run_split(u, t0, dt, nsteps, has_d ? *vd : *vc, has_d ? cd : cc);
      return;
    }
    // per-step eigendecomposition paths
    for (long i = 0; i < nsteps; ++i) {
      const double t = t0 + i * dt;
      Eig e;
      if (method == EvolutionPolicy::Method::midpoint) {
        e.compute(assemble(t + 0.5 * dt));
        u = e.exp(dt) * u;
      } else {  // cf4
        const Matrix h1 = assemble(t + GC1 * dt);
        const Matrix h2 = assemble(t + GC2 * dt);
        Eig e1, e2;
        e1.compute(GA2 * h1 + GA1 * h2);
        e2.compute(GA1 * h1 + GA2 * h2);
        u = e2.exp(dt) * (e1.exp(dt) * u);
      }
    }
  }

 private:
  static void row_phase(Matrix& m, const Eigen::VectorXd& lam, double x) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      m.row(r) *= std::polar(1.0, -x * lam(r));
  }

  // exp(-i (A + c(t) V) dt) split to 4th order; one oscillating drive
  void run_split(Matrix& u, double t0, double dt, long nsteps, const Eig& v,
                 const Drive& c) const {
    const Matrix e_half = a.exp(0.5 * W1 * dt);
    const Matrix e_mid = a.exp(0.5 * (W1 + W0) * dt);
    const Matrix m_start = v.vec.adjoint() * e_half;        // R+ E(w1/2)
    const Matrix m_mid = v.vec.adjoint() * e_mid * v.vec;   // R+ E(m) R
    const Matrix m_end = e_half * v.vec;                    // E(w1/2) R
    Matrix x(u.rows(), u.cols());
    for (long i = 0; i < nsteps; ++i) {
      const double t = t0 + i * dt;
      const double c1 = c(t + 0.5 * W1 * dt);
      const double c2 = c(t + (W1 + 0.5 * W0) * dt);
      const double c3 = c(t + (W1 + W0 + 0.5 * W1) * dt);
      x.noalias() = m_start * u;
      row_phase(x, v.val, c1 * W1 * dt);
      u.noalias() = m_mid * x;
      row_phase(u, v.val, c2 * W0 * dt);
      x.noalias() = m_mid * u;
      row_phase(x, v.val, c3 * W1 * dt);
      u.noalias() = m_end * x;
    }
  }

  // two oscillating drives: inner Strang cd/2, cc, cd/2 per stage
  void run_split_two(Matrix& u, double t0, double dt, long nsteps) const {
    const Matrix e_half = a.exp(0.5 * W1 * dt);
    const Matrix e_mid = a.exp(0.5 * (W1 + W0) * dt);
    const Matrix m_start = vd->vec.adjoint() * e_half;
    const Matrix m_mid = vd->vec.adjoint() * e_mid * vd->vec;
    const Matrix m_end = e_half * vd->vec;
    const Matrix q = vd->vec.adjoint() * vc->vec;   // Rd+ Rc
    const Matrix qh = q.adjoint();
    Matrix x(u.rows(), u.cols()), y(u.rows(), u.cols());
    auto stage = [&](Matrix& m, double tmid, double w) {
      // in the Vd eigenbasis on entry and exit
      row_phase(m, vd->val, 0.5 * cd(tmid) * w * dt);
      x.noalias() = qh * m;
      row_phase(x, vc->val, cc(tmid) * w * dt);
      m.noalias() = q * x;
      row_phase(m, vd->val, 0.5 * cd(tmid) * w * dt);
    };
    for (long i = 0; i < nsteps; ++i) {
      const double t = t0 + i * dt;
      y.noalias() = m_start * u;
      stage(y, t + 0.5 * W1 * dt, W1);
      u.noalias() = m_mid * y;
      stage(u, t + (W1 + 0.5 * W0) * dt, W0);
      y.noalias() = m_mid * u;
      stage(y, t + (W1 + W0 + 0.5 * W1) * dt, W1);
      u.noalias() = m_end * y;
    }
  }
};

struct NuclearOps {
  std::vector<Matrix> x, y, z;
};

NuclearOps make_nuclear_ops(int n) {
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

struct Segment {
  double t0, t1;
  int F = 1;
  const Pulse* pulse = nullptr;  // finite window
};

std::vector<Segment> build_segments(const PulseSequence* seq, double t_end) {
  std::vector<Segment> segs;
  if (!seq || seq->pulses.empty()) {
    segs.push_back({0.0, t_end, 1, nullptr});
    return segs;
  }
  const double cyc = seq->supercycle();
  const long ncyc = static_cast<long>(std::ceil(t_end / cyc - 1e-12));
  if (seq->instantaneous()) {
    std::vector<double> flips;
    for (long nn = 0; nn <= ncyc; ++nn)
      for (const auto& p : seq->pulses) {
        const double t = nn * cyc + p.center;
        if (t > 1e-18 && t < t_end * (1.0 - 1e-15)) flips.push_back(t);
      }
    std::sort(flips.begin(), flips.end());
    double prev = 0.0;
    int F = 1;
    for (double tf : flips) {
      segs.push_back({prev, tf, F, nullptr});
      prev = tf;
      F = -F;
    }
    segs.push_back({prev, t_end, F, nullptr});
    return segs;
  }
  // finite windows; F stays +1 in the physical frame
  std::vector<const Pulse*> order;
  std::vector<double> starts, ends;
  for (long nn = 0; nn <= ncyc; ++nn)
    for (const auto& p : seq->pulses) {
      const double c = nn * cyc + p.center;
      if (c - 0.5 * p.duration >= -1e-18 && c + 0.5 * p.duration <= t_end * (1.0 + 1e-15)) {
        starts.push_back(c - 0.5 * p.duration);
        ends.push_back(c + 0.5 * p.duration);
        order.push_back(&p);
      }
    }
  std::vector<size_t> idx(order.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return starts[a] < starts[b]; });
  double prev = 0.0;
  for (size_t i : idx) {
    if (starts[i] > prev + 1e-18) segs.push_back({prev, starts[i], 1, nullptr});
    segs.push_back({starts[i], std::min(ends[i], t_end), 1, order[i]});
    prev = std::min(ends[i], t_end);
  }
  if (prev < t_end - 1e-18) segs.push_back({prev, t_end, 1, nullptr});
  return segs;
}

// shared precomputed context for one (register, fields, sequence) evolution
struct Context {
  int n = 0, dn = 1, dim = 2;
  int ms = 1;
  double lambda_det = 0;  // pulse detuning
  // nuclear-space pieces
  Matrix h_zeeman, h_hf, h_nn, vdec_n, vctl_n;
  Eig a_block[2][2];  // [branch][F index: 0 -> F=+1, 1 -> F=-1]
  Eig vd_n, vc_n;
  bool has_dec = false, has_ctl = false;
  Drive cd, cc;
  double t_fastest_free = 0;  // shortest oscillation period outside pulses
  // full-space pieces for pulse windows
  Eig vd_full, vc_full;
  std::vector<std::pair<double, Eig>> a_pulse;  // keyed by pulse phase

  Context(const SpinRegister& reg, const FieldConfig& fields,
          const PulseSequence* seq) {
    n = reg.size();
    dn = reg.nuclear_dim();
    dim = 2 * dn;
    ms = reg.ms;
    const NuclearOps ops = make_nuclear_ops(n);
    h_zeeman = Matrix::Zero(dn, dn);
    h_hf = Matrix::Zero(dn, dn);
    vdec_n = Matrix::Zero(dn, dn);
    vctl_n = Matrix::Zero(dn, dn);
    double w_max = 0;
    for (int j = 0; j < n; ++j) {
      const double w = reg.nuclei[j].gyro * fields.Bz;
      w_max = std::max(w_max, std::abs(w));
      h_zeeman -= w * ops.z[j];
      const Vector3& a = reg.nuclei[j].hyperfine;
      h_hf += a.x() * ops.x[j] + a.y() * ops.y[j] + a.z() * ops.z[j];
    }
    h_nn = Matrix::Zero(dn, dn);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < j; ++k) {
        const double g = register_coupling(reg, j, k);
        if (g != 0.0)
          h_nn += g * (ops.z[j] * ops.z[k] -
                       0.5 * (ops.x[j] * ops.x[k] + ops.y[j] * ops.y[k]));
      }
    double freq_max = w_max;
    if (fields.decouple.enabled()) {
      has_dec = true;
      const Vector3& nd = fields.decouple.n;
      for (int j = 0; j < n; ++j)
        vdec_n += nd.x() * ops.x[j] + nd.y() * ops.y[j] + nd.z() * ops.z[j];
      vd_n.compute(vdec_n);
      cd = {2.0 * fields.decouple.Omega, fields.decouple.omega_rf, 0.0, true};
      freq_max = std::max(freq_max, std::abs(fields.decouple.omega_rf));
    }
    if (fields.control) {
      has_ctl = true;
      const auto& ctl = *fields.control;
      for (int j = 0; j < n; ++j)
        vctl_n += ctl.n_c.x() * ops.x[j] + ctl.n_c.y() * ops.y[j] +
                  ctl.n_c.z() * ops.z[j];
      vc_n.compute(vctl_n);
      cc = {2.0 * ctl.lambda, ctl.omega_c, ctl.phi_c, true};
      freq_max = std::max(freq_max, std::abs(ctl.omega_c));
    }
    t_fastest_free = freq_max > 0 ? twopi / freq_max : 0.0;
    lambda_det = seq ? seq->detuning : 0.0;

    for (int b = 0; b < 2; ++b) {
      const double sb = (b == 0) ? -1.0 : +1.0;
      for (int fi = 0; fi < 2; ++fi) {
        const double F = (fi == 0) ? 1.0 : -1.0;
        Matrix a = h_zeeman + h_nn + 0.5 * ms * (F * sb + 1.0) * h_hf;
        a += (0.5 * lambda_det * sb) * Matrix::Identity(dn, dn);
        a_block[b][fi].compute(a);
      }
    }
    if (seq && !seq->instantaneous()) prepare_pulse_windows(*seq);
  }

  void prepare_pulse_windows(const PulseSequence& seq) {
    // distinct pulse phases; full-space statics include the drive term
    const SpinOps half = spin_operators(Spin::half);
    const Matrix idn = Matrix::Identity(dn, dn);
    Matrix h_full = Matrix::Zero(dim, dim);
    h_full.topLeftCorner(dn, dn) =
        h_zeeman + h_nn + 0.5 * ms * (-1.0 + 1.0) * h_hf -
        0.5 * lambda_det * idn;
    h_full.bottomRightCorner(dn, dn) =
        h_zeeman + h_nn + 0.5 * ms * (1.0 + 1.0) * h_hf + 0.5 * lambda_det * idn;
    for (const auto& p : seq.pulses) {
      bool seen = false;
      for (auto& [ph, eig] : a_pulse)
        if (std::abs(ph - p.phase) < 1e-12) seen = true;
      if (seen) continue;
      const Matrix drive =
          seq.omega_eff() * (std::cos(p.phase) * half.x + std::sin(p.phase) * half.y);
      Matrix a = h_full + kron(drive, idn);
      a_pulse.emplace_back(p.phase, Eig{});
      a_pulse.back().second.compute(a);
    }
    if (has_dec) vd_full.compute(kron(Matrix::Identity(2, 2), vdec_n));
    if (has_ctl) vc_full.compute(kron(Matrix::Identity(2, 2), vctl_n));
  }

  const Eig& pulse_static(double phase) const {
    for (const auto& [ph, eig] : a_pulse)
      if (std::abs(ph - phase) < 1e-12) return eig;
    throw std::logic_error("pulse phase not prepared");
  }
};

long choose_steps(double seg, double t_fastest, double norm_bound,
                  const EvolutionPolicy& policy, double& dt_out) {
  double dt = policy.dt_max;
  if (t_fastest > 0) dt = std::min(dt, t_fastest / policy.samples_per_cycle);
  if (norm_bound > 0) dt = std::min(dt, policy.phase_cap / norm_bound);
  if (!(dt > 0)) throw std::runtime_error("evolve: step underflow");
  long nst = std::max(1L, static_cast<long>(std::ceil(seg / dt - 1e-12)));
  dt_out = seg / nst;
  return nst;
}

}  // namespace

std::pair<Matrix, Matrix> conditional_evolution(const SpinRegister& reg,
                                                const FieldConfig& fields,
                                                const PulseSequence* seq,
                                                const EvolutionPolicy& policy,
                                                double t_end) {
  if (seq && !seq->instantaneous())
    throw std::invalid_argument(
        "conditional_evolution: requires an instantaneous-pulse sequence");
  Context ctx(reg, fields, seq);
  const auto segs = build_segments(seq, t_end);
  Matrix u0 = Matrix::Identity(ctx.dn, ctx.dn);
  Matrix u1 = Matrix::Identity(ctx.dn, ctx.dn);
  for (const auto& s : segs) {
    const double seg = s.t1 - s.t0;
    if (seg <= 0) continue;
    const int fi = (s.F == 1) ? 0 : 1;
    for (int b = 0; b < 2; ++b) {
      Stepper st;
      st.a = ctx.a_block[b][fi];
      st.vd = &ctx.vd_n;
      st.vc = &ctx.vc_n;
      st.cd = ctx.cd;
      st.cc = ctx.cc;
      double dt;
      const long nst =
          choose_steps(seg, ctx.t_fastest_free, st.norm_bound(), policy, dt);
      st.run(b == 0 ? u0 : u1, s.t0, dt, nst, policy.method);
    }
  }
  return {u0, u1};
}

Matrix evolve(const SpinRegister& reg, const FieldConfig& fields,
              const PulseSequence* seq, const EvolutionPolicy& policy,
              double t_end) {
  const int dn = reg.nuclear_dim();
  if (!seq || seq->instantaneous()) {
    auto [u0, u1] = conditional_evolution(reg, fields, seq, policy, t_end);
    Matrix u = Matrix::Zero(2 * dn, 2 * dn);
    u.topLeftCorner(dn, dn) = u0;
    u.bottomRightCorner(dn, dn) = u1;
    if (seq) {
      // reattach the ideal pulse rotations so the physical-frame propagator
      // is returned for any repetition count
      const Matrix p = ideal_pulse_product(*seq);
      u = kron(p, Matrix::Identity(dn, dn)) * u;
    }
    return u;
  }

  Context ctx(reg, fields, seq);
  const auto segs = build_segments(seq, t_end);
  Matrix u = Matrix::Identity(ctx.dim, ctx.dim);
  const double t_pulse_scale =
      std::min(ctx.t_fastest_free > 0 ? ctx.t_fastest_free : 1e300,
               twopi / seq->omega_eff());

  for (const auto& s : segs) {
    const double seg = s.t1 - s.t0;
    if (seg <= 0) continue;
    if (!s.pulse) {
      for (int b = 0; b < 2; ++b) {
        Stepper st;
        st.a = ctx.a_block[b][0];
        st.vd = &ctx.vd_n;
        st.vc = &ctx.vc_n;
        st.cd = ctx.cd;
        st.cc = ctx.cc;
        Matrix ub = Matrix::Identity(ctx.dn, ctx.dn);
        double dt;
        const long nst =
            choose_steps(seg, ctx.t_fastest_free, st.norm_bound(), policy, dt);
        st.run(ub, s.t0, dt, nst, policy.method);
        if (b == 0)
          u.topRows(ctx.dn) = ub * u.topRows(ctx.dn);
        else
          u.bottomRows(ctx.dn) = ub * u.bottomRows(ctx.dn);
      }
    } else {
      Stepper st;
      st.a = ctx.pulse_static(s.pulse->phase);
      st.vd = &ctx.vd_full;
      st.vc = &ctx.vc_full;
      st.cd = ctx.cd;
      st.cc = ctx.cc;
      Matrix w = Matrix::Identity(ctx.dim, ctx.dim);
      double dt;
      const long nst = choose_steps(seg, t_pulse_scale, st.norm_bound(), policy, dt);
      st.run(w, s.t0, dt, nst, policy.method);
      u = w * u;
    }
  }
  return u;
}

double coherence_L(const Matrix& u_full) {
  const int dn = static_cast<int>(u_full.rows()) / 2;
  const Matrix m = 0.5 * (u_full.topLeftCorner(dn, dn) + u_full.topRightCorner(dn, dn) +
                          u_full.bottomLeftCorner(dn, dn) + u_full.bottomRightCorner(dn, dn));
  return 1.0 - 2.0 * m.squaredNorm() / dn;
}

std::vector<ScanPoint> coherence_scan(const SpinRegister& reg,
                                      const FieldConfig& fields,
                                      const ScanSettings& settings) {
  if (settings.grid.empty())
    throw std::invalid_argument("coherence_scan: empty frequency grid");
  std::vector<ScanPoint> out(settings.grid.size());
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    try {
      for (size_t i = next.fetch_add(1); i < settings.grid.size();
           i = next.fetch_add(1)) {
        const double w_drive = settings.grid[i];
        const double tau = twopi * settings.harmonic / w_drive;
        const PulseSequence seq =
            axy8_schedule(settings.flavor, tau, settings.harmonic, settings.f,
                          settings.pulse, settings.repetitions);
        const Matrix u = evolve(reg, fields, &seq, settings.policy, seq.t_end());
        out[i] = {w_drive, coherence_L(u)};
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(settings.grid.size());
    }
  };
  const int nthreads = std::max(1, settings.threads);
  std::vector<std::thread> pool;
  for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

Matrix interaction_frame(const SpinRegister& reg, const DressedParameters& dp,
                         double t) {
  Matrix w_nuc = Matrix::Identity(1, 1);
  for (const auto& nuc : reg.nuclei) {
    const NuclearFrame fr = nuclear_frame(nuc.hyperfine, dp, reg.ms);
    Matrix r = spin_rotation(fr.n_j, fr.omega_j * t) *
               spin_rotation(dp.n_tilde, dp.xi * t) *
               spin_rotation(Vector3::UnitZ(), dp.omega_rf * t);
    w_nuc = kron(w_nuc, r);
  }
  return kron(Matrix::Identity(2, 2), w_nuc);
}

Matrix realized_gate(const SpinRegister& reg, const FieldConfig& fields,
                     const PulseSequence& seq, const EvolutionPolicy& policy) {
  const Matrix u = evolve(reg, fields, &seq, policy, seq.t_end());
  const DressedParameters dp = dressed_parameters(
      fields.Bz, fields.decouple.n, fields.decouple.Omega, fields.decouple.omega_rf);
  return interaction_frame(reg, dp, seq.t_end()) * u;
}

Matrix target_gate(const SpinRegister& reg, const DressedParameters& dp,
                   const GateSpec& gate) {
  const int n = reg.size();
  const int dn = reg.nuclear_dim();
  if (gate.target < 0 || gate.target >= n)
    throw std::invalid_argument("target_gate: nucleus index out of range");
  const NuclearFrame fr = nuclear_frame(reg.nuclei[gate.target].hyperfine, dp, reg.ms);
  const Vector3 axis = (gate.axis == 'x') ? fr.x_j : fr.y_j;
  std::vector<int> dims(n, 2);
  Matrix u = Matrix::Zero(2 * dn, 2 * dn);
  if (gate.entangling) {
    // sigma_z = diag(-1, +1) on {|0>, |ms>}
    u.topLeftCorner(dn, dn) =
        embed(spin_rotation(axis, +gate.phi), gate.target, dims);
    u.bottomRightCorner(dn, dn) =
        embed(spin_rotation(axis, -gate.phi), gate.target, dims);
  } else {
    const Matrix r = embed(spin_rotation(axis, -gate.phi), gate.target, dims);
    u.topLeftCorner(dn, dn) = r;
    u.bottomRightCorner(dn, dn) = r;
  }
  return u;
}

double gate_fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("gate_fidelity: dimension mismatch");
  const double num = std::abs((a * b.adjoint()).trace());
  const double den = std::sqrt(a.squaredNorm() * b.squaredNorm());
  return num / den;
}

RwaCurves rwa_comparison(double Bz, double Delta_target, double tilt_rad,
                         const std::vector<double>& t_grid,
                         const EvolutionPolicy& policy) {
  const MagicSolution sol = solve_magic_angle(Bz, Delta_target, Vector3::UnitX());
  const Vector3 n_mis(std::cos(tilt_rad), 0.0, std::sin(tilt_rad));
  const double Omega = sol.Omega_x;  // calibrated for the ideal n = x
  const DressedParameters dp =
      dressed_parameters(Bz, n_mis, Omega, sol.omega_rf);

  const SpinOps sp = spin_operators(Spin::half);
  Matrix a_stat = Matrix::Zero(2, 2);
  a_stat -= dp.omega * sp.z;
  Eig vd;
  vd.compute(spin_dot(n_mis));
  Stepper st;
  st.a.compute(a_stat);
  st.vd = &vd;
  st.cd = {2.0 * Omega, sol.omega_rf, 0.0, true};

  // effective generators
  const double nx = dp.n_tilde.x(), nz = dp.n_tilde.z();
  const Matrix h_eff =
      (dp.Delta * nx + 0.5 * dp.Omega_x * (1.0 - nx * nx - nz)) * sp.x +
      (dp.Delta * nz + 0.5 * dp.Omega_x * nx * (1.0 - nz)) * sp.z;
  const Matrix h_rwa = -dp.Delta * sp.z + dp.Omega_x * sp.x;

  RwaCurves curves;
  Matrix u = Matrix::Identity(2, 2);
  double t_prev = 0;
  std::vector<double> ts = t_grid;
  std::sort(ts.begin(), ts.end());
  const double t_fast = twopi / std::max(dp.omega, sol.omega_rf);
  for (double t : ts) {
    if (t > t_prev) {
      double dt;
      const long nst = choose_steps(t - t_prev, t_fast, st.norm_bound(), policy, dt);
      st.run(u, t_prev, dt, nst, policy.method);
      t_prev = t;
    }
    const Matrix b_ref = spin_rotation(Vector3::UnitZ(), -dp.omega_rf * t) *
                         spin_rotation(dp.n_tilde, -dp.xi * t) *
                         expm_hermitian(h_eff, t);
    const Matrix b_rwa =
        spin_rotation(Vector3::UnitZ(), -dp.omega_rf * t) * expm_hermitian(h_rwa, t);
    curves.t.push_back(t);
    curves.refined.push_back(gate_fidelity(u, b_ref));
    curves.rwa.push_back(gate_fidelity(u, b_rwa));
  }
  return curves;
}

}  // namespace nv
