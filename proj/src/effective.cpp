#include "nv/effective.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace nv {

DressedParameters dressed_parameters(double Bz, const Vector3& n, double Omega,
                                     double omega_rf, double gyro) {
  DressedParameters dp;
  dp.omega = gyro * Bz;
  dp.omega_rf = omega_rf;
  dp.Omega_x = Omega * n.x();
  dp.Omega_z = Omega * n.z();
  dp.omega_tilde = std::hypot(dp.omega + omega_rf, dp.Omega_x);
  dp.n_tilde = Vector3(dp.Omega_x / dp.omega_tilde, 0.0,
                       -(dp.omega + omega_rf) / dp.omega_tilde);
  dp.Delta = dp.omega_tilde - 2.0 * omega_rf;
  dp.xi = 2.0 * omega_rf;
  if (dp.Delta == 0.0)
    throw std::domain_error("dressed_parameters: degenerate dressing (Delta = 0)");
  const double nx = dp.n_tilde.x(), nz = dp.n_tilde.z();
  dp.delta = nx + dp.Omega_x / (2.0 * dp.Delta) * (1.0 - nx * nx - nz);
  return dp;
}

namespace {

double magic_residual(const DressedParameters& dp) {
  const double nx = dp.n_tilde.x(), nz = dp.n_tilde.z();
  const double lhs = nx + dp.Omega_x / (2.0 * dp.Delta) * (1.0 - nx * nx - nz);
  const double rhs =
      std::sqrt(2.0) * (nz + dp.Omega_x / (2.0 * dp.Delta) * nx * (1.0 - nz));
  return lhs - rhs;
}

}  // namespace

MagicSolution solve_magic_angle(double Bz, double Delta_target, const Vector3& n,
                                double gyro) {
  if (Delta_target == 0.0)
    throw std::invalid_argument("solve_magic_angle: Delta_target must be nonzero");
  if (n.x() == 0.0)
    throw std::invalid_argument("solve_magic_angle: n needs a nonzero x component");
  const double omega = gyro * Bz;
  double Ox = std::sqrt(2.0) * Delta_target;
  double wrf = omega - Delta_target;

  auto residuals = [&](double ox, double w, double& r1, double& r2) {
    DressedParameters dp = dressed_parameters(Bz, n, ox / n.x(), w, gyro);
    r1 = dp.Delta - Delta_target;
    // evaluate the relation at the target detuning for conditioning
    const double nx = dp.n_tilde.x(), nz = dp.n_tilde.z();
    const double lhs = nx + ox / (2.0 * Delta_target) * (1.0 - nx * nx - nz);
    const double rhs = std::sqrt(2.0) *
                       (nz + ox / (2.0 * Delta_target) * nx * (1.0 - nz));
    r2 = lhs - rhs;
  };

  const double scale = std::max(std::abs(Delta_target), 1e-6);
  for (int it = 1; it <= 200; ++it) {
    double r1, r2;
    residuals(Ox, wrf, r1, r2);
    if (std::abs(r1) <= 1e-10 * scale && std::abs(r2) <= 1e-10)
      return {Ox, wrf, it};
    // Jacobian by finite differences
    const double hx = std::max(1e-7 * std::abs(Ox), 1e-3);
    const double hw = std::max(1e-7 * std::abs(wrf), 1e-3);
    double a1, a2, b1, b2;
    residuals(Ox + hx, wrf, a1, a2);
    residuals(Ox, wrf + hw, b1, b2);
    const double j11 = (a1 - r1) / hx, j12 = (b1 - r1) / hw;
    const double j21 = (a2 - r2) / hx, j22 = (b2 - r2) / hw;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) break;
    double dx = -(r1 * j22 - r2 * j12) / det;
    double dw = -(j11 * r2 - j21 * r1) / det;
    // damp large excursions
    const double cap = 10.0 * std::abs(Delta_target);
    const double mag = std::max(std::abs(dx), std::abs(dw));
    if (mag > cap) {
      dx *= cap / mag;
      dw *= cap / mag;
    }
    Ox += dx;
    wrf += dw;
  }
  throw std::runtime_error("solve_magic_angle: no convergence in 200 iterations");
}

double resonance_frequency(double A_z, const DressedParameters& dp, int ms) {
  const double nx = dp.n_tilde.x(), nz = dp.n_tilde.z();
  const double c1 = dp.delta + ms / (2.0 * dp.Delta) * nz * nx * A_z;
  const double c2 =
      dp.delta / std::sqrt(2.0) + ms / (2.0 * dp.Delta) * nz * nz * A_z;
  return std::abs(dp.Delta) * std::hypot(c1, c2);
}

NuclearFrame nuclear_frame(const Vector3& A, const DressedParameters& dp, int ms) {
  NuclearFrame fr;
  const double nx = dp.n_tilde.x(), nz = dp.n_tilde.z();
  fr.omega_j = resonance_frequency(A.z(), dp, ms);
  fr.n_j = Vector3(dp.Delta * dp.delta + 0.5 * ms * nz * nx * A.z(), 0.0,
                   dp.Delta * dp.delta / std::sqrt(2.0) + 0.5 * ms * nz * nz * A.z()) /
           fr.omega_j;
  const double sin_theta = dp.n_tilde.cross(fr.n_j).norm();
  if (sin_theta < 1e-6)
    throw std::domain_error("nuclear_frame: rotation axis degenerate with n_tilde");
  fr.g_j = std::abs(A.z() * nz * sin_theta);
  const Vector3 gamma3 = A.z() * nz * dp.n_tilde;
  fr.z_j = fr.n_j;
  fr.x_j = (gamma3 - gamma3.dot(fr.n_j) * fr.n_j) / fr.g_j;
  fr.y_j = fr.n_j.cross(gamma3) / fr.g_j;
  return fr;
}

double bare_resonance(const Vector3& A, double omega, int ms) {
  return (omega * Vector3::UnitZ() - 0.5 * ms * A).norm();
}

double bare_coupling(const Vector3& A, double omega, int ms) {
  const Vector3 axis = (omega * Vector3::UnitZ() - 0.5 * ms * A).normalized();
  return (A - A.dot(axis) * axis).norm();
}

BranchMap branch_map(const Vector3& A, const DressedParameters& dp,
                     const Vector3& n_c) {
  BranchMap bm;
  const Vector3 zhat = Vector3::UnitZ();
  const Vector3& nt = dp.n_tilde;
  const Vector3 A_perp = A - A.z() * zhat;
  const Vector3 zxA = zhat.cross(A);

  auto split = [&](const std::string& base, const Vector3& v,
                   const std::vector<std::string>& carrier_base) {
    // decomposition along/about n_tilde, tagged with the carrier products
    bm.terms.push_back({base + "_1", v - v.dot(nt) * nt, carrier_base});
    bm.terms.push_back({base + "_2", nt.cross(v), carrier_base});
    bm.terms.push_back({base + "_3", v.dot(nt) * nt, carrier_base});
  };

  split("alpha", A_perp, {"omega_rf+omega_j", "omega_rf-omega_j",
                          "3omega_rf+omega_j", "3omega_rf-omega_j"});
  split("beta", zxA, {"omega_rf+omega_j", "omega_rf-omega_j",
                      "3omega_rf+omega_j", "3omega_rf-omega_j"});
  // gamma_3 is the only term whose carrier set is the low branch {omega_j}
  bm.terms.push_back({"gamma_1", A.z() * zhat - (A.z() * zhat).dot(nt) * nt,
                      {"2omega_rf+omega_j", "2omega_rf-omega_j"}});
  bm.terms.push_back({"gamma_2", nt.cross(A.z() * zhat),
                      {"2omega_rf+omega_j", "2omega_rf-omega_j"}});
  bm.terms.push_back({"gamma_3", A.z() * zhat.dot(nt) * nt, {"omega_j"}});

  const Vector3 nc1 = n_c - n_c.z() * zhat;
  const Vector3 nc2 = zhat.cross(n_c);
  const Vector3 nc3 = n_c.z() * zhat;
  const Vector3 ncs[3] = {nc1, nc2, nc3};
  for (int j = 0; j < 3; ++j) {
    const std::string base = "m_" + std::to_string(j + 1);
    std::vector<std::string> carriers =
        j < 2 ? std::vector<std::string>{"omega_rf+omega_j", "omega_rf-omega_j"}
              : std::vector<std::string>{"omega_j", "omega_rf"};
    bm.terms.push_back({base + ",1", ncs[j] - ncs[j].dot(nt) * nt, carriers});
    bm.terms.push_back({base + ",2", nt.cross(ncs[j]), carriers});
    bm.terms.push_back(
        {base + ",3", ncs[j].dot(nt) * nt,
         j < 2 ? std::vector<std::string>{"omega_rf+omega_j", "omega_rf-omega_j"}
               : std::vector<std::string>{"omega_j"}});
  }
  return bm;
}

bool ConditionReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

ConditionReport validate_conditions(const SpinRegister& reg,
                                    const DressedParameters& dp, double f_used,
                                    const ConditionThresholds& thr) {
  ConditionReport rep;
  const int n = reg.size();

  double max_ratio = 0;
  for (const auto& nuc : reg.nuclei)
    max_ratio = std::max(max_ratio,
                         std::abs(nuc.hyperfine.z() / (2.0 * dp.Delta)));
  rep.entries.push_back({"max |A_z / 2 Delta|", max_ratio, thr.hf_over_2delta,
                         max_ratio <= thr.hf_over_2delta});

  const double mr = std::abs(magic_residual(dp));
  rep.entries.push_back(
      {"magic-angle residual", mr, thr.magic_residual, mr <= thr.magic_residual});

  std::vector<double> wj(n);
  for (int j = 0; j < n; ++j)
    wj[j] = resonance_frequency(reg.nuclei[j].hyperfine.z(), dp, reg.ms);

  for (int j = 0; j < n; ++j)
    for (int k = 0; k < j; ++k) {
      const double g = register_coupling(reg, j, k);
      if (g == 0.0) continue;
      const double ratio = std::abs(g) / std::min(wj[j], wj[k]);
      rep.entries.push_back(
          {"g_" + std::to_string(j) + std::to_string(k) + " / omega_j", ratio,
           thr.coupling_over_omega, ratio <= thr.coupling_over_omega});
      const double supp = std::abs(reg.nuclei[j].hyperfine.z() /
                                   (2.0 * dp.Delta) * g);
      rep.entries.push_back({"residual nn coupling " + std::to_string(j) +
                                 std::to_string(k) + " (rad/s)",
                             supp, thr.coupling_over_omega * std::abs(g), true});
    }

  if (f_used != 0.0) {
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j) {
        if (j == l) continue;
        const auto fr = nuclear_frame(reg.nuclei[j].hyperfine, dp, reg.ms);
        const double leak =
            std::abs(f_used * fr.g_j / (4.0 * (wj[l] - wj[j])));
        rep.entries.push_back(
            {"leakage l=" + std::to_string(l) + " j=" + std::to_string(j), leak,
             thr.leakage, leak <= thr.leakage});
      }
  }
  return rep;
}

double predicted_dip(double f, double g_l, double t, int ms) {
  return -std::cos(0.25 * ms * f * g_l * t);
}

void export_conditions(const ConditionReport& rep, std::ostream& os) {
  os << "# condition\tvalue\tthreshold\tstatus\n";
  for (const auto& e : rep.entries)
    os << e.name << '\t' << e.value << '\t' << e.threshold << '\t'
       << (e.pass ? "pass" : "warn") << '\n';
}

}  // namespace nv
