#pragma once

#include <array>
#include <string>
#include <vector>

#include "nv/constants.hpp"
#include "nv/operators.hpp"
#include "nv/system.hpp"

namespace nv {

struct DressedParameters {
  double omega = 0;        // gamma_n Bz
  double omega_rf = 0;
  double Omega_x = 0;
  double Omega_z = 0;
  double omega_tilde = 0;  // sqrt((omega+omega_rf)^2 + Omega_x^2)
  Vector3 n_tilde = -Vector3::UnitZ();
  double Delta = 0;        // omega_tilde - 2 omega_rf
  double xi = 0;           // 2 omega_rf (resonance condition)
  double delta = 0;        // n_x + Omega_x/(2 Delta) (1 - n_x^2 - n_z)
};

DressedParameters dressed_parameters(double Bz, const Vector3& n, double Omega,
                                     double omega_rf, double gyro = gamma_c13);

struct MagicSolution {
  double Omega_x = 0;
  double omega_rf = 0;
  int iterations = 0;
};

// simultaneous solve of Delta(Omega_x, omega_rf) = Delta_target and the
// hyperfine-free magic-angle relation, damped Newton
MagicSolution solve_magic_angle(double Bz, double Delta_target, const Vector3& n,
                                double gyro = gamma_c13);

// low-energy branch resonance frequency
double resonance_frequency(double A_z, const DressedParameters& dp, int ms);

struct NuclearFrame {
  double omega_j = 0;
  Vector3 n_j = Vector3::UnitZ();
  double g_j = 0;
  Vector3 x_j, y_j, z_j;
};

NuclearFrame nuclear_frame(const Vector3& A, const DressedParameters& dp, int ms);

// no-decoupling resonance |omega z - (ms/2) A|
double bare_resonance(const Vector3& A, double omega, int ms);

// |A_l - (A_l . w_hat) w_hat| at the bare resonance axis
double bare_coupling(const Vector3& A, double omega, int ms);

struct BranchTerm {
  std::string label;              // alpha_{i}, beta_{i}, gamma_{i}, m_{i,k}
  Vector3 vec;
  std::vector<std::string> carriers;  // frequency tags
};

struct BranchMap {
  std::vector<BranchTerm> terms;
};

BranchMap branch_map(const Vector3& A, const DressedParameters& dp,
                     const Vector3& n_c);

struct ConditionEntry {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = true;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  bool all_pass() const;
};

struct ConditionThresholds {
  double hf_over_2delta = 0.25;     // max |A_z / 2 Delta|
  double magic_residual = 1e-6;
  double coupling_over_omega = 0.05;  // g_jk / omega_j
  double leakage = 0.1;               // |f g_j / 4 (omega_l - omega_j)|
};

ConditionReport validate_conditions(const SpinRegister& reg,
                                    const DressedParameters& dp,
                                    double f_used = 0.0,
                                    const ConditionThresholds& thr = {});

// L = -cos((ms/4) f g_l t)
double predicted_dip(double f, double g_l, double t, int ms);

void export_conditions(const ConditionReport& rep, std::ostream& os);

}  // namespace nv
