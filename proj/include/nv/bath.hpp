#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nv/propagate.hpp"
#include "nv/system.hpp"

namespace nv {

struct BathSpec {
  uint64_t seed = 0;
  double abundance = 0.0027;
  double r_min = 1.3;  // nm
  double r_max = 4.8;  // nm
  std::vector<Vector3> exclusion;  // register positions never duplicated
};

std::vector<Nucleus> generate_bath(const BathSpec& spec);

// single-nucleus branch propagators under the toggled hyperfine field
std::pair<Matrix, Matrix> conditional_propagators(const Nucleus& nucleus,
                                                  const FieldConfig& fields,
                                                  const PulseSequence& seq,
                                                  const EvolutionPolicy& policy,
                                                  double t_end, int ms);

// prod_j |Tr(U0_j U1_j+)| / 2 over unpolarized bath nuclei
double factorized_coherence(const std::vector<Nucleus>& bath,
                            const FieldConfig& fields, const PulseSequence& seq,
                            const EvolutionPolicy& policy, double t_end, int ms,
                            int threads = 1);

double register_with_bath_L(double L_reg, double L_bath);

struct CensusSettings {
  uint64_t seed = 0;
  long trials = 100000;
  double abundance = 0.0024;
  double r_min = 0.15;  // nm
  double r_max = 0.85;  // nm
  double dA_min = 0;    // rad/s
  std::optional<double> A_max;  // rad/s
  int threads = 1;
};

struct CensusResult {
  double fraction = 0;
  double ci95 = 0;  // normal-approximation half width
  long hits = 0;
  long trials = 0;
};

CensusResult sample_census(const CensusSettings& settings);

}  // namespace nv
