#include "nv/bath.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "nv/rng.hpp"

namespace nv {

std::vector<Nucleus> generate_bath(const BathSpec& spec) {
  const auto positions =
      generate_sample(spec.seed, spec.abundance, spec.r_min, spec.r_max);
  std::vector<Nucleus> bath;
  for (const auto& p : positions) {
    bool excluded = false;
    for (const auto& e : spec.exclusion)
      if ((p - e).norm() < 1e-6) excluded = true;
    if (excluded) continue;
    Nucleus nuc;
    nuc.position = p;
    nuc.hyperfine = hyperfine_vector(p);
    bath.push_back(nuc);
  }
  return bath;
}

std::pair<Matrix, Matrix> conditional_propagators(const Nucleus& nucleus,
                                                  const FieldConfig& fields,
                                                  const PulseSequence& seq,
                                                  const EvolutionPolicy& policy,
                                                  double t_end, int ms) {
  if (!seq.instantaneous())
    throw std::invalid_argument(
        "conditional_propagators: requires instantaneous pulses");
  SpinRegister reg;
  reg.ms = ms;
  reg.nuclei.push_back(nucleus);
  return conditional_evolution(reg, fields, &seq, policy, t_end);
}

double factorized_coherence(const std::vector<Nucleus>& bath,
                            const FieldConfig& fields, const PulseSequence& seq,
                            const EvolutionPolicy& policy, double t_end, int ms,
                            int threads) {
  if (bath.empty()) return 1.0;
  std::vector<double> factors(bath.size(), 1.0);
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    try {
      for (size_t i = next.fetch_add(1); i < bath.size(); i = next.fetch_add(1)) {
        auto [u0, u1] =
            conditional_propagators(bath[i], fields, seq, policy, t_end, ms);
        factors[i] = std::abs((u0 * u1.adjoint()).trace()) / 2.0;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(bath.size());
    }
  };
  const int nthreads = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  double L = 1.0;
  for (double f : factors) L *= f;
  return L;
}

double register_with_bath_L(double L_reg, double L_bath) {
  if (L_reg < -1.0 || L_reg > 1.0 || L_bath < 0.0 || L_bath > 1.0)
    throw std::invalid_argument("register_with_bath_L: inputs out of range");
  return L_reg * L_bath;
}

CensusResult sample_census(const CensusSettings& settings) {
  if (settings.trials < 1)
    throw std::invalid_argument("sample_census: trials must be >= 1");
  const auto sites = lattice_sites_in_shell(settings.r_min, settings.r_max);
  std::vector<double> site_az(sites.size());
  for (size_t i = 0; i < sites.size(); ++i)
    site_az[i] = hyperfine_vector(sites[i]).z();

  std::atomic<long> hits{0};
  std::atomic<long> done{0};
  auto worker = [&](int worker_id, int nworkers) {
    long local = 0;
    std::vector<double> az;
    for (long trial = worker_id; trial < settings.trials; trial += nworkers) {
      const uint64_t stream = CounterRng::substream(settings.seed, trial);
      az.clear();
      for (size_t i = 0; i < sites.size(); ++i)
        if (CounterRng::uniform(stream, i) < settings.abundance)
          az.push_back(site_az[i]);
      if (classify_sample(az, settings.dA_min, settings.A_max)) ++local;
    }
    hits += local;
    done += 1;
  };
  const int nthreads = std::max(1, settings.threads);
  std::vector<std::thread> pool;
  for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker, k, nthreads);
  worker(0, nthreads);
  for (auto& th : pool) th.join();

  CensusResult res;
  res.hits = hits.load();
  res.trials = settings.trials;
  res.fraction = static_cast<double>(res.hits) / res.trials;
  res.ci95 =
      1.96 * std::sqrt(std::max(res.fraction * (1.0 - res.fraction), 0.0) /
                       res.trials);
  return res;
}

}  // namespace nv
