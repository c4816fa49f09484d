#pragma once

#include <vector>

#include "spinmeas/linalg.hpp"
#include "spinmeas/spin_model.hpp"

namespace spinmeas {

struct EnsembleResult {
  long n = 0;
  Vec3 mean_spin{0, 0, 0};       // collective pointer spin, lab components
  Vec3 variance_spin{0, 0, 0};   // per lab component
  double relative_fluctuation = 0;  // sqrt(var S_z) / n
  double mean_pair_covariance = 0;  // z components, averaged over pointer pairs
};

// closed forms for n independent pointers, each rotated by the protective angle
EnsembleResult ensemble_evolve_factorized(const SystemConfig& cfg, long n);

// exact joint evolution of n pointers sharing one protected system spin
EnsembleResult ensemble_evolve_brute(const SystemConfig& cfg, long n);

struct ScalingReport {
  std::vector<long> ns;
  std::vector<double> relative_fluctuations;
  bool concentrated = false;  // pointer distribution has no transverse spread
  LinearFit fit;              // log-log, meaningful only when not concentrated
};

ScalingReport fluctuation_scaling(const SystemConfig& cfg, const std::vector<long>& ns);

}  // namespace spinmeas
