#pragma once

#include <functional>
#include <vector>

#include "spinmeas/spin_model.hpp"

namespace spinmeas {

struct EvolutionPlan {
  SystemConfig cfg;
  long steps = 0;  // 0 = single exact exponential (constant profile only)
  std::function<MatC(double)> hamiltonian_at;  // joint hamiltonian at time t
};

// enough steps to resolve the fastest free phase
long default_steps(const SystemConfig& cfg);

// steps < 0 picks the default for the profile kind
EvolutionPlan make_plan(const SystemConfig& cfg, long steps = -1);

VecC propagate(const EvolutionPlan& plan, const VecC& psi0);
MatC propagator(const EvolutionPlan& plan);

struct ConvergenceReport {
  std::vector<long> levels;
  std::vector<double> deficits;  // ||psi_k - psi_{k+1}|| between successive levels
  std::vector<double> ratios;
  bool at_floor = false;     // all deficits below roundoff
  bool second_order = false; // ratios within [3.2, 4.8], or at_floor
};

ConvergenceReport step_convergence(const EvolutionPlan& plan, const VecC& psi0,
                                   const std::vector<long>& levels);

}  // namespace spinmeas
