#pragma once

#include <cstdint>

#include "spinmeas/spin_model.hpp"

namespace spinmeas {

struct ImpulsiveResult {
  VecC post_state;  // joint 4-component state after the kick
  double p_up = 0;
  double p_down = 0;
};

// strong-kick limit: apply the measurement unitary to |pointer down> x |system>
ImpulsiveResult impulsive_measure(const VecC& system, const MatC& u);

struct BornCounts {
  long n_up = 0;
  long n_down = 0;
  long shots = 0;
  std::uint64_t seed = 0;
};

BornCounts born_sample(const ImpulsiveResult& r, long shots, std::uint64_t seed);

}  // namespace spinmeas
