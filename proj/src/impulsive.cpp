#include "spinmeas/impulsive.hpp"

#include <cmath>
#include <stdexcept>

#include "spinmeas/rng.hpp"

namespace spinmeas {

namespace {

// |pointer down, up> must map into the pointer-up sector and
// |pointer down, down> must stay put, up to phases
void require_pointer_contract(const MatC& u) {
  VecC from_up = u.col(2);   // image of |pointer down, up>
  VecC from_down = u.col(3); // image of |pointer down, down>
  const double up_leak = std::sqrt(std::norm(from_up(1)) + std::norm(from_up(2)) +
                                   std::norm(from_up(3)));
  const double down_leak = std::sqrt(std::norm(from_down(0)) + std::norm(from_down(1)) +
                                     std::norm(from_down(2)));
  if (up_leak > 1e-9 || down_leak > 1e-9)
    throw std::invalid_argument(
        "unitary does not implement the pointer kick on the prepared sector");
}

}  // namespace

ImpulsiveResult impulsive_measure(const VecC& system, const MatC& u) {
  if (system.size() != 2) throw std::invalid_argument("system state must have 2 components");
  require_normalized(system);
  if (u.rows() != 4 || u.cols() != 4) throw std::invalid_argument("unitary must be 4x4");
  require_unitary(u, 1e-10);
  require_pointer_contract(u);

  ImpulsiveResult r;
  r.post_state = u * tensor(ket_down(), system);
  r.p_up = std::norm(r.post_state(0)) + std::norm(r.post_state(1));
  r.p_down = std::norm(r.post_state(2)) + std::norm(r.post_state(3));
  return r;
}

BornCounts born_sample(const ImpulsiveResult& r, long shots, std::uint64_t seed) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");
  SplitMix64 gen(seed);
  BornCounts c;
  c.shots = shots;
  c.seed = seed;
  for (long i = 0; i < shots; ++i) {
    if (gen.uniform() < r.p_up)
      ++c.n_up;
    else
      ++c.n_down;
  }
  return c;
}

}  // namespace spinmeas
