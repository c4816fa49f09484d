#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "spinmeas/evolution.hpp"
#include "spinmeas/protective.hpp"

using namespace spinmeas;

namespace {

SystemConfig ramp_config(double alpha_sq, double t) {
  CouplingProfile prof;
  prof.kind = ProfileKind::cosine_ramp;
  prof.total_time = t;
  prof.ramp_fraction = 0.1;
  return make_config(std::sqrt(alpha_sq), std::sqrt(1 - alpha_sq), 1.0, 0.5, Axis::z, prof);
}

SystemConfig flat_config(double alpha_sq, double t) {
  CouplingProfile prof;
  prof.total_time = t;
  return make_config(std::sqrt(alpha_sq), std::sqrt(1 - alpha_sq), 1.0, 0.5, Axis::z, prof);
}

VecC initial_state(const SystemConfig& cfg) {
  return tensor(ket_down(), system_state(cfg.alpha, cfg.beta));
}

}  // namespace

TEST_CASE("stepped propagation is exact for a constant generator") {
  const SystemConfig cfg = flat_config(0.3, 50.0);
  const VecC psi0 = initial_state(cfg);
  const VecC exact = propagate(make_plan(cfg, 0), psi0);
  const VecC stepped = propagate(make_plan(cfg, 1000), psi0);
  CHECK((exact - stepped).norm() < 1e-10);
  CHECK(std::abs(stepped.norm() - 1.0) < 1e-12);
}

TEST_CASE("free evolution leaves the prepared product state invariant") {
  const SystemConfig cfg = flat_config(0.3, 40.0);
  EvolutionPlan plan = make_plan(cfg, 500);
  plan.hamiltonian_at = [cfg](double) { return joint_hamiltonian(cfg, 0.0); };
  const VecC psi0 = initial_state(cfg);
  const VecC psi = propagate(plan, psi0);
  // the prepared state is stationary for the uncoupled generator, so only a phase moves
  CHECK(std::abs(std::abs(psi0.dot(psi)) - 1.0) < 1e-12);
}

TEST_CASE("ramped coupling still turns the pointer by the occupation angle") {
  const SystemConfig cfg = ramp_config(0.3, 200.0);
  const ProtectiveResult r = run_protective(cfg);
  // the residual angle shift scales as 1/T, so a short run gets a looser bound
  CHECK(std::abs(r.theta - pi * 0.3) < 1e-2);
  CHECK(r.system_fidelity > 1 - 1e-3);
}

TEST_CASE("refining the step count converges at second order") {
  const SystemConfig cfg = ramp_config(0.3, 200.0);
  const ConvergenceReport rep = step_convergence(make_plan(cfg), initial_state(cfg),
                                                 {250, 500, 1000, 2000});
  REQUIRE(rep.ratios.size() == 2);
  for (double r : rep.ratios) {
    CHECK(r > 3.2);
    CHECK(r < 4.8);
  }
  CHECK(rep.second_order);
  CHECK_FALSE(rep.at_floor);
}

TEST_CASE("constant generator hits the roundoff floor at every refinement") {
  const SystemConfig cfg = flat_config(0.3, 50.0);
  const ConvergenceReport rep = step_convergence(make_plan(cfg), initial_state(cfg),
                                                 {100, 200, 400});
  CHECK(rep.at_floor);
  CHECK(rep.second_order);
}

TEST_CASE("propagation respects the arrow of a lopsided schedule") {
  const SystemConfig cfg = flat_config(0.3, 20.0);
  const double t_total = cfg.profile.total_time;
  EvolutionPlan rising = make_plan(cfg, 2000);
  rising.hamiltonian_at = [cfg, t_total](double t) {
    return joint_hamiltonian(cfg, 2 * t / (t_total * t_total));
  };
  EvolutionPlan falling = rising;
  falling.hamiltonian_at = [cfg, t_total](double t) {
    return joint_hamiltonian(cfg, 2 * (t_total - t) / (t_total * t_total));
  };
  const VecC psi0 = initial_state(cfg);
  const VecC a = propagate(rising, psi0);
  const VecC b = propagate(falling, psi0);
  CHECK((a - b).norm() > 1e-6);  // a mere average of the schedule could not tell them apart
}

TEST_CASE("plans pick sensible defaults") {
  CHECK(make_plan(flat_config(0.3, 1000.0)).steps == 0);
  CHECK(make_plan(ramp_config(0.3, 1000.0)).steps == 20000);
  CHECK(default_steps(flat_config(0.3, 10.0)) == 1000);  // floor dominates short runs

  const SystemConfig cfg = ramp_config(0.3, 100.0);
  CHECK_THROWS_AS(propagate(make_plan(cfg, 0), initial_state(cfg)), std::invalid_argument);
  CHECK_THROWS_AS(step_convergence(make_plan(cfg), initial_state(cfg), {100, 200}),
                  std::invalid_argument);
  CHECK_THROWS_AS(step_convergence(make_plan(cfg), initial_state(cfg), {400, 200, 100}),
                  std::invalid_argument);
}
