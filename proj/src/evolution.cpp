#include "spinmeas/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace spinmeas {

namespace {

// step hamiltonian: simpson average over the step, then a single exponential.
// second order overall; exact when h is constant over the step.
MatC step_average(const std::function<MatC(double)>& h, double t0, double dt) {
  return (h(t0) + 4.0 * h(t0 + dt / 2) + h(t0 + dt)) / 6.0;
}

}  // namespace

long default_steps(const SystemConfig& cfg) {
  return std::max(1000L, static_cast<long>(std::ceil(20.0 * cfg.b0 * cfg.profile.total_time)));
}

EvolutionPlan make_plan(const SystemConfig& cfg, long steps) {
  validate(cfg);
  EvolutionPlan plan;
  plan.cfg = cfg;
  if (steps < 0)
    plan.steps = (cfg.profile.kind == ProfileKind::constant) ? 0 : default_steps(cfg);
  else
    plan.steps = steps;
  plan.hamiltonian_at = [cfg](double t) { return joint_hamiltonian(cfg, coupling_value(cfg.profile, t)); };
  return plan;
}

VecC propagate(const EvolutionPlan& plan, const VecC& psi0) {
  require_normalized(psi0);
  if (!plan.hamiltonian_at) throw std::invalid_argument("plan has no hamiltonian");
  const double T = plan.cfg.profile.total_time;
  if (!(T > 0)) throw std::invalid_argument("total_time must be positive");
  if (plan.steps == 0) {
    if (plan.cfg.profile.kind != ProfileKind::constant)
      throw std::invalid_argument("exact path needs a constant profile");
    return evolve(plan.hamiltonian_at(T / 2), T, psi0);
  }
  if (plan.steps < 0) throw std::invalid_argument("steps must be non-negative");
  const double dt = T / static_cast<double>(plan.steps);
  VecC psi = psi0;
  for (long k = 0; k < plan.steps; ++k)
    psi = evolve(step_average(plan.hamiltonian_at, k * dt, dt), dt, psi);
  return psi;
}

MatC propagator(const EvolutionPlan& plan) {
  if (!plan.hamiltonian_at) throw std::invalid_argument("plan has no hamiltonian");
  const double T = plan.cfg.profile.total_time;
  if (plan.steps == 0) {
    if (plan.cfg.profile.kind != ProfileKind::constant)
      throw std::invalid_argument("exact path needs a constant profile");
    return evolve_operator(plan.hamiltonian_at(T / 2), T);
  }
  const double dt = T / static_cast<double>(plan.steps);
  const Eigen::Index dim = plan.hamiltonian_at(0.0).rows();
  MatC u = MatC::Identity(dim, dim);
  for (long k = 0; k < plan.steps; ++k)
    u = evolve_operator(step_average(plan.hamiltonian_at, k * dt, dt), dt) * u;
  return u;
}

ConvergenceReport step_convergence(const EvolutionPlan& plan, const VecC& psi0,
                                   const std::vector<long>& levels) {
  if (levels.size() < 3) throw std::invalid_argument("need at least three refinement levels");
  for (size_t i = 0; i + 1 < levels.size(); ++i)
    if (levels[i] <= 0 || levels[i] >= levels[i + 1])
      throw std::invalid_argument("levels must be positive and ascending");

  ConvergenceReport rep;
  rep.levels = levels;
  std::vector<VecC> finals;
  for (long n : levels) {
    EvolutionPlan p = plan;
    p.steps = n;
    finals.push_back(propagate(p, psi0));
  }
  for (size_t i = 0; i + 1 < finals.size(); ++i)
    rep.deficits.push_back((finals[i] - finals[i + 1]).norm());

  rep.at_floor = true;
  for (double d : rep.deficits) rep.at_floor = rep.at_floor && d < 1e-12;

  for (size_t i = 0; i + 1 < rep.deficits.size(); ++i)
    rep.ratios.push_back(rep.deficits[i] / std::max(rep.deficits[i + 1], 1e-300));

  rep.second_order = rep.at_floor;
  if (!rep.at_floor) {
    rep.second_order = !rep.ratios.empty();
    for (double r : rep.ratios) rep.second_order = rep.second_order && r > 3.2 && r < 4.8;
  }
  return rep;
}

}  // namespace spinmeas
