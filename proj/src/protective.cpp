#include "spinmeas/protective.hpp"

#include <cmath>
#include <stdexcept>

#include "spinmeas/rng.hpp"

namespace spinmeas {

double theta_from_apparatus(const Vec3& v) {
  // pointer starts at (0,0,-1); rotation about x moves it in the y-z plane
  double theta = std::atan2(v.y(), -v.z());
  if (theta < 0) theta += 2 * pi;
  if (theta > pi) theta = 2 * pi - theta;  // fold reflections back into [0, pi]
  return theta;
}

namespace {

VecC flipped_state(Cx alpha, Cx beta) {
  VecC chi(2);
  chi << std::conj(beta), -std::conj(alpha);
  return chi;
}

}  // namespace

ProtectiveResult run_protective(const SystemConfig& cfg, long steps) {
  EvolutionPlan plan = make_plan(cfg, steps);
  const VecC psi0 = tensor(ket_down(), system_state(cfg.alpha, cfg.beta));
  const VecC psi = propagate(plan, psi0);

  const MatC rho_a = partial_trace(psi, 0, 2, 2);
  const MatC rho_s = partial_trace(psi, 1, 2, 2);

  ProtectiveResult r;
  r.total_time = cfg.profile.total_time;
  r.apparatus_bloch = bloch_from_density(rho_a);
  r.theta = theta_from_apparatus(r.apparatus_bloch);
  r.expectation_estimate = r.theta / pi;
  r.system_fidelity = fidelity(rho_s, system_state(cfg.alpha, cfg.beta));
  r.flip_probability = fidelity(rho_s, flipped_state(cfg.alpha, cfg.beta));
  r.final_joint = psi;
  return r;
}

DensityRunResult run_protective_density(const SystemConfig& cfg, const MatC& system_in,
                                        long steps) {
  if (system_in.rows() != 2 || system_in.cols() != 2)
    throw std::invalid_argument("system density matrix must be 2x2");
  require_hermitian(system_in, 1e-10);
  if (std::abs(system_in.trace().real() - 1.0) > 1e-9)
    throw std::invalid_argument("system density matrix must have unit trace");

  EvolutionPlan plan = make_plan(cfg, steps);
  const MatC u = propagator(plan);

  MatC pointer_down = MatC::Zero(2, 2);
  pointer_down(1, 1) = 1;
  const MatC joint0 = tensor(pointer_down, system_in);
  const MatC joint = u * joint0 * u.adjoint();

  DensityRunResult r;
  r.apparatus_bloch = bloch_from_density(partial_trace(joint, 0, 2, 2));
  r.theta = theta_from_apparatus(r.apparatus_bloch);
  r.expectation_estimate = r.theta / pi;
  r.system_out = partial_trace(joint, 1, 2, 2);
  return r;
}

double flip_probability_leading(const SystemConfig& cfg) {
  validate(cfg);
  const double t = cfg.profile.total_time;
  const double p = axis_occupation(cfg);
  const double eta_sq = p * (1 - p) / (4 * cfg.b0 * cfg.b0 * t * t);
  const double phase = cfg.b0 * t + pi * (2 * p - 1) / 2;
  const double s = std::sin(phase);
  return 2 * pi * pi * eta_sq * s * s;
}

PerturbationReport perturbation_report(const SystemConfig& cfg, int a_i) {
  validate(cfg);
  if (a_i != 0 && a_i != 1)
    throw std::invalid_argument("interaction switch a_i must be 0 or 1");

  const double t = cfg.profile.total_time;
  const double a = static_cast<double>(a_i);
  const double p = axis_occupation(cfg);

  // conditional apparatus-sector hamiltonian: free part plus the switched coupling
  const MatC q = -pi * projector(cfg.meas_axis, Sign::plus);
  const MatC h = cfg.ea * MatC::Identity(2, 2) + system_hamiltonian(cfg) + (a / t) * q;
  const Eigensystem es = spectral(h);

  PerturbationReport r;
  r.a_i = a_i;
  r.exact = {es.eigenvalues(0), es.eigenvalues(1)};
  r.order1 = {cfg.ea - cfg.b0 - a * pi * p / t,
              cfg.ea + cfg.b0 - a * pi * (1 - p) / t};
  const double shift2 = a * a * pi * pi * p * (1 - p) / (2 * cfg.b0 * t * t);
  r.order2 = {r.order1[0] - shift2, r.order1[1] + shift2};
  r.state_correction_norm = a * pi * std::sqrt(p * (1 - p)) / (2 * cfg.b0 * t);
  return r;
}

ReconstructionResult reconstruct_state(Cx alpha, Cx beta, double b0, double ea,
                                       const CouplingProfile& profile, long steps) {
  const VecC nu = system_state(alpha, beta);
  MatC rho = nu * nu.adjoint();

  constexpr Axis run_order[3] = {Axis::z, Axis::x, Axis::y};
  double estimates[3];  // bloch components sampled in run order
  ReconstructionResult r;
  for (int i = 0; i < 3; ++i) {
    const SystemConfig cfg = make_config(alpha, beta, b0, ea, run_order[i], profile);
    const DensityRunResult step = run_protective_density(cfg, rho, steps);
    r.thetas[i] = step.theta;
    estimates[i] = 2 * step.expectation_estimate - 1;
    rho = step.system_out;
  }

  r.bloch_estimate = Vec3(estimates[1], estimates[2], estimates[0]);
  r.bloch_true = protection_field(alpha, beta);
  r.bloch_distance = (r.bloch_estimate - r.bloch_true).norm();
  r.final_fidelity = fidelity(rho, nu);
  return r;
}

SampledReadout sample_readout(const ProtectiveResult& r, long shots, std::uint64_t seed) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");

  // two independent pointer-component measurements, one stream each
  SplitMix64 gen_y(SplitMix64::split(seed, 0));
  SplitMix64 gen_z(SplitMix64::split(seed, 1));
  const double p_y = (1 + r.apparatus_bloch.y()) / 2;
  const double p_z = (1 + r.apparatus_bloch.z()) / 2;
  long hits_y = 0;
  long hits_z = 0;
  for (long i = 0; i < shots; ++i) {
    if (gen_y.uniform() < p_y) ++hits_y;
    if (gen_z.uniform() < p_z) ++hits_z;
  }
  const double vy = 2.0 * static_cast<double>(hits_y) / static_cast<double>(shots) - 1;
  const double vz = 2.0 * static_cast<double>(hits_z) / static_cast<double>(shots) - 1;

  SampledReadout out;
  out.theta = theta_from_apparatus(Vec3(0, vy, vz));
  out.expectation_estimate = out.theta / pi;
  out.shots = shots;
  out.seed = seed;
  return out;
}

}  // namespace spinmeas
