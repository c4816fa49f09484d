#pragma once

#include <array>
#include <cstdint>

#include "spinmeas/evolution.hpp"

namespace spinmeas {

// rotation angle about x that carries (0,0,-1) to the pointer bloch vector, in [0, pi]
double theta_from_apparatus(const Vec3& apparatus_bloch);

struct ProtectiveResult {
  double total_time = 0;
  double theta = 0;
  double expectation_estimate = 0;  // theta / pi
  double system_fidelity = 0;
  double flip_probability = 0;
  Vec3 apparatus_bloch{0, 0, -1};
  VecC final_joint;
};

ProtectiveResult run_protective(const SystemConfig& cfg, long steps = -1);

// mixed-state variant used by the sequential axis pipeline
struct DensityRunResult {
  double theta = 0;
  double expectation_estimate = 0;
  Vec3 apparatus_bloch{0, 0, -1};
  MatC system_out;
};

DensityRunResult run_protective_density(const SystemConfig& cfg, const MatC& system_in,
                                        long steps = -1);

// leading large-T flip probability for the prepared state
double flip_probability_leading(const SystemConfig& cfg);

struct PerturbationReport {
  int a_i = 0;
  std::array<double, 2> exact{};   // conditional 2x2 eigenvalues, ascending
  std::array<double, 2> order1{};
  std::array<double, 2> order2{};
  double state_correction_norm = 0;
};

PerturbationReport perturbation_report(const SystemConfig& cfg, int a_i);

struct ReconstructionResult {
  Vec3 bloch_estimate{0, 0, 0};
  Vec3 bloch_true{0, 0, 0};
  double bloch_distance = 0;
  double final_fidelity = 0;          // of the surviving state with the input
  std::array<double, 3> thetas{};     // run order: z, x, y
};

// three runs on the same system copy, axes z then x then y
ReconstructionResult reconstruct_state(Cx alpha, Cx beta, double b0, double ea,
                                       const CouplingProfile& profile, long steps = -1);

struct SampledReadout {
  double theta = 0;
  double expectation_estimate = 0;
  long shots = 0;
  std::uint64_t seed = 0;
};

// finite-shot pointer readout instead of exact expectation values
SampledReadout sample_readout(const ProtectiveResult& r, long shots, std::uint64_t seed);

}  // namespace spinmeas
