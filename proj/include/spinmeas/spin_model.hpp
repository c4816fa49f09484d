#pragma once

#include <cstdint>

#include "spinmeas/linalg.hpp"

namespace spinmeas {

enum class Axis { x, y, z };
enum class Sign { plus, minus };

MatC pauli(Axis a);
MatC pauli(const Vec3& n);  // n . sigma for unit n

// (I +/- sigma_a) / 2
MatC projector(Axis a, Sign s);

VecC ket_up();
VecC ket_down();
VecC system_state(Cx alpha, Cx beta);

// bloch vector of alpha|up> + beta|down>; the field direction that protects it
Vec3 protection_field(Cx alpha, Cx beta);

enum class ProfileKind { constant, cosine_ramp };

struct CouplingProfile {
  ProfileKind kind = ProfileKind::constant;
  double total_time = 1000.0;
  double ramp_fraction = 0.1;  // cosine_ramp only
};

void validate(const CouplingProfile& p);
// g(t); integrates to exactly 1 over [0, total_time]
double coupling_value(const CouplingProfile& p, double t);

struct SystemConfig {
  Cx alpha{1, 0};
  Cx beta{0, 0};
  double b0 = 1.0;
  double ea = 0.5;
  Vec3 n_hat{0, 0, 1};
  bool protection = true;  // n_hat is the bloch vector of (alpha, beta)
  Axis meas_axis = Axis::z;
  CouplingProfile profile;
};

SystemConfig make_config(Cx alpha, Cx beta, double b0, double ea, Axis meas_axis = Axis::z,
                         CouplingProfile profile = {});
SystemConfig make_misaligned_config(Cx alpha, Cx beta, const Vec3& n_hat, double b0, double ea,
                                    Axis meas_axis = Axis::z, CouplingProfile profile = {});
void validate(const SystemConfig& cfg);

// -B0 n.sigma; the prepared state sits in the ground level when protected
MatC system_hamiltonian(const SystemConfig& cfg);

// g * (P_{x,-} on the pointer) (x) (-pi P_{axis,+} on the system)
MatC interaction_hamiltonian(const SystemConfig& cfg, double g);

// Ea on the pointer + system field + interaction; pointer is the slow factor
MatC joint_hamiltonian(const SystemConfig& cfg, double g);

// occupation of the positive measured-axis projector in the prepared state
double axis_occupation(const SystemConfig& cfg);

struct UnitaryFamilyParams {
  double theta = 0;
  double phi = 0;
  double theta1 = 0;
  double theta3 = 0;
  double phi1 = 0;
  double phi3 = 0;
  double b1 = 1;
  double b3 = 0;
  int sign = +1;
};

UnitaryFamilyParams canonical_unitary_params();
// random family member; phi3 is derived so the matrix stays unitary
UnitaryFamilyParams sample_unitary_params(std::uint64_t seed);

// 4x4 pointer-flip unitary: maps |down_p, up> to a phase times |up_p, up>
// and |down_p, down> to a phase times itself
MatC measurement_unitary(const UnitaryFamilyParams& p);

// hermitian generator h with e^{-i h} = u, principal branch; scaled by g_integral
MatC hamiltonian_from_unitary(const MatC& u, double g_integral = 1.0);

}  // namespace spinmeas
