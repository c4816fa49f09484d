#include "spinmeas/spin_model.hpp"

#include <cmath>
#include <stdexcept>

#include "spinmeas/rng.hpp"

namespace spinmeas {

namespace {

const Cx I{0, 1};

MatC two_by_two(Cx a, Cx b, Cx c, Cx d) {
  MatC m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

MatC pauli(Axis a) {
  switch (a) {
    case Axis::x: return two_by_two(0, 1, 1, 0);
    case Axis::y: return two_by_two(0, -I, I, 0);
    default: return two_by_two(1, 0, 0, -1);
  }
}

MatC pauli(const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-10) throw std::invalid_argument("direction is not unit length");
  return n.x() * pauli(Axis::x) + n.y() * pauli(Axis::y) + n.z() * pauli(Axis::z);
}

MatC projector(Axis a, Sign s) {
  const double sgn = (s == Sign::plus) ? 1.0 : -1.0;
  return (MatC::Identity(2, 2) + sgn * pauli(a)) / 2.0;
}

VecC ket_up() {
  VecC v(2);
  v << 1, 0;
  return v;
}

VecC ket_down() {
  VecC v(2);
  v << 0, 1;
  return v;
}

VecC system_state(Cx alpha, Cx beta) {
  VecC v(2);
  v << alpha, beta;
  require_normalized(v, 1e-12);
  return v;
}

Vec3 protection_field(Cx alpha, Cx beta) {
  const Cx cross = std::conj(alpha) * beta;
  return Vec3(2.0 * cross.real(), 2.0 * cross.imag(), std::norm(alpha) - std::norm(beta));
}

void validate(const CouplingProfile& p) {
  if (!(p.total_time > 0)) throw std::invalid_argument("total_time must be positive");
  if (p.kind == ProfileKind::cosine_ramp &&
      !(p.ramp_fraction > 0 && p.ramp_fraction < 0.5))
    throw std::invalid_argument("ramp_fraction must lie in (0, 0.5)");
}

double coupling_value(const CouplingProfile& p, double t) {
  validate(p);
  const double T = p.total_time;
  if (t < -1e-9 * T || t > T * (1 + 1e-9)) throw std::invalid_argument("time outside [0, total_time]");
  t = std::min(std::max(t, 0.0), T);
  if (p.kind == ProfileKind::constant) return 1.0 / T;
  const double tr = p.ramp_fraction * T;
  const double c = 1.0 / (T - tr);  // normalizes the integral to 1
  if (t < tr) return c * 0.5 * (1.0 - std::cos(pi * t / tr));
  if (t > T - tr) return c * 0.5 * (1.0 - std::cos(pi * (T - t) / tr));
  return c;
}

SystemConfig make_config(Cx alpha, Cx beta, double b0, double ea, Axis meas_axis,
                         CouplingProfile profile) {
  SystemConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.b0 = b0;
  cfg.ea = ea;
  cfg.n_hat = protection_field(alpha, beta);
  cfg.protection = true;
  cfg.meas_axis = meas_axis;
  cfg.profile = profile;
  validate(cfg);
  return cfg;
}

SystemConfig make_misaligned_config(Cx alpha, Cx beta, const Vec3& n_hat, double b0, double ea,
                                    Axis meas_axis, CouplingProfile profile) {
  SystemConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.b0 = b0;
  cfg.ea = ea;
  cfg.n_hat = n_hat;
  cfg.protection = false;
  cfg.meas_axis = meas_axis;
  cfg.profile = profile;
  validate(cfg);
  return cfg;
}

void validate(const SystemConfig& cfg) {
  if (std::abs(std::norm(cfg.alpha) + std::norm(cfg.beta) - 1.0) > 1e-12)
    throw std::invalid_argument("state coefficients are not normalized");
  if (!(cfg.b0 > 0)) throw std::invalid_argument("field strength must be positive");
  if (std::abs(cfg.n_hat.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("field direction is not unit length");
  if (cfg.protection &&
      (cfg.n_hat - protection_field(cfg.alpha, cfg.beta)).norm() > 1e-10)
    throw std::invalid_argument("field direction does not protect the prepared state");
  validate(cfg.profile);
}

MatC system_hamiltonian(const SystemConfig& cfg) {
  validate(cfg);
  return -cfg.b0 * pauli(cfg.n_hat);
}

MatC interaction_hamiltonian(const SystemConfig& cfg, double g) {
  return g * tensor(projector(Axis::x, Sign::minus),
                    MatC(-pi * projector(cfg.meas_axis, Sign::plus)));
}

MatC joint_hamiltonian(const SystemConfig& cfg, double g) {
  const MatC id = MatC::Identity(2, 2);
  return tensor(MatC(cfg.ea * id), id) + tensor(id, system_hamiltonian(cfg)) +
         interaction_hamiltonian(cfg, g);
}

double axis_occupation(const SystemConfig& cfg) {
  const VecC nu = system_state(cfg.alpha, cfg.beta);
  return expectation(projector(cfg.meas_axis, Sign::plus), nu);
}

UnitaryFamilyParams canonical_unitary_params() { return {}; }

UnitaryFamilyParams sample_unitary_params(std::uint64_t seed) {
  SplitMix64 gen(seed);
  UnitaryFamilyParams p;
  p.theta = 2 * pi * gen.uniform();
  p.phi = 2 * pi * gen.uniform();
  p.theta1 = 2 * pi * gen.uniform();
  p.theta3 = 2 * pi * gen.uniform();
  p.phi1 = 2 * pi * gen.uniform();
  const double mix = 2 * pi * gen.uniform();
  p.b1 = std::cos(mix);
  p.b3 = std::sin(mix);
  p.sign = (gen.next() & 1) ? +1 : -1;
  // middle-block orthogonality pins the last phase
  p.phi3 = std::fmod(p.phi1 + p.theta3 - p.theta1 + 5 * pi, 2 * pi);
  return p;
}

MatC measurement_unitary(const UnitaryFamilyParams& p) {
  if (std::abs(p.b1 * p.b1 + p.b3 * p.b3 - 1.0) > 1e-12)
    throw std::invalid_argument("b1^2 + b3^2 must equal 1");
  if (p.sign != 1 && p.sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const double s = p.sign;
  MatC u = MatC::Zero(4, 4);
  // basis order: pointer slow, so {up_p up, up_p down, down_p up, down_p down}
  u(0, 2) = std::exp(I * p.theta);
  u(1, 0) = s * p.b3 * std::exp(I * p.phi1);
  u(1, 1) = s * p.b1 * std::exp(I * p.phi3);
  u(2, 0) = p.b1 * std::exp(I * p.theta1);
  u(2, 1) = p.b3 * std::exp(I * p.theta3);
  u(3, 3) = std::exp(I * p.phi);
  if (!unitary_within(u, 1e-12))
    throw std::invalid_argument(
        "phases violate unitarity: need theta1 - phi1 - theta3 + phi3 = pi (mod 2 pi)");
  return u;
}

MatC hamiltonian_from_unitary(const MatC& u, double g_integral) {
  require_unitary(u, 1e-10);
  Eigen::ComplexSchur<MatC> schur(u);
  if (schur.info() != Eigen::Success) throw std::runtime_error("schur decomposition failed");
  const MatC& t = schur.matrixT();
  const MatC& q = schur.matrixU();
  // u is normal, so t is diagonal up to roundoff
  Eigen::VectorXd gen(u.rows());
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const double phase = std::arg(t(k, k));
    if (std::abs(phase + pi) < 1e-12)
      throw std::domain_error("eigenphase at the principal branch cut");
    gen(k) = -phase;
  }
  MatC h = q * gen.asDiagonal() * q.adjoint() * g_integral;
  return (h + MatC(h.adjoint())) / 2.0;
}

}  // namespace spinmeas
