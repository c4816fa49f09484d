#include "spinmeas/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace spinmeas {

namespace {

constexpr long kBruteLimit = 10;

// apply a single-qubit operator to qubit k of an m-qubit state, qubit 0 slowest
VecC apply_local(const VecC& psi, const MatC& op, int k, int m) {
  const long dim = psi.size();
  const long mask = 1L << (m - 1 - k);
  VecC out(dim);
  for (long b = 0; b < dim; ++b) {
    const long b0 = b & ~mask;
    const long b1 = b | mask;
    out(b) = (b & mask) ? op(1, 0) * psi(b0) + op(1, 1) * psi(b1)
                        : op(0, 0) * psi(b0) + op(0, 1) * psi(b1);
  }
  return out;
}

// I x .. x op_first x .. x op_second x .. x I on an m-qubit register;
// pass k2 < 0 to place only the first operator
MatC lift_pair(const MatC& first, int k1, const MatC& second, int k2, int m) {
  MatC out = MatC::Identity(1, 1);
  for (int k = 0; k < m; ++k) {
    if (k == k1)
      out = tensor(out, first);
    else if (k == k2)
      out = tensor(out, second);
    else
      out = tensor(out, MatC(MatC::Identity(2, 2)));
  }
  return out;
}

}  // namespace

EnsembleResult ensemble_evolve_factorized(const SystemConfig& cfg, long n) {
  validate(cfg);
  if (n < 1) throw std::invalid_argument("ensemble size must be at least 1");

  const double theta = pi * axis_occupation(cfg);
  const Vec3 v(0, std::sin(theta), -std::cos(theta));

  EnsembleResult r;
  r.n = n;
  r.mean_spin = 0.5 * static_cast<double>(n) * v;
  r.variance_spin = 0.25 * static_cast<double>(n) *
                    Vec3(1 - v.x() * v.x(), 1 - v.y() * v.y(), 1 - v.z() * v.z());
  r.relative_fluctuation = std::sqrt(r.variance_spin.z()) / static_cast<double>(n);
  r.mean_pair_covariance = 0;
  return r;
}

EnsembleResult ensemble_evolve_brute(const SystemConfig& cfg, long n) {
  validate(cfg);
  if (n < 1) throw std::invalid_argument("ensemble size must be at least 1");
  if (n > kBruteLimit) throw std::invalid_argument("brute-force ensemble limited to 10 pointers");
  if (cfg.profile.kind != ProfileKind::constant)
    throw std::invalid_argument("brute-force ensemble requires the constant coupling profile");

  const int m = static_cast<int>(n) + 1;  // pointers 0..n-1, system last
  const long dim = 1L << m;
  const double t = cfg.profile.total_time;

  const MatC pxm = projector(Axis::x, Sign::minus);
  const MatC pplus = projector(cfg.meas_axis, Sign::plus);
  const MatC hs = system_hamiltonian(cfg);

  MatC h = MatC::Zero(dim, dim);
  h += static_cast<double>(n) * cfg.ea * MatC::Identity(dim, dim);
  h += lift_pair(hs, m - 1, hs, /*k2=*/-1, m);
  for (int l = 0; l < n; ++l) h += (-pi / t) * lift_pair(pxm, l, pplus, m - 1, m);

  VecC psi = VecC::Zero(dim);
  {
    VecC piece = ket_down();
    for (int l = 1; l < n; ++l) piece = tensor(piece, ket_down());
    psi = tensor(piece, system_state(cfg.alpha, cfg.beta));
  }
  psi = evolve(h, t, psi);

  // collective pointer statistics from local operator action
  const MatC half_sigma[3] = {0.5 * pauli(Axis::x), 0.5 * pauli(Axis::y), 0.5 * pauli(Axis::z)};
  EnsembleResult r;
  r.n = n;
  std::vector<double> mz(n);  // per-pointer z means, for the pair covariance
  for (int c = 0; c < 3; ++c) {
    VecC collective = VecC::Zero(dim);
    for (int l = 0; l < n; ++l) {
      const VecC local = apply_local(psi, half_sigma[c], l, m);
      if (c == 2) mz[l] = psi.dot(local).real();
      collective += local;
    }
    const double mean = psi.dot(collective).real();
    const double second = collective.squaredNorm();
    r.mean_spin(c) = mean;
    r.variance_spin(c) = second - mean * mean;
  }
  r.relative_fluctuation = std::sqrt(r.variance_spin.z()) / static_cast<double>(n);

  if (n > 1) {
    double var_sum = 0;
    for (int l = 0; l < n; ++l) var_sum += 0.25 - mz[l] * mz[l];
    r.mean_pair_covariance =
        (r.variance_spin.z() - var_sum) / (static_cast<double>(n) * static_cast<double>(n - 1));
  }
  return r;
}

ScalingReport fluctuation_scaling(const SystemConfig& cfg, const std::vector<long>& ns) {
  if (ns.size() < 4) throw std::invalid_argument("need at least 4 ensemble sizes");
  long lo = ns[0];
  long hi = ns[0];
  for (long n : ns) {
    if (n < 1) throw std::invalid_argument("ensemble sizes must be positive");
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  if (hi < 4 * lo) throw std::invalid_argument("ensemble sizes must span at least two octaves");

  ScalingReport rep;
  rep.ns = ns;
  rep.relative_fluctuations.reserve(ns.size());
  for (long n : ns)
    rep.relative_fluctuations.push_back(ensemble_evolve_factorized(cfg, n).relative_fluctuation);

  rep.concentrated = true;
  for (double f : rep.relative_fluctuations)
    if (f > 1e-12) rep.concentrated = false;
  if (rep.concentrated) return rep;

  std::vector<double> lx(ns.size());
  std::vector<double> ly(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    lx[i] = std::log(static_cast<double>(ns[i]));
    ly[i] = std::log(rep.relative_fluctuations[i]);
  }
  rep.fit = fit_line(lx, ly);
  return rep;
}

}  // namespace spinmeas
