#include "spinmeas/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinmeas/ensemble.hpp"
#include "spinmeas/impulsive.hpp"
#include "spinmeas/protective.hpp"
#include "spinmeas/rng.hpp"

namespace spinmeas {

namespace {

using nlohmann::json;

struct SharedOpts {
  double alpha_sq = 0;
  double rel_phase = 0;
  double b0 = 1.0;
  double ea = 0.5;
  double t = 1000.0;
  std::string axis = "z";
  std::string profile = "constant";
  double ramp_frac = 0.1;
  long steps = 0;  // 0 picks the resolution automatically
  std::string out_format = "json";
};

void add_shared(CLI::App* sub, SharedOpts& o) {
  sub->add_option("--alpha-sq", o.alpha_sq, "population of the spin-up component")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--rel-phase", o.rel_phase, "phase of the spin-down amplitude, radians");
  sub->add_option("--b0", o.b0, "protection field strength")->check(CLI::PositiveNumber);
  sub->add_option("--ea", o.ea, "pointer free energy");
  sub->add_option("--T", o.t, "total measurement time")->check(CLI::PositiveNumber);
  sub->add_option("--axis", o.axis, "measured spin axis")->check(CLI::IsMember({"x", "y", "z"}));
  sub->add_option("--profile", o.profile, "coupling profile")
      ->check(CLI::IsMember({"constant", "cosine-ramp"}));
  sub->add_option("--ramp-frac", o.ramp_frac, "ramp fraction of the cosine profile")
      ->check(CLI::Range(0.0, 0.5));
  sub->add_option("--steps", o.steps, "propagation steps, 0 = automatic")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out", o.out_format, "output format")->check(CLI::IsMember({"json", "csv"}));
}

Axis axis_from(const std::string& s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  return Axis::z;
}

SystemConfig config_from(const SharedOpts& o) {
  const Cx alpha(std::sqrt(o.alpha_sq), 0);
  const Cx beta = std::polar(std::sqrt(1 - o.alpha_sq), o.rel_phase);
  CouplingProfile prof;
  prof.kind = (o.profile == "constant") ? ProfileKind::constant : ProfileKind::cosine_ramp;
  prof.total_time = o.t;
  prof.ramp_fraction = o.ramp_frac;
  return make_config(alpha, beta, o.b0, o.ea, axis_from(o.axis), prof);
}

long plan_steps(const SharedOpts& o) { return o.steps == 0 ? -1 : o.steps; }

json config_json(const SharedOpts& o) {
  return json{{"alpha_sq", o.alpha_sq}, {"rel_phase", o.rel_phase}, {"b0", o.b0},
              {"ea", o.ea},             {"T", o.t},                 {"axis", o.axis},
              {"profile", o.profile},   {"ramp_frac", o.ramp_frac}, {"steps", o.steps},
              {"out", o.out_format}};
}

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// one header row and one value row per record
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << num17(row[i]);
    out << "\n";
  }
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

struct SweepOpts {
  double t_min = 100;
  double t_max = 3200;
  long points = 9;
  bool log_spacing = false;
};

struct ImpulsiveOpts {
  long shots = 0;
  std::uint64_t seed = 0;
};

struct EnsembleOpts {
  std::vector<long> ns;
  bool brute = false;
};

struct PerturbOpts {
  int a_i = 1;
};

json run_protect(const SharedOpts& o, std::ostream& out, bool csv) {
  const ProtectiveResult r = run_protective(config_from(o), plan_steps(o));
  if (csv) {
    write_csv(out,
              {"theta", "expectation_estimate", "system_fidelity", "flip_probability",
               "bloch_x", "bloch_y", "bloch_z"},
              {{r.theta, r.expectation_estimate, r.system_fidelity, r.flip_probability,
                r.apparatus_bloch.x(), r.apparatus_bloch.y(), r.apparatus_bloch.z()}});
    return {};
  }
  return json{{"total_time", r.total_time},
              {"theta", r.theta},
              {"expectation_estimate", r.expectation_estimate},
              {"system_fidelity", r.system_fidelity},
              {"flip_probability", r.flip_probability},
              {"apparatus_bloch", vec3_json(r.apparatus_bloch)}};
}

json run_sweep(const SharedOpts& o, const SweepOpts& s, std::ostream& out, bool csv) {
  if (s.points < 2) throw std::invalid_argument("--points must be at least 2");
  if (!(s.t_min > 0) || !(s.t_max > s.t_min))
    throw std::invalid_argument("need 0 < --t-min < --t-max");

  std::vector<double> ts(static_cast<std::size_t>(s.points));
  for (long i = 0; i < s.points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(s.points - 1);
    ts[static_cast<std::size_t>(i)] =
        s.log_spacing ? s.t_min * std::pow(s.t_max / s.t_min, f)
                      : s.t_min + f * (s.t_max - s.t_min);
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(ts.size());
  for (double t : ts) {
    SharedOpts point = o;
    point.t = t;
    const SystemConfig cfg = config_from(point);
    const ProtectiveResult r = run_protective(cfg, plan_steps(point));
    const double theta_true = pi * axis_occupation(cfg);
    rows.push_back({t, std::abs(r.theta - theta_true), std::max(0.0, 1 - r.system_fidelity),
                    r.flip_probability * t * t});
  }

  if (csv) {
    write_csv(out, {"T", "theta_error", "infidelity", "flip_prob_T2"}, rows);
    return {};
  }
  json arr = json::array();
  for (const auto& row : rows)
    arr.push_back(json{{"T", row[0]},
                       {"theta_error", row[1]},
                       {"infidelity", row[2]},
                       {"flip_prob_T2", row[3]}});
  return json{{"rows", std::move(arr)}};
}

json run_reconstruct(const SharedOpts& o, std::ostream& out, bool csv) {
  const Cx alpha(std::sqrt(o.alpha_sq), 0);
  const Cx beta = std::polar(std::sqrt(1 - o.alpha_sq), o.rel_phase);
  CouplingProfile prof;
  prof.kind = (o.profile == "constant") ? ProfileKind::constant : ProfileKind::cosine_ramp;
  prof.total_time = o.t;
  prof.ramp_fraction = o.ramp_frac;
  const ReconstructionResult r = reconstruct_state(alpha, beta, o.b0, o.ea, prof, plan_steps(o));
  if (csv) {
    write_csv(out,
              {"est_x", "est_y", "est_z", "true_x", "true_y", "true_z", "bloch_distance",
               "final_fidelity"},
              {{r.bloch_estimate.x(), r.bloch_estimate.y(), r.bloch_estimate.z(),
                r.bloch_true.x(), r.bloch_true.y(), r.bloch_true.z(), r.bloch_distance,
                r.final_fidelity}});
    return {};
  }
  return json{{"bloch_estimate", vec3_json(r.bloch_estimate)},
              {"bloch_true", vec3_json(r.bloch_true)},
              {"bloch_distance", r.bloch_distance},
              {"final_fidelity", r.final_fidelity},
              {"thetas", json::array({r.thetas[0], r.thetas[1], r.thetas[2]})}};
}

json run_impulsive(const SharedOpts& o, const ImpulsiveOpts& io, std::ostream& out, bool csv) {
  const Cx alpha(std::sqrt(o.alpha_sq), 0);
  const Cx beta = std::polar(std::sqrt(1 - o.alpha_sq), o.rel_phase);
  const MatC u = measurement_unitary(canonical_unitary_params());
  const ImpulsiveResult r = impulsive_measure(system_state(alpha, beta), u);

  if (csv) {
    std::vector<std::string> header{"p_up", "p_down"};
    std::vector<double> row{r.p_up, r.p_down};
    if (io.shots > 0) {
      const BornCounts c = born_sample(r, io.shots, io.seed);
      header.insert(header.end(), {"shots", "seed", "n_up", "n_down"});
      row.insert(row.end(),
                 {static_cast<double>(c.shots), static_cast<double>(c.seed),
                  static_cast<double>(c.n_up), static_cast<double>(c.n_down)});
    }
    write_csv(out, header, {row});
    return {};
  }

  json post = json::array();
  for (long i = 0; i < r.post_state.size(); ++i)
    post.push_back(json::array({r.post_state(i).real(), r.post_state(i).imag()}));
  json output{{"p_up", r.p_up}, {"p_down", r.p_down}, {"post_state", std::move(post)}};
  if (io.shots > 0) {
    const BornCounts c = born_sample(r, io.shots, io.seed);
    output["counts"] = json{{"n_up", c.n_up}, {"n_down", c.n_down}, {"shots", c.shots}};
    output["generator"] = json{{"algorithm", generator_algorithm},
                               {"version", generator_version},
                               {"seed", c.seed}};
  }
  return output;
}

json run_ensemble(const SharedOpts& o, const EnsembleOpts& eo, std::ostream& out, bool csv) {
  if (eo.ns.empty()) throw std::invalid_argument("--n-list must name at least one size");
  const SystemConfig cfg = config_from(o);

  std::vector<EnsembleResult> results;
  results.reserve(eo.ns.size());
  for (long n : eo.ns)
    results.push_back(eo.brute ? ensemble_evolve_brute(cfg, n)
                               : ensemble_evolve_factorized(cfg, n));

  if (csv) {
    std::vector<std::vector<double>> rows;
    for (const EnsembleResult& r : results)
      rows.push_back({static_cast<double>(r.n), r.mean_spin.x(), r.mean_spin.y(),
                      r.mean_spin.z(), r.variance_spin.x(), r.variance_spin.y(),
                      r.variance_spin.z(), r.relative_fluctuation, r.mean_pair_covariance});
    write_csv(out,
              {"n", "mean_x", "mean_y", "mean_z", "var_x", "var_y", "var_z",
               "relative_fluctuation", "mean_pair_covariance"},
              rows);
    return {};
  }

  json arr = json::array();
  for (const EnsembleResult& r : results)
    arr.push_back(json{{"n", r.n},
                       {"mean_spin", vec3_json(r.mean_spin)},
                       {"variance_spin", vec3_json(r.variance_spin)},
                       {"relative_fluctuation", r.relative_fluctuation},
                       {"mean_pair_covariance", r.mean_pair_covariance}});
  json output{{"rows", std::move(arr)}, {"brute", eo.brute}};

  long lo = eo.ns[0];
  long hi = eo.ns[0];
  for (long n : eo.ns) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  if (!eo.brute && eo.ns.size() >= 4 && hi >= 4 * lo) {
    const ScalingReport rep = fluctuation_scaling(cfg, eo.ns);
    if (rep.concentrated)
      output["scaling"] = json{{"concentrated", true}};
    else
      output["scaling"] = json{{"concentrated", false},
                               {"slope", rep.fit.slope},
                               {"intercept", rep.fit.intercept}};
  }
  return output;
}

json run_perturb(const SharedOpts& o, const PerturbOpts& po, std::ostream& out, bool csv) {
  const PerturbationReport r = perturbation_report(config_from(o), po.a_i);
  if (csv) {
    write_csv(out,
              {"a_i", "exact_lo", "exact_hi", "order1_lo", "order1_hi", "order2_lo",
               "order2_hi", "state_correction_norm"},
              {{static_cast<double>(r.a_i), r.exact[0], r.exact[1], r.order1[0], r.order1[1],
                r.order2[0], r.order2[1], r.state_correction_norm}});
    return {};
  }
  return json{{"a_i", r.a_i},
              {"exact", json::array({r.exact[0], r.exact[1]})},
              {"order1", json::array({r.order1[0], r.order1[1]})},
              {"order2", json::array({r.order2[0], r.order2[1]})},
              {"state_correction_norm", r.state_correction_norm}};
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"protective spin measurement simulator"};
  app.require_subcommand(1);

  SharedOpts shared;
  SweepOpts sweep;
  ImpulsiveOpts imp;
  EnsembleOpts ens;
  PerturbOpts pert;

  CLI::App* protect = app.add_subcommand("protect", "single adiabatic measurement run");
  add_shared(protect, shared);

  CLI::App* sweep_t = app.add_subcommand("sweep-t", "error scaling against measurement time");
  add_shared(sweep_t, shared);
  sweep_t->add_option("--t-min", sweep.t_min, "smallest total time")->check(CLI::PositiveNumber);
  sweep_t->add_option("--t-max", sweep.t_max, "largest total time")->check(CLI::PositiveNumber);
  sweep_t->add_option("--points", sweep.points, "number of sweep points");
  sweep_t->add_flag("--log", sweep.log_spacing, "use log-spaced times");

  CLI::App* reconstruct = app.add_subcommand("reconstruct", "sequential three-axis state readout");
  add_shared(reconstruct, shared);

  CLI::App* impulsive = app.add_subcommand("impulsive", "strong-kick measurement for contrast");
  add_shared(impulsive, shared);
  impulsive->add_option("--shots", imp.shots, "pointer readout samples")
      ->check(CLI::NonNegativeNumber);
  impulsive->add_option("--seed", imp.seed, "sampling seed");

  CLI::App* ensemble = app.add_subcommand("ensemble", "collective pointer statistics");
  add_shared(ensemble, shared);
  ensemble->add_option("--n-list", ens.ns, "comma-separated ensemble sizes")
      ->required()
      ->delimiter(',');
  ensemble->add_flag("--brute", ens.brute, "exact joint evolution instead of closed forms");

  CLI::App* perturb = app.add_subcommand("perturb", "conditional level shifts");
  add_shared(perturb, shared);
  perturb->add_option("--a-i", pert.a_i, "interaction switch, 0 or 1")
      ->check(CLI::IsMember({0, 1}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const bool csv = shared.out_format == "csv";
  const auto start = std::chrono::steady_clock::now();
  try {
    json output;
    std::string command;
    if (app.got_subcommand(protect)) {
      command = "protect";
      output = run_protect(shared, out, csv);
    } else if (app.got_subcommand(sweep_t)) {
      command = "sweep-t";
      output = run_sweep(shared, sweep, out, csv);
    } else if (app.got_subcommand(reconstruct)) {
      command = "reconstruct";
      output = run_reconstruct(shared, out, csv);
    } else if (app.got_subcommand(impulsive)) {
      command = "impulsive";
      output = run_impulsive(shared, imp, out, csv);
    } else if (app.got_subcommand(ensemble)) {
      command = "ensemble";
      output = run_ensemble(shared, ens, out, csv);
    } else {
      command = "perturb";
      output = run_perturb(shared, pert, out, csv);
    }
    if (!csv) {
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      json doc{{"schema_version", "1"},
               {"command", command},
               {"config", config_json(shared)},
               {"output", std::move(output)},
               {"timing_seconds", secs}};
      out << doc.dump(2) << "\n";
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace spinmeas
