#include "rotrate/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "rotrate/csv.hpp"
#include "rotrate/errors.hpp"
#include "rotrate/extended.hpp"
#include "rotrate/pipeline.hpp"
#include "rotrate/rk8.hpp"
#include "rotrate/torus.hpp"

namespace rotrate {

double golden_rotation() { return (std::sqrt(5.0) - 1.0) / 2.0; }
double torus_second_frequency() { return std::sqrt(3.0) / 2.0; }

#ifndef ROTRATE_HAS_QUADMATH
bool extended_precision_available() { return false; }
ExtendedRateReport extended_golden_curve_rate(const FourierCurve&, PlanarPoint, const LiftedSeries&,
                                              WeightParams) {
  throw UsageError("extended precision requested but the library was built without libquadmath");
}
#endif

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Artifacts {
  fs::path dir;
  std::vector<fs::path>* list;
  fs::path operator()(const std::string& name) const {
    fs::create_directories(dir);
    list->push_back(dir / name);
    return dir / name;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  out << text << '\n';
  if (!out) throw ParseError("failed writing " + path.string());
}

std::vector<std::size_t> plot_checkpoints(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t decade = 10; decade < n; decade *= 10) {
    for (const std::size_t m : {1, 2, 5}) {
      if (m * decade < n) out.push_back(m * decade);
    }
  }
  out.push_back(n);
  return out;
}

void write_lift(const fs::path& path, const LiftedSeries& lift) {
  CsvWriter w(path, {"n", "delta", "m", "delta_hat"});
  for (std::size_t n = 0; n < lift.size(); ++n) {
    if (lift.assigned(n)) {
      w.row({static_cast<double>(n), lift.deltas[n], static_cast<double>(*lift.offsets[n]),
             lift.delta_hat(n)});
    } else {
      // Unassigned rows keep their index; m and delta_hat are NaN.
      w.row({static_cast<double>(n), lift.deltas[n], std::nan(""), std::nan("")});
    }
  }
  w.close();
}

void write_convergence(const fs::path& path, const LiftedSeries& lift, WeightParams p) {
  const auto hats = lift.delta_hats();
  const auto curve = convergence_curve(hats, p, plot_checkpoints(hats.size()));
  CsvWriter w(path, {"N", "value"});
  for (const auto& [n, v] : curve) w.row({static_cast<double>(n), v});
  w.close();
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json pipeline_json(const PipelineResult& r) {
  json j;
  j["K"] = r.K;
  j["delta"] = r.delta;
  j["pilot_separation"] = r.pilot_separation ? number(*r.pilot_separation) : json(nullptr);
  j["complete"] = r.continuation.complete;
  j["assigned_fraction"] = r.continuation.assigned_fraction;
  if (r.rate) {
    j["rate"] = r.rate->rate;
    j["unreduced_average"] = r.rate->unreduced;
    const auto hats = r.continuation.lift.delta_hats();
    const auto [lo, hi] = std::minmax_element(hats.begin(), hats.end());
    j["lift_min"] = *lo;
    j["lift_max"] = *hi;
    j["lift_range"] = *hi - *lo;
  }
  if (r.winding) j["winding_from_observations"] = *r.winding;
  return j;
}

void write_pipeline_artifacts(const Artifacts& out, const PipelineResult& r, WeightParams p) {
  write_lift(out("lift.csv"), r.continuation.lift);
  if (r.continuation.complete) write_convergence(out("convergence.csv"), r.continuation.lift, p);
}

double golden_error(double rate) {
  const double rho = golden_rotation();
  return std::min(std::abs(rate - rho), std::abs(rate - (1.0 - rho)));
}

PlanarPoint require_ref(const std::optional<PlanarPoint>& p, const char* key) {
  if (!p) throw UsageError(std::string("reference point '") + key + "' is required");
  return *p;
}

FourierCurve curve_for(const ExperimentConfig& c, const std::string& base) {
  if (c.curve) return *c.curve;
  if (base == "fish") return fish_curve();
  if (base == "flower") return flower_curve();
  throw UsageError("no curve configured for experiment '" + c.experiment + "'");
}

int loop_winding(auto&& loop, PlanarPoint p) {
  for (std::size_t m = 10000; m <= (std::size_t{1} << 22); m *= 2) {
    std::vector<PlanarPoint> samples(m);
    for (std::size_t i = 0; i < m; ++i) samples[i] = loop(static_cast<double>(i) / static_cast<double>(m));
    try {
      double max_step = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        max_step = std::max(max_step, std::abs(signed_increment(angle_from_reference(samples[i], p),
                                                                angle_from_reference(samples[(i + 1) % m], p))));
      }
      if (max_step < 0.25) return winding_number(samples, ReferencePoint{p, std::nullopt});
    } catch (const UndersampledError&) {
    }
  }
  throw UndersampledError("reference point too close to the curve");
}

void check_winding(int w, bool allow) {
  if (std::abs(w) != 1 && !allow) {
    throw WindingRefusal(w, "curve winds " + std::to_string(w) +
                                " times around the reference point; the measured rate would be "
                                "that multiple of the underlying rate (override with --allow-winding)");
  }
}

ExitCode pipeline_code(const PipelineResult& r) {
  return r.continuation.complete ? ExitCode::ok : ExitCode::incomplete_lift;
}

ExperimentOutcome finish(ExperimentOutcome o, json summary, const Artifacts& out,
                         const std::string& name = "summary.json") {
  summary["exit_code"] = static_cast<int>(o.exit_code);
  if (!o.message.empty()) summary["message"] = o.message;
  o.summary_json = summary.dump(2);
  write_text(out(name), o.summary_json);
  o.artifacts = *out.list;
  return o;
}

// fish, flower and their delay-pair variants.
ExperimentOutcome run_curve(const ExperimentConfig& c, const std::string& base, bool delay_pair,
                            std::vector<fs::path>& list) {
  const Artifacts out{c.out_dir, &list};
  const FourierCurve curve = curve_for(c, base);
  const double rho = golden_rotation();
  const WeightParams weight{c.p.value_or(1)};
  const PlanarPoint p = require_ref(c.ref, "ref");
  if (c.N < 20) throw UsageError("N must be at least 20");

  const auto orbit = rigid_orbit(RotationVector({rho}), TorusPoint({0.0}), c.N);
  std::vector<PlanarPoint> gamma(c.N + 1);
  for (std::size_t n = 0; n <= c.N; ++n) gamma[n] = eval_fourier(curve, orbit[n][0]);

  PipelineOptions options;
  options.K = c.K;
  options.delta = c.delta;
  options.weight = weight;
  options.allow_winding = c.allow_winding;

  json summary;
  summary["experiment"] = c.experiment;
  summary["N"] = c.N;
  summary["p"] = weight.p;
  summary["rho"] = rho;
  summary["reference_point"] = {p.x, p.y};

  std::vector<PlanarPoint> points;
  int w = 0;
  if (delay_pair) {
    std::vector<double> re(c.N + 1);
    for (std::size_t n = 0; n <= c.N; ++n) re[n] = gamma[n].x;
    points = delay_pair_series(re);
    w = loop_winding(
        [&](double t) {
          return PlanarPoint{eval_fourier(curve, mod1(t - rho)).x, eval_fourier(curve, t).x};
        },
        p);
  } else {
    points.assign(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(c.N));
    w = winding_number(curve, ReferencePoint{p, std::nullopt});
  }
  summary["winding_number"] = w;
  check_winding(w, c.allow_winding);

  write_planar_observations(out("observations.csv"), points);
  const PipelineResult r = estimate_rotation_rate(points, p, options);
  write_angle_observations(out("angles.csv"), r.angles);
  write_pipeline_artifacts(out, r, weight);
  summary["lift"] = pipeline_json(r);

  ExperimentOutcome o;
  o.exit_code = pipeline_code(r);
  if (r.rate) {
    summary["rate"] = r.rate->rate;
    summary["error_vs_rho"] = golden_error(r.rate->rate);
  } else {
    o.message = "continuation incomplete: increase N or delta";
  }

  if (delay_pair && c.ref2 && r.rate) {
    std::vector<PlanarPoint> planar(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(c.N));
    const PipelineResult q = estimate_rotation_rate(planar, *c.ref2, options);
    json cmp = pipeline_json(q);
    cmp["reference_point"] = {c.ref2->x, c.ref2->y};
    if (q.rate) cmp["rate_difference"] = std::abs(q.rate->rate - r.rate->rate);
    summary["planar_comparison"] = cmp;
  }

  if (c.precision == Precision::extended && r.rate) {
    if (delay_pair) throw UsageError("extended precision is available for fish and flower only");
    const auto ext = extended_golden_curve_rate(curve, p, r.continuation.lift, weight);
    summary["extended"] = {{"rate", ext.rate},
                           {"rho", ext.rho},
                           {"abs_error", ext.abs_error},
                           {"N", ext.n_used},
                           {"format", "binary128"}};
  }
  return finish(std::move(o), summary, out);
}

ExperimentOutcome run_torus(const ExperimentConfig& c, const std::string& base,
                            std::vector<fs::path>& list) {
  const Artifacts out{c.out_dir, &list};
  const FourierCurve curve = curve_for(c, base);
  const WeightParams weight{c.p.value_or(1)};
  const PlanarPoint p1 = require_ref(c.ref, "ref");
  const PlanarPoint p2 = require_ref(c.ref2, "ref2");
  if (c.N < 20) throw UsageError("N must be at least 20");
  const double rho = golden_rotation();
  const double phi = mod1(torus_second_frequency());
  const auto orbit = rigid_orbit(RotationVector({rho, phi}), TorusPoint({0.0, 0.0}), c.N - 1);

  std::vector<PlanarPoint> proj1(c.N), proj2(c.N);
  for (std::size_t n = 0; n < c.N; ++n) {
    const Vec3 f = torus_map_3d(curve, orbit[n][0], orbit[n][1]);
    proj1[n] = {f[0], f[1]};
    proj2[n] = tilted_radial_projection(f, kTorusTilt);
  }

  PipelineOptions options;
  options.K = c.K;
  options.delta = c.delta;
  options.weight = weight;
  options.embed_planar = true;
  options.d_assumed = 2;
  options.allow_winding = c.allow_winding;

  json summary;
  summary["experiment"] = c.experiment;
  summary["N"] = c.N;
  summary["p"] = weight.p;
  summary["rho"] = {rho, phi};
  summary["tilt"] = kTorusTilt;
  ExperimentOutcome o;
  json projections = json::array();
  int index = 1;
  for (const auto& [points, ref] : {std::pair{&proj1, p1}, std::pair{&proj2, p2}}) {
    const Artifacts sub{c.out_dir / ("projection" + std::to_string(index)), &list};
    write_planar_observations(sub("observations.csv"), *points);
    const PipelineResult r = estimate_rotation_rate(*points, ref, options);
    write_pipeline_artifacts(sub, r, weight);
    json j = pipeline_json(r);
    j["reference_point"] = {ref.x, ref.y};
    projections.push_back(j);
    if (!r.continuation.complete) {
      o.exit_code = ExitCode::incomplete_lift;
      o.message = "continuation incomplete for projection " + std::to_string(index);
    }
    ++index;
  }
  summary["projections"] = projections;
  return finish(std::move(o), summary, out);
}

ExperimentOutcome run_cr3bp(const ExperimentConfig& c, std::vector<fs::path>& list) {
  const Artifacts out{c.out_dir, &list};
  const WeightParams weight{c.p.value_or(2)};
  json summary;
  summary["experiment"] = "cr3bp";
  summary["tableau"] = std::string(kRk8TableauId);
  summary["mu"] = c.cr3bp.mu;
  summary["h"] = c.cr3bp.step_h;
  summary["Dt"] = c.cr3bp.output_Dt;
  summary["T"] = c.t_end;
  summary["p"] = weight.p;

  Cr3bpState s0;
  if (c.search) {
    OrbitSearchParams sp = c.search_params;
    sp.seed = c.seed;
    const auto found = search_orbit(sp, c.cr3bp);
    summary["search"] = {{"energy", sp.energy},
                         {"evaluations", found.evaluations},
                         {"found", found.found},
                         {"relation_residual", found.relation_residual}};
    if (!found.found) {
      ExperimentOutcome o;
      o.exit_code = ExitCode::not_converged;
      o.message = "orbit search did not bracket the target ratio";
      return finish(std::move(o), summary, out, "rates.json");
    }
    s0 = found.state;
  } else {
    if (!c.initial_state) throw UsageError("cr3bp needs q1, q2, p1, p2 or search = true");
    s0 = *c.initial_state;
  }
  summary["initial_state"] = {{"q1", s0.q1}, {"q2", s0.q2}, {"p1", s0.p1}, {"p2", s0.p2}};

  const auto states = integrate_rk8(s0, c.cr3bp, c.t_end);
  const double h0 = hamiltonian(s0, c.cr3bp);
  double drift = 0.0;
  {
    CsvWriter w(out("trajectory.csv"), {"t", "q1", "q2", "p1", "p2", "H"});
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double h = hamiltonian(states[i], c.cr3bp);
      drift = std::max(drift, std::abs(h - h0));
      if (i % c.trajectory_stride == 0) {
        const auto& s = states[i];
        w.row({s.t, s.q1, s.q2, s.p1, s.p2, h});
      }
    }
    w.close();
  }
  const Cr3bpRates rates = rates_from_trajectory(states, c.cr3bp, weight);
  for (const auto& [name, series] : {std::pair{"convergence_theta.csv", &rates.theta},
                                     std::pair{"convergence_phi.csv", &rates.phi}}) {
    CsvWriter w(out(name), {"N", "value"});
    for (const auto& [n, v] : series->curve) w.row({static_cast<double>(n), v});
    w.close();
  }
  summary["H0"] = h0;
  summary["max_energy_drift"] = drift;
  summary["N"] = rates.n_samples;
  summary["rho_theta"] = rates.rho_theta;
  summary["rho_phi"] = rates.rho_phi;
  summary["sidereal_rho_theta"] = rates.sidereal_rho_theta;
  summary["precession"] = rates.precession;
  summary["relation_residual"] = rates.relation_residual;
  summary["return_map_rotation"] = kReturnMapRotation;
  summary["spread_theta"] = rates.theta.spread;
  summary["spread_phi"] = rates.phi.spread;
  summary["converged"] = rates.converged;
  summary["units"] = "revolutions per time unit";

  ExperimentOutcome o;
  if (!rates.converged) {
    o.exit_code = ExitCode::not_converged;
    o.message = "weighted averages did not settle; the orbit may not be quasiperiodic";
  }
  return finish(std::move(o), summary, out, "rates.json");
}

struct FileRun {
  RateRecord record;
  PipelineResult result;
};

FileRun run_file(const fs::path& path, std::size_t K, std::optional<double> delta, int p,
                 std::optional<PlanarPoint> ref, bool allow_winding) {
  const ObservationFile obs = read_observations(path);
  PipelineOptions options;
  options.K = K;
  options.delta = delta;
  options.weight = WeightParams{p};
  options.allow_winding = allow_winding;
  FileRun run;
  run.record.planar = obs.planar;
  run.record.n_observations = obs.size();
  if (obs.planar) {
    if (!ref) throw UsageError("planar observations need a reference point (--ref-x/--ref-y)");
    run.result = estimate_rotation_rate(obs.points, *ref, options);
  } else {
    run.result = estimate_rotation_rate(obs.phi, options);
  }
  const auto& r = run.result;
  run.record.K = r.K;
  run.record.delta = r.delta;
  run.record.pilot_separation = r.pilot_separation;
  run.record.complete = r.continuation.complete;
  run.record.assigned_fraction = r.continuation.assigned_fraction;
  run.record.winding = r.winding;
  if (r.rate) {
    run.record.rate = r.rate->rate;
    run.record.unreduced = r.rate->unreduced;
  }
  return run;
}

ExperimentOutcome run_custom(const ExperimentConfig& c, std::vector<fs::path>& list) {
  const Artifacts out{c.out_dir, &list};
  if (!c.input) throw UsageError("experiment 'custom' needs --input");
  const WeightParams weight{c.p.value_or(1)};
  const FileRun run = run_file(*c.input, c.K, c.delta, weight.p, c.ref, c.allow_winding);
  write_pipeline_artifacts(out, run.result, weight);
  json summary;
  summary["experiment"] = "custom";
  summary["input"] = c.input->string();
  summary["N"] = run.record.n_observations;
  summary["planar"] = run.record.planar;
  summary["p"] = weight.p;
  summary["lift"] = pipeline_json(run.result);
  ExperimentOutcome o;
  o.exit_code = pipeline_code(run.result);
  if (run.result.rate) {
    summary["rate"] = run.record.rate;
  } else {
    o.message = "continuation incomplete: increase N or delta";
  }
  return finish(std::move(o), summary, out);
}

}  // namespace

RateRecord estimate_from_file(const fs::path& path, std::size_t K, std::optional<double> delta,
                              int p, std::optional<PlanarPoint> ref, bool allow_winding) {
  return run_file(path, K, delta, p, ref, allow_winding).record;
}

ExperimentConfig config_from_map(const ConfigMap& m, ExperimentConfig c) {
  if (auto v = m.get("experiment")) c.experiment = *v;
  if (auto v = m.get_int("N")) {
    if (*v < 1) throw UsageError("N must be positive");
    c.N = static_cast<std::size_t>(*v);
  }
  if (auto v = m.get_int("K")) {
    if (*v < 0) throw UsageError("K must be non-negative");
    c.K = static_cast<std::size_t>(*v);
  }
  if (auto v = m.get_double("delta")) c.delta = *v;
  if (auto v = m.get_int("p")) c.p = static_cast<int>(*v);
  if (auto v = m.get_point("ref")) c.ref = *v;
  if (auto v = m.get_point("ref2")) c.ref2 = *v;
  if (auto v = m.get("out_dir")) c.out_dir = *v;
  if (auto v = m.get("input")) c.input = fs::path(*v);
  if (auto v = m.get_int("seed")) c.seed = static_cast<std::uint64_t>(*v);
  if (auto v = m.get("precision")) {
    if (*v == "double") c.precision = Precision::standard;
    else if (*v == "extended") c.precision = Precision::extended;
    else throw UsageError("precision must be 'double' or 'extended'");
  }
  if (auto v = m.get_bool("allow_winding")) c.allow_winding = *v;
  if (auto v = m.get_curve("curve")) c.curve = *v;

  if (auto v = m.get_double("mu")) c.cr3bp.mu = *v;
  if (auto v = m.get_double("h")) c.cr3bp.step_h = *v;
  if (auto v = m.get_double("Dt")) c.cr3bp.output_Dt = *v;
  if (auto v = m.get_double("T")) c.t_end = *v;
  if (auto v = m.get_double("collision_distance")) c.cr3bp.collision_distance = *v;
  if (auto v = m.get_int("trajectory_stride")) {
    if (*v < 1) throw UsageError("trajectory_stride must be >= 1");
    c.trajectory_stride = static_cast<std::size_t>(*v);
  }
  const bool any_state = m.contains("q1") || m.contains("q2") || m.contains("p1") || m.contains("p2");
  if (any_state) {
    Cr3bpState s = c.initial_state.value_or(Cr3bpState{});
    if (auto v = m.get_double("q1")) s.q1 = *v;
    if (auto v = m.get_double("q2")) s.q2 = *v;
    if (auto v = m.get_double("p1")) s.p1 = *v;
    if (auto v = m.get_double("p2")) s.p2 = *v;
    c.initial_state = s;
  }
  if (auto v = m.get_bool("search")) c.search = *v;
  if (auto v = m.get_double("search.energy")) c.search_params.energy = *v;
  if (auto v = m.get_double("search.q1_min")) c.search_params.q1_min = *v;
  if (auto v = m.get_double("search.q1_max")) c.search_params.q1_max = *v;
  if (auto v = m.get_int("search.scan_points")) c.search_params.scan_points = static_cast<std::size_t>(*v);
  if (auto v = m.get_double("search.h")) c.search_params.search_h = *v;
  if (auto v = m.get_double("search.T")) c.search_params.search_T = *v;
  if (auto v = m.get_double("search.tolerance")) c.search_params.tolerance = *v;
  return c;
}

ExperimentOutcome run_experiment(const ExperimentConfig& c) {
  std::vector<fs::path> list;
  ExperimentOutcome failure;
  try {
    const std::string& e = c.experiment;
    if (e == "fish" || e == "flower") return run_curve(c, e, false, list);
    if (e == "fish-delay-pair") return run_curve(c, "fish", true, list);
    if (e == "flower-delay-pair") return run_curve(c, "flower", true, list);
    if (e == "fish-torus") return run_torus(c, "fish", list);
    if (e == "flower-torus") return run_torus(c, "flower", list);
    if (e == "cr3bp") return run_cr3bp(c, list);
    if (e == "custom") return run_custom(c, list);
    throw UsageError("unknown experiment '" + e + "'");
  } catch (const AmbiguityError& err) {
    failure = {ExitCode::ambiguity, err.what(), "", {}};
  } catch (const WindingRefusal& err) {
    failure = {ExitCode::winding_refusal, err.what(), "", {}};
  } catch (const ParseError& err) {
    failure = {ExitCode::io, err.what(), "", {}};
  } catch (const fs::filesystem_error& err) {
    failure = {ExitCode::io, err.what(), "", {}};
  } catch (const CollisionError& err) {
    failure = {ExitCode::not_converged, err.what(), "", {}};
  } catch (const std::invalid_argument& err) {
    failure = {ExitCode::usage, err.what(), "", {}};
  } catch (const std::domain_error& err) {
    failure = {ExitCode::usage, err.what(), "", {}};
  } catch (const UndersampledError& err) {
    failure = {ExitCode::usage, err.what(), "", {}};
  }
  json summary{{"experiment", c.experiment}};
  try {
    return finish(std::move(failure), summary, Artifacts{c.out_dir, &list},
                  c.experiment == "cr3bp" ? "rates.json" : "summary.json");
  } catch (const std::exception&) {
    // The output directory itself is unusable; report without artifacts.
    failure.summary_json = summary.dump(2);
    return failure;
  }
}

}  // namespace rotrate
