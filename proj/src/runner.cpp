#include "degenwave/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>

#include "degenwave/errors.hpp"
#include "degenwave/experiments.hpp"
#include "degenwave/oracle.hpp"
#include "degenwave/output.hpp"
#include "degenwave/parallel.hpp"

namespace fs = std::filesystem;

namespace degenwave {

bool RunOutcome::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

class Session {
 public:
  Session(const RunConfig& cfg, std::ostream* log) : cfg_(cfg), log_(log), root_(cfg.out) {}

  void prepare() {
    fs::create_directories(root_ / "traces");
    fs::create_directories(root_ / "plots");
    fs::remove(root_ / "FAILED");
    write_manifest("running");
  }

  void note(const std::string& line) {
    report_ << line << '\n';
    if (log_) *log_ << line << '\n';
  }

  void check(const std::string& name, bool passed, const std::string& detail) {
    outcome_.checks.push_back({name, passed, detail});
    note(std::string("check ") + (passed ? "PASS " : "FAIL ") + name + ": " + detail);
  }

  void trace_csv(const std::string& name, const std::vector<CsvColumn>& cols) {
    const std::string rel = "traces/" + name + ".csv";
    write_csv((root_ / rel).string(), cols);
    outcome_.files.push_back(rel);
  }

  void energy_csv(const std::string& name, const EnergyTrace& tr) {
    trace_csv(name, {{"t", &tr.times}, {"E", &tr.energy}, {"L2", &tr.l2}, {"H1", &tr.h1}});
  }

  void plot(const std::string& name, const std::vector<PlotSeries>& series, PlotStyle style) {
    const std::string rel = "plots/" + name + ".svg";
    emit_plot((root_ / rel).string(), series, style);
    outcome_.files.push_back(rel);
  }

  RunOutcome finish(const std::string& status) {
    outcome_.files.push_back("report.txt");
    std::ostringstream head;
    head << "degenwave " << library_version() << " preset " << cfg_.preset << "\n";
    head << "status: " << status << "\n";
    write_text((root_ / "report.txt").string(), head.str() + report_.str());
    write_manifest(status);
    return outcome_;
  }

  RunOutcome fail_numerical(const std::string& what) {
    note("FAILED numerical failure: " + what);
    write_text((root_ / "FAILED").string(), what + "\n");
    outcome_.exit_code = kExitNumericalFailure;
    outcome_.message = what;
    outcome_.files.push_back("FAILED");
    return finish("numerical-failure");
  }

  RunOutcome& outcome() { return outcome_; }
  const RunConfig& cfg() const { return cfg_; }

 private:
  void write_manifest(const std::string& status) {
    nlohmann::json j;
    j["version"] = library_version();
    j["status"] = status;
    j["config"] = to_json(cfg_);
    j["files"] = outcome_.files;
    write_text((root_ / "manifest.json").string(), j.dump(2) + "\n");
  }

  const RunConfig& cfg_;
  std::ostream* log_;
  fs::path root_;
  std::ostringstream report_;
  RunOutcome outcome_;
};

DampingLaw configured_law(const RunConfig& c) {
  if (c.damping == "linear") return DampingLaw::linear(c.linear_beta());
  if (c.damping == "primitive") return DampingLaw::primitive(c.alpha, c.m);
  return DampingLaw::degenerate(c.alpha, c.m);
}

SimulationOptions simulation_options(const RunConfig& c) {
  SimulationOptions o;
  o.horizon = c.horizon;
  o.handoff = std::min(c.handoff, c.horizon);
  o.picard.window = c.picard_window;
  o.picard.tolerance = c.picard_tolerance;
  o.picard.max_iterations = c.picard_max_iterations;
  return o;
}

NewtonCotesRule configured_rule(const RunConfig& c) {
  return c.rule == "simpson38" ? NewtonCotesRule::simpson38 : NewtonCotesRule::boole;
}

// Energy-law checks shared by every FEM trajectory.
void energy_checks(Session& s, const std::string& label, const EnergyTrace& tr,
                   const DampingLaw& law) {
  const MonotonicityReport mono = check_energy_monotonicity(tr);
  s.check(label + " energy nonincreasing", mono.nonincreasing,
          "max relative step increase " + sci(mono.max_relative_increase));
  if (law.is_zero()) {
    double drift = 0.0;
    for (double e : tr.energy) drift = std::max(drift, std::abs(e - tr.energy.front()));
    const double rel = drift / std::max(tr.energy.front(), 1e-300);
    s.check(label + " energy conserved", rel <= 1e-9, "max relative drift " + sci(rel));
  } else {
    s.check(label + " energy decreases over unit windows", mono.strictly_decreasing,
            "max E(t+1)/E(t) " + sci(mono.worst_window_ratio));
  }
}

void picard_check(Session& s, const std::string& label, const SimulationRun& r) {
  int iters = 0;
  double dist = 0.0;
  for (const auto& w : r.picard_windows) {
    iters = std::max(iters, w.iterations);
    dist = std::max(dist, w.distance);
  }
  s.check(label + " Picard converged", r.picard_converged(),
          std::to_string(r.picard_windows.size()) + " windows, max iterations " +
              std::to_string(iters) + ", max final distance " + sci(dist));
}

void initial_energy_check(Session& s, const std::vector<SimulationRun>& runs) {
  double worst = 0.0;
  std::string detail;
  for (const auto& r : runs) {
    const double dev = std::abs(r.trace.energy.front() - 1.0);
    worst = std::max(worst, dev);
    detail += "k=" + std::to_string(r.meta.k) + ":" + sci(r.trace.energy.front()) + " ";
  }
  s.check("initial energies 1 +- 1e-3", worst <= 1e-3, detail + "(max deviation " + sci(worst) + ")");
}

PlotSeries series_of(const std::string& label, const Vector& x, const Vector& y) {
  return PlotSeries{label, x, y};
}

std::vector<double> oracle_errors(Session& s, const SpatialOperators& ops,
                                  const std::vector<SimulationRun>& runs, double until) {
  const RunConfig& c = s.cfg();
  std::vector<EnergyComparison> cmp(runs.size());
  parallel_for(runs.size(), [&](std::size_t i) {
    const std::size_t k = runs[i].meta.k;
    const auto problem = AnsatzProblem::from_sine_amplitude(k, frequency_amplitude(k), 0.0, c.alpha,
                                                            c.m, ops.mesh.nodes());
    const double end = std::min(until, runs[i].trajectory.end_time());
    const auto sol = rk4_ansatz(problem, end, c.delta / c.oracle_factor, c.delta);
    cmp[i] = compare_energy_norm(ops, runs[i].trajectory, sol);
  });
  std::vector<double> e;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    s.note("e_" + std::to_string(runs[i].meta.k) + " = " + sci(cmp[i].norm_gap) + " on [0, " +
           num(until) + "]  (max energy-norm difference; max energy-norm distance of states " +
           sci(cmp[i].state_distance) + ")");
    e.push_back(cmp[i].norm_gap);
  }
  return e;
}

void run_sweep(Session& s, const SpatialOperators& ops, const Simulator& sim) {
  const RunConfig& c = s.cfg();
  const DampingLaw law = c.preset == "custom" ? configured_law(c) : DampingLaw::degenerate(c.alpha, c.m);
  const SimulationOptions opts = simulation_options(c);
  const auto runs = frequency_sweep(sim, c.ks, law, opts);

  std::vector<PlotSeries> energy, l2;
  for (const auto& r : runs) {
    const std::string k = std::to_string(r.meta.k);
    s.energy_csv("k" + k, r.trace);
    energy.push_back(series_of("k=" + k, r.trace.times, r.trace.energy));
    l2.push_back(series_of("k=" + k, r.trace.times, r.trace.l2));
    s.note("k=" + k + ": E(0) = " + sci(r.trace.energy.front()) + ", E(T) = " +
           sci(r.trace.energy.back()) + ", |u(T)|_0 = " + sci(r.trace.l2.back()));
  }
  for (const auto& r : runs) {
    const std::string label = "k=" + std::to_string(r.meta.k);
    picard_check(s, label, r);
    energy_checks(s, label, r.trace, law);
  }
  initial_energy_check(s, runs);

  if (!law.is_zero() && law.kind == DampingLaw::Kind::degenerate && runs.size() > 1) {
    std::vector<std::pair<std::size_t, double>> final;
    for (const auto& r : runs) final.emplace_back(r.meta.k, r.trace.energy.back());
    std::sort(final.begin(), final.end());
    bool ordered = true;
    std::string detail;
    for (std::size_t i = 0; i < final.size(); ++i) {
      if (i && !(final[i].second > final[i - 1].second)) ordered = false;
      detail += (i ? " < " : "") + std::string("E^(") + std::to_string(final[i].first) + ")";
    }
    s.check("energy at T increases with k", ordered, detail);
  }

  // Distance to the undamped flow from the same data.
  std::vector<ConservativeComparison> cons(runs.size());
  parallel_for(runs.size(), [&](std::size_t i) { cons[i] = conservative_comparison(sim, runs[i].trajectory); });
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string k = std::to_string(runs[i].meta.k);
    s.trace_csv("conservative_k" + k, {{"t", &cons[i].times}, {"Ez", &cons[i].energy_z}});
    s.note("k=" + k + ": E_z(T) = " + sci(cons[i].energy_z.back()) + " for z = u - w");
  }

  if (c.oracle && law.kind == DampingLaw::Kind::degenerate) oracle_errors(s, ops, runs, c.horizon);

  PlotStyle st;
  st.title = "Energy, alpha=" + num(c.alpha) + ", m=" + std::to_string(c.m);
  st.ylabel = "E(t)";
  st.loglog = c.loglog;
  s.plot("energy", energy, st);
  PlotStyle sl = st;
  sl.title = "L2 norm of the displacement";
  sl.ylabel = "|u(t)|_0";
  s.plot("l2", l2, sl);
}

void run_fig1(Session& s, const SpatialOperators& ops, const Simulator& sim) {
  const RunConfig& c = s.cfg();
  const SimulationOptions opts = simulation_options(c);
  const std::size_t k = c.ks.front();
  const State y0 = frequency_initial_state(ops, k);
  const double beta = c.linear_beta();
  const DampingLaw nonlinear = DampingLaw::degenerate(c.alpha, c.m);
  const DampingLaw linear = DampingLaw::linear(beta);
  std::vector<SimulationRun> runs(2);
  parallel_for(2, [&](std::size_t i) { runs[i] = sim.run(y0, i == 0 ? nonlinear : linear, opts, k); });

  const std::string ks = std::to_string(k);
  s.energy_csv("k" + ks, runs[0].trace);
  s.energy_csv("linear_k" + ks, runs[1].trace);

  const Trajectory& tn = runs[0].trajectory;
  const Trajectory& tl = runs[1].trajectory;
  const double c0 = frequency_amplitude(k);
  Vector t(tn.size()), un(tn.size()), ul(tn.size()), ue(tn.size());
  double err = 0.0;
  for (std::size_t i = 0; i < tn.size(); ++i) {
    t[i] = tn.time(i);
    un[i] = evaluate(ops.mesh, tn[i].u(), 0.5);
    ul[i] = evaluate(ops.mesh, tl[i].u(), 0.5);
    ue[i] = linear_damped_amplitude(beta, k, c0, t[i]) * laplacian_eigenfunction(k, 0.5) /
            std::numbers::sqrt2;
    const NodalPair ex = analytic_linear_damped(ops.mesh, beta, k, c0, t[i]);
    err = std::max(err, energy_norm(ops, tl[i] - State(ex.u, ex.v)));
  }
  s.trace_csv("point_x0.5", {{"t", &t}, {"u_nonlinear", &un}, {"u_linear", &ul}, {"u_linear_exact", &ue}});
  s.note("linear damping beta = " + num(beta));
  s.note("max nodal energy-norm error of the linear run against the exact solution: " + sci(err));
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string label = i == 0 ? "nonlinear k=" + ks : "linear k=" + ks;
    picard_check(s, label, runs[i]);
    energy_checks(s, label, runs[i].trace, i == 0 ? nonlinear : linear);
  }

  PlotStyle st;
  st.title = "Displacement at x = 0.5";
  st.ylabel = "u(t, 0.5)";
  s.plot("point_x0.5", {series_of("degenerate", t, un), series_of("linear", t, ul)}, st);
  PlotStyle se;
  se.title = "Energy";
  se.ylabel = "E(t)";
  se.loglog = c.loglog;
  s.plot("energy", {series_of("degenerate", runs[0].trace.times, runs[0].trace.energy),
                    series_of("linear", runs[1].trace.times, runs[1].trace.energy)},
         se);
}

void run_primitive(Session& s, const SpatialOperators& ops, const Simulator& sim) {
  const RunConfig& c = s.cfg();
  const SimulationOptions opts = simulation_options(c);
  const DampingLaw law = DampingLaw::degenerate(c.alpha, c.m);
  const auto runs = frequency_sweep(sim, c.ks, law, opts);
  const double picard_end = std::min(opts.handoff, opts.horizon);
  const std::vector<double> e =
      c.alpha > 0.0 ? oracle_errors(s, ops, runs, picard_end) : std::vector<double>();

  std::vector<PlotSeries> prim_energy, l2;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::size_t k = runs[i].meta.k;
    const std::string ks = std::to_string(k);
    const PrimitiveSetup setup = primitive_setup(ops, k, c.m, c.alpha);
    const PrimitiveRun pr = primitive_solve(sim, setup, opts, &runs[i].trajectory);
    s.energy_csv("k" + ks, runs[i].trace);
    s.energy_csv("primitive_k" + ks, pr.run.trace);
    prim_energy.push_back(series_of("k=" + ks, pr.run.trace.times, pr.run.trace.energy));
    l2.push_back(series_of("k=" + ks, runs[i].trace.times, runs[i].trace.l2));

    s.note("k=" + ks + ": E_phi(0) = " + sci(0.5 * setup.twice_initial_energy()) +
           ", |Phi|_1 / |u0|_0 = " + sci(std::sqrt(setup.h1_potential_sq / setup.l2_data_sq)) +
           ", elliptic residual " + sci(setup.elliptic_residual));
    picard_check(s, "k=" + ks, runs[i]);
    picard_check(s, "primitive k=" + ks, pr.run);
    energy_checks(s, "k=" + ks, runs[i].trace, law);
    energy_checks(s, "primitive k=" + ks, pr.run.trace, DampingLaw::primitive(c.alpha, c.m));

    const std::string until = num(picard_end);
    if (!e.empty()) {
      s.check("k=" + ks + " velocity of the primitive solution tracks u", pr.velocity_gap <= 5.0 * e[i],
              "sup_{t<=" + until + "} |phi_t - u|_0 = " + sci(pr.velocity_gap) + ", budget 5 e_" + ks +
                  " = " + sci(5.0 * e[i]));
    } else {
      s.note("k=" + ks + ": sup_{t<=" + until + "} |phi_t - u|_0 = " + sci(pr.velocity_gap));
    }
    const LowerOrderReport lo = lower_order_decay(runs[i].trace, setup);
    s.check("k=" + ks + " |u(t)|_0^2 <= |Phi|_1^2 + |u0|_0^2", lo.holds(),
            std::to_string(lo.violations) + " violations, min slack " + sci(lo.min_slack));
    if (c.horizon >= c.fit_end) {
      const DecayFit fit = decay_rate_fit(pr.run.trace, c.fit_start, c.fit_end);
      s.note("k=" + ks + ": fitted decay exponent of E_phi on [" + num(c.fit_start) + ", " +
             num(c.fit_end) + "]: p = " + num(fit.exponent) +
             " (asymptotic rate 1/m = " + num(1.0 / c.m) + ")");
      if (i == 0) {
        PlotStyle st;
        st.title = "Primitive energy";
        st.ylabel = "E_phi(t)";
        st.loglog = true;
        st.annotation = "fitted slope on [" + num(c.fit_start) + ", " +
                        num(c.fit_end) + "]: -" + num(std::round(fit.exponent * 1e4) / 1e4);
        s.plot("primitive_energy_loglog", {prim_energy.back()}, st);
      }
    }
  }
  PlotStyle st;
  st.title = "Primitive energy";
  st.ylabel = "E_phi(t)";
  st.loglog = c.loglog;
  s.plot("primitive_energy", prim_energy, st);
  PlotStyle sl;
  sl.title = "L2 norm of the displacement";
  sl.ylabel = "|u(t)|_0";
  s.plot("l2", l2, sl);
}

void run_oscillator(Session& s) {
  const RunConfig& c = s.cfg();
  SweepOptions so;
  so.horizon = c.oscillator_horizon;
  so.step = c.oscillator_step;
  so.seed = c.seed;
  const UniformStabilityReport rep = uniform_stability_sweep(
      c.oscillator_stiffness, c.alpha, c.m, c.radius, c.samples, c.oscillator_target, so);

  const std::size_t n = rep.samples.size();
  Vector idx(n), y1(n), y2(n), norm(n), ttt(n), mono(n), inc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& sm = rep.samples[i];
    idx[i] = static_cast<double>(i);
    y1[i] = sm.initial[0];
    y2[i] = sm.initial[1];
    norm[i] = sm.initial_norm;
    ttt[i] = sm.time_to_target;
    mono[i] = sm.monotone ? 1.0 : 0.0;
    inc[i] = sm.max_norm_increase;
  }
  s.trace_csv("oscillator_samples", {{"sample", &idx}, {"y1", &y1}, {"y2", &y2}, {"norm0", &norm},
                                     {"time_to_target", &ttt}, {"monotone", &mono},
                                     {"max_increase", &inc}});
  s.check("oscillator norm nonincreasing on every sample", rep.all_monotone,
          std::to_string(n) + " samples");
  s.check("every sample reaches |y| < " + num(c.oscillator_target), rep.all_reached,
          rep.all_reached ? "common horizon " + num(rep.max_time)
                          : std::to_string(rep.unreached) + " samples unreached by t = " +
                                num(c.oscillator_horizon));

  // Norm histories of a few samples for the plot.
  std::vector<PlotSeries> series;
  const std::size_t shown = std::min<std::size_t>(n, 6);
  for (std::size_t j = 0; j < shown; ++j) {
    const std::size_t i = j * n / shown;
    OscillatorProblem p{c.oscillator_stiffness, c.alpha, c.m, y1[i], y2[i]};
    const auto traj = simulate_oscillator(p, c.oscillator_horizon, c.oscillator_step);
    Vector t(traj.norms.size());
    for (std::size_t q = 0; q < t.size(); ++q) t[q] = static_cast<double>(q) * traj.step;
    series.push_back(series_of("sample " + std::to_string(i), t, traj.norms));
  }
  PlotStyle st;
  st.title = "Oscillator equivalent norm";
  st.ylabel = "|y(t)|";
  st.loglog = c.loglog;
  s.plot("oscillator_norms", series, st);
}

}  // namespace

RunOutcome run(const RunConfig& cfg, std::ostream* log) {
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    RunOutcome o;
    o.exit_code = kExitConfigError;
    o.message = e.what();
    return o;
  }
  Session s(cfg, log);
  try {
    s.prepare();
  } catch (const std::exception& e) {
    RunOutcome o;
    o.exit_code = kExitConfigError;
    o.message = std::string("cannot prepare output directory: ") + e.what();
    return o;
  }
  try {
    if (cfg.preset == "oscillator") {
      run_oscillator(s);
    } else {
      const Mesh mesh = build_mesh(cfg.nodes);
      const SpatialOperators ops = assemble(mesh);
      const Simulator sim(ops, cfg.delta, configured_rule(cfg));
      s.note("N = " + std::to_string(cfg.nodes) + ", h = " + num(cfg.h()) +
             ", delta = " + num(cfg.delta) + ", T = " + num(cfg.horizon));
      if (cfg.preset == "fig1")
        run_fig1(s, ops, sim);
      else if (cfg.preset == "primitive")
        run_primitive(s, ops, sim);
      else
        run_sweep(s, ops, sim);
    }
  } catch (const NumericalFailure& e) {
    return s.fail_numerical(e.what());
  } catch (const ConfigError& e) {
    RunOutcome o = s.finish("config-error");
    o.exit_code = kExitConfigError;
    o.message = e.what();
    return o;
  }
  const bool ok = s.outcome().all_checks_passed();
  RunOutcome o = s.finish(ok ? "ok" : "invariant-failure");
  if (!ok) {
    o.exit_code = kExitInvariantFailure;
    o.message = "invariant check failed";
  }
  return o;
}

}  // namespace degenwave
