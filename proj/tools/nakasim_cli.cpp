// nakasim: run experiments, print bounds, calibrate, export block trees.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nakasim/bounds.hpp"
#include "nakasim/calibration.hpp"
#include "nakasim/dot.hpp"
#include "nakasim/engine.hpp"
#include "nakasim/errors.hpp"
#include "nakasim/experiment.hpp"
#include "nakasim/parallel.hpp"
#include "nakasim/trace_io.hpp"

namespace {

using namespace nakasim;

struct SpecSource {
  std::string config;
  std::string preset_name;
  std::vector<std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config, "key=value config file");
    cmd->add_option("--preset", preset_name, "named preset");
    cmd->add_option("-s,--set", overrides, "override one key, e.g. --set n=8");
  }

  ExperimentSpec resolve() const {
    ExperimentSpec spec;
    if (!preset_name.empty()) {
      spec = preset(preset_name);
    } else if (!config.empty()) {
      spec = load_spec(config);
    }
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_setting(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    spec.base.validate();
    return spec;
  }
};

nlohmann::ordered_json bounds_json(std::int64_t n, std::int64_t b, double p, double eps,
                                   std::uint64_t m, std::int64_t t, const Calibration* cal) {
  nlohmann::ordered_json doc;
  doc["n"] = n;
  doc["b"] = b;
  doc["p"] = p;
  doc["epsilon"] = eps;
  const Fraction f = honest_majority_p_bound(n, b);
  doc["honest_majority_p_bound"] = {{"num", f.num}, {"den", f.den}, {"value", static_cast<double>(f.value())}};
  if (p > 0.0 && p < 1.0) {
    const BoundParams bp = inconsistency_theorem_params(n, b, p, eps);
    doc["transition"] = {{"p_plus", static_cast<double>(bp.probs.p_plus)},
                         {"p_minus", static_cast<double>(bp.probs.p_minus)},
                         {"p_star", static_cast<double>(bp.probs.p_star)}};
    doc["beta"] = static_cast<double>(bp.beta);
    doc["theorem"] = {{"drift_ok", bp.drift_ok},
                      {"side_condition_ok", bp.side_condition_ok},
                      {"m_star_branches",
                       {static_cast<double>(bp.m_star_branches[0]), static_cast<double>(bp.m_star_branches[1]),
                        static_cast<double>(bp.m_star_branches[2])}},
                      {"M_star", bp.drift_ok ? nlohmann::ordered_json(bp.M_star) : nlohmann::ordered_json(nullptr)},
                      {"success_at_M_star", static_cast<double>(bp.success_at_m_star.value)},
                      {"success_raw", static_cast<double>(bp.success_at_m_star.raw)},
                      {"vacuous", bp.success_at_m_star.vacuous}};
    const OpportunityBound ob = opportunity_lower_bound(bp.probs, m);
    doc["opportunity"] = {{"M", m},
                          {"threshold", static_cast<double>(ob.threshold)},
                          {"success_probability", static_cast<double>(ob.success.value)},
                          {"vacuous", ob.success.vacuous}};
    if (cal != nullptr) {
      const GrowthBound g = expected_growth_general_p(n, p, t, cal->walk_envelope);
      doc["growth"] = {{"t", t},
                       {"growth_term", static_cast<double>(g.growth_term)},
                       {"slack_term", static_cast<double>(g.slack_term)},
                       {"regime", g.regime == GrowthRegime::kSparse ? "sparse" : "dense"}};
    }
  } else {
    doc["transition"] = nullptr;
    doc["note"] = "p outside (0, 1): transition probabilities and theorem bounds undefined";
  }
  if (cal != nullptr && p == 1.0) {
    const PrefixInterval iv = expected_prefix_p1(n, t, cal->walk_envelope);
    doc["prefix_p1"] = {{"t", t}, {"lo", static_cast<double>(iv.lo)}, {"hi", static_cast<double>(iv.hi)}};
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nakamoto-consensus simulator and bound calculator"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run a Monte Carlo experiment, write runs.csv and summary.csv");
  SpecSource run_src;
  run_src.attach(run_cmd);
  std::string run_out;
  bool run_audit = false;
  std::uint64_t max_replicas = 0;
  run_cmd->add_option("-o,--out", run_out, "output directory (overrides output_dir)");
  run_cmd->add_flag("--audit", run_audit, "recompute aggregates from raw rows and compare");
  run_cmd->add_option("--max-replicas", max_replicas, "cap replicas per cell");

  auto* list_cmd = app.add_subcommand("presets", "list preset names");

  auto* bounds_cmd = app.add_subcommand("bounds", "print closed-form bounds as JSON");
  std::int64_t bn = 20;
  std::int64_t bb = 4;
  double bp = 0.2;
  double beps = 0.1;
  std::uint64_t bm = 2000;
  std::int64_t bt = 1000;
  std::string bcal;
  bounds_cmd->add_option("-n", bn, "node count")->capture_default_str();
  bounds_cmd->add_option("-b", bb, "corrupt count")->capture_default_str();
  bounds_cmd->add_option("-p", bp, "mining probability")->capture_default_str();
  bounds_cmd->add_option("--eps", beps, "target failure probability")->capture_default_str();
  bounds_cmd->add_option("-M", bm, "nonempty rounds for the opportunity bound")->capture_default_str();
  bounds_cmd->add_option("-t", bt, "horizon for the growth and prefix bounds")->capture_default_str();
  bounds_cmd->add_option("--calibration", bcal, "calibration file (default: shipped)");

  auto* cal_cmd = app.add_subcommand("calibrate", "measure the calibration constants");
  std::uint64_t cal_seed = 20240601;
  std::uint64_t cal_reps = 20000;
  std::string cal_out = default_calibration_path();
  cal_cmd->add_option("--seed", cal_seed)->capture_default_str();
  cal_cmd->add_option("--replicas", cal_reps)->capture_default_str();
  cal_cmd->add_option("-o,--out", cal_out)->capture_default_str();

  auto* dot_cmd = app.add_subcommand("export-dot", "run one replica and write its block tree as DOT");
  SpecSource dot_src;
  dot_src.attach(dot_cmd);
  std::string dot_out = "-";
  dot_cmd->add_option("-o,--out", dot_out, "output file, - for stdout")->capture_default_str();

  auto* trace_cmd = app.add_subcommand("trace", "run one replica and write its per-round trace");
  SpecSource trace_src;
  trace_src.attach(trace_cmd);
  std::string trace_csv;
  std::string trace_json;
  trace_cmd->add_option("--csv", trace_csv, "CSV output file");
  trace_cmd->add_option("--json", trace_json, "JSON output file");

  CLI11_PARSE(app, argc, argv);

  try {
    const unsigned workers = default_workers();
    if (*list_cmd) {
      for (const std::string& name : preset_names()) std::cout << name << '\n';
      return 0;
    }
    if (*run_cmd) {
      ExperimentSpec spec = run_src.resolve();
      if (!run_out.empty()) spec.output_dir = run_out;
      if (max_replicas > 0) spec.replicas = std::min(spec.replicas, max_replicas);
      const ExperimentResult res = run_experiment(spec, workers);
      write_outputs(spec, res);
      write_summary_csv(std::cout, res);
      if (run_audit) {
        const bool ok = audit(res);
        std::cerr << "audit: " << (ok ? "aggregates match raw rows" : "MISMATCH") << '\n';
        if (!ok) return 3;
      }
      return 0;
    }
    if (*bounds_cmd) {
      const std::string path = bcal.empty() ? default_calibration_path() : bcal;
      std::optional<Calibration> cal;
      try {
        cal = load_calibration(path);
      } catch (const ConfigError& e) {
        if (!bcal.empty()) throw;
      }
      std::cout << bounds_json(bn, bb, bp, beps, bm, bt, cal ? &*cal : nullptr).dump(2) << '\n';
      return 0;
    }
    if (*cal_cmd) {
      const Calibration cal = compute_calibration(cal_seed, cal_reps, workers);
      save_calibration(cal_out, cal);
      std::cout << "walk_envelope " << cal.walk_envelope << "\np1_slope " << cal.p1_slope
                << "\nexact_four_walker " << cal.exact_four_walker << "\nwritten to " << cal_out << '\n';
      return 0;
    }
    if (*dot_cmd) {
      const ExperimentSpec spec = dot_src.resolve();
      Simulation sim(spec.base);
      const ProcessTrace tr = sim.finish();
      if (dot_out == "-") {
        write_dot(std::cout, sim.state().store, tr.final_tips);
      } else {
        std::ofstream out(dot_out);
        if (!out) throw ConfigError("cannot write " + dot_out);
        write_dot(out, sim.state().store, tr.final_tips);
      }
      return 0;
    }
    if (*trace_cmd) {
      const ExperimentSpec spec = trace_src.resolve();
      const ProcessTrace tr = run(spec.base);
      if (trace_csv.empty() && trace_json.empty()) write_trace_csv(std::cout, tr);
      if (!trace_csv.empty()) {
        std::ofstream out(trace_csv);
        if (!out) throw ConfigError("cannot write " + trace_csv);
        write_trace_csv(out, tr);
      }
      if (!trace_json.empty()) {
        std::ofstream out(trace_json);
        if (!out) throw ConfigError("cannot write " + trace_json);
        write_trace_json(out, tr);
      }
      return 0;
    }
  } catch (const nakasim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
