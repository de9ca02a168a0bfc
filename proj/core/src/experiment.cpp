#include "nakasim/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "nakasim/dot.hpp"
#include "nakasim/engine.hpp"
#include "nakasim/errors.hpp"
#include "nakasim/parallel.hpp"
#include "nakasim/stats.hpp"

namespace nakasim {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_int(std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ArgumentError("expected an unsigned integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_double(std::string_view v) {
  const std::string s(v);
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ArgumentError("expected a number, got '" + s + "'");
  return d;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ArgumentError("expected a boolean, got '" + std::string(v) + "'");
}

template <class T, class F>
std::vector<T> parse_list(std::string_view v, F&& item) {
  std::vector<T> out;
  while (!trim(v).empty()) {
    const auto comma = v.find(',');
    out.push_back(item(trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* fmt_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  SimConfig& c = spec.base;
  if (key == "name") {
    spec.name = std::string(value);
  } else if (key == "n") {
    c.n = parse_int<std::uint32_t>(value);
  } else if (key == "b") {
    c.b = parse_int<std::uint32_t>(value);
  } else if (key == "p") {
    c.p = parse_double(value);
  } else if (key == "T") {
    c.T = parse_int<std::uint32_t>(value);
  } else if (key == "strategy") {
    c.strategy = parse_strategy(value);
  } else if (key == "adversary") {
    c.adversary = parse_adversary(value);
  } else if (key == "selective_relay") {
    c.selective_relay = parse_bool(value);
  } else if (key == "vdf_mode") {
    c.vdf_mode = parse_bool(value);
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(value);
  } else if (key == "replicas") {
    spec.replicas = parse_int<std::uint64_t>(value);
    if (spec.replicas == 0) throw ArgumentError("replicas must be at least 1");
  } else if (key == "output_dir") {
    spec.output_dir = std::string(value);
  } else if (key == "calibration") {
    spec.calibration = std::string(value);
  } else if (key == "export_dot") {
    spec.export_dot = parse_bool(value);
  } else if (key == "sweep.n") {
    spec.sweep_n = parse_list<std::uint32_t>(value, parse_int<std::uint32_t>);
  } else if (key == "sweep.b") {
    spec.sweep_b = parse_list<std::uint32_t>(value, parse_int<std::uint32_t>);
  } else if (key == "sweep.p") {
    spec.sweep_p = parse_list<double>(value, parse_double);
  } else if (key == "sweep.strategy") {
    spec.sweep_strategy = parse_list<StrategyTag>(value, parse_strategy);
  } else if (key == "sweep.adversary") {
    spec.sweep_adversary = parse_list<AdversaryTag>(value, parse_adversary);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

ExperimentSpec parse_spec(std::istream& in, std::string_view source) {
  ExperimentSpec spec;
  std::vector<std::string> problems;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::string_view s(line);
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(lineno) + ": ";
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(where + "expected key = value");
      continue;
    }
    const std::string_view key = trim(s.substr(0, eq));
    try {
      apply_setting(spec, key, trim(s.substr(eq + 1)));
    } catch (const Error& e) {
      problems.push_back(where + "key '" + std::string(key) + "': " + e.what());
    }
  }
  if (problems.empty()) {
    try {
      spec.base.validate();
    } catch (const ConfigError& e) {
      problems.push_back(std::string(source) + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  return parse_spec(in, path);
}

std::vector<std::string> preset_names() {
  return {"fig1",          "coupling",          "warmup-scaling",       "adversary-advantage",
          "opportunity",   "general-p",         "chain-quality-nogate", "chain-quality-gate",
          "theorem-inconsistency", "strategies"};
}

ExperimentSpec preset(std::string_view name) {
  static const std::map<std::string, std::string, std::less<>> kPresets = {
      {"fig1", "n=4\nb=0\np=1\nT=8\nreplicas=1\nexport_dot=true\n"},
      {"coupling", "b=0\np=1\nT=200\nsweep.n=4,8\nreplicas=100000\n"},
      {"warmup-scaling", "b=0\np=1\nT=1000\nsweep.n=4,8,16,32\nreplicas=2000\n"},
      {"adversary-advantage",
       "n=32\nT=2000\nvdf_mode=true\nselective_relay=true\nsweep.b=4,8,15\nsweep.p=0.1,0.5\n"
       "sweep.adversary=none,private-chain,selective-release,lex-grind,first-seen-split\nreplicas=167\n"},
      {"opportunity", "n=20\nb=4\np=0.2\nT=2024\nadversary=private-chain\nreplicas=1000\n"},
      {"general-p", "n=100\nb=0\nT=5000\nsweep.p=0.001,0.01,0.1\nreplicas=1000\n"},
      {"chain-quality-nogate", "n=16\nb=8\np=0.9\nT=200\nadversary=private-chain\nreplicas=1000\n"},
      {"chain-quality-gate",
       "n=16\nb=8\np=0.9\nT=200\nadversary=private-chain\nvdf_mode=true\nselective_relay=true\nreplicas=1000\n"},
      {"theorem-inconsistency",
       "n=64\nb=8\np=0.05\nT=2000\nadversary=private-chain\nvdf_mode=true\nselective_relay=true\nreplicas=1000\n"},
      {"strategies", "n=16\nb=0\np=0.5\nT=500\nsweep.strategy=uniform,first-seen,lex-first,global-coin\nreplicas=200\n"},
  };
  const auto it = kPresets.find(name);
  if (it == kPresets.end()) throw ConfigError("unknown preset '" + std::string(name) + "'");
  std::istringstream in(it->second);
  ExperimentSpec spec = parse_spec(in, "preset:" + it->first);
  spec.name = it->first;
  spec.output_dir = "out/" + it->first;
  return spec;
}

std::vector<SimConfig> expand_cells(const ExperimentSpec& spec) {
  const SimConfig& base = spec.base;
  const auto ns = spec.sweep_n.value_or(std::vector<std::uint32_t>{base.n});
  const auto bs = spec.sweep_b.value_or(std::vector<std::uint32_t>{base.b});
  const auto ps = spec.sweep_p.value_or(std::vector<double>{base.p});
  const auto ss = spec.sweep_strategy.value_or(std::vector<StrategyTag>{base.strategy});
  const auto as = spec.sweep_adversary.value_or(std::vector<AdversaryTag>{base.adversary});
  std::vector<SimConfig> cells;
  for (std::uint32_t n : ns) {
    for (std::uint32_t b : bs) {
      if (b >= n) continue;
      for (double p : ps) {
        for (StrategyTag s : ss) {
          for (AdversaryTag a : as) {
            SimConfig c = base;
            c.n = n;
            c.b = b;
            c.p = p;
            c.strategy = s;
            c.adversary = a;
            c.validate();
            cells.push_back(c);
          }
        }
      }
    }
  }
  return cells;
}

CellSummary summarize(std::uint64_t cell, const SimConfig& cell_cfg, std::span<const RunRow> rows) {
  if (rows.empty()) throw ArgumentError("summarize: no rows");
  CellSummary s;
  s.cell = cell;
  s.cfg = cell_cfg;
  s.replicas = rows.size();
  std::vector<double> inc;
  std::vector<double> growth;
  std::vector<double> quality;
  std::vector<double> prefix;
  for (const RunRow& r : rows) {
    inc.push_back(r.max_inconsistency);
    growth.push_back(r.prefix_growth_rate);
    quality.push_back(r.chain_quality);
    prefix.push_back(r.final_prefix_len);
  }
  s.mean_inconsistency = mean(inc);
  s.stddev_inconsistency = stddev(inc);
  std::sort(inc.begin(), inc.end());
  s.q50_inconsistency = quantile_sorted(inc, 0.5);
  s.q90_inconsistency = quantile_sorted(inc, 0.9);
  s.q99_inconsistency = quantile_sorted(inc, 0.99);
  s.mean_growth_rate = mean(growth);
  s.mean_chain_quality = mean(quality);
  s.mean_prefix_len = mean(prefix);
  return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers) {
  const std::vector<SimConfig> cells = expand_cells(spec);
  const std::uint64_t reps = spec.replicas;
  struct Out {
    RunRow row;
    std::string dot;
  };
  std::vector<Out> outs = parallel_map<Out>(cells.size() * reps, workers, [&](std::uint64_t k) {
    const std::uint64_t cell = k / reps;
    const std::uint64_t replica = k % reps;
    SimConfig cfg = cells[cell];
    cfg.seed = derive_seed(spec.base.seed, cell, replica);
    Simulation sim(cfg, RunOptions{false, false});
    const ProcessTrace tr = sim.finish();
    Out o;
    RunRow& r = o.row;
    r.cell = cell;
    r.replica = replica;
    r.cfg = cfg;
    const TraceSummary& s = tr.summary;
    r.final_prefix_len = s.final_prefix_len;
    r.max_inconsistency = s.final_inconsistency;
    r.peak_inconsistency = s.peak_inconsistency;
    r.pair_inconsistency = s.pair_inconsistency;
    r.prefix_growth_rate = s.prefix_growth_rate;
    r.chain_quality = s.chain_quality;
    r.honest_max_len = s.honest_max_len;
    r.adv_max_len = s.adv_max_len;
    r.advantage_final = s.advantage_final;
    r.opportunity_final = s.opportunity_final;
    r.nonempty_rounds = s.nonempty_rounds;
    r.lead_violations = s.lead_violations;
    if (spec.export_dot && replica == 0) {
      std::ostringstream dot;
      write_dot(dot, sim.state().store, tr.final_tips);
      o.dot = dot.str();
    }
    return o;
  });
  ExperimentResult res;
  res.runs.reserve(outs.size());
  for (Out& o : outs) {
    if (spec.export_dot && o.row.replica == 0) res.dots.push_back(std::move(o.dot));
    res.runs.push_back(o.row);
  }
  for (std::uint64_t c = 0; c < cells.size(); ++c) {
    SimConfig cfg = cells[c];
    cfg.seed = spec.base.seed;
    res.cells.push_back(summarize(c, cfg, std::span(res.runs).subspan(c * reps, reps)));
  }
  return res;
}

bool audit(const ExperimentResult& result) {
  std::size_t pos = 0;
  for (const CellSummary& s : result.cells) {
    if (pos + s.replicas > result.runs.size()) return false;
    const CellSummary again = summarize(s.cell, s.cfg, std::span(result.runs).subspan(pos, s.replicas));
    pos += s.replicas;
    const bool same = again.mean_inconsistency == s.mean_inconsistency &&
                      again.stddev_inconsistency == s.stddev_inconsistency &&
                      again.q50_inconsistency == s.q50_inconsistency &&
                      again.q90_inconsistency == s.q90_inconsistency &&
                      again.q99_inconsistency == s.q99_inconsistency &&
                      again.mean_growth_rate == s.mean_growth_rate &&
                      again.mean_chain_quality == s.mean_chain_quality &&
                      again.mean_prefix_len == s.mean_prefix_len;
    if (!same) return false;
  }
  return pos == result.runs.size();
}

void write_runs_csv(std::ostream& os, const ExperimentResult& result) {
  os << "# schema: " << kRunsSchema << '\n';
  os << "cell,replica,seed,n,b,p,T,strategy,adversary,selective_relay,vdf_mode,final_prefix_len,"
        "max_inconsistency,peak_inconsistency,pair_inconsistency,prefix_growth_rate,chain_quality,"
        "honest_max_len,adv_max_len,N_final,J_final,nonempty_rounds,lead_violations\n";
  for (const RunRow& r : result.runs) {
    const SimConfig& c = r.cfg;
    os << r.cell << ',' << r.replica << ',' << c.seed << ',' << c.n << ',' << c.b << ',' << fmt_double(c.p)
       << ',' << c.T << ',' << to_string(c.strategy) << ',' << to_string(c.adversary) << ','
       << fmt_bool(c.selective_relay) << ',' << fmt_bool(c.vdf_mode) << ',' << r.final_prefix_len << ','
       << r.max_inconsistency << ',' << r.peak_inconsistency << ',' << r.pair_inconsistency << ','
       << fmt_double(r.prefix_growth_rate) << ',' << fmt_double(r.chain_quality) << ',' << r.honest_max_len
       << ',' << r.adv_max_len << ',' << r.advantage_final << ',' << r.opportunity_final << ','
       << r.nonempty_rounds << ',' << r.lead_violations << '\n';
  }
}

void write_summary_csv(std::ostream& os, const ExperimentResult& result) {
  os << "# schema: " << kSummarySchema << '\n';
  os << "cell,n,b,p,T,strategy,adversary,selective_relay,vdf_mode,seed,replicas,mean_inconsistency,"
        "stddev_inconsistency,q50_inconsistency,q90_inconsistency,q99_inconsistency,mean_growth_rate,"
        "mean_chain_quality,mean_prefix_len\n";
  for (const CellSummary& s : result.cells) {
    const SimConfig& c = s.cfg;
    os << s.cell << ',' << c.n << ',' << c.b << ',' << fmt_double(c.p) << ',' << c.T << ','
       << to_string(c.strategy) << ',' << to_string(c.adversary) << ',' << fmt_bool(c.selective_relay) << ','
       << fmt_bool(c.vdf_mode) << ',' << c.seed << ',' << s.replicas << ',' << fmt_double(s.mean_inconsistency)
       << ',' << fmt_double(s.stddev_inconsistency) << ',' << fmt_double(s.q50_inconsistency) << ','
       << fmt_double(s.q90_inconsistency) << ',' << fmt_double(s.q99_inconsistency) << ','
       << fmt_double(s.mean_growth_rate) << ',' << fmt_double(s.mean_chain_quality) << ','
       << fmt_double(s.mean_prefix_len) << '\n';
  }
}

void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + spec.output_dir + ": " + ec.message());
  auto open = [&](const std::string& file) {
    std::ofstream out(fs::path(spec.output_dir) / file);
    if (!out) throw ConfigError("cannot write " + (fs::path(spec.output_dir) / file).string());
    return out;
  };
  {
    auto out = open("runs.csv");
    write_runs_csv(out, result);
  }
  {
    auto out = open("summary.csv");
    write_summary_csv(out, result);
  }
  for (std::size_t c = 0; c < result.dots.size(); ++c) {
    auto out = open(spec.name + "_cell" + std::to_string(c) + ".dot");
    out << result.dots[c];
  }
}

}  // namespace nakasim
