#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nakasim/config.hpp"

namespace nakasim {

inline constexpr std::string_view kRunsSchema = "nakasim-runs/1";
inline constexpr std::string_view kSummarySchema = "nakasim-summary/1";

/// A batch: a base config, optional sweep axes, and replicas per cell.
/// An absent axis keeps the base value; an axis given as an empty list
/// yields no cells.
struct ExperimentSpec {
  std::string name = "experiment";
  SimConfig base;
  std::optional<std::vector<std::uint32_t>> sweep_n;
  std::optional<std::vector<std::uint32_t>> sweep_b;
  std::optional<std::vector<double>> sweep_p;
  std::optional<std::vector<StrategyTag>> sweep_strategy;
  std::optional<std::vector<AdversaryTag>> sweep_adversary;
  std::uint64_t replicas = 1;
  std::string output_dir = "out";
  std::string calibration;  // empty: the shipped file
  bool export_dot = false;  // DOT of replica 0 of every cell
};

/// Parses `key = value` lines; `#` starts a comment. Every bad line is
/// reported in one ConfigError, each as "<source>:<line>: <problem>".
ExperimentSpec parse_spec(std::istream& in, std::string_view source = "<config>");
ExperimentSpec load_spec(const std::string& path);
/// Applies one `key=value` override (same keys as the file format).
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ExperimentSpec preset(std::string_view name);

/// Cartesian product of the axes (n outermost, then b, p, strategy,
/// adversary); combinations with b >= n are skipped.
std::vector<SimConfig> expand_cells(const ExperimentSpec& spec);

struct RunRow {
  std::uint64_t cell = 0;
  std::uint64_t replica = 0;
  SimConfig cfg;  // cfg.seed is the replica seed
  std::uint32_t final_prefix_len = 1;
  std::uint32_t max_inconsistency = 0;   // at T
  std::uint32_t peak_inconsistency = 0;  // over all rounds
  std::uint32_t pair_inconsistency = 0;
  double prefix_growth_rate = 0;
  double chain_quality = 1;
  std::uint32_t honest_max_len = 1;
  std::uint32_t adv_max_len = 1;
  std::uint32_t advantage_final = 0;
  std::int64_t opportunity_final = 0;
  std::uint64_t nonempty_rounds = 0;
  std::uint64_t lead_violations = 0;
};

struct CellSummary {
  std::uint64_t cell = 0;
  SimConfig cfg;  // cfg.seed is the base seed
  std::uint64_t replicas = 0;
  double mean_inconsistency = 0;
  double stddev_inconsistency = 0;
  double q50_inconsistency = 0;
  double q90_inconsistency = 0;
  double q99_inconsistency = 0;
  double mean_growth_rate = 0;
  double mean_chain_quality = 0;
  double mean_prefix_len = 0;
};

struct ExperimentResult {
  std::vector<RunRow> runs;        // ordered by (cell, replica)
  std::vector<CellSummary> cells;  // ordered by cell
  std::vector<std::string> dots;   // per cell when export_dot
};

/// Seed of replica i in cell j is derive_seed(base.seed, j, i).
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers);

/// Aggregates rows of one cell (rows must be non-empty).
CellSummary summarize(std::uint64_t cell, const SimConfig& cell_cfg, std::span<const RunRow> rows);
/// Recomputes every aggregate from the raw rows; true when all match.
bool audit(const ExperimentResult& result);

void write_runs_csv(std::ostream& os, const ExperimentResult& result);
void write_summary_csv(std::ostream& os, const ExperimentResult& result);

/// Writes runs.csv, summary.csv (and DOT files) under spec.output_dir.
/// Throws ConfigError when the directory cannot be created or written.
void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result);

}  // namespace nakasim
