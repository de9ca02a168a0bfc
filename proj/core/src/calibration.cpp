#include "nakasim/calibration.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "json.hpp"
#include "nakasim/engine.hpp"
#include "nakasim/errors.hpp"
#include "nakasim/parallel.hpp"
#include "nakasim/stats.hpp"
#include "nakasim/walk.hpp"

#ifndef NAKASIM_DATA_DIR
#define NAKASIM_DATA_DIR "data"
#endif

namespace nakasim {

namespace {
constexpr std::uint32_t kCalibrationSizes[] = {4, 8, 16, 32};
}

Calibration compute_calibration(std::uint64_t seed, std::uint64_t replicas, unsigned workers) {
  if (replicas == 0) throw ArgumentError("compute_calibration: replicas must be positive");
  Calibration cal;
  cal.seed = seed;
  cal.replicas = replicas;
  std::vector<double> xs;
  std::vector<double> ys;
  std::uint64_t cell = 0;
  for (std::uint32_t n : kCalibrationSizes) {
    const std::vector<double> walk = parallel_map<double>(replicas, workers, [&](std::uint64_t r) {
      RandomStream rng(derive_seed(seed, cell, r), StreamTag::kWalk);
      return static_cast<double>(coalescence_time(n, 1.0, n, rng));
    });
    const std::vector<double> proto = parallel_map<double>(replicas, workers, [&](std::uint64_t r) {
      SimConfig cfg;
      cfg.n = n;
      cfg.p = 1.0;
      cfg.T = 20 * n + 40;  // far beyond the coalescence tail
      cfg.seed = derive_seed(seed, cell + 1, r);
      return static_cast<double>(run(cfg, RunOptions{false, false}).summary.final_inconsistency);
    });
    cell += 2;
    CalibrationPoint pt{n, mean(walk), mean(proto)};
    cal.points.push_back(pt);
    cal.walk_envelope = std::max(cal.walk_envelope, pt.walk_mean / n);
    xs.push_back(n);
    ys.push_back(pt.protocol_mean);
  }
  cal.p1_slope = fit_through_origin(xs, ys).slope;
  cal.exact_four_walker = static_cast<double>(expected_coalescence_time(4, 1.0, 4));
  return cal;
}

void save_calibration(const std::string& path, const Calibration& cal) {
  nlohmann::ordered_json doc;
  doc["schema"] = kCalibrationSchema;
  doc["seed"] = cal.seed;
  doc["replicas"] = cal.replicas;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const CalibrationPoint& p : cal.points) {
    pts.push_back({{"n", p.n}, {"walk_mean", p.walk_mean}, {"protocol_mean", p.protocol_mean}});
  }
  doc["points"] = std::move(pts);
  doc["walk_envelope"] = cal.walk_envelope;
  doc["p1_slope"] = cal.p1_slope;
  doc["exact_four_walker"] = cal.exact_four_walker;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write calibration file " + path);
  out << doc.dump(2) << '\n';
}

Calibration load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read calibration file " + path);
  try {
    const auto doc = nlohmann::json::parse(in);
    if (doc.at("schema").get<std::string>() != kCalibrationSchema) {
      throw ConfigError("calibration file " + path + " has an unknown schema");
    }
    Calibration cal;
    cal.seed = doc.at("seed").get<std::uint64_t>();
    cal.replicas = doc.at("replicas").get<std::uint64_t>();
    for (const auto& p : doc.at("points")) {
      cal.points.push_back(CalibrationPoint{p.at("n").get<std::uint32_t>(), p.at("walk_mean").get<double>(),
                                            p.at("protocol_mean").get<double>()});
    }
    cal.walk_envelope = doc.at("walk_envelope").get<double>();
    cal.p1_slope = doc.at("p1_slope").get<double>();
    cal.exact_four_walker = doc.at("exact_four_walker").get<double>();
    return cal;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed calibration file " + path + ": " + e.what());
  }
}

std::string default_calibration_path() {
  if (const char* env = std::getenv("NAKASIM_CALIBRATION"); env != nullptr && *env != '\0') return env;
  return std::string(NAKASIM_DATA_DIR) + "/calibration.json";
}

}  // namespace nakasim
