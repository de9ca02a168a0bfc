#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nakasim {

inline constexpr std::string_view kCalibrationSchema = "nakasim-calibration/1";

struct CalibrationPoint {
  std::uint32_t n = 0;
  double walk_mean = 0;      // mean coalescence_time(n, 1, n)
  double protocol_mean = 0;  // mean final max_inconsistency, p = 1, b = 0
};

/// Measured constants standing in for the unspecified Big-O constants.
struct Calibration {
  std::uint64_t seed = 0;
  std::uint64_t replicas = 0;
  std::vector<CalibrationPoint> points;
  double walk_envelope = 0;       // max over points of walk_mean / n
  double p1_slope = 0;            // least-squares slope of protocol_mean against n
  double exact_four_walker = 0;   // E[coalescence_time(4, 1, 4)], exact
};

/// Runs the walk oracle and the protocol at n in {4, 8, 16, 32}.
/// `workers` threads; the result does not depend on it.
Calibration compute_calibration(std::uint64_t seed, std::uint64_t replicas, unsigned workers);

void save_calibration(const std::string& path, const Calibration& cal);
/// Throws ConfigError when the file is missing, malformed or has another schema.
Calibration load_calibration(const std::string& path);

/// $NAKASIM_CALIBRATION when set, else the file shipped with the sources.
std::string default_calibration_path();

}  // namespace nakasim
