#include "nakasim/parallel.hpp"

#include <cstdlib>
#include <string>

namespace nakasim {

unsigned default_workers() {
  if (const char* env = std::getenv("NAKASIM_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace nakasim
