#include "nakasim/config.hpp"

#include <cmath>
#include <cstdio>

#include "nakasim/errors.hpp"

namespace nakasim {

std::string_view to_string(AdversaryTag tag) noexcept {
  switch (tag) {
    case AdversaryTag::kNone: return "none";
    case AdversaryTag::kPrivateChain: return "private-chain";
    case AdversaryTag::kSelectiveRelease: return "selective-release";
    case AdversaryTag::kLexGrind: return "lex-grind";
    case AdversaryTag::kFirstSeenSplit: return "first-seen-split";
  }
  return "?";
}

AdversaryTag parse_adversary(std::string_view name) {
  if (name == "none") return AdversaryTag::kNone;
  if (name == "private-chain") return AdversaryTag::kPrivateChain;
  if (name == "selective-release") return AdversaryTag::kSelectiveRelease;
  if (name == "lex-grind") return AdversaryTag::kLexGrind;
  if (name == "first-seen-split") return AdversaryTag::kFirstSeenSplit;
  throw ArgumentError("unknown adversary '" + std::string(name) + "'");
}

void SimConfig::validate() const {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (b >= n) throw ConfigError("b must be below n");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  if (T < 1) throw ConfigError("T must be at least 1");
}

std::string describe(const SimConfig& cfg) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", cfg.p);
  std::string s;
  s += "n=" + std::to_string(cfg.n);
  s += " b=" + std::to_string(cfg.b);
  s += " p=" + std::string(buf);
  s += " T=" + std::to_string(cfg.T);
  s += " strategy=" + std::string(to_string(cfg.strategy));
  s += " adversary=" + std::string(to_string(cfg.adversary));
  s += " selective_relay=" + std::string(cfg.selective_relay ? "true" : "false");
  s += " vdf_mode=" + std::string(cfg.vdf_mode ? "true" : "false");
  s += " seed=" + std::to_string(cfg.seed);
  return s;
}

}  // namespace nakasim
