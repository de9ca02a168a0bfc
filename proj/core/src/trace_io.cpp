#include "nakasim/trace_io.hpp"

#include <ostream>
#include <string>

#include "json.hpp"

namespace nakasim {

void write_trace_csv(std::ostream& os, const ProcessTrace& trace) {
  os << "t,NB,AB,common_prefix_len,max_inconsistency,N,honest_max_len,adv_max_len\n";
  for (const RoundRecord& r : trace.rounds) {
    os << r.t << ',' << r.nb << ',' << r.ab << ',' << r.prefix.common_prefix_len << ','
       << r.prefix.max_inconsistency << ',' << r.advantage << ',' << r.honest_max_len << ','
       << r.adv_max_len << '\n';
  }
}

void write_trace_json(std::ostream& os, const ProcessTrace& trace) {
  using nlohmann::ordered_json;
  const SimConfig& c = trace.cfg;
  ordered_json doc;
  doc["schema"] = kTraceSchema;
  doc["config"] = {{"n", c.n},
                   {"b", c.b},
                   {"p", c.p},
                   {"T", c.T},
                   {"strategy", to_string(c.strategy)},
                   {"adversary", to_string(c.adversary)},
                   {"selective_relay", c.selective_relay},
                   {"vdf_mode", c.vdf_mode},
                   {"seed", c.seed}};
  ordered_json rounds = ordered_json::array();
  for (const RoundRecord& r : trace.rounds) {
    rounds.push_back({{"t", r.t},
                      {"NB", r.nb},
                      {"AB", r.ab},
                      {"common_prefix_len", r.prefix.common_prefix_len},
                      {"max_inconsistency", r.prefix.max_inconsistency},
                      {"prefix_tip", r.prefix.prefix_tip.value},
                      {"N", r.advantage},
                      {"J", r.opportunity},
                      {"m", r.nonempty},
                      {"honest_max_len", r.honest_max_len},
                      {"adv_max_len", r.adv_max_len},
                      {"rejected", r.rejected},
                      {"assumption_fallback", r.assumption_fallback}});
  }
  doc["rounds"] = std::move(rounds);
  ordered_json releases = ordered_json::array();
  for (const ReleaseLogEntry& e : trace.releases) {
    releases.push_back({{"round", e.round},
                        {"target", e.target},
                        {"tip", e.tip.value},
                        {"length", e.length},
                        {"rank", e.rank}});
  }
  doc["releases"] = std::move(releases);
  ordered_json rejects = ordered_json::array();
  for (const RejectLogEntry& e : trace.rejects) {
    rejects.push_back({{"round", e.round},
                       {"tip", e.tip.value},
                       {"reason", to_string(e.verdict)},
                       {"offender", e.offender.value}});
  }
  doc["rejects"] = std::move(rejects);
  const TraceSummary& s = trace.summary;
  doc["summary"] = {{"rounds", s.rounds},
                    {"final_prefix_len", s.final_prefix_len},
                    {"final_inconsistency", s.final_inconsistency},
                    {"peak_inconsistency", s.peak_inconsistency},
                    {"prefix_growth_rate", s.prefix_growth_rate},
                    {"chain_quality", s.chain_quality},
                    {"pair_inconsistency", s.pair_inconsistency},
                    {"honest_max_len", s.honest_max_len},
                    {"adv_max_len", s.adv_max_len},
                    {"N_final", s.advantage_final},
                    {"N_peak", s.advantage_peak},
                    {"J_final", s.opportunity_final},
                    {"nonempty_rounds", s.nonempty_rounds},
                    {"lead_violations", s.lead_violations},
                    {"spread_violations", s.spread_violations},
                    {"growth_violations", s.growth_violations},
                    {"length_violations", s.length_violations},
                    {"fallback_rounds", s.fallback_rounds},
                    {"rejected", s.rejected}};
  os << doc.dump(2) << '\n';
}

}  // namespace nakasim
