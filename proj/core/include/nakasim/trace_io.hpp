#pragma once

#include <iosfwd>
#include <string_view>

#include "nakasim/engine.hpp"

namespace nakasim {

inline constexpr std::string_view kTraceSchema = "nakasim-trace/1";

/// Header `t,NB,AB,common_prefix_len,max_inconsistency,N,honest_max_len,adv_max_len`,
/// one row per recorded round.
void write_trace_csv(std::ostream& os, const ProcessTrace& trace);

/// Config, per-round records, release and reject logs, and the summary.
void write_trace_json(std::ostream& os, const ProcessTrace& trace);

}  // namespace nakasim
