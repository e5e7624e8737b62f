#pragma once

#include <iosfwd>
#include <string>

#include "ringdisp/engine.hpp"

namespace ringdisp {

inline constexpr int kTraceFormatVersion = 1;

/// Line-delimited JSON. First line is a versioned header carrying the
/// scenario and ruleset, then one object per round, then a footer with the outcome:
///
///   {"format":"ringdisp-trace","version":1,"n":..,"maxlabel":..,"ruleset":..,"verbose":..,"robots":[..]}
///   {"round":0,"phase":1,"rip":1,"moves":[{"label":1,"from":0,"to":1,"port":1}]}
///   {"end":true,"outcome":"Dispersed","rounds":95,"phases":5}
///
/// With `verbose`, every round also carries a "robots" array with the
/// per-robot status, leader flag, cursor, pending status and observation.
void writeTrace(std::ostream& out, const Trace& trace, bool verbose);
std::string traceToString(const Trace& trace, bool verbose);
void saveTraceFile(const Trace& trace, const std::string& path, bool verbose);

/// Throws TraceError on malformed input. A missing footer is not an error
/// here; validateTrace reports it as truncation.
Trace readTrace(std::istream& in);
Trace parseTrace(const std::string& text);
Trace loadTraceFile(const std::string& path);

}  // namespace ringdisp
