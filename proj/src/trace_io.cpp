#include "ringdisp/trace_io.hpp"

#include <fstream>
#include "json.hpp"
#include <sstream>

#include "ringdisp/errors.hpp"

namespace ringdisp {

using nlohmann::json;

namespace {

json headerJson(const Trace& t, bool verbose) {
  json robots = json::array();
  for (const RobotSpec& r : t.scenario.robots) robots.push_back({{"label", r.label.value}, {"node", r.node}});
  return json{{"format", "ringdisp-trace"},
              {"version", kTraceFormatVersion},
              {"n", t.scenario.n},
              {"maxlabel", t.scenario.maxLabel},
              {"ruleset", std::string(toString(t.ruleset))},
              {"verbose", verbose && t.detailed},
              {"robots", robots}};
}

json recordJson(const TraceRecord& rec, bool verbose) {
  json moves = json::array();
  for (const RobotRecord& r : rec.robots) {
    if (!r.port) continue;
    moves.push_back({{"label", r.label.value}, {"from", r.from}, {"to", r.to}, {"port", static_cast<int>(*r.port)}});
  }
  json j{{"round", rec.globalRound}, {"phase", rec.phase}, {"rip", rec.roundInPhase}, {"moves", moves}};
  if (verbose) {
    json robots = json::array();
    for (const RobotRecord& r : rec.robots) {
      robots.push_back({{"label", r.label.value},
                        {"status", std::string(toString(r.status))},
                        {"leader", r.leader},
                        {"disp_bit", r.dispBit},
                        {"pending", r.pendingAfter ? json(std::string(toString(*r.pendingAfter))) : json(nullptr)},
                        {"alone", r.obs.alone},
                        {"inc", r.obs.increase},
                        {"dec", r.obs.decrease},
                        {"at", r.from}});
    }
    j["robots"] = robots;
    j["occupancy"] = rec.occupancy;
  }
  return j;
}

template <class T>
T field(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key)) throw TraceError("trace line " + std::to_string(line) + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw TraceError("trace line " + std::to_string(line) + ": bad '" + key + "': " + e.what());
  }
}

Status statusField(const json& j, const char* key, std::size_t line) {
  const auto text = field<std::string>(j, key, line);
  const auto s = statusFromString(text);
  if (!s) throw TraceError("trace line " + std::to_string(line) + ": unknown status '" + text + "'");
  return *s;
}

}  // namespace

void writeTrace(std::ostream& out, const Trace& trace, bool verbose) {
  verbose = verbose && trace.detailed;
  out << headerJson(trace, verbose).dump() << "\n";
  for (const TraceRecord& rec : trace.records) out << recordJson(rec, verbose).dump() << "\n";
  if (trace.footer) {
    out << json{{"end", true},
                {"outcome", std::string(toString(trace.footer->result))},
                {"rounds", trace.footer->roundsUsed},
                {"phases", trace.footer->phasesUsed}}
               .dump()
        << "\n";
  }
}

std::string traceToString(const Trace& trace, bool verbose) {
  std::ostringstream out;
  writeTrace(out, trace, verbose);
  return out.str();
}

void saveTraceFile(const Trace& trace, const std::string& path, bool verbose) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError("cannot write trace file " + path);
  writeTrace(out, trace, verbose);
}

Trace readTrace(std::istream& in) {
  Trace t;
  std::string line;
  std::size_t lineNo = 0;
  bool haveHeader = false;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw TraceError("trace line " + std::to_string(lineNo) + ": invalid JSON: " + e.what());
    }
    if (!haveHeader) {
      if (field<std::string>(j, "format", lineNo) != "ringdisp-trace") throw TraceError("not a ringdisp trace");
      const int version = field<int>(j, "version", lineNo);
      if (version != kTraceFormatVersion) {
        throw TraceError("unsupported trace version " + std::to_string(version));
      }
      t.scenario.n = field<std::uint32_t>(j, "n", lineNo);
      t.scenario.maxLabel = field<std::uint64_t>(j, "maxlabel", lineNo);
      const auto rs = rulesetFromString(field<std::string>(j, "ruleset", lineNo));
      if (!rs) throw TraceError("trace header: unknown ruleset");
      t.ruleset = *rs;
      t.detailed = field<bool>(j, "verbose", lineNo);
      for (const json& r : field<json>(j, "robots", lineNo)) {
        t.scenario.robots.push_back(
            RobotSpec{Label{field<std::uint64_t>(r, "label", lineNo)}, field<NodeIndex>(r, "node", lineNo)});
      }
      haveHeader = true;
      continue;
    }
    if (t.footer) throw TraceError("trace line " + std::to_string(lineNo) + ": data after end record");
    if (j.contains("end")) {
      const auto outcome = runResultFromString(field<std::string>(j, "outcome", lineNo));
      if (!outcome) throw TraceError("trace line " + std::to_string(lineNo) + ": unknown outcome");
      t.footer =
          TraceFooter{*outcome, field<std::uint64_t>(j, "rounds", lineNo), field<std::uint32_t>(j, "phases", lineNo)};
      continue;
    }
    TraceRecord rec;
    rec.globalRound = field<std::uint64_t>(j, "round", lineNo);
    rec.phase = field<std::uint32_t>(j, "phase", lineNo);
    rec.roundInPhase = field<std::uint32_t>(j, "rip", lineNo);
    const std::size_t k = t.scenario.robots.size();
    rec.robots.assign(k, RobotRecord{});
    for (std::size_t i = 0; i < k; ++i) rec.robots[i].label = t.scenario.robots[i].label;
    auto indexOf = [&](std::uint64_t label) -> std::size_t {
      for (std::size_t i = 0; i < k; ++i) {
        if (t.scenario.robots[i].label.value == label) return i;
      }
      throw TraceError("trace line " + std::to_string(lineNo) + ": unknown label " + std::to_string(label));
    };
    if (t.detailed) {
      const json& robots = field<json>(j, "robots", lineNo);
      if (robots.size() != k) throw TraceError("trace line " + std::to_string(lineNo) + ": robot count mismatch");
      for (const json& r : robots) {
        RobotRecord& rr = rec.robots[indexOf(field<std::uint64_t>(r, "label", lineNo))];
        rr.status = statusField(r, "status", lineNo);
        rr.leader = field<bool>(r, "leader", lineNo);
        rr.dispBit = field<std::uint32_t>(r, "disp_bit", lineNo);
        if (!r.contains("pending")) throw TraceError("trace line " + std::to_string(lineNo) + ": missing 'pending'");
        if (!r.at("pending").is_null()) rr.pendingAfter = statusField(r, "pending", lineNo);
        rr.obs.alone = field<bool>(r, "alone", lineNo);
        rr.obs.increase = field<bool>(r, "inc", lineNo);
        rr.obs.decrease = field<bool>(r, "dec", lineNo);
        rr.obs.roundInPhase = rec.roundInPhase;
        rr.from = field<NodeIndex>(r, "at", lineNo);
        rr.to = rr.from;
      }
      rec.occupancy = field<std::vector<std::uint32_t>>(j, "occupancy", lineNo);
    }
    for (const json& m : field<json>(j, "moves", lineNo)) {
      RobotRecord& rr = rec.robots[indexOf(field<std::uint64_t>(m, "label", lineNo))];
      const int port = field<int>(m, "port", lineNo);
      if (port != 0 && port != 1) throw TraceError("trace line " + std::to_string(lineNo) + ": port must be 0 or 1");
      rr.port = static_cast<Port>(port);
      rr.from = field<NodeIndex>(m, "from", lineNo);
      rr.to = field<NodeIndex>(m, "to", lineNo);
    }
    t.records.push_back(std::move(rec));
  }
  if (!haveHeader) throw TraceError("empty trace");
  return t;
}

Trace parseTrace(const std::string& text) {
  std::istringstream in(text);
  return readTrace(in);
}

Trace loadTraceFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot read trace file " + path);
  return readTrace(in);
}

}  // namespace ringdisp
