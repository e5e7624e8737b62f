#include "ringdisp/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ringdisp/errors.hpp"

namespace ringdisp {

bool Scenario::singleSource() const {
  return !robots.empty() && std::all_of(robots.begin(), robots.end(),
                                        [&](const RobotSpec& r) { return r.node == robots.front().node; });
}

void validateScenario(const Scenario& s) {
  if (s.n < 3) throw ScenarioError(0, "ring-size", "ring needs at least 3 nodes");
  if (s.robots.empty()) throw ScenarioError(0, "robot-count", "at least one robot required");
  if (s.robots.size() >= s.n) throw ScenarioError(0, "robot-count", "k < n required");
  std::set<std::uint64_t> seen;
  for (const RobotSpec& r : s.robots) {
    if (r.label.value > s.maxLabel) {
      throw ScenarioError(0, "label-range",
                          "label " + std::to_string(r.label.value) + " exceeds maxlabel " + std::to_string(s.maxLabel));
    }
    if (!seen.insert(r.label.value).second) {
      throw ScenarioError(0, "duplicate-label", "duplicate label " + std::to_string(r.label.value));
    }
    if (r.node >= s.n) {
      throw ScenarioError(0, "node-range", "node " + std::to_string(r.node) + " outside ring");
    }
  }
}

std::vector<std::string> scenarioWarnings(const Scenario& s) {
  std::vector<std::string> out;
  if (s.maxLabel < s.robots.size()) {
    out.push_back("maxlabel " + std::to_string(s.maxLabel) + " is below k = " + std::to_string(s.robots.size()));
  }
  return out;
}

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t number(std::string_view tok, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ScenarioError(line, "syntax", std::string("expected non-negative integer for ") + what + ", got '" +
                                            std::string(tok) + "'");
  }
  return v;
}

}  // namespace

Scenario parseScenario(std::string_view text) {
  Scenario s;
  bool haveRing = false;
  bool haveMaxLabel = false;
  std::set<std::uint64_t> labels;
  std::vector<std::size_t> robotLines;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = tokens(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tok[0] == "ring") {
      if (tok.size() != 2) throw ScenarioError(lineNo, "syntax", "expected 'ring <n>'");
      if (haveRing) throw ScenarioError(lineNo, "syntax", "ring declared twice");
      const auto n = number(tok[1], lineNo, "ring size");
      if (n < 3) throw ScenarioError(lineNo, "ring-size", "ring needs at least 3 nodes");
      if (n > UINT32_MAX) throw ScenarioError(lineNo, "ring-size", "ring too large");
      s.n = static_cast<std::uint32_t>(n);
      haveRing = true;
    } else if (tok[0] == "maxlabel") {
      if (tok.size() != 2) throw ScenarioError(lineNo, "syntax", "expected 'maxlabel <L>'");
      if (haveMaxLabel) throw ScenarioError(lineNo, "syntax", "maxlabel declared twice");
      s.maxLabel = number(tok[1], lineNo, "maxlabel");
      haveMaxLabel = true;
    } else if (tok[0] == "robot") {
      if (tok.size() != 3) throw ScenarioError(lineNo, "syntax", "expected 'robot <label> <node>'");
      const auto label = number(tok[1], lineNo, "label");
      const auto node = number(tok[2], lineNo, "node");
      if (!labels.insert(label).second) {
        throw ScenarioError(lineNo, "duplicate-label", "duplicate label " + std::to_string(label));
      }
      if (node > UINT32_MAX) throw ScenarioError(lineNo, "node-range", "node out of range");
      s.robots.push_back(RobotSpec{Label{label}, static_cast<NodeIndex>(node)});
      robotLines.push_back(lineNo);
    } else {
      throw ScenarioError(lineNo, "syntax", "unknown directive '" + std::string(tok[0]) + "'");
    }
    if (end == text.size()) break;
  }
  if (!haveRing) throw ScenarioError(0, "syntax", "missing 'ring' directive");
  if (!haveMaxLabel) throw ScenarioError(0, "syntax", "missing 'maxlabel' directive");
  if (s.robots.empty()) throw ScenarioError(0, "robot-count", "at least one robot required");
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const auto& r = s.robots[i];
    if (r.label.value > s.maxLabel) {
      throw ScenarioError(robotLines[i], "label-range",
                          "label " + std::to_string(r.label.value) + " exceeds maxlabel " + std::to_string(s.maxLabel));
    }
    if (r.node >= s.n) {
      throw ScenarioError(robotLines[i], "node-range",
                          "node " + std::to_string(r.node) + " outside ring of size " + std::to_string(s.n));
    }
  }
  if (s.robots.size() >= s.n) {
    throw ScenarioError(robotLines[s.n - 1], "robot-count", "k < n required");
  }
  return s;
}

std::string renderScenario(const Scenario& s) {
  std::ostringstream out;
  out << "ring " << s.n << "\n";
  out << "maxlabel " << s.maxLabel << "\n";
  for (const RobotSpec& r : s.robots) out << "robot " << r.label.value << " " << r.node << "\n";
  return out.str();
}

Scenario loadScenarioFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(0, "io", "cannot read scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parseScenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(e.line(), e.rule(), path + ": " + e.what());
  }
}

void saveScenarioFile(const Scenario& s, const std::string& path, std::string_view comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError(0, "io", "cannot write scenario file " + path);
  std::istringstream lines{std::string(comment)};
  for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
  out << renderScenario(s);
}

namespace {

// Portable bounded draw: std::uniform_int_distribution differs between standard libraries.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::vector<std::uint64_t> distinctLabels(std::mt19937_64& rng, std::uint32_t k, std::uint64_t maxLabel) {
  if (maxLabel != UINT64_MAX && k > maxLabel + 1) {
    throw ScenarioError(0, "label-range", "cannot draw " + std::to_string(k) + " distinct labels from [0, " +
                                              std::to_string(maxLabel) + "]");
  }
  std::vector<std::uint64_t> out;
  if (maxLabel < 4096) {
    std::vector<std::uint64_t> pool(maxLabel + 1);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::uint32_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + draw(rng, pool.size() - i)]);
    out.assign(pool.begin(), pool.begin() + k);
  } else {
    std::set<std::uint64_t> chosen;
    while (chosen.size() < k) {
      const std::uint64_t v = maxLabel == UINT64_MAX ? rng() : draw(rng, maxLabel + 1);
      if (chosen.insert(v).second) out.push_back(v);
    }
  }
  return out;
}

void requireFeasible(std::uint32_t n, std::uint32_t k) {
  if (n < 3) throw ScenarioError(0, "ring-size", "ring needs at least 3 nodes");
  if (k == 0) throw ScenarioError(0, "robot-count", "at least one robot required");
  if (k >= n) throw ScenarioError(0, "robot-count", "k < n required");
}

}  // namespace

Scenario genSingleSource(std::uint32_t n, std::uint32_t k, std::uint64_t maxLabel, std::uint64_t seed) {
  requireFeasible(n, k);
  std::mt19937_64 rng(seed);
  auto labels = distinctLabels(rng, k, maxLabel);
  std::sort(labels.begin(), labels.end());
  Scenario s{n, maxLabel, {}};
  for (auto l : labels) s.robots.push_back(RobotSpec{Label{l}, 0});
  return s;
}

Scenario genMultiSource(std::uint32_t n, std::uint32_t k, std::uint64_t maxLabel, std::uint32_t maxGroups,
                        std::uint64_t seed) {
  requireFeasible(n, k);
  if (maxGroups == 0 || maxGroups > k) {
    throw ScenarioError(0, "group-count", "maxGroups must lie in [1, k]");
  }
  std::mt19937_64 rng(seed);
  const auto groups = static_cast<std::uint32_t>(1 + draw(rng, maxGroups));

  std::vector<NodeIndex> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  for (std::uint32_t i = 0; i < groups; ++i) std::swap(nodes[i], nodes[i + draw(rng, n - i)]);
  nodes.resize(groups);
  std::sort(nodes.begin(), nodes.end());

  // Random composition of k into `groups` positive parts: choose groups-1 cut points in 1..k-1.
  std::vector<std::uint32_t> cuts(k - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  for (std::uint32_t i = 0; i + 1 < groups; ++i) std::swap(cuts[i], cuts[i + draw(rng, cuts.size() - i)]);
  cuts.resize(groups - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(k);

  const auto labels = distinctLabels(rng, k, maxLabel);
  Scenario s{n, maxLabel, {}};
  std::uint32_t begin = 0;
  for (std::uint32_t g = 0; g < groups; ++g) {
    for (std::uint32_t i = begin; i < cuts[g]; ++i) s.robots.push_back(RobotSpec{Label{labels[i]}, nodes[g]});
    begin = cuts[g];
  }
  return s;
}

Scenario genChain(const std::vector<std::uint32_t>& groupSizes, std::uint32_t gap, std::uint32_t n,
                  std::uint64_t maxLabel) {
  if (groupSizes.empty()) throw ScenarioError(0, "group-count", "chain needs at least one group");
  if (std::find(groupSizes.begin(), groupSizes.end(), 0U) != groupSizes.end()) {
    throw ScenarioError(0, "group-count", "chain groups must be non-empty");
  }
  const auto k = std::accumulate(groupSizes.begin(), groupSizes.end(), 0U);
  requireFeasible(n, k);
  const auto p = static_cast<std::uint32_t>(groupSizes.size());
  if (gap == 0 || n < p + gap) {
    throw ScenarioError(0, "ring-size", "ring of " + std::to_string(n) + " cannot hold " + std::to_string(p) +
                                            " groups and " + std::to_string(gap) + " empty nodes");
  }
  if (k - 1 > maxLabel) throw ScenarioError(0, "label-range", "maxlabel too small for chain labels 0..k-1");
  Scenario s{n, maxLabel, {}};
  std::uint64_t label = 0;
  for (std::uint32_t g = 0; g < p; ++g) {
    for (std::uint32_t i = 0; i < groupSizes[g]; ++i) s.robots.push_back(RobotSpec{Label{label++}, g});
  }
  return s;
}

}  // namespace ringdisp
