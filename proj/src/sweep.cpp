#include "ringdisp/sweep.hpp"

#include <Eigen/Dense>
#include <ostream>
#include <sstream>

#include "ringdisp/errors.hpp"
#include "ringdisp/parallel.hpp"

namespace ringdisp {

std::string_view toString(SweepAxis a) {
  switch (a) {
    case SweepAxis::K: return "k";
    case SweepAxis::L: return "L";
    case SweepAxis::N: return "n";
  }
  return "?";
}

std::optional<SweepAxis> sweepAxisFromString(std::string_view text) {
  if (text == "k") return SweepAxis::K;
  if (text == "L" || text == "l") return SweepAxis::L;
  if (text == "n") return SweepAxis::N;
  return std::nullopt;
}

std::vector<std::uint64_t> sweepValues(const SweepSpec& spec) {
  if (spec.step == 0) throw ConfigurationError("sweep step must be positive");
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = spec.from; v <= spec.to; v += spec.step) {
    out.push_back(v);
    if (spec.to - v < spec.step) break;
  }
  return out;
}

namespace {

SweepRow runPoint(const SweepSpec& spec, std::uint64_t value, std::uint64_t seed) {
  SweepRow row;
  row.n = spec.n;
  row.k = spec.k;
  row.maxLabel = spec.maxLabel;
  row.seed = seed;
  row.ruleset = spec.ruleset;
  switch (spec.vary) {
    case SweepAxis::K: row.k = static_cast<std::uint32_t>(value); break;
    case SweepAxis::N: row.n = static_cast<std::uint32_t>(value); break;
    case SweepAxis::L:
      if (spec.exponent) {
        row.maxLabel = value >= 64 ? UINT64_MAX : (std::uint64_t{1} << value) - 1;
      } else {
        row.maxLabel = value;
      }
      break;
  }
  try {
    const Scenario s = spec.sources == SourceMode::Single
                           ? genSingleSource(row.n, row.k, row.maxLabel, seed)
                           : genMultiSource(row.n, row.k, row.maxLabel, spec.maxGroups ? spec.maxGroups : row.k, seed);
    RunOptions options;
    options.maxPhases = spec.maxPhases;
    options.recordTrace = false;
    const RunOutcome outcome = run(s, spec.ruleset, options);
    row.outcome = std::string(toString(outcome.result));
    row.rounds = outcome.roundsUsed;
    row.phases = outcome.phasesUsed;
  } catch (const std::exception& e) {
    row.outcome = "invalid";
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> runSweep(const SweepSpec& spec) {
  const std::vector<std::uint64_t> values = sweepValues(spec);
  std::vector<SweepRow> rows(values.size() * spec.seeds);
  parallelFor(rows.size(), spec.workers ? spec.workers : workerCount(), [&](std::size_t i) {
    rows[i] = runPoint(spec, values[i / spec.seeds], spec.firstSeed + i % spec.seeds);
  });
  return rows;
}

std::optional<LinearFit> fitRounds(const std::vector<SweepRow>& rows) {
  std::vector<const SweepRow*> used;
  for (const SweepRow& r : rows) {
    if (r.outcome == toString(RunResult::Dispersed)) used.push_back(&r);
  }
  if (used.size() < 2) return std::nullopt;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(used.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(used.size()));
  for (std::size_t i = 0; i < used.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    x(row, 0) = MaxSize::forMaxLabel(used[i]->maxLabel).bits;
    x(row, 1) = used[i]->k;
    x(row, 2) = 1.0;
    y(row) = static_cast<double>(used[i]->rounds);
  }
  // Centre the regressors so a constant column drops out instead of fighting the intercept.
  const Eigen::RowVector2d mean = x.leftCols(2).colwise().mean();
  Eigen::MatrixXd centred = x.leftCols(2).rowwise() - mean;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(centred);
  qr.setThreshold(1e-9);
  const double ymean = y.mean();
  Eigen::Vector2d coef = Eigen::Vector2d::Zero();
  if (qr.rank() > 0) {
    coef = qr.solve(y.array().matrix() - Eigen::VectorXd::Constant(y.size(), ymean));
    for (int j = 0; j < 2; ++j) {
      if (centred.col(j).squaredNorm() < 1e-12) coef(j) = 0.0;
    }
  }
  LinearFit fit;
  fit.a = coef(0);
  fit.b = coef(1);
  fit.c = ymean - mean.dot(coef);
  fit.samples = used.size();
  const Eigen::VectorXd predicted = (x.leftCols(2) * coef).array() + fit.c;
  const double ssRes = (y - predicted).squaredNorm();
  const double ssTot = (y.array() - ymean).matrix().squaredNorm();
  fit.r2 = ssTot > 0.0 ? 1.0 - ssRes / ssTot : (ssRes < 1e-9 ? 1.0 : 0.0);
  return fit;
}

void writeSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n,k,L,seed,ruleset,outcome,rounds,phases\n";
  for (const SweepRow& r : rows) {
    out << r.n << ',' << r.k << ',' << r.maxLabel << ',' << r.seed << ',' << toString(r.ruleset) << ',' << r.outcome
        << ',' << r.rounds << ',' << r.phases << '\n';
  }
}

std::string sweepCsv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  writeSweepCsv(out, rows);
  return out.str();
}

}  // namespace ringdisp
