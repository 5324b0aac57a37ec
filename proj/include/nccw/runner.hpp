#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nccw/dsl.hpp"
#include "nccw/report.hpp"

namespace nccw {

struct RunConfig {
  std::vector<int> resolutions{4};
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

struct RunResult {
  std::vector<CheckReport> reports;
  std::vector<DotGraph> graphs;

  bool any_failed() const;
  Json document(std::uint64_t seed) const { return report_document(reports, seed); }
};

/// Executes the commands of `script` at every configured resolution.
/// Independent (command, resolution) tasks run in parallel; reports keep
/// script order, then resolution order. Runtime errors become fail reports.
RunResult run(const dsl::Script& script, const RunConfig& config);

/// All graphs in one DOT file.
std::string graphs_dot(const std::vector<DotGraph>& graphs);

}  // namespace nccw
