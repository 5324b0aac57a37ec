#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nccw {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "nccw-report/1";

enum class Status { Pass, Fail, Skip };

const char* status_name(Status s);

struct CheckReport {
  std::string id;
  std::string kind;
  Status status = Status::Skip;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::optional<Json> witness;

  bool passed() const { return status == Status::Pass; }
  bool failed() const { return status == Status::Fail; }
};

/// Pass iff residual <= tolerance; a failing report always carries a witness
/// (an empty object is substituted when none is given).
CheckReport residual_report(std::string id, std::string kind, double residual, double tolerance,
                            std::uint64_t seed = 0, std::optional<Json> witness = std::nullopt);
CheckReport skip_report(std::string id, std::string kind, std::string reason, double residual = 0.0);
CheckReport fail_report(std::string id, std::string kind, Json witness, double residual = 0.0,
                        double tolerance = 0.0);

Json to_json(const CheckReport& r);
/// {"schema", "seed", "summary", "reports"} with reports in the given order.
Json report_document(const std::vector<CheckReport>& reports, std::uint64_t seed);
/// One human-readable line: "PASS  id  kind  residual".
std::string summary_line(const CheckReport& r);

struct DotGraph {
  struct Node {
    std::string id;
    std::string label;
  };
  struct Edge {
    std::string from;
    std::string to;
    std::string label;
  };
  std::string name;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

std::string to_dot(const DotGraph& g);

}  // namespace nccw
