#include "nccw/report.hpp"

#include <cstdio>

namespace nccw {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skip: return "skip";
  }
  return "?";
}

CheckReport residual_report(std::string id, std::string kind, double residual, double tolerance,
                            std::uint64_t seed, std::optional<Json> witness) {
  CheckReport r{std::move(id), std::move(kind), Status::Pass, residual, tolerance, seed, std::move(witness)};
  if (!(residual <= tolerance)) {
    r.status = Status::Fail;
    if (!r.witness) r.witness = Json::object();
  }
  return r;
}

CheckReport skip_report(std::string id, std::string kind, std::string reason, double residual) {
  CheckReport r{std::move(id), std::move(kind), Status::Skip, residual, 0.0, 0, Json{{"reason", std::move(reason)}}};
  return r;
}

CheckReport fail_report(std::string id, std::string kind, Json witness, double residual, double tolerance) {
  return {std::move(id), std::move(kind), Status::Fail, residual, tolerance, 0, std::move(witness)};
}

Json to_json(const CheckReport& r) {
  Json j;
  j["id"] = r.id;
  j["kind"] = r.kind;
  j["status"] = status_name(r.status);
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tolerance;
  j["seed"] = r.seed;
  if (r.witness) j["witness"] = *r.witness;
  return j;
}

Json report_document(const std::vector<CheckReport>& reports, std::uint64_t seed) {
  int pass = 0, fail = 0, skip = 0;
  Json list = Json::array();
  for (const auto& r : reports) {
    pass += r.status == Status::Pass;
    fail += r.status == Status::Fail;
    skip += r.status == Status::Skip;
    list.push_back(to_json(r));
  }
  Json doc;
  doc["schema"] = kReportSchema;
  doc["seed"] = seed;
  doc["summary"] = Json{{"pass", pass}, {"fail", fail}, {"skip", skip}};
  doc["reports"] = std::move(list);
  return doc;
}

std::string summary_line(const CheckReport& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", r.max_residual);
  std::string s = r.status == Status::Pass ? "PASS" : r.status == Status::Fail ? "FAIL" : "SKIP";
  return s + "  " + r.id + "  [" + r.kind + "]  residual " + buf;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const DotGraph& g) {
  std::string out = "digraph " + quoted(g.name) + " {\n  rankdir=RL;\n";
  for (const auto& n : g.nodes) out += "  " + quoted(n.id) + " [label=" + quoted(n.label) + "];\n";
  for (const auto& e : g.edges)
    out += "  " + quoted(e.from) + " -> " + quoted(e.to) + " [label=" + quoted(e.label) + "];\n";
  return out + "}\n";
}

}  // namespace nccw
