#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nccw/dsl.hpp"
#include "nccw/runner.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nccw: discretized checks for noncommutative CW complexes"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "run a .nccw script");

  std::string script_path, json_path, dot_path;
  std::vector<int> resolutions;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  run->add_option("script", script_path, "script file")->required()->check(CLI::ExistingFile);
  run->add_option("--resolution", resolutions, "grid subdivision count N (repeatable)")->check(CLI::Range(1, 1 << 16));
  run->add_option("--seed", seed, "seed for randomized checks");
  run->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
  run->add_option("--json", json_path, "report file");
  run->add_option("--dot", dot_path, "diagram file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::ifstream in(script_path, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();

  nccw::dsl::Script script;
  try {
    script = nccw::dsl::parse_dsl(text.str());
  } catch (const nccw::dsl::ParseError& e) {
    std::cerr << script_path << ": " << e.what() << "\n";
    return kExitUsage;
  }

  nccw::RunConfig cfg;
  if (!resolutions.empty()) cfg.resolutions = resolutions;
  cfg.seed = seed;
  cfg.tol = tol;
  const nccw::RunResult result = nccw::run(script, cfg);

  for (const auto& r : result.reports) std::cout << nccw::summary_line(r) << "\n";
  const nccw::Json doc = result.document(seed);
  std::cout << doc["summary"]["pass"] << " pass, " << doc["summary"]["fail"] << " fail, " << doc["summary"]["skip"]
            << " skip\n";

  if (!json_path.empty() && !write_file(json_path, doc.dump(2) + "\n")) {
    std::cerr << "cannot write " << json_path << "\n";
    return kExitUsage;
  }
  if (!dot_path.empty() && !write_file(dot_path, nccw::graphs_dot(result.graphs))) {
    std::cerr << "cannot write " << dot_path << "\n";
    return kExitUsage;
  }
  return result.any_failed() ? kExitFail : 0;
}
