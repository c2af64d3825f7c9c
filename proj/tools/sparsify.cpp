// sparsify --algo <name> --eps <x> [--seed k] --input <file> [--kind ...]
//          [--costs <file>] [--family <file>] --output <file>
//
// Exit status 0 iff the certificate passes. SPARSIFY_MAX_MINUTES caps the
// wall time of the core loop.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "spsum/run.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw spsum::Error(spsum::ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse reweighting of sums of PSD matrices"};
  std::string algo = "bss";
  std::string kind = "matrices";
  double eps = 0.5;
  std::uint64_t seed = 0;
  std::string input_path;
  std::string output_path;
  std::string costs_path;
  std::string family_path;
  app.add_option("--algo", algo, "bss | mmwum-wf | mmwum-block | aw-sample | pe")->required();
  app.add_option("--eps", eps, "accuracy in (0,1)")->required();
  app.add_option("--seed", seed, "seed for aw-sample");
  app.add_option("--input", input_path, "input file")->required();
  app.add_option("--kind", kind, "matrices | graph | hypergraph | sdp | simplex");
  app.add_option("--costs", costs_path, "edge cost vectors (graph kind)");
  app.add_option("--family", family_path, "subgraph family (graph kind)");
  app.add_option("--output", output_path, "report file")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    spsum::RunConfig config;
    config.algorithm = spsum::parse_algorithm(algo);
    config.kind = spsum::parse_kind(kind);
    config.eps = eps;
    config.seed = seed;
    if (const char* env = std::getenv("SPARSIFY_MAX_MINUTES")) {
      config.deadline = spsum::Deadline::after_minutes(std::stod(env));
    }

    spsum::RunInput input;
    input.text = slurp(input_path);
    if (!costs_path.empty()) input.costs = slurp(costs_path);
    if (!family_path.empty()) input.family = slurp(family_path);

    const auto start = std::chrono::steady_clock::now();
    spsum::RunReport report = spsum::run(config, input);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw spsum::Error(spsum::ErrorCode::InvalidArgument, "cannot write " + output_path);
    out << spsum::emit(report);
    std::fprintf(stderr, "wall_seconds: %.3f\n", report.wall_seconds);
    return report.passed ? 0 : 1;
  } catch (const spsum::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
