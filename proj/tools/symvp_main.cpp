#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "symvp/catalog.hpp"
#include "symvp/records.hpp"
#include "symvp/sampling.hpp"
#include "symvp/scenario.hpp"

namespace {

std::string isoTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int writeOrPrint(const std::string& text, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(outPath);
  if (!out) {
    std::cerr << "error: cannot write '" << outPath << "'\n";
    return 2;
  }
  out << text;
  return 0;
}

int runCommand(const std::string& configPath, const std::string& outPath,
               const symvp::RunOptions& opts, int threads) {
  symvp::setThreadCount(threads);
  std::vector<symvp::RunRecord> records;
  try {
    records = symvp::runScenarioFile(configPath, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream os;
  symvp::writeRecords(os, records, opts.seed, isoTimestamp());
  const int writeStatus = writeOrPrint(os.str(), outPath);
  if (writeStatus != 0) return writeStatus;

  bool failed = false;
  for (const symvp::RunRecord& r : records) {
    if (r.degenerate)
      std::cerr << "warning: scenario '" << r.scenario << "' is degenerate: " << r.note << '\n';
    else if (!r.succeeded) {
      std::cerr << "failure: scenario '" << r.scenario << "': " << r.note << '\n';
      failed = true;
    }
  }
  return failed ? 1 : 0;
}

int plotCommand(const std::string& recordsPath, const std::string& outPath) {
  std::ifstream in(recordsPath);
  if (!in) {
    std::cerr << "error: cannot open '" << recordsPath << "'\n";
    return 2;
  }
  std::vector<symvp::RunRecord> records;
  try {
    records = symvp::readRecords(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << recordsPath << ": " << e.what() << '\n';
    return 2;
  }
  return writeOrPrint(symvp::seriesCsv(records), outPath);
}

int catalogCommand() {
  std::printf("objectives:\n");
  for (const symvp::CatalogEntry& e : symvp::objectiveCatalog()) {
    if (e.anyDimension)
      std::printf("  %-18s any dimension  %-8s %s\n", e.name.c_str(),
                  e.smooth ? "smooth" : "", e.description.c_str());
    else
      std::printf("  %-18s dimension %-4d %-8s %s\n", e.name.c_str(), e.fixedDimension,
                  e.smooth ? "smooth" : "", e.description.c_str());
  }
  std::printf("\ngroup presets:\n");
  std::printf("  trivial              identity only (n: dimension)\n");
  std::printf("  symmetric            coordinate permutations of R^n (n)\n");
  std::printf("  signed_permutations  permutations with sign flips (n)\n");
  std::printf("  cyclic_rotations     planar rotations by 2 pi j / k (k)\n");
  std::printf("  so2_quadrature       planar rotation quadrature (points, default 64)\n");
  std::printf("\nnorms: l1, l2, linf, weighted_l2 (weights: [...])\n");
  std::printf("\ntasks: ekeland, palais_smale, dense_range, subgradient,\n");
  std::printf("       bronsted_rockafellar, bishop_phelps, separation, dual_description\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symvp: certified symmetrized variational principles in finite dimension"};
  app.require_subcommand(1);

  std::string configPath, recordsPath, outPath;
  symvp::RunOptions opts;
  unsigned long long seed = 0;
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "run scenarios from a config and emit records");
  run->add_option("config", configPath, "scenario config file (YAML)")->required();
  run->add_option("--out", outPath, "records output path (default: stdout)");
  CLI::Option* seedOpt = run->add_option("--seed", seed, "seed override for every scenario");
  run->add_option("--threads", threads, "worker threads for verification sweeps")
      ->check(CLI::Range(1, 256));
  run->add_option("--tol", opts.marginTol, "certificate margin tolerance")
      ->check(CLI::PositiveNumber);

  CLI::App* plot = app.add_subcommand("plot", "turn records into a flat csv of series");
  plot->add_option("records", recordsPath, "records file produced by run")->required();
  plot->add_option("--out", outPath, "csv output path (default: stdout)");

  CLI::App* catalog = app.add_subcommand("catalog", "list objectives, groups and tasks");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (seedOpt->count() > 0) {
      opts.haveSeed = true;
      opts.seed = seed;
    }
    return runCommand(configPath, outPath, opts, threads);
  }
  if (plot->parsed()) return plotCommand(recordsPath, outPath);
  if (catalog->parsed()) return catalogCommand();
  return 2;
}
