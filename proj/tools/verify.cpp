// verify <suite> [options]: runs a verification suite and writes a JSON report.
// Exit status: 0 all checks pass, 1 some check failed, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hgeo/harness.hpp"

namespace hh = hgeo::harness;

int main(int argc, char** argv) {
  hh::SuiteConfig cfg;
  CLI::App app{"Numerical verification suites for the half-rank n constructions"};
  app.add_option("suite", cfg.suite, "all | qform | nonintersect | equivariance | hitchin | flatness | "
                                     "transversality | roots | stiefel | n2")
      ->required();
  app.add_option("--n", cfg.n, "half-rank n (polynomial degree 2n-1)");
  app.add_option("--field", cfg.field, "r | c | both");
  app.add_option("--samples", cfg.samples, "samples per sampled check");
  auto* seed_opt = app.add_option("--seed", cfg.seed, "64-bit seed (falls back to $VERIFY_SEED)");
  app.add_option("--tol-cluster", cfg.tol_cluster, "root clustering tolerance");
  app.add_option("--tol-real", cfg.tol_real, "distance to RP^1 below which a root is real");
  app.add_option("--report", cfg.report_path, "write the JSON report here (default: stdout)");
  app.add_option("--dump-csv", cfg.csv_path, "roots suite: write sampled (t, z, roots) rows here");
  cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--threads", cfg.threads, "worker threads (results do not depend on this)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (seed_opt->count() == 0) {
    if (const char* env = std::getenv("VERIFY_SEED")) {
      try {
        size_t pos = 0;
        cfg.seed = std::stoull(env, &pos, 0);
        if (env[pos] != '\0') throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        std::cerr << "error: VERIFY_SEED is not an unsigned integer: " << env << "\n";
        return 2;
      }
    }
  }

  try {
    cfg.validate();
  } catch (const hgeo::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<std::string> csv;
  const bool want_csv = !cfg.csv_path.empty();
  const hh::SuiteReport rep = hh::run(cfg, want_csv ? &csv : nullptr);
  const std::string text = rep.to_json().dump(2) + "\n";

  if (cfg.report_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.report_path);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.report_path << "\n";
      return 2;
    }
    out << text;
  }
  if (want_csv) {
    std::ofstream out(cfg.csv_path);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.csv_path << "\n";
      return 2;
    }
    for (auto& row : csv) out << row << "\n";
  }

  long failed = 0;
  for (auto& r : rep.records) {
    if (r.status == "fail") {
      ++failed;
      std::cerr << "FAIL " << r.name << " worst=" << r.worst_value << " witness=" << r.worst_witness.dump() << "\n";
    }
  }
  std::cerr << (rep.passed() ? "PASS" : "FAIL") << " suite=" << cfg.suite << " n=" << cfg.n
            << " checks=" << rep.records.size() << " failed=" << failed << " elapsed_ms=" << rep.elapsed_ms << "\n";
  return rep.passed() ? 0 : 1;
}
