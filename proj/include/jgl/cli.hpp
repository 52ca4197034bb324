#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jgl/datagen.hpp"
#include "jgl/screening.hpp"

namespace jgl::cli {

enum ExitCode : int {
  kOk = 0,
  kUnsatisfied = 1,  // validate found violations
  kNotConverged = 2,
  kInputError = 3,
  kNumericError = 4,
};

struct BenchSpec {
  std::vector<DatasetType> types{DatasetType::C};
  std::vector<Index> p_values{200};
  std::vector<Index> k_values{2};
  std::vector<std::pair<double, double>> lambdas{{0.009, 0.0005}};
  std::vector<ScreenMode> modes{ScreenMode::hybrid, ScreenMode::local,
                                ScreenMode::global};
  Index repetitions = 1;
  std::uint64_t seed = 1;
  double r = 0.006;
  // Zero: time to tolerance. Positive: run this many iterations and report
  // the average time per iteration.
  Index iteration_cap = 0;
  Index max_iter = 10000;
  double tol = 1e-6;
  double rho = 1.0;
  unsigned threads = 1;
  bool run_solver = true;

  // Throws ConfigError on empty lists or zero repetitions.
  void validate() const;
};

// One report document with a "cells" array; failing cells carry "error".
nlohmann::json run_bench(const BenchSpec& spec, std::ostream& log);

// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jgl::cli
