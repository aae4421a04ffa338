#pragma once

#include <string>

#include "report.hpp"

namespace satmdp::cli {

struct GenArgs {
  std::string cnf;
  bool lenient = false;
};
struct RunArgs {
  std::string instance;
  std::string mode;  // empty: as stored in the bundle
  std::optional<std::uint64_t> budget;
  std::string trajectories;
};
struct ReduceArgs {
  std::string cnf;
  bool lenient = false;
  std::optional<std::uint64_t> budget;
};
struct TransformArgs {
  std::string cnf;
  std::optional<int> b;
  std::string report;
  bool lenient = false;
};

// Each returns the process exit code.
int cmd_gen(const CommonOptions& common, const GenArgs& args);
int cmd_verify_claims(const CommonOptions& common);
int cmd_run(const CommonOptions& common, const RunArgs& args);
int cmd_reduce(const CommonOptions& common, const ReduceArgs& args);
int cmd_transform(const CommonOptions& common, const TransformArgs& args);

}  // namespace satmdp::cli
