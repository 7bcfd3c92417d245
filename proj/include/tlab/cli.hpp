#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tlab/ns3d.hpp"
#include "tlab/report_io.hpp"
#include "tlab/verify.hpp"

namespace tlab::cli {

/// Everything a run depends on; written next to its outputs.
struct RunConfig {
  std::string command;
  int dims = 1;
  int points_per_axis = 256;
  double period = 1.0;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::string boxes;   // "jmin:jmax:stride", empty for the default family
  std::string corpus;  // manifest path, empty for the default corpus
  std::uint64_t seed = 20240601;
  std::string out;
  int threads = 0;

  // norm
  std::string norm;
  std::string input;
  std::string member;
  double T = kInfiniteTime;
  bool table = false;

  // verify
  std::vector<std::string> theorems;
  VerifyConfig verify;

  // ns
  std::string probe;
  bool linear_only = false;
  double amplitude = 1.0;
  std::string method = "picard";
  ns::SmallDataConfig smalldata;
  ns::InflationConfig inflation;
};

io::Json to_json(const RunConfig& cfg);

/// Runs the command line; returns the process exit code
/// (0 success, 1 a configured threshold failed, 2 usage or input error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tlab::cli
