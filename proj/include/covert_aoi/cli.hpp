#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "covert_aoi/optimizer.hpp"
#include "covert_aoi/simulator.hpp"

namespace covert_aoi {

enum class Command { analyze, simulate_aoi, simulate_detection, optimize, sweep };
enum class OutputFormat { text, csv };

// A fully resolved invocation: config file and flag overrides already applied.
struct RunSpec {
  Command command = Command::analyze;
  DbmParams inputs;
  OutputFormat format = OutputFormat::text;
  std::string out_path; // empty -> stdout
  XiVariant variant = XiVariant::derived;
  TransmitPolicy policy;        // analyze / simulate-*
  std::optional<double> g_aw;   // analyze: add the per-realization report
  std::uint64_t slots = 1000000;
  std::uint64_t trials = 1000000;
  std::optional<std::uint64_t> seed; // required for simulate-*
  unsigned threads = 1;
  std::optional<double> fixed_tau;   // simulate-detection: fixed threshold, mW
  SweepAxis axis = SweepAxis::delta;
  double sweep_from = 0.0; // delta in slots; powers in dBm
  double sweep_to = 0.0;
  std::size_t sweep_points = 0;
};

// Executes the spec, writing to spec.out_path if set, else to `out`.
// Returns the process exit code: 0 on success (an infeasible optimization is
// an answer, not an error), nonzero with a one-line diagnostic on `err`.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

// argv front end: parses flags (and the config file from --config or the
// COVERT_AOI_CONFIG environment variable) into a RunSpec, then runs it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace covert_aoi
