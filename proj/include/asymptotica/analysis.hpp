#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asymptotica/operator_model.hpp"
#include "asymptotica/spec_io.hpp"

namespace asymptotica {

enum class Command {
  analyze,
  envelope,
  witness,
  classify,
  certify,
  gallery_list,
};

std::string to_string(Command c);
Command command_from_name(const std::string& name);  // PreconditionError

// One invocation, fully resolved: the model is already parsed and the
// optional inputs already loaded. Zero tolerance or horizon selects the
// command default.
struct AnalysisRequest {
  Command command = Command::classify;
  std::optional<OperatorModel> model;
  std::vector<SupportedVector> probes;  // empty -> default probe convention
  std::vector<double> sequence;         // envelope on raw samples
  double tol = 0.0;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  bool with_timestamp = true;  // off -> byte-stable report for fixed inputs
  std::string spec_label;      // echoed in the report
};

struct AnalysisOutcome {
  std::string report_json;          // pretty-printed, trailing newline
  std::optional<TraceTable> trace;  // present when the command traced a solve
};

// Input caps enforced before any numeric work starts.
inline constexpr std::int64_t kMaxHorizon = std::int64_t(1) << 20;
inline constexpr std::int64_t kMaxDenseDim = 256;

AnalysisOutcome run_analysis(const AnalysisRequest& request);

}  // namespace asymptotica
