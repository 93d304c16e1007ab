#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "asymptotica/operator_model.hpp"

namespace asymptotica {

inline constexpr const char* kToolVersion = "0.1.0";

// Operator spec JSON, one object per model:
//   {"type": "dense", "entries": [[[re, im], ...], ...]}
//   {"type": "weighted_shift", "weights": {"prefix": [w, ...],
//       "tail": {"kind": "constant", "value": v}
//             | {"kind": "periodic", "values": [v, ...]}
//             | {"kind": "blocks", "value_hi": h, "value_lo": l,
//                "growth_factor": g, "initial_len": n}}}
//   {"type": "diagonal", "prefix": [[re, im], ...], "tail": [re, im]}
//   {"type": "direct_sum", "components": [spec, ...]}
// Numbers round-trip bit-exactly: parse(print(t)) == t.
std::string print_operator_spec(const OperatorModel& t);
OperatorModel parse_operator_spec(const std::string& text);
OperatorModel load_operator_spec(const std::string& path);
void save_operator_spec(const OperatorModel& t, const std::string& path);

// Probe file: {"probes": [{"support": [k, ...],
//                          "amplitudes": [[re, im], ...]}, ...]}
std::string print_probes(const std::vector<SupportedVector>& probes);
std::vector<SupportedVector> parse_probes(const std::string& text);
std::vector<SupportedVector> load_probes(const std::string& path);

// One value per line; blank lines and lines starting with '#' are skipped.
std::vector<double> parse_sequence_csv(const std::string& text);
std::vector<double> load_sequence_csv(const std::string& path);

// CSV trace: a leading integer index column named by columns[0], then one
// double column per remaining name. Doubles print with round-trip precision.
struct TraceTable {
  std::vector<std::string> columns;
  std::vector<std::pair<std::int64_t, std::vector<double>>> rows;
};

std::string print_trace_csv(const TraceTable& table);
void write_trace_csv(const TraceTable& table, const std::string& path);

std::string read_text_file(const std::string& path);   // IoError
void write_text_file(const std::string& path, const std::string& text);

}  // namespace asymptotica
