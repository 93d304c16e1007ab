#include "asymptotica/spec_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "asymptotica/errors.hpp"
#include "json_support.hpp"

namespace asymptotica {

namespace {

using Json = nlohmann::ordered_json;

const Json& require_field(const Json& j, const char* field) {
  const auto it = j.find(field);
  if (it == j.end()) {
    throw SpecParseError(std::string("missing field '") + field + "'");
  }
  return *it;
}

double number_in(const Json& j, const std::string& where) {
  if (!j.is_number()) {
    throw SpecParseError(where + " must be a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SpecParseError(where + " must be finite");
  return v;
}

Complex complex_in(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw SpecParseError(where + " must be a [re, im] pair");
  }
  return {number_in(j[0], where + "[0]"), number_in(j[1], where + "[1]")};
}

std::vector<double> real_list_in(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SpecParseError(where + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number_in(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json tail_to_json(const WeightRule::Tail& tail) {
  if (const auto* c = std::get_if<WeightRule::Constant>(&tail)) {
    return Json{{"kind", "constant"}, {"value", c->value}};
  }
  if (const auto* p = std::get_if<WeightRule::Periodic>(&tail)) {
    return Json{{"kind", "periodic"}, {"values", p->values}};
  }
  const auto& b = std::get<WeightRule::Blocks>(tail);
  return Json{{"kind", "blocks"},
              {"value_hi", b.value_hi},
              {"value_lo", b.value_lo},
              {"growth_factor", b.growth_factor},
              {"initial_len", b.initial_len}};
}

WeightRule::Tail tail_from_json(const Json& j) {
  if (!j.is_object()) throw SpecParseError("weights.tail must be an object");
  const Json& kind = require_field(j, "kind");
  if (!kind.is_string()) throw SpecParseError("weights.tail.kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "constant") {
    return WeightRule::Constant{number_in(require_field(j, "value"),
                                          "weights.tail.value")};
  }
  if (k == "periodic") {
    return WeightRule::Periodic{
        real_list_in(require_field(j, "values"), "weights.tail.values")};
  }
  if (k == "blocks") {
    const Json& len = require_field(j, "initial_len");
    if (!len.is_number_integer()) {
      throw SpecParseError("weights.tail.initial_len must be an integer");
    }
    return WeightRule::Blocks{
        number_in(require_field(j, "value_hi"), "weights.tail.value_hi"),
        number_in(require_field(j, "value_lo"), "weights.tail.value_lo"),
        number_in(require_field(j, "growth_factor"),
                  "weights.tail.growth_factor"),
        len.get<std::int64_t>()};
  }
  throw SpecParseError("unknown weight tail kind '" + k + "'");
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecParseError(e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

namespace detail {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_to_json(m(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json probe_to_json(const SupportedVector& x) {
  Json amplitudes = Json::array();
  for (Complex z : x.amplitudes()) amplitudes.push_back(complex_to_json(z));
  return Json{{"support", x.support()}, {"amplitudes", std::move(amplitudes)}};
}

Json model_to_json(const OperatorModel& t) {
  if (const auto* dense = std::get_if<DenseOp>(&t.variant())) {
    return Json{{"type", "dense"}, {"entries", matrix_to_json(dense->matrix)}};
  }
  if (const auto* shift = std::get_if<WeightedShiftOp>(&t.variant())) {
    return Json{{"type", "weighted_shift"},
                {"weights", Json{{"prefix", shift->weights.prefix},
                                 {"tail", tail_to_json(shift->weights.tail)}}}};
  }
  if (const auto* diag = std::get_if<DiagonalOp>(&t.variant())) {
    Json prefix = Json::array();
    for (Complex z : diag->prefix) prefix.push_back(complex_to_json(z));
    return Json{{"type", "diagonal"},
                {"prefix", std::move(prefix)},
                {"tail", complex_to_json(diag->tail)}};
  }
  const auto& sum = std::get<DirectSumOp>(t.variant());
  Json components = Json::array();
  for (const OperatorModel& part : sum.components) {
    components.push_back(model_to_json(part));
  }
  return Json{{"type", "direct_sum"}, {"components", std::move(components)}};
}

OperatorModel model_from_json(const Json& j) {
  if (!j.is_object()) throw SpecParseError("operator spec must be an object");
  const Json& type = require_field(j, "type");
  if (!type.is_string()) throw SpecParseError("type must be a string");
  const std::string kind = type.get<std::string>();
  if (kind == "dense") {
    const Json& entries = require_field(j, "entries");
    if (!entries.is_array() || entries.empty()) {
      throw SpecParseError("entries must be a non-empty array of rows");
    }
    const std::size_t rows = entries.size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
      const Json& row = entries[r];
      if (!row.is_array() || row.size() != rows) {
        throw SpecParseError("entries must form a square matrix");
      }
      for (std::size_t c = 0; c < rows; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            complex_in(row[c], "entries[" + std::to_string(r) + "][" +
                                   std::to_string(c) + "]");
      }
    }
    return OperatorModel::dense(m);
  }
  if (kind == "weighted_shift") {
    const Json& weights = require_field(j, "weights");
    if (!weights.is_object()) throw SpecParseError("weights must be an object");
    WeightRule rule;
    rule.prefix = real_list_in(require_field(weights, "prefix"), "weights.prefix");
    rule.tail = tail_from_json(require_field(weights, "tail"));
    try {
      rule.validate();
    } catch (const Error& e) {
      throw SpecParseError(std::string("invalid weights: ") + e.what());
    }
    return OperatorModel::weighted_shift(std::move(rule));
  }
  if (kind == "diagonal") {
    const Json& prefix = require_field(j, "prefix");
    if (!prefix.is_array()) throw SpecParseError("prefix must be an array");
    std::vector<Complex> entries;
    entries.reserve(prefix.size());
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      entries.push_back(
          complex_in(prefix[i], "prefix[" + std::to_string(i) + "]"));
    }
    return OperatorModel::diagonal(std::move(entries),
                                   complex_in(require_field(j, "tail"), "tail"));
  }
  if (kind == "direct_sum") {
    const Json& components = require_field(j, "components");
    if (!components.is_array() || components.empty()) {
      throw SpecParseError("components must be a non-empty array");
    }
    std::vector<OperatorModel> parts;
    parts.reserve(components.size());
    for (const Json& part : components) parts.push_back(model_from_json(part));
    try {
      return OperatorModel::direct_sum(std::move(parts));
    } catch (const Error& e) {
      throw SpecParseError(std::string("invalid direct sum: ") + e.what());
    }
  }
  throw SpecParseError("unknown operator type '" + kind + "'");
}

}  // namespace detail

std::string print_operator_spec(const OperatorModel& t) {
  return detail::model_to_json(t).dump(2) + "\n";
}

OperatorModel parse_operator_spec(const std::string& text) {
  return detail::model_from_json(parse_json(text));
}

OperatorModel load_operator_spec(const std::string& path) {
  return parse_operator_spec(read_text_file(path));
}

void save_operator_spec(const OperatorModel& t, const std::string& path) {
  write_text_file(path, print_operator_spec(t));
}

std::string print_probes(const std::vector<SupportedVector>& probes) {
  Json list = Json::array();
  for (const SupportedVector& p : probes) list.push_back(detail::probe_to_json(p));
  return Json{{"probes", std::move(list)}}.dump(2) + "\n";
}

std::vector<SupportedVector> parse_probes(const std::string& text) {
  const Json j = parse_json(text);
  if (!j.is_object()) throw SpecParseError("probe file must be an object");
  const Json& list = require_field(j, "probes");
  if (!list.is_array()) throw SpecParseError("probes must be an array");
  std::vector<SupportedVector> out;
  out.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Json& p = list[i];
    const std::string where = "probes[" + std::to_string(i) + "]";
    if (!p.is_object()) throw SpecParseError(where + " must be an object");
    const Json& support = require_field(p, "support");
    const Json& amplitudes = require_field(p, "amplitudes");
    if (!support.is_array() || !amplitudes.is_array() ||
        support.size() != amplitudes.size()) {
      throw SpecParseError(
          where + ": support and amplitudes must be arrays of equal length");
    }
    std::vector<std::int64_t> idx;
    std::vector<Complex> amp;
    idx.reserve(support.size());
    amp.reserve(amplitudes.size());
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (!support[k].is_number_integer()) {
        throw SpecParseError(where + ".support entries must be integers");
      }
      idx.push_back(support[k].get<std::int64_t>());
      amp.push_back(complex_in(amplitudes[k],
                               where + ".amplitudes[" + std::to_string(k) + "]"));
    }
    try {
      out.emplace_back(std::move(idx), std::move(amp));
    } catch (const Error& e) {
      throw SpecParseError(where + ": " + e.what());
    }
  }
  return out;
}

std::vector<SupportedVector> load_probes(const std::string& path) {
  return parse_probes(read_text_file(path));
}

std::vector<double> parse_sequence_csv(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    double v = 0.0;
    const auto [end, ec] = std::from_chars(line.data() + a, line.data() + b + 1, v);
    if (ec != std::errc() || end != line.data() + b + 1 || !std::isfinite(v)) {
      throw SpecParseError("line " + std::to_string(line_no) +
                           ": expected one finite value, got '" +
                           line.substr(a, b - a + 1) + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> load_sequence_csv(const std::string& path) {
  return parse_sequence_csv(read_text_file(path));
}

std::string print_trace_csv(const TraceTable& table) {
  if (table.columns.empty()) throw PreconditionError("trace needs columns");
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& [n, values] : table.rows) {
    if (values.size() + 1 != table.columns.size()) {
      throw PreconditionError("trace row width does not match the header");
    }
    out += std::to_string(n);
    for (double v : values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_trace_csv(const TraceTable& table, const std::string& path) {
  write_text_file(path, print_trace_csv(table));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed while reading '" + path + "'");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace asymptotica
