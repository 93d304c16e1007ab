#include "asymptotica/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <utility>

#include "asymptotica/banach_envelope.hpp"
#include "asymptotica/errors.hpp"
#include "asymptotica/gallery.hpp"
#include "asymptotica/linalg.hpp"
#include "asymptotica/power_asymptotics.hpp"
#include "asymptotica/similarity.hpp"
#include "asymptotica/theorem_checks.hpp"
#include "json_support.hpp"

namespace asymptotica {

namespace {

using detail::Json;

struct Resolved {
  double tol = 0.0;
  std::int64_t horizon = 0;
};

Resolved defaults_for(Command c) {
  switch (c) {
    case Command::analyze: return {1e-8, 512};
    case Command::envelope: return {1e-9, 4096};
    case Command::witness: return {1e-7, 512};
    case Command::classify: return {1e-8, 512};
    case Command::certify: return {1e-6, 16384};
    case Command::gallery_list: return {1e-8, 512};
  }
  return {1e-8, 512};
}

Resolved resolve_params(const AnalysisRequest& r) {
  const Resolved d = defaults_for(r.command);
  if (!std::isfinite(r.tol) || r.tol < 0.0) {
    throw PreconditionError("tol must be a positive number");
  }
  if (r.horizon < 0) throw PreconditionError("horizon must be positive");
  Resolved out;
  out.tol = r.tol == 0.0 ? d.tol : r.tol;
  out.horizon = r.horizon == 0 ? d.horizon : r.horizon;
  if (out.horizon > kMaxHorizon) {
    throw PreconditionError("horizon exceeds the cap of 2^20");
  }
  return out;
}

void enforce_dimension_caps(const OperatorModel& t) {
  if (const auto d = t.dim(); d && *d > kMaxDenseDim) {
    throw PreconditionError("operator dimension exceeds the cap of 256");
  }
  if (const auto* sum = std::get_if<DirectSumOp>(&t.variant())) {
    for (const OperatorModel& part : sum->components) {
      enforce_dimension_caps(part);
    }
  }
}

bool command_uses_probes(Command c) {
  return c == Command::analyze || c == Command::envelope ||
         c == Command::certify;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

Json check_suite_json(const CheckSuite& suite) {
  Json items = Json::array();
  for (const CheckItem& item : suite.items) {
    items.push_back(Json{{"name", item.name},
                         {"pass", item.pass},
                         {"residual", item.residual},
                         {"tolerance", item.tolerance}});
  }
  return Json{{"subject", suite.subject},
              {"all_pass", suite.all_pass()},
              {"items", std::move(items)}};
}

Json classification_json(const ClassificationReport& c) {
  return Json{{"norm", c.norm},
              {"beta_hat", c.beta_hat},
              {"alpha_hat", c.alpha_hat},
              {"power_bounded", to_string(c.power_bounded)},
              {"power_bounded_below", to_string(c.power_bounded_below)},
              {"isometry", to_string(c.isometry)},
              {"c0_dot", to_string(c.c0_dot)},
              {"c1_dot", to_string(c.c1_dot)},
              {"similar_to_isometry", to_string(c.similar_to_isometry)},
              {"normaloid", c.normaloid},
              {"quasinormal", c.quasinormal},
              {"horizon", c.horizon}};
}

Json envelope_json(const EnvelopeEstimate& est) {
  return Json{{"phi_minus", est.phi_minus},
              {"phi_plus", est.phi_plus},
              {"gap", est.gap()},
              {"uniform", to_string(est.uniform)},
              {"n_used", est.n_used},
              {"j_range", est.j_range}};
}

TraceTable solver_trace(const AsymptoticReport& rep, const char* value_name) {
  TraceTable table;
  table.columns = {"n", value_name, "residual"};
  for (const TraceRow& row : rep.trace) {
    table.rows.push_back({row.n, {row.value, row.residual}});
  }
  return table;
}

TraceTable trend_trace(const EnvelopeEstimate& est) {
  TraceTable table;
  table.columns = {"n", "window_inf", "window_sup"};
  for (const EnvelopeTrendRow& row : est.trend) {
    table.rows.push_back({row.n, {row.inf_j, row.sup_j}});
  }
  return table;
}

Json solver_block(const AsymptoticReport& rep, double stop_tol) {
  Json block{{"status", to_string(rep.status)},
             {"steps", rep.steps},
             {"delta", rep.delta},
             {"stop_tolerance", stop_tol},
             {"fixed_point_residual", rep.fixed_point_residual}};
  if (rep.limit) block["limit"] = detail::matrix_to_json(rep.limit->matrix());
  return block;
}

Json run_analyze(const OperatorModel& t,
                 const std::vector<SupportedVector>& probes, const Resolved& p,
                 std::uint64_t seed, std::optional<TraceTable>& trace) {
  Json result;
  const ClassificationReport cls = classify(t, p.horizon, p.tol, seed);
  result["classification"] = classification_json(cls);
  const double check_tol = 100.0 * p.tol;
  if (t.is_finite()) {
    const Matrix m = t.to_dense();
    std::optional<PsdMatrix> contraction_limit;
    if (cls.norm <= 1.0 + 1e-12) {
      const AsymptoticReport rep = contraction_asymptotic_limit(
          m, p.tol, std::max<std::int64_t>(p.horizon, 4096));
      Json block = solver_block(rep, p.tol);
      if (rep.limit) {
        contraction_limit = rep.limit;
        block["item_checks"] =
            check_suite_json(contraction_limit_checks(m, *rep.limit, check_tol));
        const KernelCheck k = kernel_of_limit(*rep.limit, m, check_tol);
        block["kernel"] =
            Json{{"dimension", static_cast<std::int64_t>(k.kernel_basis.cols())},
                 {"orbits_vanish", k.orbits_vanish},
                 {"complement_persists", k.complement_persists},
                 {"worst_kernel_orbit", k.worst_kernel_orbit},
                 {"worst_complement_ratio", k.worst_complement_ratio}};
      }
      result["contraction_limit"] = std::move(block);
      trace = solver_trace(rep, "power_gram_norm");
    }
    if (cls.power_bounded != Verdict::no) {
      const AsymptoticReport rep = cesaro_asymptotic_limit(m, p.tol);
      Json block = solver_block(rep, p.tol);
      if (rep.limit) {
        const double beta = std::max(cls.beta_hat, cls.norm);
        block["item_checks"] = check_suite_json(
            cesaro_limit_checks(m, *rep.limit, beta, check_tol));
        if (contraction_limit) {
          block["distance_to_contraction_limit"] = hermitian_norm(
              HermitianMatrix(rep.limit->matrix() - contraction_limit->matrix()));
        }
      }
      result["mean_limit"] = std::move(block);
      if (!trace) trace = solver_trace(rep, "mean_gram_norm");
    }
  } else if (cls.power_bounded != Verdict::no) {
    Json rows = Json::array();
    bool first = true;
    for (const SupportedVector& x : probes) {
      const EnvelopeEstimate est = vector_envelope(t, x, p.horizon, p.tol);
      if (first && !est.trend.empty()) {
        trace = trend_trace(est);
        first = false;
      }
      rows.push_back(
          Json{{"probe", detail::probe_to_json(x)},
               {"envelope", envelope_json(est)},
               {"cesaro_mean_at_horizon",
                cesaro_quadratic_form(t, x, p.horizon, 0)}});
    }
    result["probe_envelopes"] = std::move(rows);
  }
  return result;
}

Json run_envelope(const AnalysisRequest& r,
                  const std::vector<SupportedVector>& probes,
                  const Resolved& p, std::optional<TraceTable>& trace) {
  if (!r.sequence.empty()) {
    if (r.model) {
      throw PreconditionError(
          "envelope takes an operator spec or a sequence, not both");
    }
    const BoundedSequence xs = BoundedSequence::from_samples(r.sequence);
    const AgreementReport agreement = all_banach_limits_agree(xs, p.tol);
    const EnvelopeEstimate& est = agreement.estimate;
    if (!est.trend.empty()) trace = trend_trace(est);
    Json result = envelope_json(est);
    result["source"] = "sequence";
    result["samples"] = static_cast<std::int64_t>(r.sequence.size());
    result["agreement"] = Json{{"agree", to_string(agreement.agree)},
                               {"value", agreement.value},
                               {"gap", agreement.gap},
                               {"tolerance", p.tol}};
    return result;
  }
  if (!r.model) {
    throw PreconditionError("envelope needs an operator spec or a sequence");
  }
  Json rows = Json::array();
  Verdict all_uniform = Verdict::yes;
  for (const SupportedVector& x : probes) {
    const EnvelopeEstimate est = vector_envelope(*r.model, x, p.horizon, p.tol);
    if (!trace && !est.trend.empty()) trace = trend_trace(est);
    all_uniform = verdict_and(all_uniform, est.uniform);
    rows.push_back(Json{{"probe", detail::probe_to_json(x)},
                        {"envelope", envelope_json(est)}});
  }
  return Json{{"source", "operator"},
              {"all_uniform", to_string(all_uniform)},
              {"probes", std::move(rows)}};
}

Json run_witness(const OperatorModel& t, const Resolved& p) {
  const SimilarityWitness w = nagy_unitarization(t, p.horizon, p.tol);
  Json result{{"s", detail::matrix_to_json(w.s)},
              {"s_inverse", detail::matrix_to_json(w.s_inverse)},
              {"conjugated", detail::matrix_to_json(w.conjugated)},
              {"isometry_residual", w.isometry_residual},
              {"degraded", w.degraded},
              {"residual_tolerance", 1e-6}};
  if (w.unitary_residual) result["unitary_residual"] = *w.unitary_residual;
  return result;
}

Json run_certify(const OperatorModel& t,
                 const std::vector<SupportedVector>& probes, const Resolved& p) {
  std::vector<double> q_form;
  q_form.reserve(probes.size());
  std::optional<Matrix> q_matrix;
  if (t.is_finite()) {
    const Matrix m = t.to_dense();
    const AsymptoticReport rep =
        cesaro_asymptotic_limit(m, std::min(p.tol, 1e-8));
    if (!rep.limit) {
      throw NoConvergenceError(
          "mean limit did not converge; cannot certify against it");
    }
    q_matrix = rep.limit->matrix();
    for (const SupportedVector& x : probes) {
      const Vector v = x.to_dense(m.rows());
      q_form.push_back((v.adjoint() * *q_matrix * v).real()(0, 0));
    }
  } else {
    const std::int64_t j = p.horizon / 2;
    const std::int64_t n = std::max<std::int64_t>(p.horizon - j, 1);
    for (const SupportedVector& x : probes) {
      q_form.push_back(cesaro_quadratic_form(t, x, n, j));
    }
  }
  Json rows = Json::array();
  Verdict overall = Verdict::yes;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Verdict v = q_equals_aphi_certificate(t, {q_form[i]}, {probes[i]},
                                                p.horizon, p.tol);
    overall = verdict_and(overall, v);
    rows.push_back(Json{{"probe", detail::probe_to_json(probes[i])},
                        {"q_value", q_form[i]},
                        {"verdict", to_string(v)}});
  }
  Json result{{"certificate", to_string(overall)},
              {"tolerance", p.tol},
              {"probes", std::move(rows)}};
  if (q_matrix) result["mean_limit"] = detail::matrix_to_json(*q_matrix);
  if (t.is_finite() && *t.dim() <= 12) {
    const PhiFormBounds form = phi_asymptotic_form(t, probes, p.horizon, p.tol);
    Json entries = Json::array();
    for (const PhiFormEntry& e : form.entries) {
      entries.push_back(Json{{"probe", detail::probe_to_json(e.x)},
                             {"lower", e.lower},
                             {"upper", e.upper},
                             {"uniform", to_string(e.uniform)}});
    }
    Json block{{"entries", std::move(entries)},
               {"certified_equal_to_q", to_string(form.certified_equal_to_q)}};
    if (form.reconstructed) {
      block["matrix"] = detail::matrix_to_json(form.reconstructed->matrix());
    }
    result["reconstruction"] = std::move(block);
  }
  return result;
}

Json run_gallery_list() {
  Json entries = Json::array();
  for (const GalleryEntry& e : gallery_list()) {
    Json defaults = Json::object();
    for (const auto& [key, value] : e.defaults) defaults[key] = value;
    entries.push_back(Json{{"name", e.name},
                           {"description", e.description},
                           {"defaults", std::move(defaults)}});
  }
  return Json{{"entries", std::move(entries)}};
}

Json request_echo(const AnalysisRequest& r, const Resolved& p,
                  std::size_t probe_count) {
  Json echo{{"command", to_string(r.command)}};
  if (!r.spec_label.empty()) echo["label"] = r.spec_label;
  if (r.model) echo["operator"] = detail::model_to_json(*r.model);
  if (command_uses_probes(r.command)) {
    echo["probes"] = static_cast<std::int64_t>(probe_count);
  }
  if (!r.sequence.empty()) {
    echo["sequence_length"] = static_cast<std::int64_t>(r.sequence.size());
  }
  echo["tol"] = p.tol;
  echo["horizon"] = p.horizon;
  echo["seed"] = r.seed;
  return echo;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::analyze: return "analyze";
    case Command::envelope: return "envelope";
    case Command::witness: return "witness";
    case Command::classify: return "classify";
    case Command::certify: return "certify";
    case Command::gallery_list: return "gallery-list";
  }
  return "unknown";
}

Command command_from_name(const std::string& name) {
  if (name == "analyze") return Command::analyze;
  if (name == "envelope") return Command::envelope;
  if (name == "witness") return Command::witness;
  if (name == "classify") return Command::classify;
  if (name == "certify") return Command::certify;
  if (name == "gallery-list") return Command::gallery_list;
  throw PreconditionError("unknown command '" + name + "'");
}

AnalysisOutcome run_analysis(const AnalysisRequest& request) {
  const Resolved p = resolve_params(request);
  const bool needs_model = request.command != Command::gallery_list &&
                           request.command != Command::envelope;
  if (needs_model && !request.model) {
    throw PreconditionError(to_string(request.command) +
                            " needs an operator spec");
  }
  if (request.model) enforce_dimension_caps(*request.model);
  if (static_cast<std::int64_t>(request.sequence.size()) > kMaxHorizon) {
    throw PreconditionError("sequence exceeds the cap of 2^20 samples");
  }

  std::vector<SupportedVector> probes = request.probes;
  if (request.model && command_uses_probes(request.command)) {
    if (probes.empty()) probes = default_probes(*request.model, request.seed);
    if (const auto d = request.model->dim()) {
      for (const SupportedVector& x : probes) {
        if (x.max_index() > *d) {
          throw PreconditionError(
              "probe support exceeds the operator dimension");
        }
      }
    }
  }

  std::optional<TraceTable> trace;
  Json result;
  switch (request.command) {
    case Command::analyze:
      result = run_analyze(*request.model, probes, p, request.seed, trace);
      break;
    case Command::envelope:
      result = run_envelope(request, probes, p, trace);
      break;
    case Command::witness:
      result = run_witness(*request.model, p);
      break;
    case Command::classify:
      result = classification_json(
          classify(*request.model, p.horizon, p.tol, request.seed));
      break;
    case Command::certify:
      result = run_certify(*request.model, probes, p);
      break;
    case Command::gallery_list:
      result = run_gallery_list();
      break;
  }

  Json provenance{{"tool_version", kToolVersion},
                  {"seed", request.seed},
                  {"tol", p.tol},
                  {"horizon", p.horizon}};
  if (request.with_timestamp) provenance["timestamp"] = utc_timestamp();

  Json report{{"request", request_echo(request, p, probes.size())},
              {"result", std::move(result)},
              {"provenance", std::move(provenance)}};

  AnalysisOutcome out;
  out.report_json = report.dump(2) + "\n";
  out.trace = std::move(trace);
  return out;
}

}  // namespace asymptotica
