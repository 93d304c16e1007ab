#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "asymptotica/analysis.hpp"
#include "asymptotica/errors.hpp"
#include "asymptotica/gallery.hpp"
#include "asymptotica/spec_io.hpp"

namespace {

struct CliOptions {
  std::string spec_path;
  std::string gallery_name;
  std::string probes_path;
  std::string sequence_path;
  std::string out_path;
  std::string trace_path;
  double tol = 0.0;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
};

void add_common_options(CLI::App* sub, CliOptions* opt, bool takes_model) {
  if (takes_model) {
    sub->add_option("--spec", opt->spec_path, "operator spec JSON file");
    sub->add_option("--gallery", opt->gallery_name,
                    "built-in operator by name (defaults for its parameters)");
    sub->add_option("--probes", opt->probes_path, "probe set JSON file");
    sub->add_option("--tol", opt->tol, "tolerance (0 = command default)");
    sub->add_option("--horizon", opt->horizon,
                    "iteration horizon (0 = command default)");
    sub->add_option("--seed", opt->seed, "seed for randomized probes");
    sub->add_option("--trace", opt->trace_path, "write the solve trace CSV here");
  }
  sub->add_option("--out", opt->out_path,
                  "write the report here instead of stdout");
}

int run_command(const std::string& name, const CliOptions& opt) {
  asymptotica::AnalysisRequest req;
  req.command = asymptotica::command_from_name(name);
  if (!opt.spec_path.empty() && !opt.gallery_name.empty()) {
    throw asymptotica::PreconditionError("give --spec or --gallery, not both");
  }
  if (!opt.spec_path.empty()) {
    req.model = asymptotica::load_operator_spec(opt.spec_path);
    req.spec_label = opt.spec_path;
  } else if (!opt.gallery_name.empty()) {
    req.model = asymptotica::gallery(opt.gallery_name);
    req.spec_label = "gallery:" + opt.gallery_name;
  }
  if (!opt.probes_path.empty()) {
    req.probes = asymptotica::load_probes(opt.probes_path);
  }
  if (!opt.sequence_path.empty()) {
    req.sequence = asymptotica::load_sequence_csv(opt.sequence_path);
    if (req.spec_label.empty()) req.spec_label = opt.sequence_path;
  }
  req.tol = opt.tol;
  req.horizon = opt.horizon;
  req.seed = opt.seed;

  const asymptotica::AnalysisOutcome outcome = asymptotica::run_analysis(req);
  if (opt.out_path.empty()) {
    std::fputs(outcome.report_json.c_str(), stdout);
  } else {
    asymptotica::write_text_file(opt.out_path, outcome.report_json);
  }
  if (!opt.trace_path.empty()) {
    if (!outcome.trace) {
      throw asymptotica::PreconditionError(
          "this invocation produced no trace data");
    }
    asymptotica::write_trace_csv(*outcome.trace, opt.trace_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("ASYMPTOTICA_THREADS")) {
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));
  }

  CLI::App app{"asymptotic limits of operator power sequences"};
  app.require_subcommand(1);
  CliOptions opt;

  add_common_options(
      app.add_subcommand(
          "analyze", "classification plus asymptotic limits with item checks"),
      &opt, true);
  CLI::App* envelope = app.add_subcommand(
      "envelope", "extremal window-mean envelope of an orbit or a sequence");
  add_common_options(envelope, &opt, true);
  envelope->add_option("--sequence", opt.sequence_path,
                       "raw sequence CSV, one value per line");
  add_common_options(
      app.add_subcommand("witness",
                         "similarity witness turning the operator unitary"),
      &opt, true);
  add_common_options(
      app.add_subcommand("classify",
                         "power boundedness and orbit decay classification"),
      &opt, true);
  add_common_options(
      app.add_subcommand(
          "certify",
          "certify the mean limit as the unique shift-invariant value"),
      &opt, true);
  add_common_options(app.add_subcommand("gallery-list",
                                        "list the built-in operator gallery"),
                     &opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run_command(app.get_subcommands().front()->get_name(), opt);
  } catch (const asymptotica::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const asymptotica::Error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  }
}
