// mw: command-line entry point for the mobility warehouse.
//
// Exit status: 0 success, 1 validation errors in the input data, 2 usage
// error, 3 I/O error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <thread>

#include <CLI11.hpp>

#include "mw/api/api.hpp"
#include "mw/core/error.hpp"
#include "mw/core/snapshot.hpp"
#include "mw/core/suppression.hpp"
#include "mw/ingest/ingest.hpp"
#include "mw/query/query.hpp"
#include "mw/query/serialize.hpp"
#include "mw/report/report.hpp"
#include "mw/synth/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr const char* kSnapshotEnv = "MW_SNAPSHOT_DIR";
constexpr const char* kSocialDistancingFile = "social_distancing.csv";

mw::Date parse_date(const std::string& text, const std::string& flag) {
  auto d = mw::Date::parse(text);
  if (!d) throw mw::ArgumentError(flag + ": not a date: " + text);
  return *d;
}

mw::NaicsCode parse_code(std::int32_t value) {
  mw::NaicsCode code{value};
  if (!code.valid()) throw mw::ArgumentError("--code must be a 6-digit NAICS code");
  return code;
}

void print_report(const std::string& name, const mw::ingest::ValidationReport& report) {
  std::cout << name << ": " << report.records_total << " records, " << report.records_ok << " ok, "
            << report.error_records() << " rejected, " << report.warning_count() << " warnings\n";
  for (const auto& issue : report.issues) {
    std::cerr << name << " row " << issue.row << " "
              << (issue.severity == mw::ingest::Severity::kError ? "error" : "warning") << " [" << issue.field
              << "]: " << issue.message << "\n";
  }
}

std::vector<mw::SocialDistancingRecord> load_snapshot_sd(const std::filesystem::path& snapshot) {
  const auto path = snapshot / kSocialDistancingFile;
  if (!std::filesystem::exists(path)) return {};
  auto parsed = mw::ingest::parse_social_distancing(path);
  if (parsed.report.error_records() > 0) {
    throw mw::LoadError(path.string() + ": " + std::to_string(parsed.report.error_records()) + " invalid rows");
  }
  return std::move(parsed.records);
}

// --- synth ---

struct SynthArgs {
  std::string config;
  std::string preset;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  const auto config = a.config.empty() ? mw::synth::preset(a.preset) : mw::synth::load_config(a.config);
  for (const auto& entry : mw::synth::generate(config, a.out)) {
    std::cout << entry.file << "\t" << entry.rows << "\n";
  }
  return kExitOk;
}

// --- ingest ---

struct IngestArgs {
  std::string weekly;
  std::string sd;
  std::string snapshot;
  std::int64_t suppress_threshold = mw::kDefaultSuppressionThreshold;
  bool dedup_identical = false;
};

int run_ingest(const IngestArgs& a) {
  auto weekly = mw::ingest::parse_flat_weekly(a.weekly);
  print_report("weekly", weekly.report);
  bool rejected = weekly.report.error_records() > 0;

  std::optional<mw::SuppressionResult> suppressed;
  if (!a.sd.empty()) {
    auto sd = mw::ingest::parse_social_distancing(a.sd);
    print_report("social_distancing", sd.report);
    rejected = rejected || sd.report.error_records() > 0;
    suppressed = mw::suppress_low_device_cbgs(sd.records, a.suppress_threshold);
  }

  const auto warehouse = mw::ingest::load_warehouse(weekly.records, {a.dedup_identical});
  mw::save_snapshot(warehouse, a.snapshot);
  const auto sd_path = std::filesystem::path(a.snapshot) / kSocialDistancingFile;
  if (suppressed) {
    mw::ingest::save_social_distancing(sd_path, suppressed->kept);
    std::cout << "suppression: threshold " << a.suppress_threshold << ", " << suppressed->suppressed_cbgs.size()
              << " CBGs, " << suppressed->removed_records << " records removed\n";
  } else {
    std::filesystem::remove(sd_path);
  }
  const auto c = warehouse.counts();
  std::cout << "snapshot " << a.snapshot << ": " << c.pois << " pois, " << c.periods << " periods, "
            << c.visit_facts << " visit facts, " << c.dwell_facts << " dwell facts\n";
  return rejected ? kExitValidation : kExitOk;
}

// --- query ---

struct QueryArgs {
  std::string snapshot;
  std::string format;
  std::int32_t code = 0;
  std::string start;
  std::string end;
  std::int64_t k = 10;
  std::string state;
  std::string baseline_start;
  std::string baseline_end;
  std::string intervention_start;
  std::string intervention_end;
  std::int64_t min_baseline_visits = mw::query::kDefaultMinBaselineVisits;
  int id = 0;
};

std::size_t checked_k(std::int64_t k) {
  if (k < 1) throw mw::ArgumentError("--k must be at least 1");
  return static_cast<std::size_t>(k);
}

int run_query(const std::string& which, const QueryArgs& a) {
  namespace q = mw::query;
  const bool csv = a.format == "csv";
  if (which == "answerability") {
    const auto answer = q::answerability(a.id);
    if (a.format == "json") {
      std::cout << q::answerability_to_json(answer).dump() << "\n";
    } else if (csv) {
      std::cout << "query_id,status\n" << answer.query_id << "," << answer.describe() << "\n";
    } else {
      std::cout << answer.describe() << "\n";
    }
    return kExitOk;
  }

  const auto warehouse = mw::load_snapshot(a.snapshot);
  if (which == "dwell") {
    const auto code = parse_code(a.code);
    const mw::DateRange range{parse_date(a.start, "--start"), parse_date(a.end, "--end")};
    const auto totals = q::dwell_aggregation(warehouse, code, range);
    std::cout << (csv ? q::dwell_to_csv(totals) : q::dwell_to_json(code, range, totals).dump() + "\n");
  } else if (which == "top-categories") {
    const auto k = checked_k(a.k);
    const mw::DateRange range{parse_date(a.start, "--start"), parse_date(a.end, "--end")};
    const auto result = q::q2_top_categories(warehouse, range, k);
    std::cout << (csv ? q::ranked_to_csv(result, "code", "visits")
                      : q::top_categories_to_json(range, k, result).dump() + "\n");
  } else if (which == "hangouts") {
    const auto code = parse_code(a.code);
    const auto k = checked_k(a.k);
    const mw::DateRange range{parse_date(a.start, "--start"), parse_date(a.end, "--end")};
    const std::optional<std::string> state = a.state.empty() ? std::nullopt : std::optional(a.state);
    const auto result = q::q3_top_hangouts(warehouse, code, state, range, k);
    std::cout << (csv ? q::ranked_to_csv(result, "place_id", "long_visits")
                      : q::hangouts_to_json(code, state, range, k, result).dump() + "\n");
  } else if (which == "least-impacted") {
    const mw::DateRange baseline{parse_date(a.baseline_start, "--baseline-start"),
                                 parse_date(a.baseline_end, "--baseline-end")};
    const mw::DateRange intervention{parse_date(a.intervention_start, "--intervention-start"),
                                     parse_date(a.intervention_end, "--intervention-end")};
    const auto result = q::q4_least_impacted_category(warehouse, baseline, intervention, a.min_baseline_visits);
    std::cout << (csv ? q::impact_to_csv(result) : q::impact_to_json(result).dump() + "\n");
    if (!result.note.empty()) std::cerr << "note: " << result.note << "\n";
  }
  return kExitOk;
}

// --- report ---

struct ReportArgs {
  std::string snapshot;
  std::string spec;
  std::string out;
};

int run_report(const ReportArgs& a) {
  const auto spec = mw::report::ReportSpec::load(a.spec);
  const auto warehouse = mw::load_snapshot(a.snapshot);
  const auto sd = load_snapshot_sd(a.snapshot);
  const auto bundle = mw::report::render_report(warehouse, sd, spec);
  mw::report::write_bundle(bundle, a.out);
  for (const auto& [name, content] : bundle) std::cout << name << "\n";
  return kExitOk;
}

// --- serve ---

struct ServeArgs {
  std::string snapshot;
  std::string bind = "127.0.0.1:8080";
};

int run_serve(const ServeArgs& a) {
  const auto [host, port] = mw::api::parse_bind_address(a.bind);

  // SIGINT/SIGTERM are consumed by a watcher thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto service = mw::api::ApiService::from_snapshot(a.snapshot);
  const int bound = service->bind(host, port);
  std::cerr << "serving " << a.snapshot << " on " << host << ":" << bound << "\n";

  std::thread watcher([&service, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    service->stop();
  });
  service->run();
  if (watcher.joinable()) {
    pthread_kill(watcher.native_handle(), SIGTERM);
    watcher.join();
  }
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const mw::IoError*>(&e) || dynamic_cast<const mw::PersistenceError*>(&e) ||
      dynamic_cast<const mw::LoadError*>(&e) || dynamic_cast<const std::filesystem::filesystem_error*>(&e)) {
    return kExitIo;
  }
  if (dynamic_cast<const mw::ArgumentError*>(&e) || dynamic_cast<const mw::ConfigError*>(&e)) return kExitUsage;
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobility warehouse: synthesize, ingest, query, report and serve weekly mobility data"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate deterministic synthetic input files");
  auto* config_opt = synth->add_option("--config", synth_args.config, "Generator config (JSON)")->check(CLI::ExistingFile);
  auto* preset_opt = synth->add_option("--preset", synth_args.preset, "Named preset")->check(CLI::IsMember({"desk", "mn-scale"}));
  config_opt->excludes(preset_opt);
  synth->add_option("--out", synth_args.out, "Output directory")->required();

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Parse, validate and load flat files into a snapshot");
  ingest->add_option("--weekly", ingest_args.weekly, "Weekly-pattern CSV")->required();
  ingest->add_option("--sd", ingest_args.sd, "Social-distancing CSV");
  ingest->add_option("--snapshot", ingest_args.snapshot, "Snapshot directory")->envname(kSnapshotEnv)->required();
  ingest->add_option("--suppress-threshold", ingest_args.suppress_threshold,
                     "Drop CBGs with fewer devices than this")
      ->check(CLI::NonNegativeNumber);
  ingest->add_flag("--dedup-identical", ingest_args.dedup_identical, "Accept exact duplicate rows");

  QueryArgs query_args;
  auto* query = app.add_subcommand("query", "Run a policy query against a snapshot");
  query->require_subcommand(1);
  auto add_common = [&](CLI::App* sub, bool needs_snapshot) {
    if (needs_snapshot) {
      sub->add_option("--snapshot", query_args.snapshot, "Snapshot directory")->envname(kSnapshotEnv)->required();
    }
    sub->add_option("--format", query_args.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
  };
  auto* q_dwell = query->add_subcommand("dwell", "Visits per dwell bucket for one category");
  add_common(q_dwell, true);
  q_dwell->add_option("--code", query_args.code, "NAICS code")->required();
  q_dwell->add_option("--start", query_args.start, "Start date")->required();
  q_dwell->add_option("--end", query_args.end, "End date")->required();
  auto* q_top = query->add_subcommand("top-categories", "Categories ranked by visits");
  add_common(q_top, true);
  q_top->add_option("--k", query_args.k, "Rows to return");
  q_top->add_option("--start", query_args.start, "Start date")->required();
  q_top->add_option("--end", query_args.end, "End date")->required();
  auto* q_hang = query->add_subcommand("hangouts", "Places ranked by visits longer than 20 minutes");
  add_common(q_hang, true);
  q_hang->add_option("--code", query_args.code, "NAICS code")->required();
  q_hang->add_option("--state", query_args.state, "2-digit state FIPS code");
  q_hang->add_option("--k", query_args.k, "Rows to return");
  q_hang->add_option("--start", query_args.start, "Start date")->required();
  q_hang->add_option("--end", query_args.end, "End date")->required();
  auto* q_least = query->add_subcommand("least-impacted", "Categories ranked by intervention/baseline visit ratio");
  add_common(q_least, true);
  q_least->add_option("--baseline-start", query_args.baseline_start, "Baseline window start")->required();
  q_least->add_option("--baseline-end", query_args.baseline_end, "Baseline window end")->required();
  q_least->add_option("--intervention-start", query_args.intervention_start, "Intervention window start")->required();
  q_least->add_option("--intervention-end", query_args.intervention_end, "Intervention window end")->required();
  q_least->add_option("--min-baseline-visits", query_args.min_baseline_visits, "Minimum baseline visits");
  auto* q_answer = query->add_subcommand("answerability", "Whether a policy query can be answered");
  add_common(q_answer, false);
  q_answer->add_option("--id", query_args.id, "Query id 1..8")->required();

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Render a report bundle");
  report->add_option("--snapshot", report_args.snapshot, "Snapshot directory")->envname(kSnapshotEnv)->required();
  report->add_option("--spec", report_args.spec, "Report spec (JSON)")->required();
  report->add_option("--out", report_args.out, "Output directory")->required();

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Serve aggregates over HTTP");
  serve->add_option("--snapshot", serve_args.snapshot, "Snapshot directory")->envname(kSnapshotEnv)->required();
  serve->add_option("--bind", serve_args.bind, "host:port")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      if (synth_args.config.empty() == synth_args.preset.empty()) {
        std::cerr << "error: synth needs exactly one of --config or --preset\n";
        return kExitUsage;
      }
      return run_synth(synth_args);
    }
    if (ingest->parsed()) return run_ingest(ingest_args);
    if (query->parsed()) {
      for (auto* sub : query->get_subcommands()) return run_query(sub->get_name(), query_args);
    }
    if (report->parsed()) return run_report(report_args);
    if (serve->parsed()) return run_serve(serve_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitUsage;
}
