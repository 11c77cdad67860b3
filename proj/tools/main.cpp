// medresp command-line entry point.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "medresp/csv.hpp"
#include "medresp/error.hpp"
#include "medresp/evaluation.hpp"
#include "medresp/extraction.hpp"
#include "medresp/forest.hpp"
#include "medresp/instance_io.hpp"
#include "medresp/led.hpp"
#include "medresp/registry.hpp"
#include "medresp/report.hpp"
#include "medresp/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace medresp;

namespace {

// Layered settings: built-in defaults, then the --config file, then flags.
// The config file is a JSON object; keys at the top level apply to every
// subcommand and a nested object named after a subcommand overrides them.
class Settings {
 public:
  void load(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open config " + path.string());
    try {
      root_ = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!root_.is_object()) throw InputError("config must be a JSON object");
  }

  template <typename T>
  void apply(const std::string& command, const std::string& key, T& value) const {
    const json* found = nullptr;
    if (root_.contains(key)) found = &root_.at(key);
    if (root_.contains(command) && root_.at(command).is_object() && root_.at(command).contains(key)) {
      found = &root_.at(command).at(key);
    }
    if (!found) return;
    try {
      value = found->get<T>();
    } catch (const json::exception&) {
      throw InputError("config key '" + key + "' has the wrong type");
    }
  }

 private:
  json root_ = json::object();
};

std::string config_path_from_args(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::vector<ActiveTestInstance> read_all(const fs::path& path, const std::string& what) {
  auto result = read_instances_file(path);
  for (const auto& r : result.rejected) {
    std::cerr << path.string() << ":" << r.line << ": rejected: " << r.reason << "\n";
  }
  std::cout << what << ": " << result.instances.size() << " instances read, " << result.rejected.size()
            << " rejected\n";
  return std::move(result.instances);
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError(std::string(what) + " must look like A:B");
  return {parse_double(text.substr(0, colon)), parse_double(text.substr(colon + 1))};
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_filename(path.stem().string() + suffix);
  return out;
}

struct Common {
  int threads = 1;
  std::string config;
};

// ingest -----------------------------------------------------------------

struct IngestArgs {
  std::vector<std::string> files;
  std::string out;
  bool inline_audio = false;
};

int run_ingest(const IngestArgs& a) {
  std::vector<ActiveTestInstance> valid;
  std::size_t rejected = 0;
  for (const auto& file : a.files) {
    auto result = read_instances_file(file);
    for (const auto& r : result.rejected) {
      std::cerr << file << ":" << r.line << ": rejected: " << r.reason << "\n";
    }
    rejected += result.rejected.size();
    for (auto& inst : result.instances) valid.push_back(std::move(inst));
  }
  std::cout << "ingest: " << valid.size() << " valid, " << rejected << " rejected\n";
  if (valid.empty()) throw InputError("no valid instances");
  InstanceWriteOptions options;
  options.inline_audio = a.inline_audio;
  options.output_dir = fs::path(a.out).parent_path();
  auto out = open_out(a.out);
  write_instances(out, valid, options);
  return 0;
}

// pair -------------------------------------------------------------------

struct PairArgs {
  std::string in, out;
  std::string window = "30:180";
  bool inline_audio = false;
};

int run_pair(const PairArgs& a) {
  const auto instances = read_all(a.in, "pair");
  PairingWindow window;
  std::tie(window.min_minutes, window.max_minutes) = parse_range(a.window, "--window");
  const auto pairs = pair_instances(instances, window);
  std::vector<ActiveTestInstance> flat;
  for (const auto& p : pairs) {
    flat.push_back(p.baseline);
    flat.push_back(p.treatment);
  }
  const double yield = instances.empty() ? 0.0 : static_cast<double>(flat.size()) / instances.size();
  std::cout << "pair: " << pairs.size() << " pairs, " << flat.size() << " of " << instances.size()
            << " instances kept (yield " << format_double(yield) << ")\n";
  InstanceWriteOptions options;
  options.inline_audio = a.inline_audio;
  options.output_dir = fs::path(a.out).parent_path();
  auto out = open_out(a.out);
  write_instances(out, flat, options);
  return 0;
}

// extract ----------------------------------------------------------------

struct ExtractArgs {
  std::string in, out, registry;
  bool allow_partial = false;
};

int run_extract(const ExtractArgs& a, int threads) {
  const auto instances = read_all(a.in, "extract");
  const auto features = extract_all(instances, {}, threads);
  auto built = build_feature_table(features, a.allow_partial);
  for (const auto& [index, reason] : built.excluded) {
    const auto& inst = instances[index];
    std::cerr << "excluded: " << inst.participant_id << " " << format_rfc3339(inst.started_at) << ": " << reason
              << "\n";
  }
  std::map<std::string, std::size_t> flag_counts;
  for (const auto& f : features) {
    for (const auto& flag : f.flags) ++flag_counts[flag];
  }
  for (const auto& [flag, count] : flag_counts) std::cout << "flag " << flag << ": " << count << "\n";
  std::cout << "extract: " << built.table.size() << " rows, " << built.table.feature_ids.size() << " features, "
            << built.excluded.size() << " excluded\n";
  if (built.table.size() == 0) throw ContractError("no instance produced a complete feature row");
  auto out = open_out(a.out);
  write_feature_csv(out, built.table);
  if (!a.registry.empty()) {
    auto reg = open_out(a.registry);
    reg << registry_manifest_json() << "\n";
  }
  return 0;
}

// train ------------------------------------------------------------------

struct TrainArgs {
  std::string features, model;
  int trees = 500;
  int mtry = 0;
  int min_split = 2;
  int max_depth = 0;
  std::uint64_t seed = 0;
  bool oob = false;
  int top = 10;
};

int run_train(const TrainArgs& a, int threads) {
  const Dataset data = dataset_from_table(read_feature_csv_file(a.features));
  ForestConfig config;
  config.n_trees = a.trees;
  config.mtry = a.mtry;
  config.min_split = a.min_split;
  config.max_depth = a.max_depth;
  config.seed = a.seed;
  config.compute_oob = a.oob;
  const Forest forest = train_forest(data, config, threads);
  forest.save(a.model);
  std::cout << "train: " << forest.trees().size() << " trees on " << data.size() << " instances\n";
  if (forest.oob_accuracy) std::cout << "oob_accuracy: " << format_double(*forest.oob_accuracy) << "\n";
  const auto order = importance_ranking(forest.importance());
  for (std::size_t k = 0; k < std::min<std::size_t>(a.top, order.size()); ++k) {
    std::cout << (k + 1) << "\t" << forest.feature_ids()[order[k]] << "\t"
              << format_double(forest.importance()[order[k]]) << "\n";
  }
  return 0;
}

// evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string features, report, led;
  int folds = 10;
  int reps = 100;
  int trees = 500;
  int mtry = 0;
  int min_split = 2;
  int max_depth = 0;
  std::string fold_mode = "random";
  std::uint64_t seed = 0;
  int top = 20;
};

std::map<std::string, double> read_led_csv(const fs::path& path) {
  std::map<std::string, double> out;
  const auto rows = read_csv_file(path);
  if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "participant_id" || rows[0][1] != "daily_led") {
    throw InputError("LED file must start with participant_id,daily_led");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() == 1 && rows[r][0].empty()) continue;
    if (rows[r].size() < 2) throw InputError("LED file line " + std::to_string(r + 1) + " is short");
    out[rows[r][0]] = parse_double(rows[r][1]);
  }
  return out;
}

int run_evaluate(const EvaluateArgs& a, int threads) {
  const Dataset data = dataset_from_table(read_feature_csv_file(a.features));
  CVConfig cv;
  cv.folds = a.folds;
  cv.repetitions = a.reps;
  cv.seed = a.seed;
  cv.mode = parse_fold_mode(a.fold_mode);
  cv.forest.n_trees = a.trees;
  cv.forest.mtry = a.mtry;
  cv.forest.min_split = a.min_split;
  cv.forest.max_depth = a.max_depth;
  const CVResult result = repeated_cv(data, cv, threads);

  std::vector<double> forest_acc, random_acc;
  for (const auto& m : result.per_repetition) forest_acc.push_back(m.accuracy);
  for (const auto& m : result.random_per_repetition) random_acc.push_back(m.accuracy);
  const KsResult ks = ks_two_sample(forest_acc, random_acc);

  // threads is deliberately absent: results do not depend on it.
  const json config{{"features", a.features}, {"folds", a.folds},         {"reps", a.reps},
                    {"trees", a.trees},       {"mtry", a.mtry},           {"min_split", a.min_split},
                    {"max_depth", a.max_depth}, {"fold_mode", a.fold_mode}, {"seed", a.seed},
                    {"led", a.led}};
  {
    auto out = open_out(a.report);
    out << evaluation_report(data, result, ks, config, static_cast<std::size_t>(a.top)).dump(2) << "\n";
  }
  const fs::path report(a.report);
  {
    auto out = open_out(sibling(report, ".repetitions.csv"));
    write_repetitions_csv(out, result);
  }
  {
    auto out = open_out(sibling(report, ".importance.csv"));
    write_importance_csv(out, data.feature_ids, result.importance);
  }
  {
    std::map<std::string, double> led;
    if (!a.led.empty()) led = read_led_csv(a.led);
    auto out = open_out(sibling(report, ".participants.csv"));
    write_participant_csv(out, result, a.led.empty() ? nullptr : &led);
  }
  {
    auto out = open_out(sibling(report, ".differences.csv"));
    write_feature_differences_csv(out, data);
  }

  std::cout << "accuracy: " << format_double(result.accuracy.mean) << " +- " << format_double(result.accuracy.std)
            << "\n"
            << "sensitivity: " << format_double(result.sensitivity.mean) << " +- "
            << format_double(result.sensitivity.std) << "\n"
            << "specificity: " << format_double(result.specificity.mean) << " +- "
            << format_double(result.specificity.std) << "\n"
            << "random_accuracy: " << format_double(result.random_accuracy.mean) << "\n"
            << "ks_forest_vs_random: D=" << format_double(ks.d) << " p=" << format_double(ks.p) << "\n";
  const auto order = importance_ranking(result.importance);
  for (std::size_t k = 0; k < std::min<std::size_t>(10, order.size()); ++k) {
    std::cout << (k + 1) << "\t" << data.feature_ids[order[k]] << "\t" << format_double(result.importance[order[k]])
              << "\n";
  }
  return 0;
}

// led --------------------------------------------------------------------

struct LedArgs {
  std::string regimens, table, out, report;
  bool fit = false;
  int min_instances = 20;
};

int run_led(const LedArgs& a) {
  const LedTable table = a.table.empty() ? default_led_table() : read_led_table_file(a.table);
  const Regimens regimens = read_regimens_file(a.regimens);
  std::map<std::string, double> led;
  for (const auto& id : regimens.order) led[id] = daily_led(regimens.items.at(id), table);

  std::map<std::string, std::pair<double, std::size_t>> accuracy;
  if (!a.report.empty()) {
    std::ifstream in(a.report, std::ios::binary);
    if (!in) throw InputError("cannot open " + a.report);
    try {
      const json report = json::parse(in);
      for (const auto& p : report.at("participants")) {
        accuracy[p.at("participant_id").get<std::string>()] = {p.at("accuracy").get<double>(),
                                                               p.at("n_instances").get<std::size_t>()};
      }
    } catch (const json::exception& e) {
      throw InputError("report " + a.report + " is malformed: " + e.what());
    }
  }
  if (a.fit && a.report.empty()) throw ContractError("--fit-quadratic needs --report");

  {
    auto out = open_out(a.out);
    std::vector<std::string> header{"participant_id", "daily_led"};
    if (!a.report.empty()) {
      header.push_back("accuracy");
      header.push_back("n_instances");
    }
    write_csv_row(out, header);
    for (const auto& id : regimens.order) {
      std::vector<std::string> row{id, format_double(led.at(id))};
      if (!a.report.empty()) {
        const auto it = accuracy.find(id);
        row.push_back(it == accuracy.end() ? "" : format_double(it->second.first));
        row.push_back(it == accuracy.end() ? "" : std::to_string(it->second.second));
      }
      write_csv_row(out, row);
    }
  }
  std::cout << "led: " << regimens.order.size() << " participants\n";

  if (a.fit) {
    std::vector<LedPoint> points;
    for (const auto& id : regimens.order) {
      const auto it = accuracy.find(id);
      if (it == accuracy.end()) continue;
      points.push_back({id, led.at(id), it->second.first, it->second.second});
    }
    const QuadraticFit fit = accuracy_vs_led(points, static_cast<std::size_t>(a.min_instances));
    json j{{"schema_version", kReportSchemaVersion},
           {"kind", "medresp-led-fit"},
           {"config", {{"min_instances", a.min_instances}, {"report", a.report}, {"regimens", a.regimens}}},
           {"coefficients", {fit.c0, fit.c1, fit.c2}},
           {"n_points", fit.n_points},
           {"led_range", {fit.led_min, fit.led_max}},
           {"fitted_at_range", {fit.fitted_at_min, fit.fitted_at_max}},
           {"vertex", fit.vertex ? json(*fit.vertex) : json(nullptr)},
           {"vertex_is_maximum", fit.vertex_is_maximum}};
    auto out = open_out(sibling(a.out, ".fit.json"));
    out << j.dump(2) << "\n";
    std::cout << "fit: c0=" << format_double(fit.c0) << " c1=" << format_double(fit.c1)
              << " c2=" << format_double(fit.c2) << " n=" << fit.n_points;
    if (fit.vertex) std::cout << " vertex=" << format_double(*fit.vertex);
    std::cout << "\n";
  }
  return 0;
}

// simulate ---------------------------------------------------------------

struct SimulateArgs {
  int participants = 20;
  int instances = 20;
  std::uint64_t seed = 0;
  std::string effect, curve, out;
  std::string led_range = "0:3000";
  bool null_effect = false;
  bool inline_audio = false;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + " is not valid JSON: " + e.what());
  }
}

int run_simulate(const SimulateArgs& a, int threads) {
  if (a.instances < 2 || a.instances % 2 != 0) {
    throw ContractError("--instances must be an even number >= 2 (baseline/treatment pairs)");
  }
  CohortConfig config;
  config.n_participants = a.participants;
  config.pairs_per_participant = a.instances / 2;
  config.seed = a.seed;
  std::tie(config.led_min, config.led_max) = parse_range(a.led_range, "--led-range");
  if (!a.effect.empty()) config.profile = effect_profile_from_json(read_json_file(a.effect));
  if (a.null_effect) config.profile = EffectProfile::null();
  if (!a.curve.empty()) config.curve = response_curve_from_json(read_json_file(a.curve));
  const Cohort cohort = generate_cohort(config, threads);
  write_cohort(a.out, config, cohort, a.inline_audio);
  std::cout << "simulate: " << cohort.participants.size() << " participants, " << cohort.instances.size()
            << " instances written to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medresp: medication response detection from smartphone active tests"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  Settings settings;
  IngestArgs ingest;
  PairArgs pair;
  ExtractArgs extract;
  TrainArgs train;
  EvaluateArgs evaluate;
  LedArgs led;
  SimulateArgs simulate;

  try {
    const std::string config_path = config_path_from_args(argc, argv);
    if (!config_path.empty()) settings.load(config_path);

    auto apply = [&](const std::string& cmd, const std::string& key, auto& value) {
      settings.apply(cmd, key, value);
    };
    apply("", "threads", common.threads);
    for (const char* cmd : {"extract", "train", "evaluate", "simulate"}) apply(cmd, "threads", common.threads);
    apply("pair", "window", pair.window);
    apply("extract", "allow_partial", extract.allow_partial);
    for (const char* key : {"trees"}) {
      apply("train", key, train.trees);
      apply("evaluate", key, evaluate.trees);
    }
    apply("train", "mtry", train.mtry);
    apply("train", "min_split", train.min_split);
    apply("train", "max_depth", train.max_depth);
    apply("train", "seed", train.seed);
    apply("train", "oob", train.oob);
    apply("evaluate", "mtry", evaluate.mtry);
    apply("evaluate", "min_split", evaluate.min_split);
    apply("evaluate", "max_depth", evaluate.max_depth);
    apply("evaluate", "seed", evaluate.seed);
    apply("evaluate", "folds", evaluate.folds);
    apply("evaluate", "reps", evaluate.reps);
    apply("evaluate", "fold_mode", evaluate.fold_mode);
    apply("led", "min_instances", led.min_instances);
    apply("simulate", "seed", simulate.seed);
    apply("simulate", "participants", simulate.participants);
    apply("simulate", "instances", simulate.instances);
    apply("simulate", "led_range", simulate.led_range);
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  }

  app.add_option("--config", common.config, "JSON config file (flags override it)");
  app.add_option("--threads", common.threads, "Worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);

  auto* c_ingest = app.add_subcommand("ingest", "Validate and normalize raw instance files");
  c_ingest->add_option("files", ingest.files, "JSONL instance files")->required();
  c_ingest->add_option("--out", ingest.out, "Normalized JSONL output")->required();
  c_ingest->add_flag("--inline-audio", ingest.inline_audio, "Embed audio samples instead of WAV references");

  auto* c_pair = app.add_subcommand("pair", "Pair baseline and treatment instances");
  c_pair->add_option("--in", pair.in, "Instances JSONL")->required();
  c_pair->add_option("--out", pair.out, "Paired instances JSONL")->required();
  c_pair->add_option("--window", pair.window, "Allowed gap in minutes, MIN:MAX")->capture_default_str();
  c_pair->add_flag("--inline-audio", pair.inline_audio, "Embed audio samples instead of WAV references");

  auto* c_extract = app.add_subcommand("extract", "Extract the feature matrix");
  c_extract->add_option("--in", extract.in, "Paired instances JSONL")->required();
  c_extract->add_option("--out", extract.out, "Feature CSV")->required();
  c_extract->add_option("--registry", extract.registry, "Write the feature registry manifest (JSON)");
  c_extract->add_flag("--allow-partial", extract.allow_partial,
                      "Keep incomplete instances and drop the feature columns they lack");

  auto* c_train = app.add_subcommand("train", "Fit a random forest");
  c_train->add_option("--features", train.features, "Feature CSV")->required();
  c_train->add_option("--model", train.model, "Model output (JSON)")->required();
  c_train->add_option("--trees", train.trees, "Number of trees")->capture_default_str();
  c_train->add_option("--mtry", train.mtry, "Features tried per node; 0 means floor(sqrt(d))")->capture_default_str();
  c_train->add_option("--min-split", train.min_split, "Smallest node that may split")->capture_default_str();
  c_train->add_option("--max-depth", train.max_depth, "Depth limit; 0 means unlimited")->capture_default_str();
  c_train->add_option("--seed", train.seed, "Random seed")->capture_default_str();
  c_train->add_flag("--oob", train.oob, "Report out-of-bag accuracy");
  c_train->add_option("--top", train.top, "Importance entries to print")->capture_default_str();

  auto* c_eval = app.add_subcommand("evaluate", "Repeated cross validation");
  c_eval->add_option("--features", evaluate.features, "Feature CSV")->required();
  c_eval->add_option("--report", evaluate.report, "Report JSON; CSVs are written next to it")->required();
  c_eval->add_option("--folds", evaluate.folds, "Folds")->capture_default_str();
  c_eval->add_option("--reps", evaluate.reps, "Repetitions")->capture_default_str();
  c_eval->add_option("--trees", evaluate.trees, "Trees per forest")->capture_default_str();
  c_eval->add_option("--mtry", evaluate.mtry, "Features tried per node; 0 means floor(sqrt(d))")->capture_default_str();
  c_eval->add_option("--min-split", evaluate.min_split, "Smallest node that may split")->capture_default_str();
  c_eval->add_option("--max-depth", evaluate.max_depth, "Depth limit; 0 means unlimited")->capture_default_str();
  c_eval->add_option("--fold-mode", evaluate.fold_mode, "random, stratified or grouped")->capture_default_str();
  c_eval->add_option("--seed", evaluate.seed, "Random seed")->capture_default_str();
  c_eval->add_option("--led", evaluate.led, "LED CSV (participant_id,daily_led) for the participant table");
  c_eval->add_option("--top", evaluate.top, "Importance entries in the report")->capture_default_str();

  auto* c_led = app.add_subcommand("led", "Daily levodopa equivalent dose per participant");
  c_led->add_option("--regimens", led.regimens, "Regimen CSV")->required();
  c_led->add_option("--table", led.table, "Conversion table CSV (default: built-in table)");
  c_led->add_option("--out", led.out, "LED CSV output")->required();
  c_led->add_option("--report", led.report, "Evaluation report supplying per-participant accuracy");
  c_led->add_flag("--fit-quadratic", led.fit, "Fit accuracy against LED");
  c_led->add_option("--min-instances", led.min_instances, "Participants with fewer instances are left out")->capture_default_str();

  auto* c_sim = app.add_subcommand("simulate", "Generate a synthetic cohort");
  c_sim->add_option("--participants", simulate.participants, "Participants")->capture_default_str();
  c_sim->add_option("--instances", simulate.instances, "Instances per participant (even)")->capture_default_str();
  c_sim->add_option("--seed", simulate.seed, "Random seed")->capture_default_str();
  c_sim->add_option("--effect", simulate.effect, "Effect profile JSON");
  c_sim->add_flag("--null", simulate.null_effect, "Zero treatment effect");
  c_sim->add_option("--curve", simulate.curve, "LED response curve JSON");
  c_sim->add_option("--led-range", simulate.led_range, "Daily LED range in mg, MIN:MAX")->capture_default_str();
  c_sim->add_option("--out", simulate.out, "Output directory")->required();
  c_sim->add_flag("--inline-audio", simulate.inline_audio, "Embed audio in the JSONL instead of WAV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << error_code_name(ErrorCode::InputFormat) << ": " << e.what() << "\n";
    return static_cast<int>(ErrorCode::InputFormat);
  }

  try {
    if (*c_ingest) return run_ingest(ingest);
    if (*c_pair) return run_pair(pair);
    if (*c_extract) return run_extract(extract, common.threads);
    if (*c_train) return run_train(train, common.threads);
    if (*c_eval) return run_evaluate(evaluate, common.threads);
    if (*c_led) return run_led(led);
    if (*c_sim) return run_simulate(simulate, common.threads);
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << error_code_name(ErrorCode::Internal) << ": " << e.what() << "\n";
    return static_cast<int>(ErrorCode::Internal);
  }
  return 0;
}
