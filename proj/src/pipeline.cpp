#include "ixdrl/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "CLI11.hpp"
#include "ixdrl/clustering.hpp"
#include "ixdrl/common.hpp"
#include "ixdrl/dtw.hpp"
#include "ixdrl/importance.hpp"
#include "ixdrl/report.hpp"
#include "ixdrl/trace.hpp"
#include "json.hpp"

namespace ixdrl {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kFrameFile = "interestingness.csv";
constexpr const char* kProfilesFile = "profiles.csv";

// Raised for a missing upstream artifact or a bad option; maps to exit 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class StageRun {
 public:
  StageRun(const RunConfig& cfg, Stage stage) : cfg_(cfg), stage_(stage), started_(std::chrono::steady_clock::now()) {}

  void input(const fs::path& p) { inputs_[p.filename().string()] = fnv1a_hex(read_text_file(p)); }
  void rows(const std::string& key, std::size_t n) { rows_[key] = n; }
  void output(const fs::path& p, std::string_view contents) {
    write_text_file(p, contents);
    outputs_.push_back(fs::relative(p, cfg_.out).generic_string());
  }
  void extra(const std::string& key, json value) { extra_[key] = std::move(value); }

  void finish() {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started_).count();
    json j{{"tool_version", kToolVersion},
           {"stage", std::string(to_string(stage_))},
           {"seed", cfg_.seed},
           {"jobs", resolve_jobs(cfg_.jobs)},
           {"timing_ms", ms},
           {"input_hashes_fnv1a64", inputs_},
           {"row_counts", rows_},
           {"artifacts", outputs_}};
    for (auto& [k, v] : extra_.items()) j[k] = v;
    write_text_file(cfg_.out / ("run_summary_" + std::string(to_string(stage_)) + ".json"), dump_json(j));
  }

 private:
  const RunConfig& cfg_;
  Stage stage_;
  std::chrono::steady_clock::time_point started_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::size_t> rows_;
  std::vector<std::string> outputs_;
  json extra_ = json::object();
};

fs::path require_file(const fs::path& p, Stage stage) {
  if (!fs::is_regular_file(p)) {
    throw UsageError(std::string(to_string(stage)) + " requires " + p.string() + ", which does not exist");
  }
  return p;
}

InterestingnessFrame load_frame(const RunConfig& cfg, Stage stage, StageRun& run) {
  const fs::path p = require_file(cfg.out / kFrameFile, stage);
  run.input(p);
  return frame_from_csv(read_text_file(p));
}

Dataset load_input_dataset(const RunConfig& cfg, Stage stage, StageRun& run) {
  const fs::path data = require_file(cfg.dataset_path(), stage);
  const fs::path manifest = require_file(cfg.manifest_path(), stage);
  run.input(data);
  run.input(manifest);
  Dataset ds = load_dataset(data, manifest);
  validate_dataset(ds);
  return ds;
}

void stage_gen(const RunConfig& cfg, std::ostream& log) {
  StageRun run(cfg, Stage::Gen);
  const GenOptions& g = cfg.gen;
  if (g.families.empty()) throw UsageError("gen needs at least one scenario family");
  grid::TrainerConfig tc;
  tc.width = g.width;
  tc.height = g.height;
  tc.discount = g.discount;
  const grid::PolicyModel model = grid::train_actor_critic(g.families, g.episodes, g.alpha_v, g.alpha_p, cfg.seed, tc);

  std::vector<grid::GridScenario> scenarios;
  for (std::size_t f = 0; f < g.families.size(); ++f) {
    for (std::size_t i = 0; i < g.traces_per_family; ++i) {
      const auto scenario_seed = mix_seed(cfg.seed ^ 0xE7A1, f * 1000003 + i);
      scenarios.push_back(grid::make_scenario(g.families[f], scenario_seed, g.width, g.height));
    }
  }
  Dataset ds = grid::rollout(model, scenarios, scenarios.size(), mix_seed(cfg.seed, 0xB011), cfg.jobs);
  validate_dataset(ds);
  const fs::path data = cfg.dataset_path();
  write_dataset(ds, data, cfg.manifest_path());
  run.rows("traces", ds.traces.size());
  run.rows("steps", ds.step_count());
  run.extra("generator", json{{"width", g.width},
                              {"height", g.height},
                              {"episodes", g.episodes},
                              {"alpha_v", g.alpha_v},
                              {"alpha_p", g.alpha_p},
                              {"discount", g.discount},
                              {"traces_per_family", g.traces_per_family}});
  run.finish();
  log << "gen: wrote " << ds.traces.size() << " traces (" << ds.step_count() << " steps) to " << data.string() << "\n";
}

void stage_analyze(const RunConfig& cfg, std::ostream& log) {
  StageRun run(cfg, Stage::Analyze);
  const Dataset ds = load_input_dataset(cfg, Stage::Analyze, run);
  const DatasetStats st = dataset_stats(ds);
  const InterestingnessFrame frame = analyze_dataset(ds, cfg.analysis, cfg.jobs);
  run.output(cfg.out / kFrameFile, frame_to_csv(frame));
  run.output(cfg.out / "dataset_stats.json", dump_json(json{{"value_min", st.value_min},
                                                             {"value_max", st.value_max},
                                                             {"reward_min", st.reward_min},
                                                             {"reward_max", st.reward_max},
                                                             {"trace_count", st.trace_count},
                                                             {"length_mean", st.length_mean},
                                                             {"length_std", st.length_std}}));
  run.rows("traces", frame.traces.size());
  run.rows("steps", frame.step_count());
  run.rows("variables", frame.variable_count());
  run.extra("analysis", json{{"rho", cfg.analysis.rho}, {"online", cfg.analysis.online_mode}, {"clamp", cfg.analysis.clamp}});
  run.finish();
  log << "analyze: " << frame.variable_count() << " interestingness variables over " << frame.step_count() << " steps\n";
}

void stage_cluster(const RunConfig& cfg, std::ostream& log) {
  StageRun run(cfg, Stage::Cluster);
  const InterestingnessFrame frame = load_frame(cfg, Stage::Cluster, run);
  const ClusterOptions& c = cfg.cluster;
  const std::size_t n = frame.traces.size();
  if (n < 3) throw UsageError("clustering needs at least 3 traces");

  std::vector<std::size_t> vars;
  if (c.base_dims_only) {
    for (auto name : dim::kBase) vars.push_back(frame.variable_index(name));
  }
  std::vector<std::string> ids;
  for (const auto& tr : frame.traces) ids.push_back(tr.trace_id);
  const DistanceMatrix dm = distance_matrix(frame_series(frame, vars), ids, c.band, cfg.jobs);
  const Dendrogram dend = agglomerate(dm);
  const std::size_t k_max = c.k_max.value_or(std::min<std::size_t>(20, n - 1));
  const PartitionSelection sel = select_partition(dend, dm, c.k_min, k_max, c.min_cluster_size);
  const ProfileTable profiles = cluster_profiles(sel.best().labels, frame);

  run.output(cfg.out / "distance_matrix.csv", distance_matrix_to_csv(dm));
  run.output(cfg.out / "dendrogram.json", dump_json(dendrogram_to_json(dend)));
  run.output(cfg.out / "partition.csv", partition_to_csv(sel.best(), ids));
  run.output(cfg.out / "ranking.json", dump_json(ranking_to_json(sel)));
  run.output(cfg.out / kProfilesFile, profiles_to_csv(profiles));
  run.rows("traces", n);
  run.rows("chosen_k", sel.best().k);
  run.extra("clustering", json{{"band", c.band ? json(*c.band) : json(nullptr)},
                               {"k_min", c.k_min},
                               {"k_max", k_max},
                               {"min_cluster_size", c.min_cluster_size},
                               {"dims", c.base_dims_only ? "base" : "all"},
                               {"chosen_silhouette", sel.best().silhouette}});
  run.finish();
  log << "cluster: chose k=" << sel.best().k << " (silhouette " << format_double(sel.best().silhouette) << ")\n";
}

int stage_explain(const RunConfig& cfg, std::ostream& log) {
  StageRun run(cfg, Stage::Explain);
  const Dataset ds = load_input_dataset(cfg, Stage::Explain, run);
  const InterestingnessFrame frame = load_frame(cfg, Stage::Explain, run);
  if (frame.traces.size() != ds.traces.size()) {
    throw Error(ErrorCode::ManifestMismatch, "interestingness CSV and dataset disagree on the number of traces");
  }
  for (std::size_t i = 0; i < ds.traces.size(); ++i) {
    if (frame.traces[i].trace_id != ds.traces[i].trace_id || frame.traces[i].length != ds.traces[i].length()) {
      throw Error(ErrorCode::ManifestMismatch, "interestingness CSV does not match trace '" + ds.traces[i].trace_id + "'");
    }
  }
  const ExplainOptions& e = cfg.explain;
  const bool explicit_dims = !e.dimensions.empty();
  const std::vector<std::string> dims = explicit_dims ? e.dimensions : frame.variables;
  for (const auto& d : dims) frame.variable_index(d);

  const fs::path dir = cfg.out / "explain";
  fs::create_directories(dir);
  GBDTParams params = e.gbdt;
  params.jobs = cfg.jobs;

  json evaluation = json::object();
  std::vector<std::string> refused;
  for (std::size_t di = 0; di < dims.size(); ++di) {
    const std::string& d = dims[di];
    const auto [train, test] = build_design_matrix(ds, frame, d, e.split, mix_seed(cfg.seed, di));
    params.seed = mix_seed(cfg.seed ^ 0x6BD7, di);
    const GBDTModel model = train_gbdt(train, params);
    const ModelMetrics metrics = evaluate_model(model, test, e.gate_mae);
    json entry = metrics_to_json(metrics);
    entry["train_rows"] = train.size();
    entry["test_rows"] = test.size();
    run.output(dir / ("model_" + d + ".json"), dump_json(model.to_json()));

    const bool usable = metrics.gated_in || e.allow_gated;
    entry["explained"] = usable;
    if (usable) {
      const GlobalImportance gi = global_importance(model, test, 10, cfg.jobs);
      run.output(dir / ("importance_" + d + ".csv"), importance_to_csv(gi));
      run.output(dir / ("density_" + d + ".csv"), density_to_csv(gi));
      const auto outliers = find_outliers(frame, d, e.iqr_factor);
      const auto local = local_explanations(model, metrics, ds, outliers, e.top_k, e.allow_gated, cfg.jobs);
      run.output(dir / ("local_" + d + ".json"), dump_json(local_explanations_to_json(local)));
      entry["outliers"] = outliers.size();
    } else if (explicit_dims) {
      refused.push_back(d);
    }
    evaluation[d] = std::move(entry);
    log << "explain: " << d << " MAE " << format_double(metrics.mae) << (metrics.gated_in ? " (gated in)" : " (gated out)")
        << "\n";
  }
  run.output(dir / "evaluation.json", dump_json(evaluation));
  run.rows("dimensions", dims.size());
  run.rows("steps", ds.step_count());
  run.extra("explain", json{{"split", e.split},
                            {"gate_mae", e.gate_mae},
                            {"iqr_factor", e.iqr_factor},
                            {"top_k", e.top_k},
                            {"allow_gated", e.allow_gated},
                            {"gbdt", {{"n_rounds", params.n_rounds},
                                      {"learning_rate", params.learning_rate},
                                      {"max_depth", params.max_depth},
                                      {"min_samples_leaf", params.min_samples_leaf},
                                      {"l2_leaf_reg", params.l2_leaf_reg},
                                      {"subsample", params.subsample}}}});
  run.finish();
  if (!refused.empty()) {
    std::string names;
    for (const auto& r : refused) names += (names.empty() ? "" : ", ") + r;
    log << "explain: model gate failed for " << names << " (pass --allow-gated to explain anyway)\n";
    return kExitGated;
  }
  return kExitOk;
}

void stage_report(const RunConfig& cfg, std::ostream& log) {
  StageRun run(cfg, Stage::Report);
  const InterestingnessFrame frame = load_frame(cfg, Stage::Report, run);
  const MeanOverTime mot = mean_over_time(frame);
  run.output(cfg.out / "mean_over_time.csv", mean_over_time_to_csv(mot));
  run.output(cfg.out / "mean_over_time.svg", mean_over_time_svg(mot));

  json report{{"traces", frame.traces.size()}, {"steps", frame.step_count()}};
  json means = json::object();
  for (std::size_t v = 0; v < frame.variable_count(); ++v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < frame.traces.size(); ++i) {
      for (std::size_t t = 0; t < frame.traces[i].length; ++t) acc += frame.at(i, t, v);
    }
    means[frame.variables[v]] = frame.step_count() ? acc / static_cast<double>(frame.step_count()) : 0.0;
  }
  report["global_means"] = std::move(means);
  if (const fs::path p = cfg.out / kProfilesFile; fs::is_regular_file(p)) {
    run.input(p);
    const ProfileTable profiles = profiles_from_csv(read_text_file(p));
    run.output(cfg.out / "profiles.svg", profiles_svg(profiles));
    report["clusters"] = profiles.rows.size();
  }
  if (const fs::path p = cfg.out / "ranking.json"; fs::is_regular_file(p)) {
    run.input(p);
    for (const auto& r : json::parse(read_text_file(p))) {
      if (r.value("chosen", false)) report["chosen_partition"] = r;
    }
  }
  if (const fs::path p = cfg.out / "explain" / "evaluation.json"; fs::is_regular_file(p)) {
    run.input(p);
    json gated = json::object();
    const json eval = json::parse(read_text_file(p));
    for (const auto& [d, m] : eval.items()) gated[d] = m.value("gated_in", false);
    report["surrogate_gate"] = std::move(gated);
  }
  run.output(cfg.out / "report.json", dump_json(report));
  run.rows("timesteps", mot.counts.size());
  run.finish();
  log << "report: mean-over-time data for " << mot.counts.size() << " timesteps\n";
}

}  // namespace

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Gen: return "gen";
    case Stage::Analyze: return "analyze";
    case Stage::Cluster: return "cluster";
    case Stage::Explain: return "explain";
    case Stage::Report: return "report";
  }
  return "unknown";
}

fs::path RunConfig::dataset_path() const { return dataset.empty() ? out / "dataset.jsonl" : dataset; }
fs::path RunConfig::manifest_path() const { return manifest.empty() ? sidecar_manifest_path(dataset_path()) : manifest; }

int run_pipeline(const RunConfig& config, const std::vector<Stage>& stages, std::ostream& log) {
  std::vector<Stage> ordered = stages;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  int status = kExitOk;
  try {
    config.analysis.validate();
    fs::create_directories(config.out);
    for (Stage s : ordered) {
      switch (s) {
        case Stage::Gen: stage_gen(config, log); break;
        case Stage::Analyze: stage_analyze(config, log); break;
        case Stage::Cluster: stage_cluster(config, log); break;
        case Stage::Explain: status = std::max(status, stage_explain(config, log)); break;
        case Stage::Report: stage_report(config, log); break;
      }
    }
  } catch (const UsageError& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return is_data_error(e.code()) ? kExitData : kExitUsage;
  } catch (const json::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return status;
}

namespace {

// Turns a JSON config object into command-line tokens; explicit flags placed
// after them win because every scalar option keeps its last value.
std::vector<std::string> config_tokens(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw UsageError("config " + path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!j.is_object()) throw UsageError("config " + path.string() + " must be a JSON object");
  std::vector<std::string> out;
  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [key, v] : j.items()) {
    const std::string flag = "--" + key;
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_array()) {
      for (const auto& item : v) {
        out.push_back(flag);
        out.push_back(scalar(item));
      }
    } else if (!v.is_null()) {
      out.push_back(flag);
      out.push_back(scalar(v));
    }
  }
  return out;
}

void add_options(CLI::App& sub, RunConfig& cfg, std::string& dims, std::vector<std::string>& families,
                 double& band, std::size_t& k_max, std::string& config_path) {
  sub.add_option("--config", config_path, "JSON file of option values (flags override it)");
  sub.add_option("--dataset", cfg.dataset, "trace JSONL file (default <out>/dataset.jsonl)");
  sub.add_option("--manifest", cfg.manifest, "manifest JSON (default: sidecar of --dataset)");
  sub.add_option("--out", cfg.out, "output directory")->capture_default_str();
  sub.add_option("--seed", cfg.seed, "root random seed")->capture_default_str();
  sub.add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)")->envname("IX_JOBS")->capture_default_str();

  sub.add_option("--width", cfg.gen.width, "grid width")->group("Generator")->capture_default_str();
  sub.add_option("--height", cfg.gen.height, "grid height")->group("Generator")->capture_default_str();
  sub.add_option("--traces-per-family", cfg.gen.traces_per_family, "rollouts per scenario family")
      ->group("Generator")->capture_default_str();
  sub.add_option("--episodes", cfg.gen.episodes, "actor-critic training episodes")->group("Generator")->capture_default_str();
  sub.add_option("--alpha-v", cfg.gen.alpha_v, "critic learning rate")->group("Generator")->capture_default_str();
  sub.add_option("--alpha-p", cfg.gen.alpha_p, "actor learning rate")->group("Generator")->capture_default_str();
  sub.add_option("--discount", cfg.gen.discount, "discount factor")->group("Generator")->capture_default_str();
  sub.add_option("--families", families, "scenario families (NEAR_GOAL, FAR_GOAL_HAZARDS)")
      ->group("Generator")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  sub.add_option("--rho", cfg.analysis.rho, "goal conduciveness slope scale")->group("Analysis")->capture_default_str();
  sub.add_flag("--online", cfg.analysis.online_mode, "normalize value with running extrema")->group("Analysis");
  sub.add_flag("--no-clamp{false}", cfg.analysis.clamp, "do not clamp incongruity into [-1, 1]")->group("Analysis");

  sub.add_option("--band", band, "Sakoe-Chiba band fraction, 0 for exact DTW")->group("Clustering")->capture_default_str();
  sub.add_option("--k-min", cfg.cluster.k_min, "smallest cluster count")->group("Clustering")->capture_default_str();
  sub.add_option("--k-max", k_max, "largest cluster count (default min(20, n-1))")->group("Clustering");
  sub.add_option("--min-cluster-size", cfg.cluster.min_cluster_size, "smallest acceptable cluster")
      ->group("Clustering")->capture_default_str();
  sub.add_option("--dims", dims, "DTW channels")->group("Clustering")->check(CLI::IsMember({"all", "base"}))->capture_default_str();

  auto& e = cfg.explain;
  sub.add_option("--split", e.split, "training fraction of timesteps")->group("Explain")->capture_default_str();
  sub.add_option("--gate-mae", e.gate_mae, "largest test MAE for a usable surrogate")->group("Explain")->capture_default_str();
  sub.add_option("--iqr-factor", e.iqr_factor, "outlier fence factor")->group("Explain")->capture_default_str();
  sub.add_option("--top-k", e.top_k, "features itemized per local explanation")->group("Explain")->capture_default_str();
  sub.add_flag("--allow-gated", e.allow_gated, "explain dimensions whose surrogate failed the gate")->group("Explain");
  sub.add_option("--dimension", e.dimensions, "dimension to explain (repeatable; default all)")
      ->group("Explain")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sub.add_option("--rounds", e.gbdt.n_rounds, "boosting rounds")->group("Explain")->capture_default_str();
  sub.add_option("--learning-rate", e.gbdt.learning_rate, "shrinkage")->group("Explain")->capture_default_str();
  sub.add_option("--max-depth", e.gbdt.max_depth, "tree depth")->group("Explain")->capture_default_str();
  sub.add_option("--min-samples-leaf", e.gbdt.min_samples_leaf, "rows per leaf")->group("Explain")->capture_default_str();
  sub.add_option("--l2", e.gbdt.l2_leaf_reg, "leaf L2 regularization")->group("Explain")->capture_default_str();
  sub.add_option("--subsample", e.gbdt.subsample, "row fraction per round")->group("Explain")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string dims = "all";
  std::vector<std::string> families;
  double band = 0.1;
  std::size_t k_max = 0;
  std::string config_path;

  CLI::App app{"Interestingness analytics for recorded RL agent traces"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen", "train the synthetic gridworld agent and record traces"},
      {"analyze", "compute interestingness dimensions"},
      {"cluster", "cluster traces by interestingness (DTW + complete linkage)"},
      {"explain", "fit surrogate trees and compute SHAP attributions"},
      {"report", "write mean-over-time data and plots"},
      {"run", "analyze, cluster, explain and report in one go"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_options(*sub, cfg, dims, families, band, k_max, config_path);
    subs[name] = sub;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // Splice config tokens in right after the subcommand name.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (path.empty()) continue;
      const auto sub_pos = std::find_if(args.begin(), args.end(), [&](const std::string& a) { return subs.count(a); });
      if (sub_pos == args.end()) break;
      const auto tokens = config_tokens(path);
      args.insert(sub_pos + 1, tokens.begin(), tokens.end());
      break;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!families.empty()) {
      cfg.gen.families.clear();
      for (const auto& f : families) cfg.gen.families.push_back(grid::parse_family(f));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (band < 0.0 || band > 1.0) {
    err << "error: --band must lie in [0, 1]\n";
    return kExitUsage;
  }
  cfg.cluster.band = band > 0.0 ? std::optional<double>(band) : std::nullopt;
  if (k_max > 0) cfg.cluster.k_max = k_max;
  cfg.cluster.base_dims_only = dims == "base";

  std::vector<Stage> stages;
  if (subs["gen"]->parsed()) stages = {Stage::Gen};
  if (subs["analyze"]->parsed()) stages = {Stage::Analyze};
  if (subs["cluster"]->parsed()) stages = {Stage::Cluster};
  if (subs["explain"]->parsed()) stages = {Stage::Explain};
  if (subs["report"]->parsed()) stages = {Stage::Report};
  if (subs["run"]->parsed()) stages = {Stage::Analyze, Stage::Cluster, Stage::Explain, Stage::Report};
  return run_pipeline(cfg, stages, err);
}

}  // namespace ixdrl
