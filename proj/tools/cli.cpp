#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lgol/baselines.hpp"
#include "lgol/error.hpp"
#include "lgol/experiments.hpp"
#include "lgol/geojson.hpp"
#include "lgol/ingestion.hpp"
#include "lgol/predictor.hpp"
#include "lgol/synth.hpp"
#include "lgol/zone_learning.hpp"

#ifndef LGOL_VERSION
#define LGOL_VERSION "0.0.0"
#endif

namespace lgol::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct WeightFlags {
  double omega = 0.9;
  double first = 0.2;
  double zone = 0.8;
  double last = 1.0;
  bool structured = false;
  std::string metric = "traveltime";
  CLI::Option* omega_opt = nullptr;
  std::vector<CLI::Option*> structured_opts;
  CLI::Option* metric_opt = nullptr;

  void attach(CLI::App* app) {
    omega_opt = app->add_option("--omega", omega, "scalar distance weight (default 0.9)")->check(CLI::Range(0.0, 1.0));
    auto* f = app->add_option("--omega-f", first, "station-row weight (default 0.2)")->check(CLI::Range(0.0, 1.0));
    auto* z = app->add_option("--omega-z", zone, "zone-to-zone weight (default 0.8)")->check(CLI::Range(0.0, 1.0));
    auto* l = app->add_option("--omega-l", last, "return-leg weight (default 1)")->check(CLI::Range(0.0, 1.0));
    auto* s = app->add_flag("--structured", structured, "structured weights with defaults for unset parts");
    structured_opts = {f, z, l, s};
    for (auto* o : structured_opts) omega_opt->excludes(o);
    metric_opt = app->add_option("--metric", metric, "zone distance backend")
                     ->check(CLI::IsMember({"euclid", "traveltime"}));
  }

  bool structured_mode() const {
    for (auto* o : structured_opts)
      if (o->count() > 0) return true;
    return false;
  }

  WeightConfig config() const {
    const MetricChoice m = metric_from_string(metric);
    WeightConfig w = structured_mode() ? WeightConfig::station_weights(first, zone, last, m)
                                       : WeightConfig::scalar(omega, m);
    w.validate();
    return w;
  }
};

struct SolverFlags {
  std::size_t exact_threshold = SolverOptions{}.exact_threshold;
  std::uint64_t seed = SolverOptions{}.seed;
  std::size_t jobs = 1;

  void attach(CLI::App* app) {
    app->add_option("--exact-threshold", exact_threshold, "largest node count solved exactly")
        ->check(CLI::Range(std::size_t{1}, std::size_t{24}));
    app->add_option("--seed", seed, "solver seed");
    app->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }

  PredictorOptions predictor(MetricChoice local = MetricChoice::TravelTime) const {
    PredictorOptions p;
    p.solver.exact_threshold = exact_threshold;
    p.solver.seed = seed;
    p.local_metric = local;
    return p;
  }
};

json weights_json(const WeightConfig& w) {
  json j;
  j["metric"] = std::string(to_string(w.metric));
  if (w.structured) {
    j["omega_f"] = w.structured->first;
    j["omega_z"] = w.structured->zone;
    j["omega_l"] = w.structured->last;
  } else {
    j["omega"] = *w.omega;
  }
  return j;
}

class Manifest {
 public:
  Manifest(std::string command, int argc, const char* const* argv)
      : started_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["argv"] = std::vector<std::string>(argv, argv + argc);
    doc_["version"] = LGOL_VERSION;
    doc_["config"] = json::object();
    doc_["seeds"] = json::object();
    doc_["inputs"] = json::array();
    doc_["outputs"] = json::array();
  }

  json& config() { return doc_["config"]; }
  void seed(const std::string& name, std::uint64_t value) { doc_["seeds"][name] = value; }
  void input(const fs::path& p) { doc_["inputs"].push_back(p.string()); }
  void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }

  void write(const fs::path& path) {
    doc_["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    write_text_file(path, doc_.dump(2) + "\n");
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point started_;
};

fs::path manifest_next_to(const fs::path& file) {
  return file.parent_path() / (file.filename().string() + ".manifest.json");
}

void report_rejections(const Corpus& corpus, std::ostream& err) {
  for (const auto& r : corpus.rejections)
    err << "rejected " << r.route_id << " (" << r.field_path << "): " << r.reason << "\n";
}

// A corpus directory, or a route_data file whose siblings hold travel times
// and (optionally) actual sequences.
Corpus load_routes(const fs::path& where, const std::string& travel_override, std::ostream& err) {
  CorpusPaths paths;
  if (fs::is_directory(where)) {
    paths = CorpusPaths::in_directory(where);
  } else {
    paths = CorpusPaths::in_directory(where.parent_path());
    paths.route_data = where;
  }
  if (!travel_override.empty()) paths.travel_times = travel_override;
  Corpus corpus = impute_corpus(load_corpus(paths));
  report_rejections(corpus, err);
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, where.string() + ": no usable routes");
  return corpus;
}

std::string model_file_name(const StationId& station) {
  std::string name = station.value;
  for (char& c : name)
    if (c == '/' || c == '\\' || c == ':') c = '_';
  return name + ".json";
}

ZoneModel load_model_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, dir.string() + ": not a model directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json" && entry.path().filename() != "run_manifest.json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<CountMatrix> counts;
  for (const auto& f : files) counts.push_back(load_count_matrix(f));
  if (counts.empty()) throw Error(ErrorCode::EmptyCorpus, dir.string() + ": no count matrices");
  return ZoneModel(counts);
}

void write_outputs(const fs::path& dir, const std::string& stem, const std::string& csv, const std::string& js,
                   Manifest& manifest) {
  write_text_file(dir / (stem + ".csv"), csv);
  write_text_file(dir / (stem + ".json"), js);
  manifest.output(dir / (stem + ".csv"));
  manifest.output(dir / (stem + ".json"));
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zone-aware delivery route sequence prediction", "lgol"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", LGOL_VERSION);

  // generate
  GeneratorConfig gen;
  std::string gen_out, gen_policy = "shortest";
  auto* generate_cmd = app.add_subcommand("generate", "write a synthetic corpus");
  generate_cmd->add_option("--out", gen_out, "corpus directory")->required();
  generate_cmd->add_option("--stations", gen.station_count, "stations")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--zones", gen.zones_per_station, "zones per station")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--routes", gen.route_count, "routes per station")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--habit", gen.habit_strength, "habit strength")->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("--bands", gen.habit_bands, "habit strips")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--policy", gen_policy, "within-zone order")->check(CLI::IsMember({"shortest", "random"}));
  generate_cmd->add_option("--seed", gen.noise_seed, "generator seed");

  // learn
  std::string learn_in, learn_out;
  auto* learn_cmd = app.add_subcommand("learn", "learn per-station zone transition counts");
  learn_cmd->add_option("--in", learn_in, "training corpus directory")->required();
  learn_cmd->add_option("--out", learn_out, "model directory")->required();

  // predict
  std::string pred_model, pred_routes, pred_travel, pred_out;
  WeightFlags pred_w;
  SolverFlags pred_s;
  auto* predict_cmd = app.add_subcommand("predict", "predict stop sequences");
  predict_cmd->add_option("--model", pred_model, "model directory, or nn / tsp for a baseline")->required();
  predict_cmd->add_option("--routes", pred_routes, "corpus directory or route_data file")->required();
  predict_cmd->add_option("--travel-times", pred_travel, "travel time file (default: next to the routes)");
  predict_cmd->add_option("--out", pred_out, "predictions file")->required();
  pred_w.attach(predict_cmd);
  pred_s.attach(predict_cmd);

  // score
  std::string score_pred, score_actual, score_out;
  auto* score_cmd = app.add_subcommand("score", "score predictions against actual sequences");
  score_cmd->add_option("--pred", score_pred, "predictions file")->required();
  score_cmd->add_option("--actual", score_actual, "corpus directory with actual sequences")->required();
  score_cmd->add_option("--out", score_out, "per-route report (.json or .csv)");

  // cv
  std::string cv_in, cv_out;
  std::size_t cv_folds = 5;
  std::uint64_t cv_seed = 42;
  double cv_step = 0.1;
  WeightFlags cv_w;
  SolverFlags cv_s;
  auto* cv_cmd = app.add_subcommand("cv", "cross-validated sweep of the scalar weight");
  cv_cmd->add_option("--in", cv_in, "corpus directory")->required();
  cv_cmd->add_option("--out", cv_out, "output directory")->required();
  cv_cmd->add_option("--folds", cv_folds, "folds")->check(CLI::Range(std::size_t{2}, std::size_t{100}));
  cv_cmd->add_option("--fold-seed", cv_seed, "fold assignment seed");
  cv_cmd->add_option("--step", cv_step, "grid step")->check(CLI::Range(0.01, 1.0));
  cv_cmd->add_option("--metric", cv_w.metric, "zone distance backend (default: both)")
      ->check(CLI::IsMember({"euclid", "traveltime"}));
  cv_s.attach(cv_cmd);

  // contour
  std::string ct_in, ct_out;
  std::size_t ct_folds = 5;
  std::uint64_t ct_seed = 42;
  double ct_step = 0.1, ct_last = 1.0;
  std::size_t ct_pairs = 3;
  SolverFlags ct_s;
  auto* contour_cmd = app.add_subcommand("contour", "cross-validated grid over station and zone weights");
  contour_cmd->add_option("--in", ct_in, "corpus directory")->required();
  contour_cmd->add_option("--out", ct_out, "output directory")->required();
  contour_cmd->add_option("--folds", ct_folds, "folds")->check(CLI::Range(std::size_t{2}, std::size_t{100}));
  contour_cmd->add_option("--fold-seed", ct_seed, "fold assignment seed");
  contour_cmd->add_option("--step", ct_step, "grid step")->check(CLI::Range(0.01, 1.0));
  contour_cmd->add_option("--omega-l", ct_last, "return-leg weight of the grid")->check(CLI::Range(0.0, 1.0));
  contour_cmd->add_option("--top", ct_pairs, "best pairs re-run over the return-leg grid");
  ct_s.attach(contour_cmd);

  // bench
  std::string bench_in, bench_out;
  double bench_fraction = 0.2;
  std::uint64_t bench_split_seed = 7;
  WeightFlags bench_w;
  SolverFlags bench_s;
  auto* bench_cmd = app.add_subcommand("bench", "benchmark table on a held-out split");
  bench_cmd->add_option("--in", bench_in, "corpus directory")->required();
  bench_cmd->add_option("--out", bench_out, "output directory")->required();
  bench_cmd->add_option("--test-fraction", bench_fraction, "held-out share")->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--split-seed", bench_split_seed, "split seed");
  bench_w.attach(bench_cmd);
  bench_s.attach(bench_cmd);

  // export-geojson
  std::string geo_routes, geo_route, geo_pred, geo_out;
  auto* geo_cmd = app.add_subcommand("export-geojson", "write one route as GeoJSON");
  geo_cmd->add_option("--routes", geo_routes, "corpus directory or route_data file")->required();
  geo_cmd->add_option("--route", geo_route, "route id (default: first)");
  geo_cmd->add_option("--pred", geo_pred, "predictions file (default: actual sequence)");
  geo_cmd->add_option("--out", geo_out, "GeoJSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const CLI::App* cmd = app.get_subcommands().front();
  Manifest manifest(cmd->get_name(), argc, argv);

  try {
    if (cmd == generate_cmd) {
      if (gen_policy == "random") gen.within_zone_policy = WithinZonePolicy::Random;
      const Corpus corpus = generate(gen);
      const auto paths = CorpusPaths::in_directory(gen_out);
      write_corpus(corpus, paths);
      auto& c = manifest.config();
      c["station_count"] = gen.station_count;
      c["zones_per_station"] = gen.zones_per_station;
      c["route_count"] = gen.route_count;
      c["habit_strength"] = gen.habit_strength;
      c["habit_bands"] = gen.habit_bands;
      c["within_zone_policy"] = std::string(to_string(gen.within_zone_policy));
      manifest.seed("generator", gen.noise_seed);
      for (const auto& p : {paths.route_data, paths.sequences, paths.travel_times}) manifest.output(p);
      manifest.write(fs::path(gen_out) / "run_manifest.json");
      out << "wrote " << corpus.size() << " routes to " << gen_out << "\n";
      return 0;
    }

    if (cmd == learn_cmd) {
      const Corpus corpus = load_routes(learn_in, "", err);
      manifest.input(learn_in);
      for (const auto& m : learn_counts(corpus)) {
        const fs::path file = fs::path(learn_out) / model_file_name(m.station());
        save_count_matrix(m, file);
        manifest.output(file);
      }
      manifest.write(fs::path(learn_out) / "run_manifest.json");
      out << "learned " << corpus.stations.size() << " station models from " << corpus.size() << " routes\n";
      return 0;
    }

    if (cmd == predict_cmd) {
      const Corpus corpus = load_routes(pred_routes, pred_travel, err);
      const WeightConfig w = pred_w.config();
      const PredictorOptions popt = pred_s.predictor();
      std::optional<ZoneModel> model;
      if (pred_model != "nn" && pred_model != "tsp") {
        model = load_model_dir(pred_model);
        model->ensure_stations(corpus.stations);
      }
      std::vector<Sequence> orders(corpus.size());
      detail::parallel_for(corpus.size(), pred_s.jobs, [&](std::size_t i) {
        const Route& r = corpus.routes[i];
        if (pred_model == "nn")
          orders[i] = nearest_neighbor(r).stop_order;
        else if (pred_model == "tsp")
          orders[i] = full_tsp(r, popt.solver).stop_order;
        else
          orders[i] = predict(r, model->for_station(r.station), w, popt).stop_order;
      });
      PredictionMap predictions;
      for (std::size_t i = 0; i < corpus.size(); ++i) predictions[corpus.routes[i].route_id.value] = orders[i];
      write_predictions(predictions, corpus, pred_out);
      manifest.config()["model"] = pred_model;
      manifest.config()["weights"] = weights_json(w);
      manifest.config()["exact_threshold"] = pred_s.exact_threshold;
      manifest.config()["jobs"] = pred_s.jobs;
      manifest.seed("solver", pred_s.seed);
      manifest.input(pred_model);
      manifest.input(pred_routes);
      manifest.output(pred_out);
      manifest.write(manifest_next_to(pred_out));
      out << "predicted " << predictions.size() << " routes\n";
      return 0;
    }

    if (cmd == score_cmd) {
      const Corpus corpus = load_routes(score_actual, "", err);
      const PredictionMap predictions = read_predictions(score_pred, corpus);
      std::vector<EvaluationReport> reports;
      for (const auto& route : corpus.routes) {
        const auto it = predictions.find(route.route_id.value);
        if (it == predictions.end()) continue;
        if (!route.actual_sequence)
          throw Error(ErrorCode::MissingActualSequence, route.route_id.value + ": no actual sequence");
        reports.push_back(route_score(route, *route.actual_sequence, it->second));
      }
      const CorpusScore s = corpus_performance(std::move(reports));
      manifest.input(score_pred);
      manifest.input(score_actual);
      if (!score_out.empty()) {
        const bool csv = fs::path(score_out).extension() == ".csv";
        write_text_file(score_out, csv ? reports_to_csv(s) : reports_to_json(s));
        manifest.output(score_out);
        manifest.write(manifest_next_to(score_out));
      }
      out << "routes: " << s.per_route.size() << "\n";
      out << "SD_zone: " << s.mean_sd_zone() << "\n";
      out << "SD_stop: " << s.mean_sd_stop() << "\n";
      out << "Performance: " << s.performance << "\n";
      return 0;
    }

    if (cmd == cv_cmd) {
      const Corpus corpus = load_routes(cv_in, "", err);
      ExperimentOptions opt;
      opt.folds = cv_folds;
      opt.seed = cv_seed;
      opt.jobs = cv_s.jobs;
      opt.predictor = cv_s.predictor();
      std::vector<MetricChoice> metrics;
      if (cv_cmd->get_option("--metric")->count() > 0)
        metrics.push_back(metric_from_string(cv_w.metric));
      else
        metrics = {MetricChoice::Euclidean, MetricChoice::TravelTime};
      for (MetricChoice m : metrics) {
        const SweepResult sweep = omega_sweep(corpus, m, opt, cv_step);
        const std::string stem = "sweep_" + std::string(to_string(m));
        write_outputs(cv_out, stem, sweep_to_csv(sweep), sweep_to_json(sweep), manifest);
        const auto& best = sweep.grid[sweep.best_index()];
        out << to_string(m) << ": best omega " << *best.omega << " performance "
            << sweep.performances[sweep.best_index()] << "\n";
      }
      manifest.config()["folds"] = cv_folds;
      manifest.config()["step"] = cv_step;
      manifest.config()["exact_threshold"] = cv_s.exact_threshold;
      manifest.seed("folds", cv_seed);
      manifest.seed("solver", cv_s.seed);
      manifest.input(cv_in);
      manifest.write(fs::path(cv_out) / "run_manifest.json");
      return 0;
    }

    if (cmd == contour_cmd) {
      const Corpus corpus = load_routes(ct_in, "", err);
      ExperimentOptions opt;
      opt.folds = ct_folds;
      opt.seed = ct_seed;
      opt.jobs = ct_s.jobs;
      opt.predictor = ct_s.predictor();
      const auto grid = unit_grid(ct_step);
      const SweepResult surface = station_weight_grid(corpus, grid, grid, ct_last, opt);
      write_outputs(ct_out, "contour", sweep_to_csv(surface), sweep_to_json(surface), manifest);

      std::vector<std::size_t> order(surface.grid.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&surface](std::size_t a, std::size_t b) {
        return surface.performances[a] < surface.performances[b];
      });
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t k = 0; k < std::min(ct_pairs, order.size()); ++k) {
        const auto& s = *surface.grid[order[k]].structured;
        pairs.emplace_back(s.first, s.zone);
      }
      const SweepResult last = last_weight_sweep(corpus, pairs, grid, opt);
      write_outputs(ct_out, "last_weight", sweep_to_csv(last), sweep_to_json(last), manifest);

      const auto& best = *surface.grid[order.front()].structured;
      out << "best (omega_f, omega_z) at omega_l=" << ct_last << ": (" << best.first << ", " << best.zone
          << ") performance " << surface.performances[order.front()] << "\n";
      manifest.config()["folds"] = ct_folds;
      manifest.config()["step"] = ct_step;
      manifest.config()["omega_l"] = ct_last;
      manifest.config()["top"] = ct_pairs;
      manifest.seed("folds", ct_seed);
      manifest.seed("solver", ct_s.seed);
      manifest.input(ct_in);
      manifest.write(fs::path(ct_out) / "run_manifest.json");
      return 0;
    }

    if (cmd == bench_cmd) {
      const Corpus corpus = load_routes(bench_in, "", err);
      const WeightConfig w = bench_w.config();
      const TrainTestSplit split = split_corpus(corpus, bench_fraction, bench_split_seed);
      ZoneModel model = ZoneModel::learn(split.train);
      model.ensure_stations(split.test.stations);
      ExperimentOptions opt;
      opt.jobs = bench_s.jobs;
      opt.predictor = bench_s.predictor();
      const BenchmarkTable table = benchmark_table(split.test, model, w, opt);
      const std::string text = benchmark_to_text(table);
      write_text_file(fs::path(bench_out) / "table.txt", text);
      manifest.output(fs::path(bench_out) / "table.txt");
      write_outputs(bench_out, "table", benchmark_to_csv(table), benchmark_to_json(table), manifest);
      out << "train " << split.train.size() << " / test " << split.test.size() << " routes, " << w.describe()
          << "\n"
          << text;
      manifest.config()["weights"] = weights_json(w);
      manifest.config()["test_fraction"] = bench_fraction;
      manifest.config()["exact_threshold"] = bench_s.exact_threshold;
      manifest.seed("split", bench_split_seed);
      manifest.seed("solver", bench_s.seed);
      manifest.input(bench_in);
      manifest.write(fs::path(bench_out) / "run_manifest.json");
      return 0;
    }

    if (cmd == geo_cmd) {
      const Corpus corpus = load_routes(geo_routes, "", err);
      const Route* route = &corpus.routes.front();
      if (!geo_route.empty()) {
        route = nullptr;
        for (const auto& r : corpus.routes)
          if (r.route_id.value == geo_route) route = &r;
        if (route == nullptr) throw Error(ErrorCode::FormatError, "unknown route " + geo_route);
      }
      Sequence order;
      std::string label = "actual";
      if (!geo_pred.empty()) {
        const PredictionMap predictions = read_predictions(geo_pred, corpus);
        const auto it = predictions.find(route->route_id.value);
        if (it == predictions.end())
          throw Error(ErrorCode::FormatError, geo_pred + ": no prediction for " + route->route_id.value);
        order = it->second;
        label = "predicted";
        manifest.input(geo_pred);
      } else {
        if (!route->actual_sequence)
          throw Error(ErrorCode::MissingActualSequence, route->route_id.value + ": no actual sequence");
        order = *route->actual_sequence;
      }
      write_text_file(geo_out, sequence_to_geojson(*route, order, label));
      manifest.config()["route"] = route->route_id.value;
      manifest.input(geo_routes);
      manifest.output(geo_out);
      manifest.write(manifest_next_to(geo_out));
      out << "wrote " << geo_out << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error [IoError]: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error [FormatError]: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace lgol::cli
