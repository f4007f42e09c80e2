#include "pmlfs/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmlfs/cross_validation.hpp"
#include "pmlfs/dataset.hpp"
#include "pmlfs/errors.hpp"
#include "pmlfs/pipeline.hpp"

namespace pmlfs {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string to_json(const RunConfig& c) {
  ordered_json j;
  j["x"] = c.x;
  j["y"] = c.y;
  j["truth"] = c.truth;
  j["out_dir"] = c.out_dir;
  j["dataset"] = c.dataset;
  j["radius"] = c.radius;
  j["min_pts"] = c.min_pts;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["gamma"] = c.gamma;
  j["max_iter"] = c.max_iter;
  j["rel_tol"] = c.rel_tol;
  j["fractions"] = c.fractions;
  j["folds"] = c.folds;
  j["seed"] = c.seed;
  j["noise_rate"] = c.noise_rate;
  j["method"] = c.method;
  j["trace"] = c.trace;
  j["plain_frobenius_penalty"] = c.plain_frobenius_penalty;
  j["grid"] = c.grid;
  return j.dump(2);
}

void merge_json(RunConfig& c, const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& key = it.key();
      const auto& v = it.value();
      if (key == "x") c.x = v.get<std::string>();
      else if (key == "y") c.y = v.get<std::string>();
      else if (key == "truth") c.truth = v.get<std::string>();
      else if (key == "out_dir") c.out_dir = v.get<std::string>();
      else if (key == "dataset") c.dataset = v.get<std::string>();
      else if (key == "radius") c.radius = v.get<double>();
      else if (key == "min_pts") c.min_pts = v.get<std::size_t>();
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "beta") c.beta = v.get<double>();
      else if (key == "gamma") c.gamma = v.get<double>();
      else if (key == "max_iter") c.max_iter = v.get<std::size_t>();
      else if (key == "rel_tol") c.rel_tol = v.get<double>();
      else if (key == "fractions") c.fractions = v.get<std::vector<double>>();
      else if (key == "folds") c.folds = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "noise_rate") c.noise_rate = v.get<double>();
      else if (key == "method") c.method = v.get<std::string>();
      else if (key == "trace") c.trace = v.get<bool>();
      else if (key == "plain_frobenius_penalty") c.plain_frobenius_penalty = v.get<bool>();
      else if (key == "grid") c.grid = v.get<bool>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

namespace {

// Flags as given on the command line; unset ones fall through to the
// config file and then to RunConfig defaults.
struct Flags {
  std::optional<std::string> x, y, truth, out_dir, dataset, config, method;
  std::optional<double> radius, alpha, beta, gamma, rel_tol, noise_rate;
  std::optional<std::size_t> min_pts, folds, max_iter;
  std::optional<std::uint64_t> seed;
  std::vector<double> fractions;
  bool trace = false, plain = false, grid = false;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--x", f.x, "Feature matrix CSV");
  cmd.add_option("--y", f.y, "Candidate label matrix CSV (0/1)");
  cmd.add_option("--truth", f.truth, "Ground-truth label CSV for evaluation");
  cmd.add_option("--out-dir", f.out_dir, "Directory for output files");
  cmd.add_option("--dataset", f.dataset, "Dataset name used in reports");
  cmd.add_option("--config", f.config, "JSON config file; flags take precedence");
  cmd.add_option("--radius", f.radius, "OPTICS generating distance r");
  cmd.add_option("--min-pts", f.min_pts, "OPTICS neighbourhood size");
  cmd.add_option("--alpha", f.alpha, "Label factorization weight");
  cmd.add_option("--beta", f.beta, "Latent alignment weight");
  cmd.add_option("--gamma", f.gamma, "Row-sparsity weight");
  cmd.add_option("--max-iter", f.max_iter, "Maximum update sweeps");
  cmd.add_option("--rel-tol", f.rel_tol, "Relative objective change that stops the fit");
  cmd.add_option("--fractions", f.fractions, "Feature budgets as fractions of d")->delimiter(',');
  cmd.add_option("--folds", f.folds, "Cross-validation folds");
  cmd.add_option("--seed", f.seed, "Random seed");
  cmd.add_option("--noise-rate", f.noise_rate, "Probability of flipping a 0 label to 1");
  cmd.add_option("--method", f.method, "Ranking: qr, q-only or both");
  cmd.add_flag("--trace", f.trace, "Write the per-iteration training log");
  cmd.add_flag("--plain-frobenius-penalty", f.plain,
               "Use the unweighted sparsity penalty in the Q and R updates");
  cmd.add_flag("--grid", f.grid, "Sweep alpha, beta and gamma one at a time");
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (f.config) merge_json(c, read_file(*f.config));
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(c.x, f.x);
  set(c.y, f.y);
  set(c.truth, f.truth);
  set(c.out_dir, f.out_dir);
  set(c.dataset, f.dataset);
  set(c.method, f.method);
  set(c.radius, f.radius);
  set(c.alpha, f.alpha);
  set(c.beta, f.beta);
  set(c.gamma, f.gamma);
  set(c.rel_tol, f.rel_tol);
  set(c.noise_rate, f.noise_rate);
  set(c.min_pts, f.min_pts);
  set(c.folds, f.folds);
  set(c.max_iter, f.max_iter);
  set(c.seed, f.seed);
  if (!f.fractions.empty()) c.fractions = f.fractions;
  c.trace = c.trace || f.trace;
  c.plain_frobenius_penalty = c.plain_frobenius_penalty || f.plain;
  c.grid = c.grid || f.grid;
  if (c.dataset.empty() && !c.x.empty()) c.dataset = fs::path(c.x).stem().string();
  return c;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required ") + flag);
}

PipelineConfig pipeline_config(const RunConfig& c) {
  PipelineConfig p;
  p.optics.radius = c.radius;
  p.optics.min_pts = c.min_pts;
  p.hp.alpha = c.alpha;
  p.hp.beta = c.beta;
  p.hp.gamma = c.gamma;
  p.hp.max_iter = c.max_iter;
  p.hp.rel_tol = c.rel_tol;
  p.hp.seed = c.seed;
  p.hp.plain_frobenius_penalty = c.plain_frobenius_penalty;
  p.optics.validate();
  p.hp.validate();
  return p;
}

std::vector<RankingMethod> methods_of(const std::string& m) {
  if (m == "both") return {RankingMethod::QR, RankingMethod::Q_ONLY};
  const auto parsed = parse_method(m);
  if (parsed == RankingMethod::RANDOM) throw ConfigError("method must be qr, q-only or both");
  return {parsed};
}

fs::path prepare_out_dir(const RunConfig& c) {
  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw DataError("cannot write " + p.string());
  out << text << '\n';
}

PmlDataset load_normalized(const RunConfig& c) {
  require(c.x, "--x");
  require(c.y, "--y");
  return normalize_minmax(load_csv_pair(c.x, c.y));
}

std::string ranking_file(RankingMethod m) {
  return m == RankingMethod::QR ? "ranking_qr.csv" : "ranking_q_only.csv";
}

void write_trace(const fs::path& p, const FactorState& s) {
  std::ofstream out(p);
  if (!out) throw DataError("cannot write " + p.string());
  out << "iter,objective,feature_term,label_term,alignment_term,sparsity_term,min_entry,"
         "max_entry,collapsed_q_columns\n";
  for (const auto& e : s.log) {
    out << e.iter << ',' << format_number(e.terms.total()) << ','
        << format_number(e.terms.feature) << ',' << format_number(e.terms.label) << ','
        << format_number(e.terms.alignment) << ',' << format_number(e.terms.sparsity) << ','
        << format_number(e.min_entry) << ',' << format_number(e.max_entry) << ','
        << e.collapsed_q_columns << '\n';
  }
}

int cmd_cluster(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto ds = load_normalized(c);
  OpticsParams params{c.radius, c.min_pts};
  params.validate();
  const auto dir = prepare_out_dir(c);
  ReachabilityPlot plot;
  const auto count = latent_dim(ds, params, plot);
  if (count.warning) err << "warning: " << *count.warning << '\n';

  std::ofstream csv(dir / "reachability.csv");
  if (!csv) throw DataError("cannot write " + (dir / "reachability.csv").string());
  csv << "position,point_index,reachability,core_distance\n";
  for (std::size_t pos = 0; pos < plot.order.size(); ++pos) {
    const std::size_t p = plot.order[pos];
    csv << pos << ',' << p << ',' << format_number(plot.reachability[p]) << ','
        << format_number(plot.core_distance[p]) << '\n';
  }
  out << "k=" << count.k << '\n';
  out << "clusters_found=" << count.raw_clusters << '\n';
  return kExitOk;
}

int cmd_inject_noise(const RunConfig& c, std::ostream& out, std::ostream&) {
  require(c.y, "--y");
  auto table = read_csv(c.y);
  const fs::path y_path(c.y);
  PmlDataset ds = make_dataset(Matrix(table.values.rows(), 0), std::move(table.values), {},
                               table.header);
  const auto noisy = inject_candidate_noise(ds, c.noise_rate, c.seed);
  const auto dir = prepare_out_dir(c);
  const auto partial_path = dir / (y_path.stem().string() + ".csv");
  const auto truth_path = dir / (y_path.stem().string() + ".truth.csv");
  if (fs::exists(partial_path) && fs::equivalent(partial_path, y_path)) {
    throw ConfigError("output would overwrite the input labels; choose another --out-dir");
  }
  write_csv(partial_path, noisy.partial.y, table.header);
  write_csv(truth_path, noisy.truth, table.header);

  std::size_t flipped = 0;
  for (std::size_t i = 0; i < noisy.truth.size(); ++i)
    flipped += noisy.truth.data()[i] != noisy.partial.y.data()[i];
  out << "partial=" << partial_path.string() << '\n';
  out << "truth=" << truth_path.string() << '\n';
  out << "flipped=" << flipped << '\n';
  return kExitOk;
}

int cmd_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto ds = load_normalized(c);
  const auto pcfg = pipeline_config(c);
  const auto methods = methods_of(c.method);
  const auto dir = prepare_out_dir(c);

  const auto result = run_pipeline(ds, pcfg);
  if (result.cluster.warning) err << "warning: " << *result.cluster.warning << '\n';
  if (const auto collapsed = result.state.log.back().collapsed_q_columns; collapsed > 0) {
    err << "warning: " << collapsed << " column(s) of Q collapsed to zero\n";
  }
  for (RankingMethod m : methods) {
    write_ranking_csv(dir / ranking_file(m), rank_features(result.state, m), ds.feature_names);
  }
  if (c.trace) write_trace(dir / "trace.csv", result.state);
  write_text(dir / "run_config.json", to_json(c));

  out << "k=" << result.cluster.k << '\n';
  out << "iterations=" << result.state.iter << '\n';
  out << "initial_objective=" << format_number(result.state.objective_trace.front()) << '\n';
  out << "final_objective=" << format_number(result.state.objective_trace.back()) << '\n';
  return kExitOk;
}

struct EvalInputs {
  PmlDataset partial;
  Matrix truth;
};

std::vector<double> fractions_for(const RunConfig& c, std::size_t d) {
  return c.fractions.empty() ? default_fractions(d) : c.fractions;
}

void write_reports(const fs::path& dir, const RunConfig& c,
                   const std::vector<MetricsReport>& reports) {
  write_report_csv(dir / "report.csv", c.dataset, reports);
  write_summary_json(dir / "summary.json", c.dataset, reports);
  write_text(dir / "run_config.json", to_json(c));
}

void print_summary(std::ostream& out, const std::vector<MetricsReport>& reports) {
  out << "classifier: binary-relevance ridge regression (stand-in for an SVM)\n";
  for (const auto& r : reports) {
    out << r.method;
    for (Metric m : kAllMetrics) {
      const auto s = r.overall(m);
      out << ' ' << metric_name(m) << '=' << format_number(s.mean) << "+-" << format_number(s.std);
    }
    out << '\n';
  }
}

int cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream&) {
  require(c.truth, "--truth");
  const auto partial = load_normalized(c);
  const Matrix truth = load_label_csv(c.truth);
  const auto pcfg = pipeline_config(c);
  const auto methods = methods_of(c.method);
  const auto plan = make_folds(partial.n_instances(), c.folds, c.seed);
  const auto dir = prepare_out_dir(c);

  const auto fractions = fractions_for(c, partial.n_features());
  const auto reports = cross_validate(partial, truth, fsla_provider(pcfg, methods), fractions, plan);
  write_reports(dir, c, reports);
  print_summary(out, reports);
  return kExitOk;
}

int cmd_benchmark(const RunConfig& c, std::ostream& out, std::ostream&) {
  EvalInputs in;
  if (c.truth.empty()) {
    const auto clean = load_normalized(c);
    auto noisy = inject_candidate_noise(clean, c.noise_rate, c.seed);
    in = {std::move(noisy.partial), std::move(noisy.truth)};
  } else {
    in = {load_normalized(c), load_label_csv(c.truth)};
  }
  const auto pcfg = pipeline_config(c);
  const std::vector<RankingMethod> methods = {RankingMethod::QR, RankingMethod::Q_ONLY};
  const auto plan = make_folds(in.partial.n_instances(), c.folds, c.seed);
  const auto dir = prepare_out_dir(c);
  const auto fractions = fractions_for(c, in.partial.n_features());

  const auto reports =
      cross_validate(in.partial, in.truth, fsla_provider(pcfg, methods), fractions, plan);
  write_reports(dir, c, reports);

  {
    std::ofstream csv(dir / "ablation.csv");
    if (!csv) throw DataError("cannot write " + (dir / "ablation.csv").string());
    csv << "dataset,method,micro_f1_mean,micro_f1_std,macro_f1_mean,macro_f1_std\n";
    for (const auto& r : reports) {
      const auto mi = r.overall(Metric::MicroF1), ma = r.overall(Metric::MacroF1);
      csv << c.dataset << ',' << r.method << ',' << format_number(mi.mean) << ','
          << format_number(mi.std) << ',' << format_number(ma.mean) << ','
          << format_number(ma.std) << '\n';
    }
  }

  if (c.grid) {
    std::ofstream csv(dir / "grid.csv");
    if (!csv) throw DataError("cannot write " + (dir / "grid.csv").string());
    csv << "parameter,value,method";
    for (Metric m : kAllMetrics) csv << ',' << metric_name(m) << "_mean," << metric_name(m) << "_std";
    csv << '\n';
    const double values[] = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};
    const char* params[] = {"alpha", "beta", "gamma"};
    for (const char* param : params) {
      for (double v : values) {
        PipelineConfig g = pcfg;
        double& slot = param[0] == 'a' ? g.hp.alpha : param[0] == 'b' ? g.hp.beta : g.hp.gamma;
        slot = v;
        const auto grid_reports =
            cross_validate(in.partial, in.truth, fsla_provider(g, methods), fractions, plan);
        for (const auto& r : grid_reports) {
          csv << param << ',' << format_number(v) << ',' << r.method;
          for (Metric m : kAllMetrics) {
            const auto s = r.overall(m);
            csv << ',' << format_number(s.mean) << ',' << format_number(s.std);
          }
          csv << '\n';
        }
      }
    }
  }
  print_summary(out, reports);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partial multi-label feature selection by latent space alignment", "pmlfs"};
  app.require_subcommand(1);
  Flags flags;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&, std::ostream&, std::ostream&);
  };
  const Command commands[] = {
      {"cluster", "Determine the latent dimension and write the reachability plot", cmd_cluster},
      {"inject-noise", "Add false-positive candidate labels and write the truth sidecar",
       cmd_inject_noise},
      {"fit", "Fit the factorization and write feature rankings", cmd_fit},
      {"evaluate", "Cross-validate feature budgets against ground truth", cmd_evaluate},
      {"benchmark", "Evaluate QR and Q-only rankings on identical folds", cmd_benchmark},
  };
  std::vector<CLI::App*> subs;
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    add_flags(*sub, flags);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const RunConfig cfg = resolve(flags);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return commands[i].run(cfg, out, err);
    }
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ShapeError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"pmlfs"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pmlfs
