#include "dgum/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>

#include "dgum/benchmark.hpp"
#include "dgum/gmrf.hpp"
#include "dgum/gum.hpp"
#include "dgum/io.hpp"
#include "dgum/parallel.hpp"
#include "dgum/potts.hpp"
#include "dgum/stats.hpp"

namespace dgum::cli {

namespace {

// Key for the per-site uniforms of pi-sampled labels ("labels").
constexpr std::uint64_t kLabelStream = 0x6c6162656c73;
// Key for pair subsampling in the similarity estimator ("pairs").
constexpr std::uint64_t kPairStream = 0x7061697273;

struct RunConfig {
  std::string config;
  Index height = 150;
  Index width = 150;
  int classes = 2;
  std::vector<int> class_counts{2, 3, 4, 5, 6, 7};
  double sigma = 1.0;
  double kappa = 0.1;
  double nu = 1.0;
  std::string method = "fourier";
  int bands = 5000;
  std::string embedding = "padded";
  std::string metric = "torus";
  std::vector<double> means;
  double c = 1.0;
  std::vector<double> c_values{0.01, 0.1, 0.25, 0.5, 1, 2, 5, 10, 100, 1000};
  std::vector<double> kappa_values{0.01, 0.03, 0.1, 0.3, 1, 3, 10};
  double beta = 0.5;
  std::string neighborhood = "eight";
  std::string interaction = "attractive";
  std::string sampler = "chromatic";
  int max_iters = kDefaultMaxIters;
  std::uint64_t seed = 0;
  int replicates = 10;
  std::string out;
  double d_max = 75;
  int bins = 25;
  Index pair_budget = 100000;
  Index max_lag = 30;
  std::string domain = "plane";
  std::vector<Index> sizes{64, 128, 256};
  std::vector<std::string> methods{"fourier", "spectral", "chromatic"};
  int reps = 10;
  std::string speedup_out;
};

using Handler = std::function<void(const RunConfig&, std::ostream&)>;

struct Command {
  CLI::App* app;
  Handler handler;
  std::unique_ptr<RunConfig> cfg;  // each command has its own defaults
};

const std::vector<std::string> kGmrfMethods{"fourier", "spectral", "cholesky"};
const std::vector<std::string> kEmbeddings{"padded", "periodic", "automatic"};

GridShape grid(const RunConfig& cfg) { return build_grid(cfg.height, cfg.width); }

CovarianceSpec covariance(const RunConfig& cfg) {
  return CovarianceSpec{cfg.sigma, cfg.kappa, cfg.nu};
}

Embedding parse_embedding(const std::string& name) {
  if (name == "periodic") return Embedding::periodic;
  if (name == "automatic") return Embedding::automatic;
  return Embedding::padded;
}

MultivariateGmrfSpec gmrf_spec(const RunConfig& cfg, int classes) {
  MultivariateGmrfSpec spec;
  spec.classes = classes;
  spec.means = cfg.means;
  spec.covariances = {covariance(cfg)};
  spec.method = cfg.method == "spectral"   ? GmrfMethod::spectral
                : cfg.method == "cholesky" ? GmrfMethod::cholesky
                                           : GmrfMethod::fourier;
  spec.bands = cfg.bands;
  spec.embedding = parse_embedding(cfg.embedding);
  spec.cholesky_metric = cfg.metric == "plane" ? DistanceMetric::plane : DistanceMetric::torus;
  return spec;
}

Neighborhood neighborhood(const RunConfig& cfg) {
  return cfg.neighborhood == "four" ? Neighborhood::four : Neighborhood::eight;
}

void add_grid(CLI::App* app, RunConfig& cfg) {
  app->add_option("--height", cfg.height, "Grid rows")->check(CLI::PositiveNumber);
  app->add_option("--width", cfg.width, "Grid columns")->check(CLI::PositiveNumber);
}

void add_seed(CLI::App* app, RunConfig& cfg) {
  app->add_option("--seed", cfg.seed, "Random seed");
}

void add_out(CLI::App* app, RunConfig& cfg) {
  app->add_option("--out", cfg.out, "Output path")->required();
}

void add_classes(CLI::App* app, RunConfig& cfg) {
  app->add_option("--K", cfg.classes, "Number of classes")->check(CLI::Range(2, 256));
}

void add_class_list(CLI::App* app, RunConfig& cfg) {
  app->add_option("--K", cfg.class_counts, "Class counts")
      ->delimiter(',')
      ->check(CLI::Range(2, 256));
}

void add_gmrf(CLI::App* app, RunConfig& cfg, bool with_means = true) {
  app->add_option("--sigma", cfg.sigma, "Matern standard deviation")->check(CLI::PositiveNumber);
  app->add_option("--kappa", cfg.kappa, "Matern inverse range")->check(CLI::PositiveNumber);
  app->add_option("--nu", cfg.nu, "Matern smoothness")->check(CLI::PositiveNumber);
  app->add_option("--method", cfg.method, "GMRF sampler")->check(CLI::IsMember(kGmrfMethods));
  app->add_option("--bands", cfg.bands, "Spectral bands")->check(CLI::Range(1, 10000000));
  app->add_option("--embedding", cfg.embedding, "Fourier torus embedding")
      ->check(CLI::IsMember(kEmbeddings));
  app->add_option("--metric", cfg.metric, "Cholesky distance: torus or plane")
      ->check(CLI::IsMember({"torus", "plane"}));
  if (with_means) {
    app->add_option("--means", cfg.means, "Per-component means")->delimiter(',');
  }
}

void add_replicates(CLI::App* app, RunConfig& cfg, int fallback) {
  cfg.replicates = fallback;
  app->add_option("--replicates", cfg.replicates, "Replicates")->check(CLI::Range(1, 1000000));
}

void add_bandwidth(CLI::App* app, RunConfig& cfg) {
  app->add_option("--c", cfg.c, "Softmax bandwidth")->check(CLI::PositiveNumber);
}

void add_system(CLI::App* app, RunConfig& cfg) {
  app->add_option("--neighborhood", cfg.neighborhood, "Neighborhood system")
      ->check(CLI::IsMember({"four", "eight"}));
}

std::vector<CLI::App*> selected_path(CLI::App& app) {
  std::vector<CLI::App*> path;
  CLI::App* current = &app;
  for (;;) {
    auto subs = current->get_subcommands();
    if (subs.empty()) break;
    current = subs.front();
    path.push_back(current);
  }
  return path;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Flat key=value file; values may be quoted or written as [a, b] lists.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(number) +
                                                 ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                              (value.front() == '[' && value.back() == ']'))) {
      value = value.substr(1, value.size() - 2);
    }
    std::string compact;
    for (char ch : value) {
      if (ch != ' ' && ch != '"') compact += ch;
    }
    if (compact.empty() || compact == "{}") continue;  // unset list
    entries.emplace_back(key, compact);
  }
  return entries;
}

LabelField draw_dgum(const MultivariateSampler& sampler, int classes, Seed seed) {
  return sample_dgum(sampler, ClassSet(classes), seed);
}

void write_curve(const std::string& path, const std::vector<CurvePoint>& curve) {
  io::CsvWriter csv(path, {"x", "mean", "q10", "q90"});
  for (const auto& p : curve) {
    csv << p.x << p.mean << p.q10 << p.q90;
    csv.end_row();
  }
}

void cmd_sample_dgum(const RunConfig& cfg, std::ostream& out) {
  const ClassSet classes(cfg.classes);
  const LabelField labels = sample_dgum(grid(cfg), gmrf_spec(cfg, cfg.classes), classes,
                                        Seed{cfg.seed});
  io::write_label_pgm(cfg.out, labels, classes);
  out << "wrote " << cfg.out << "\n";
}

void cmd_sample_gmrf(const RunConfig& cfg, std::ostream& out) {
  const RealFieldStack z = sample_multivariate(grid(cfg), gmrf_spec(cfg, cfg.classes),
                                               Seed{cfg.seed});
  io::write_field_stack(cfg.out, z);
  out << "wrote " << cfg.out << "\n";
}

void cmd_sample_gum(const RunConfig& cfg, std::ostream& out) {
  const RealFieldStack z = sample_multivariate(grid(cfg), gmrf_spec(cfg, cfg.classes),
                                               Seed{cfg.seed});
  io::write_field_stack(cfg.out, {gum_field(z, cfg.c, ClassSet(cfg.classes))});
  out << "wrote " << cfg.out << "\n";
}

void cmd_sample_pi_labels(const RunConfig& cfg, std::ostream& out) {
  const ClassSet classes(cfg.classes);
  const RealFieldStack z = sample_multivariate(grid(cfg), gmrf_spec(cfg, cfg.classes),
                                               Seed{cfg.seed});
  const LabelField labels =
      sample_labels_from_pi(z, cfg.c, classes, Seed{derive_key(cfg.seed, {kLabelStream})});
  io::write_label_pgm(cfg.out, labels, classes);
  out << "wrote " << cfg.out << "\n";
}

void cmd_sample_potts(const RunConfig& cfg, std::ostream& out) {
  PottsSpec spec;
  spec.classes = cfg.classes;
  spec.beta = cfg.beta;
  spec.system = neighborhood(cfg);
  spec.interaction =
      cfg.interaction == "repulsive" ? Interaction::repulsive : Interaction::attractive;
  const auto schedule =
      cfg.sampler == "sequential" ? GibbsSchedule::sequential : GibbsSchedule::chromatic;
  const GibbsResult result = run_gibbs(grid(cfg), spec, Seed{cfg.seed}, cfg.max_iters, schedule);
  io::write_label_pgm(cfg.out, result.labels, ClassSet(cfg.classes));
  out << "iterations=" << result.iterations << "\nconverged=" << (result.converged ? 1 : 0)
      << "\nwrote " << cfg.out << "\n";
}

void cmd_export_barycentric(const RunConfig& cfg, std::ostream& out) {
  const GridShape shape = grid(cfg);
  const RealFieldStack z = sample_multivariate(shape, gmrf_spec(cfg, 3), Seed{cfg.seed});
  const auto pi = pi_map(z, cfg.c, simplex_vertices<double>(2));
  io::CsvWriter csv(cfg.out, {"row", "col", "pi_0", "pi_1", "pi_2"});
  for (Index s = 0; s < shape.size(); ++s) {
    csv << shape.row(s) << shape.col(s) << pi[0].data()[s] << pi[1].data()[s] << pi[2].data()[s];
    csv.end_row();
  }
  out << "wrote " << cfg.out << "\n";
}

void cmd_stats_balance(const RunConfig& cfg, std::ostream& out) {
  io::CsvWriter csv(cfg.out, {"K", "method", "replicates", "mean_f0", "bias", "std"});
  for (int k : cfg.class_counts) {
    const MultivariateSampler sampler(grid(cfg), gmrf_spec(cfg, k));
    std::vector<LabelField> fields;
    for (int r = 0; r < cfg.replicates; ++r) {
      fields.push_back(draw_dgum(sampler, k, replicate_seed(Seed{cfg.seed}, r)));
    }
    const BalanceReport report = balance_report(fields, ClassSet(k));
    csv << k << cfg.method << report.replicates << report.mean_frequencies(0) << report.bias
        << report.std_dev;
    csv.end_row();
    out << "K=" << k << " bias=" << report.bias << " std=" << report.std_dev << "\n";
  }
  out << "wrote " << cfg.out << "\n";
}

void cmd_stats_pairwise(const RunConfig& cfg, std::ostream& out) {
  const MultivariateSampler sampler(grid(cfg), gmrf_spec(cfg, cfg.classes));
  std::map<double, std::vector<double>> by_distance;
  for (int r = 0; r < cfg.replicates; ++r) {
    const Seed rs = replicate_seed(Seed{cfg.seed}, r);
    const LabelField labels = draw_dgum(sampler, cfg.classes, rs);
    const SimilarityCurve curve = pairwise_similarity(labels, cfg.d_max, cfg.bins, cfg.pair_budget,
                                                      Seed{derive_key(rs.value, {kPairStream})});
    for (std::size_t i = 0; i < curve.distance.size(); ++i) {
      by_distance[curve.distance[i]].push_back(curve.estimate[i]);
    }
  }
  std::vector<CurvePoint> points;
  for (const auto& [d, values] : by_distance) points.push_back(summarize(d, values));
  write_curve(cfg.out, points);
  out << "wrote " << cfg.out << "\n";
}

void cmd_stats_phase_c(const RunConfig& cfg, std::ostream& out) {
  const auto curve = phase_curve_pi(cfg.c_values, grid(cfg), gmrf_spec(cfg, cfg.classes),
                                    cfg.replicates, Seed{cfg.seed}, neighborhood(cfg));
  write_curve(cfg.out, curve);
  out << "wrote " << cfg.out << "\n";
}

void cmd_stats_phase_kappa(const RunConfig& cfg, std::ostream& out) {
  const auto curve =
      phase_curve_kappa(cfg.kappa_values, cfg.class_counts, grid(cfg), gmrf_spec(cfg, 2),
                        cfg.replicates, Seed{cfg.seed}, neighborhood(cfg));
  io::CsvWriter csv(cfg.out, {"K", "x", "mean", "q10", "q90"});
  for (const auto& p : curve) {
    csv << p.classes << p.point.x << p.point.mean << p.point.q10 << p.point.q90;
    csv.end_row();
  }
  out << "wrote " << cfg.out << "\n";
}

void cmd_stats_covariance(const RunConfig& cfg, std::ostream& out) {
  const MultivariateSampler sampler(grid(cfg), gmrf_spec(cfg, 2));
  std::vector<RealField> fields;
  for (int r = 0; r < cfg.replicates; ++r) {
    fields.push_back(sampler.sample_component(0, replicate_seed(Seed{cfg.seed}, r)));
  }
  const LagDomain domain = cfg.domain == "torus" ? LagDomain::torus : LagDomain::plane;
  const auto entries = empirical_covariance(fields, cfg.max_lag, domain);
  const CovarianceSpec cov = covariance(cfg);
  const auto bins = bin_by_distance(entries, static_cast<double>(cfg.max_lag),
                                    [&](double d) { return matern(d, cov); });
  io::CsvWriter csv(cfg.out, {"distance", "empirical", "target", "lags"});
  for (const auto& b : bins) {
    csv << b.distance << b.empirical << b.target << b.lags;
    csv.end_row();
  }
  out << "wrote " << cfg.out << "\n";
}

void cmd_bench(const RunConfig& cfg, std::ostream& out) {
  BenchSettings settings;
  settings.methods.clear();
  for (const auto& m : cfg.methods) settings.methods.push_back(parse_bench_method(m));
  settings.sizes = cfg.sizes;
  settings.classes = cfg.classes;
  settings.reps = cfg.reps;
  settings.seed = Seed{cfg.seed};
  settings.covariance = covariance(cfg);
  settings.bands = cfg.bands;
  settings.beta = cfg.beta;
  settings.system = neighborhood(cfg);
  settings.max_iters = cfg.max_iters;
  settings.embedding = parse_embedding(cfg.embedding);
  const BenchReport report = benchmark(settings);

  io::CsvWriter csv(cfg.out, {"method", "size", "reps", "median_s", "q25_s", "q75_s",
                              "mean_iterations", "nonconverged"});
  for (const auto& row : report.rows) {
    csv << to_string(row.method) << row.size << row.reps << row.median << row.q25 << row.q75
        << row.mean_iterations << row.nonconverged;
    csv.end_row();
  }
  for (const auto& s : report.speedups) {
    out << "speedup size=" << s.size << " gibbs=" << to_string(s.gibbs)
        << " dgum=" << to_string(s.dgum) << " ratio=" << s.ratio << "\n";
  }
  if (!cfg.speedup_out.empty()) {
    io::CsvWriter speed(cfg.speedup_out, {"size", "gibbs", "dgum", "ratio"});
    for (const auto& s : report.speedups) {
      speed << s.size << to_string(s.gibbs) << to_string(s.dgum) << s.ratio;
      speed.end_row();
    }
  }
  out << "wrote " << cfg.out << "\n";
}

std::unique_ptr<CLI::App> build(std::vector<Command>& commands) {
  auto app = std::make_unique<CLI::App>("Discrete label-field sampler and statistics", "dgum");
  app->option_defaults()->always_capture_default();
  app->require_subcommand(1);
  app->set_help_all_flag("--help-all", "Help for every command");

  auto add = [&](CLI::App* parent, const std::string& name, const std::string& about,
                 Handler handler) -> std::pair<CLI::App*, RunConfig&> {
    CLI::App* sub = parent->add_subcommand(name, about);
    commands.push_back({sub, std::move(handler), std::make_unique<RunConfig>()});
    RunConfig& cfg = *commands.back().cfg;
    sub->add_option("--config", cfg.config, "key=value file; flags win");
    return {sub, cfg};
  };

  {
    auto [s, cfg] = add(app.get(), "sample-dgum", "Draw a DGUM label field (PGM)", cmd_sample_dgum);
    add_grid(s, cfg), add_classes(s, cfg), add_gmrf(s, cfg), add_seed(s, cfg), add_out(s, cfg);
  }
  {
    auto [s, cfg] = add(app.get(), "sample-gum", "Draw a GUM real field (field file)",
                        cmd_sample_gum);
    add_grid(s, cfg), add_classes(s, cfg), add_gmrf(s, cfg), add_bandwidth(s, cfg);
    add_seed(s, cfg), add_out(s, cfg);
  }
  {
    auto [s, cfg] = add(app.get(), "sample-pi-labels",
                        "Draw labels from the soft assignment (PGM)", cmd_sample_pi_labels);
    add_grid(s, cfg), add_classes(s, cfg), add_gmrf(s, cfg), add_bandwidth(s, cfg);
    add_seed(s, cfg), add_out(s, cfg);
  }
  {
    auto [s, cfg] = add(app.get(), "sample-gmrf", "Draw the K-1 GMRF components (field file)",
                        cmd_sample_gmrf);
    add_grid(s, cfg), add_classes(s, cfg), add_gmrf(s, cfg), add_seed(s, cfg), add_out(s, cfg);
  }
  {
    auto [s, cfg] = add(app.get(), "sample-potts", "Gibbs-sample a Potts field (PGM)",
                        cmd_sample_potts);
    add_grid(s, cfg), add_classes(s, cfg), add_seed(s, cfg), add_out(s, cfg);
    add_system(s, cfg);
    s->add_option("--beta", cfg.beta, "Interaction strength")->check(CLI::NonNegativeNumber);
    s->add_option("--interaction", cfg.interaction, "Sign convention")
        ->check(CLI::IsMember({"attractive", "repulsive"}));
    s->add_option("--sampler", cfg.sampler, "Sweep schedule")
        ->check(CLI::IsMember({"sequential", "chromatic"}));
    s->add_option("--max-iters", cfg.max_iters, "Sweep cap")->check(CLI::PositiveNumber);
  }
  {
    auto [s, cfg] = add(app.get(), "export-barycentric",
                        "Per-site soft assignments for K=3 (CSV)", cmd_export_barycentric);
    add_grid(s, cfg), add_gmrf(s, cfg), add_bandwidth(s, cfg), add_seed(s, cfg);
    add_out(s, cfg);
    cfg.classes = 3;
    s->add_option("--K", cfg.classes, "Number of classes (must be 3)")->check(CLI::Range(3, 3));
  }
  {
    auto [s, cfg] = add(app.get(), "bench", "Median wall times of DGUM and Gibbs samplers (CSV)",
                        cmd_bench);
    cfg.embedding = "automatic";
    add_classes(s, cfg), add_seed(s, cfg), add_out(s, cfg), add_system(s, cfg);
    add_gmrf(s, cfg, /*with_means=*/false);
    s->add_option("--sizes", cfg.sizes, "Square grid sizes")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    s->add_option("--methods", cfg.methods, "fourier, spectral, sequential, chromatic")
        ->delimiter(',')
        ->check(CLI::IsMember({"fourier", "spectral", "sequential", "chromatic"}));
    s->add_option("--reps", cfg.reps, "Repetitions per cell")->check(CLI::Range(3, 1000000));
    s->add_option("--beta", cfg.beta, "Potts interaction strength")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--max-iters", cfg.max_iters, "Gibbs sweep cap")->check(CLI::PositiveNumber);
    s->add_option("--speedup-out", cfg.speedup_out, "Speedup table (CSV)");
  }

  CLI::App* stats = app->add_subcommand("stats", "Estimators over replicated samples");
  stats->require_subcommand(1);
  {
    auto [s, cfg] = add(stats, "balance", "Class balance of DGUM samples (CSV)",
                        cmd_stats_balance);
    add_grid(s, cfg), add_class_list(s, cfg), add_gmrf(s, cfg, false), add_seed(s, cfg);
    add_out(s, cfg), add_replicates(s, cfg, 50);
  }
  {
    auto [s, cfg] = add(stats, "pairwise", "Pairwise similarity curve of DGUM samples (CSV)",
                        cmd_stats_pairwise);
    add_grid(s, cfg), add_classes(s, cfg), add_gmrf(s, cfg), add_seed(s, cfg), add_out(s, cfg);
    add_replicates(s, cfg, 10);
    s->add_option("--d-max", cfg.d_max, "Largest distance")->check(CLI::PositiveNumber);
    s->add_option("--bins", cfg.bins, "Distance bins")->check(CLI::PositiveNumber);
    s->add_option("--pair-budget", cfg.pair_budget, "Pairs per bin")
        ->check(CLI::PositiveNumber);
  }
  {
    auto [s, cfg] = add(stats, "phase-c",
                        "Neighbor agreement of pi-sampled labels against c (CSV)",
                        cmd_stats_phase_c);
    add_grid(s, cfg), add_classes(s, cfg), add_gmrf(s, cfg), add_seed(s, cfg), add_out(s, cfg);
    add_system(s, cfg), add_replicates(s, cfg, 10);
    s->add_option("--c", cfg.c_values, "Bandwidths")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
  }
  {
    auto [s, cfg] = add(stats, "phase-kappa",
                        "Neighbor agreement of DGUM samples against kappa (CSV)",
                        cmd_stats_phase_kappa);
    add_grid(s, cfg), add_class_list(s, cfg), add_gmrf(s, cfg, false), add_seed(s, cfg);
    add_out(s, cfg), add_system(s, cfg), add_replicates(s, cfg, 10);
    s->remove_option(s->get_option("--kappa"));
    s->add_option("--kappa", cfg.kappa_values, "Inverse ranges")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
  }
  {
    auto [s, cfg] = add(stats, "covariance",
                        "Empirical against Matern covariance by distance (CSV)",
                        cmd_stats_covariance);
    add_grid(s, cfg), add_gmrf(s, cfg, false), add_seed(s, cfg), add_out(s, cfg);
    add_replicates(s, cfg, 200);
    s->add_option("--max-lag", cfg.max_lag, "Largest lag")->check(CLI::PositiveNumber);
    s->add_option("--domain", cfg.domain, "Lag pairs: plane or torus")
        ->check(CLI::IsMember({"plane", "torus"}));
  }
  return app;
}

const Command* selected_command(const std::vector<Command>& commands) {
  for (const auto& c : commands) {
    if (c.app->parsed()) return &c;
  }
  return nullptr;
}

// A config file adds `--key value` for every key the command line left unset,
// then the command line is parsed again from scratch.
int parse(const std::vector<std::string>& args, std::unique_ptr<CLI::App>& app,
          std::vector<Command>& commands, std::ostream& out, std::ostream& err) {
  auto reversed = [](std::vector<std::string> v) {
    std::reverse(v.begin(), v.end());
    return v;
  };
  try {
    app = build(commands);
    app->parse(reversed(args));
    const Command* command = selected_command(commands);
    if (!command || command->cfg->config.empty()) return -1;

    std::vector<std::string> extended = args;
    for (const auto& [key, value] : read_config(command->cfg->config)) {
      if (key == "config") continue;
      const CLI::Option* opt = command->app->get_option_no_throw("--" + key);
      if (!opt) throw CLI::ValidationError("--config", "unknown key '" + key + "'");
      if (opt->count() > 0) continue;
      extended.push_back("--" + key);
      extended.push_back(value);
    }
    commands.clear();
    app = build(commands);
    app->parse(reversed(extended));
    return -1;
  } catch (const CLI::CallForHelp& e) {
    return app->exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app->exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    CLI::App* context = app.get();
    if (auto path = selected_path(*app); !path.empty()) context = path.back();
    err << context->help();
    return kExitUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  apply_thread_env();
  std::unique_ptr<CLI::App> app;
  std::vector<Command> commands;
  if (const int code = parse(args, app, commands, out, err); code >= 0) return code;

  const Command* command = selected_command(commands);
  if (!command) {
    err << app->help();
    return kExitUsage;
  }
  out << "# " << command->app->get_name() << "\n"
      << command->app->config_to_str(/*default_also=*/true, /*write_description=*/false);
  try {
    command->handler(*command->cfg, out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace dgum::cli
