#include "mdu/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mdu/alignment.hpp"
#include "mdu/analysis.hpp"
#include "mdu/io.hpp"
#include "mdu/optimizer.hpp"
#include "mdu/simulation.hpp"
#include "mdu/version.hpp"

namespace mdu {

namespace {

struct FitArgs {
  std::string input, out, report;
  FitOptions options;
};

int run_fit(const FitArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  ResponseMatrix data = load_response_csv(args.input);
  FitResult fit = fit_multistart(data, args.options);
  if (!std::isfinite(fit.final_objective))
    throw NumericalError("fit produced a non-finite objective");
  save_configuration(fit.config, args.out);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!args.report.empty()) {
    RunReport report;
    report.version = kVersion;
    report.seed = args.options.seed;
    report.options = args.options;
    report.final_objective = fit.final_objective;
    report.iterations = fit.iterations;
    report.converged = fit.converged;
    report.start_index = fit.start_index;
    report.per_start_objectives = fit.per_start_objectives;
    report.per_start_iterations = fit.per_start_iterations;
    report.per_start_converged = fit.per_start_converged;
    report.wall_seconds = seconds;
    write_file_atomic(args.report, report.to_json());
  }
  std::cout << "fit: N=" << data.n_persons() << " J=" << data.n_items()
            << " objective=" << fit.final_objective << " iterations=" << fit.iterations
            << " converged=" << (fit.converged ? "yes" : "no") << " start=" << fit.start_index
            << " (" << seconds << " s)\n";
  return 0;
}

struct SimulateArgs {
  Index j = 200;
  Index n_mult = 20;
  Index true_dim = 2;
  double radius = 1.0;
  double delta = 0.1;
  std::uint64_t seed = 0;
  std::optional<double> missing_frac;
  std::string out, truth;
};

int run_simulate(const SimulateArgs& args) {
  const Index n = args.n_mult * args.j;
  Rng rng = make_rng(args.seed, {static_cast<std::uint64_t>(args.j)});
  Configuration truth = random_configuration(n, args.j, args.true_dim, args.radius, rng);
  ResponseMatrix data = generate_responses(truth, LinkFunction(args.delta), rng);
  if (args.missing_frac) {
    if (!(*args.missing_frac > 0.0 && *args.missing_frac <= 1.0))
      throw DataError("--missing-frac must lie in (0, 1]");
    BinaryMatrix mask = generate_missing_mask(
        n, args.j, *args.missing_frac * static_cast<double>(n) * static_cast<double>(args.j), rng);
    data = ResponseMatrix(std::move(data.values), std::move(mask));
  }
  save_response_csv(data, args.out);
  save_configuration(truth, args.truth);
  std::cout << "simulate: N=" << n << " J=" << args.j << " observed=" << data.observed_count()
            << " -> " << args.out << ", " << args.truth << "\n";
  return 0;
}

struct AlignArgs {
  std::string truth, estimate;
  bool pad = false;
};

int run_align(const AlignArgs& args) {
  Configuration truth = load_configuration(args.truth);
  Configuration estimate = load_configuration(args.estimate);
  if (truth.dim() != estimate.dim() && !args.pad)
    throw DataError("dimensions differ (" + std::to_string(truth.dim()) + " vs " +
                    std::to_string(estimate.dim()) + "); rerun with --pad");
  double config_loss = average_config_loss(truth, estimate);
  double dist_loss = distance_matrix_loss(partial_distance_matrix(estimate),
                                          partial_distance_matrix(truth));
  std::cout << std::setprecision(12) << "config_loss " << config_loss << "\n"
            << "distance_loss " << dist_loss << "\n";
  return 0;
}

struct ClusterArgs {
  std::string config, truth_labels, out;
  int k1 = 2, k2 = 2, restarts = 10;
  std::uint64_t seed = 0;
};

int run_cluster(const ClusterArgs& args) {
  Configuration config = load_configuration(args.config);
  Rng rng = make_rng(args.seed);
  BiClustering clusters = bicluster(config, args.k1, args.k2, args.restarts, rng);
  if (!args.out.empty())
    save_labels_csv({clusters.person_labels, clusters.item_labels}, args.out);
  std::cout << "cluster: N=" << config.n_persons() << " J=" << config.n_items()
            << " k1=" << args.k1 << " k2=" << args.k2 << "\n";
  if (!args.truth_labels.empty()) {
    LabelTable truth = load_labels_csv(args.truth_labels);
    if (truth.person_labels.size() != clusters.person_labels.size() ||
        truth.item_labels.size() != clusters.item_labels.size())
      throw DataError("truth labels do not match the configuration size");
    std::cout << "person_agreement "
              << cluster_agreement(truth.person_labels, clusters.person_labels, args.k1) << "\n"
              << "item_agreement "
              << cluster_agreement(truth.item_labels, clusters.item_labels, args.k2) << "\n";
  }
  return 0;
}

struct StudyArgs {
  std::string spec, out;
};

int run_study_cmd(const StudyArgs& args) {
  StudySpec spec = load_study_spec_json(args.spec);
  StudyReport report =
      run_study(spec, [](const std::string& line) { std::cerr << line << std::endl; });
  write_file_atomic(args.out, study_report_csv(report));
  std::cout << study_report_summary(report);
  return 0;
}

struct AnalyzeArgs {
  std::string config, covariate, rotate = "items", out;
};

int run_analyze(const AnalyzeArgs& args) {
  Configuration config = load_configuration(args.config);
  const PointSet which = args.rotate == "persons" ? PointSet::persons : PointSet::items;
  Configuration rotated = rotate_to_principal_axes(config, which);
  if (!args.out.empty()) save_configuration(rotated, args.out);
  std::vector<double> covariate = load_column_csv(args.covariate);
  const Matrix& selected = which == PointSet::persons ? rotated.persons : rotated.items;
  if (static_cast<Index>(covariate.size()) != selected.rows())
    throw DataError("covariate has " + std::to_string(covariate.size()) + " rows, expected " +
                    std::to_string(selected.rows()));
  for (Index k = 0; k < selected.cols(); ++k) {
    std::vector<double> coord(selected.rows());
    for (Index r = 0; r < selected.rows(); ++r) coord[static_cast<std::size_t>(r)] = selected(r, k);
    std::cout << "tau_axis_" << k + 1 << " " << kendall_tau(coord, covariate) << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Distance-based multidimensional unfolding for binary response matrices"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Estimate ideal points from a response CSV");
  fit->add_option("input", fit_args.input, "response CSV")->required();
  fit->add_option("--dim", fit_args.options.dim, "latent dimension")->capture_default_str();
  fit->add_option("--bound", fit_args.options.bound, "ball radius M")->capture_default_str();
  fit->add_option("--delta", fit_args.options.delta, "link shift")->capture_default_str();
  fit->add_option("--starts", fit_args.options.n_starts, "random starts")->capture_default_str();
  fit->add_option("--seed", fit_args.options.seed, "RNG seed")->capture_default_str();
  fit->add_option("--tol", fit_args.options.tol, "relative objective tolerance")
      ->capture_default_str();
  fit->add_option("--max-iter", fit_args.options.max_iters, "iteration cap")
      ->capture_default_str();
  fit->add_option("--threads", fit_args.options.threads, "worker threads (0 = all cores)")
      ->capture_default_str();
  fit->add_option("--out", fit_args.out, "output configuration CSV")->required();
  fit->add_option("--report", fit_args.report, "output run report JSON");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
  simulate->add_option("--j", sim_args.j, "number of items")->required();
  simulate->add_option("--n-mult", sim_args.n_mult, "persons per item")->capture_default_str();
  simulate->add_option("--true-dim", sim_args.true_dim, "generating dimension")
      ->capture_default_str();
  simulate->add_option("--radius", sim_args.radius, "generating ball radius")
      ->capture_default_str();
  simulate->add_option("--delta", sim_args.delta, "link shift")->capture_default_str();
  simulate->add_option("--seed", sim_args.seed, "RNG seed")->capture_default_str();
  double missing_frac_in = 0.0;
  auto* mf = simulate->add_option("--missing-frac", missing_frac_in,
                                  "observed fraction (Bernoulli mask)");
  simulate->add_option("--out", sim_args.out, "output response CSV")->required();
  simulate->add_option("--truth", sim_args.truth, "output truth configuration CSV")->required();

  AlignArgs align_args;
  auto* align = app.add_subcommand("align", "Isometry-aligned losses between configurations");
  align->add_option("--truth", align_args.truth, "reference configuration CSV")->required();
  align->add_option("--estimate", align_args.estimate, "estimate configuration CSV")->required();
  align->add_flag("--pad", align_args.pad, "zero-pad the lower-dimensional reference");

  ClusterArgs cluster_args;
  auto* cluster = app.add_subcommand("cluster", "Bi-cluster persons and items");
  cluster->add_option("--config", cluster_args.config, "configuration CSV")->required();
  cluster->add_option("--k1", cluster_args.k1, "person clusters")->required();
  cluster->add_option("--k2", cluster_args.k2, "item clusters")->required();
  cluster->add_option("--truth-labels", cluster_args.truth_labels, "true labels CSV");
  cluster->add_option("--out", cluster_args.out, "output labels CSV");
  cluster->add_option("--restarts", cluster_args.restarts, "k-means restarts")
      ->capture_default_str();
  cluster->add_option("--seed", cluster_args.seed, "RNG seed")->capture_default_str();

  StudyArgs study_args;
  auto* study = app.add_subcommand("study", "Run a replication study from a JSON spec");
  study->add_option("--spec", study_args.spec, "study spec JSON")->required();
  study->add_option("--out", study_args.out, "output report CSV")->required();

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Principal-axis rotation and covariate tau");
  analyze->add_option("--config", analyze_args.config, "configuration CSV")->required();
  analyze->add_option("--covariate", analyze_args.covariate, "single-column covariate CSV")
      ->required();
  analyze->add_option("--rotate", analyze_args.rotate, "which set spans the axes")
      ->check(CLI::IsMember({"items", "persons"}))
      ->capture_default_str();
  analyze->add_option("--out", analyze_args.out, "output rotated configuration CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit) return run_fit(fit_args);
    if (*simulate) {
      if (*mf) sim_args.missing_frac = missing_frac_in;
      return run_simulate(sim_args);
    }
    if (*align) return run_align(align_args);
    if (*cluster) return run_cluster(cluster_args);
    if (*study) return run_study_cmd(study_args);
    if (*analyze) return run_analyze(analyze_args);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace mdu
