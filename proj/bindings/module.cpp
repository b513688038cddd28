#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mdu/alignment.hpp"
#include "mdu/analysis.hpp"
#include "mdu/io.hpp"
#include "mdu/likelihood.hpp"
#include "mdu/link.hpp"
#include "mdu/optimizer.hpp"
#include "mdu/simulation.hpp"
#include "mdu/types.hpp"
#include "mdu/version.hpp"

namespace py = pybind11;
using namespace mdu;

namespace {

PointSet parse_point_set(const std::string& which) {
  if (which == "persons") return PointSet::persons;
  if (which == "items") return PointSet::items;
  throw std::invalid_argument("which must be 'persons' or 'items'");
}

}  // namespace

PYBIND11_MODULE(_mdu, m) {
  m.doc() = "Distance-based multidimensional unfolding of binary response matrices";
  m.attr("__version__") = kVersion;

  py::class_<LinkFunction>(m, "LinkFunction")
      .def(py::init<double>(), py::arg("delta"))
      .def_readonly("delta", &LinkFunction::delta)
      .def("eval", &LinkFunction::eval, py::arg("x"))
      .def("deriv", &LinkFunction::deriv, py::arg("x"))
      .def("log_eval", &LinkFunction::log_eval, py::arg("x"))
      .def("log_one_minus", &LinkFunction::log_one_minus, py::arg("x"));

  py::class_<ResponseMatrix>(m, "ResponseMatrix")
      .def(py::init<BinaryMatrix, BinaryMatrix>(), py::arg("values"), py::arg("mask"))
      .def_static("complete", &ResponseMatrix::complete, py::arg("values"))
      .def_readonly("values", &ResponseMatrix::values)
      .def_readonly("mask", &ResponseMatrix::mask)
      .def_property_readonly("n_persons", &ResponseMatrix::n_persons)
      .def_property_readonly("n_items", &ResponseMatrix::n_items)
      .def_property_readonly("observed_count", &ResponseMatrix::observed_count);

  py::class_<Configuration>(m, "Configuration")
      .def(py::init<Matrix, Matrix, double>(), py::arg("persons"), py::arg("items"),
           py::arg("bound"))
      .def_readonly("persons", &Configuration::persons)
      .def_readonly("items", &Configuration::items)
      .def_readonly("bound", &Configuration::bound)
      .def_property_readonly("dim", &Configuration::dim);

  py::class_<RegularityConstants>(m, "RegularityConstants")
      .def_readonly("l_alpha", &RegularityConstants::l_alpha)
      .def_readonly("beta_alpha", &RegularityConstants::beta_alpha)
      .def_readonly("alpha", &RegularityConstants::alpha);

  py::class_<FitOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("dim", &FitOptions::dim)
      .def_readwrite("bound", &FitOptions::bound)
      .def_readwrite("delta", &FitOptions::delta)
      .def_readwrite("max_iters", &FitOptions::max_iters)
      .def_readwrite("tol", &FitOptions::tol)
      .def_readwrite("n_starts", &FitOptions::n_starts)
      .def_readwrite("seed", &FitOptions::seed)
      .def_readwrite("armijo_c", &FitOptions::armijo_c)
      .def_readwrite("shrink", &FitOptions::shrink)
      .def_readwrite("max_halvings", &FitOptions::max_halvings)
      .def_readwrite("threads", &FitOptions::threads);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("config", &FitResult::config)
      .def_readonly("final_objective", &FitResult::final_objective)
      .def_readonly("trace", &FitResult::trace)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("start_index", &FitResult::start_index)
      .def_readonly("per_start_objectives", &FitResult::per_start_objectives);

  py::class_<Isometry>(m, "Isometry")
      .def_readonly("rotation", &Isometry::rotation)
      .def_readonly("translation", &Isometry::translation)
      .def("apply", &Isometry::apply, py::arg("points"));

  py::class_<AlignmentResult>(m, "AlignmentResult")
      .def_readonly("isometry", &AlignmentResult::isometry)
      .def_readonly("loss", &AlignmentResult::loss);

  py::class_<StudySpec>(m, "StudySpec")
      .def(py::init<>())
      .def_readwrite("j_values", &StudySpec::j_values)
      .def_readwrite("n_rule", &StudySpec::n_rule)
      .def_readwrite("true_dim", &StudySpec::true_dim)
      .def_readwrite("fit_dim", &StudySpec::fit_dim)
      .def_readwrite("m_true", &StudySpec::m_true)
      .def_readwrite("m_fit", &StudySpec::m_fit)
      .def_readwrite("delta", &StudySpec::delta)
      .def_readwrite("replications", &StudySpec::replications)
      .def_readwrite("n_starts", &StudySpec::n_starts)
      .def_readwrite("missing_n", &StudySpec::missing_n)
      .def_readwrite("missing_frac", &StudySpec::missing_frac)
      .def_readwrite("seed", &StudySpec::seed)
      .def_readwrite("tol", &StudySpec::tol)
      .def_readwrite("max_iters", &StudySpec::max_iters)
      .def_readwrite("threads", &StudySpec::threads);

  py::class_<StudyCell>(m, "StudyCell")
      .def_readonly("j", &StudyCell::j)
      .def_readonly("n_persons", &StudyCell::n_persons)
      .def_readonly("observed_frac", &StudyCell::observed_frac)
      .def_readonly("distance_losses", &StudyCell::distance_losses)
      .def_readonly("config_losses", &StudyCell::config_losses)
      .def_readonly("dominance", &StudyCell::dominance)
      .def_readonly("distance_quantiles", &StudyCell::distance_quantiles)
      .def_readonly("config_quantiles", &StudyCell::config_quantiles)
      .def_readonly("total_seconds", &StudyCell::total_seconds);

  py::class_<StudyReport>(m, "StudyReport")
      .def_readonly("spec", &StudyReport::spec)
      .def_readonly("cells", &StudyReport::cells);

  py::class_<KMeansResult>(m, "KMeansResult")
      .def_readonly("labels", &KMeansResult::labels)
      .def_readonly("centroids", &KMeansResult::centroids)
      .def_readonly("within_ss", &KMeansResult::within_ss);

  py::class_<BiClustering>(m, "BiClustering")
      .def_readonly("person_labels", &BiClustering::person_labels)
      .def_readonly("item_labels", &BiClustering::item_labels)
      .def_readonly("person_centroids", &BiClustering::person_centroids)
      .def_readonly("item_centroids", &BiClustering::item_centroids);

  m.def("partial_distance_matrix", &partial_distance_matrix, py::arg("config"));
  m.def("regularity_constants", &regularity_constants, py::arg("link"), py::arg("M"));
  m.def("neg_log_likelihood", &neg_log_likelihood, py::arg("config"), py::arg("data"),
        py::arg("link"), py::arg("threads") = 1);
  m.def("person_gradient", &person_gradient, py::arg("i"), py::arg("config"), py::arg("data"),
        py::arg("link"));
  m.def("item_gradient", &item_gradient, py::arg("j"), py::arg("config"), py::arg("data"),
        py::arg("link"));
  m.def("project_ball", &project_ball, py::arg("x"), py::arg("M"));
  m.def("fit_alternating", &fit_alternating, py::arg("data"), py::arg("initial"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());
  m.def("fit_multistart", &fit_multistart, py::arg("data"), py::arg("options"),
        py::call_guard<py::gil_scoped_release>());
  m.def("check_likelihood_dominance", &check_likelihood_dominance, py::arg("fit"),
        py::arg("truth"), py::arg("data"), py::arg("link"));
  m.def(
      "random_configuration",
      [](Index n_persons, Index n_items, Index dim, double M, std::uint64_t seed) {
        Rng rng = make_rng(seed);
        return random_configuration(n_persons, n_items, dim, M, rng);
      },
      py::arg("n_persons"), py::arg("n_items"), py::arg("dim"), py::arg("M"), py::arg("seed"));

  m.def("embed_zero_pad", &embed_zero_pad, py::arg("config"), py::arg("target_dim"));
  m.def("align_isometry", &align_isometry, py::arg("reference"), py::arg("estimate"));
  m.def("weighted_procrustes", &weighted_procrustes, py::arg("reference"), py::arg("estimate"),
        py::arg("weights"));
  m.def("average_config_loss", &average_config_loss, py::arg("truth"), py::arg("estimate"));
  m.def("distance_matrix_loss", &distance_matrix_loss, py::arg("estimate_d"), py::arg("truth_d"));
  m.def(
      "rotate_to_principal_axes",
      [](const Configuration& config, const std::string& which) {
        return rotate_to_principal_axes(config, parse_point_set(which));
      },
      py::arg("config"), py::arg("which"));

  m.def(
      "sample_uniform_ball",
      [](Index dim, double radius, std::uint64_t seed) {
        Rng rng = make_rng(seed);
        return sample_uniform_ball(dim, radius, rng);
      },
      py::arg("dim"), py::arg("radius"), py::arg("seed"));
  m.def(
      "generate_responses",
      [](const Configuration& config, double delta, std::uint64_t seed) {
        Rng rng = make_rng(seed);
        return generate_responses(config, LinkFunction(delta), rng);
      },
      py::arg("config"), py::arg("delta"), py::arg("seed"));
  m.def(
      "generate_missing_mask",
      [](Index n_persons, Index n_items, double n, std::uint64_t seed) {
        Rng rng = make_rng(seed);
        return generate_missing_mask(n_persons, n_items, n, rng);
      },
      py::arg("n_persons"), py::arg("n_items"), py::arg("n"), py::arg("seed"));
  m.def(
      "run_study",
      [](const StudySpec& spec, py::object log) {
        std::function<void(const std::string&)> cb;
        if (!log.is_none())
          cb = [log](const std::string& line) {
            py::gil_scoped_acquire gil;
            log(line);
          };
        py::gil_scoped_release release;
        return run_study(spec, cb);
      },
      py::arg("spec"), py::arg("log") = py::none());

  m.def(
      "kmeans",
      [](const Matrix& points, int k, int restarts, std::uint64_t seed) {
        Rng rng = make_rng(seed);
        return kmeans(points, k, restarts, rng);
      },
      py::arg("points"), py::arg("k"), py::arg("restarts") = 10, py::arg("seed") = 0);
  m.def(
      "bicluster",
      [](const Configuration& fit, int k1, int k2, int restarts, std::uint64_t seed) {
        Rng rng = make_rng(seed);
        return bicluster(fit, k1, k2, restarts, rng);
      },
      py::arg("fit"), py::arg("k1"), py::arg("k2"), py::arg("restarts") = 10, py::arg("seed") = 0);
  m.def("cluster_agreement", &cluster_agreement, py::arg("true_labels"), py::arg("est_labels"),
        py::arg("k"));
  m.def("kendall_tau", &kendall_tau, py::arg("x"), py::arg("y"));
  m.def("cross_entropy_heterogeneity", &cross_entropy_heterogeneity, py::arg("p_yea"),
        py::arg("p_nay"), py::arg("p_missing"));

  m.def("load_response_csv", &load_response_csv, py::arg("path"));
  m.def("save_response_csv", &save_response_csv, py::arg("data"), py::arg("path"));
  m.def("save_configuration", &save_configuration, py::arg("config"), py::arg("path"));
  m.def("load_configuration", &load_configuration, py::arg("path"),
        py::arg("expect_bound") = py::none());

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
}
