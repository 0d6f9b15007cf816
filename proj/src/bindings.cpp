#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "adsmooth/ads.hpp"
#include "adsmooth/dgp.hpp"
#include "adsmooth/errors.hpp"
#include "adsmooth/io.hpp"
#include "adsmooth/rng.hpp"
#include "adsmooth/sim.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "similarity-weighted panel estimators";

  py::enum_<ads::Design>(m, "Design")
      .value("iid", ads::Design::iid)
      .value("toeplitz", ads::Design::toeplitz);
  py::enum_<ads::Backend>(m, "Backend")
      .value("ols", ads::Backend::ols)
      .value("lasso", ads::Backend::lasso);
  py::enum_<ads::Stage>(m, "Stage")
      .value("first", ads::Stage::first)
      .value("second", ads::Stage::second);
  py::enum_<ads::Estimator>(m, "Estimator")
      .value("naive", ads::Estimator::naive)
      .value("ols", ads::Estimator::ols)
      .value("lasso", ads::Estimator::lasso)
      .value("ads_ols", ads::Estimator::ads_ols)
      .value("ads_lasso", ads::Estimator::ads_lasso);

  py::class_<ads::PanelDataset>(m, "PanelDataset")
      .def(py::init<>())
      .def_readwrite("n_individuals", &ads::PanelDataset::n_individuals)
      .def_readwrite("n_periods", &ads::PanelDataset::n_periods)
      .def_readwrite("n_covariates", &ads::PanelDataset::n_covariates)
      .def_readwrite("design", &ads::PanelDataset::design)
      .def_readwrite("response", &ads::PanelDataset::response)
      .def_readwrite("signal", &ads::PanelDataset::signal)
      .def("validate", &ads::PanelDataset::validate);

  py::class_<ads::CoefficientSet>(m, "CoefficientSet")
      .def(py::init<>())
      .def(py::init([](Eigen::MatrixXd coefs) {
             ads::CoefficientSet c;
             c.coefs = std::move(coefs);
             return c;
           }),
           py::arg("coefs"))
      .def_readwrite("coefs", &ads::CoefficientSet::coefs);

  py::class_<ads::WeightMatrix>(m, "WeightMatrix")
      .def(py::init<>())
      .def_readwrite("w", &ads::WeightMatrix::w)
      .def("validate", &ads::WeightMatrix::validate, py::arg("delta"));

  py::class_<ads::MseRow>(m, "MseRow")
      .def_readwrite("dgp", &ads::MseRow::dgp)
      .def_readwrite("design", &ads::MseRow::design)
      .def_readwrite("n", &ads::MseRow::n)
      .def_readwrite("t", &ads::MseRow::t)
      .def_readwrite("cor", &ads::MseRow::cor)
      .def_readwrite("estimator", &ads::MseRow::estimator)
      .def_readwrite("mse", &ads::MseRow::mse)
      .def_readwrite("mc_stderr", &ads::MseRow::mc_stderr)
      .def_readwrite("reps", &ads::MseRow::reps);

  py::class_<ads::MseReport>(m, "MseReport")
      .def(py::init<>())
      .def_readwrite("rows", &ads::MseReport::rows)
      .def_readwrite("failed_cells", &ads::MseReport::failed_cells);

  py::class_<ads::PenaltyRule>(m, "PenaltyRule")
      .def(py::init<>())
      .def_static("plugin", &ads::PenaltyRule::plugin)
      .def_static("fixed_lambda", &ads::PenaltyRule::fixed_lambda)
      .def_readwrite("fixed", &ads::PenaltyRule::fixed)
      .def_readwrite("lambda_", &ads::PenaltyRule::lambda);

  py::class_<ads::LassoConfig>(m, "LassoConfig")
      .def(py::init<>())
      .def_readwrite("penalty_rule", &ads::LassoConfig::penalty_rule)
      .def_readwrite("plugin_constant", &ads::LassoConfig::plugin_constant)
      .def_readwrite("max_sweeps", &ads::LassoConfig::max_sweeps)
      .def_readwrite("tol", &ads::LassoConfig::tol)
      .def_readwrite("penalize_intercept", &ads::LassoConfig::penalize_intercept)
      .def_readwrite("standardize", &ads::LassoConfig::standardize);

  py::class_<ads::LassoResult>(m, "LassoResult")
      .def_readonly("beta", &ads::LassoResult::beta)
      .def_readonly("converged", &ads::LassoResult::converged)
      .def_readonly("sweeps", &ads::LassoResult::sweeps);

  py::class_<ads::WeightedSample>(m, "WeightedSample")
      .def(py::init([](Eigen::MatrixXd rows, Eigen::VectorXd targets,
                       Eigen::VectorXd weights) {
             return ads::WeightedSample{std::move(rows), std::move(targets),
                                        std::move(weights)};
           }),
           py::arg("rows"), py::arg("targets"), py::arg("obs_weights"))
      .def_readwrite("rows", &ads::WeightedSample::rows)
      .def_readwrite("targets", &ads::WeightedSample::targets)
      .def_readwrite("obs_weights", &ads::WeightedSample::obs_weights)
      .def("validate", &ads::WeightedSample::validate);

  py::class_<ads::GammaRule>(m, "GammaRule")
      .def(py::init<>())
      .def_static("median_heuristic", &ads::GammaRule::median_heuristic)
      .def_static("fixed", &ads::GammaRule::fixed)
      .def_readwrite("median", &ads::GammaRule::median)
      .def_readwrite("value", &ads::GammaRule::value);

  py::class_<ads::AdsConfig>(m, "AdsConfig")
      .def(py::init<>())
      .def_readwrite("delta", &ads::AdsConfig::delta)
      .def_readwrite("gamma_rule", &ads::AdsConfig::gamma_rule)
      .def_readwrite("estimator", &ads::AdsConfig::estimator)
      .def_readwrite("lasso_cfg", &ads::AdsConfig::lasso_cfg)
      .def_readwrite("refine_iterations", &ads::AdsConfig::refine_iterations)
      .def_readwrite("refine_tol", &ads::AdsConfig::refine_tol);

  py::class_<ads::AdsFit>(m, "AdsFit")
      .def_readonly("first_stage", &ads::AdsFit::first_stage)
      .def_readonly("weights", &ads::AdsFit::weights)
      .def_readonly("second_stage", &ads::AdsFit::second_stage)
      .def_readonly("gamma", &ads::AdsFit::gamma)
      .def_readonly("refine_steps", &ads::AdsFit::refine_steps);

  py::class_<ads::DgpConfig>(m, "DgpConfig")
      .def(py::init<>())
      .def_readwrite("dgp", &ads::DgpConfig::dgp)
      .def_readwrite("n", &ads::DgpConfig::n)
      .def_readwrite("t", &ads::DgpConfig::t)
      .def_readwrite("p", &ads::DgpConfig::p)
      .def_readwrite("s", &ads::DgpConfig::s)
      .def_readwrite("beta_cor", &ads::DgpConfig::beta_cor)
      .def_readwrite("design", &ads::DgpConfig::design)
      .def_readwrite("noise_sd", &ads::DgpConfig::noise_sd)
      .def_readwrite("seed", &ads::DgpConfig::seed)
      .def_readwrite("offset_on_covariates", &ads::DgpConfig::offset_on_covariates)
      .def("validate", &ads::DgpConfig::validate);

  py::class_<ads::GeneratedPanel>(m, "GeneratedPanel")
      .def_readonly("train", &ads::GeneratedPanel::train)
      .def_readonly("test", &ads::GeneratedPanel::test)
      .def_readonly("truth", &ads::GeneratedPanel::truth);

  py::class_<ads::Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("stream_key"))
      .def("next_u64", &ads::Rng::next_u64)
      .def("uniform", &ads::Rng::uniform)
      .def("normal", &ads::Rng::normal);

  py::class_<ads::SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("cells", &ads::SimConfig::cells)
      .def_readwrite("estimators", &ads::SimConfig::estimators)
      .def_readwrite("ads", &ads::SimConfig::ads)
      .def_readwrite("reps", &ads::SimConfig::reps)
      .def_readwrite("master_seed", &ads::SimConfig::master_seed)
      .def_readwrite("jobs", &ads::SimConfig::jobs);

  py::class_<ads::CellResult>(m, "CellResult")
      .def_readonly("rows", &ads::CellResult::rows)
      .def_readonly("failed_reps", &ads::CellResult::failed_reps)
      .def_readonly("failed", &ads::CellResult::failed)
      .def_readonly("rep_errors", &ads::CellResult::rep_errors);

  py::class_<ads::LongPanel>(m, "LongPanel")
      .def_readonly("data", &ads::LongPanel::data)
      .def_readonly("ids", &ads::LongPanel::ids)
      .def_readonly("times", &ads::LongPanel::times)
      .def_readonly("covariate_columns", &ads::LongPanel::covariate_columns);

  // panel-core
  m.def("predict", &ads::predict, py::arg("data"), py::arg("coefs"));
  m.def("mse_against", &ads::mse_against, py::arg("predictions"),
        py::arg("targets"));
  m.def("evaluation_targets", &ads::evaluation_targets, py::arg("data"));

  // estimators
  m.def("soft_threshold", &ads::soft_threshold, py::arg("z"), py::arg("kappa"));
  m.def("weighted_ols",
        py::overload_cast<const ads::WeightedSample&>(&ads::weighted_ols),
        py::arg("sample"));
  m.def("weighted_lasso",
        py::overload_cast<const ads::WeightedSample&, const ads::LassoConfig&,
                          double>(&ads::weighted_lasso),
        py::arg("sample"), py::arg("cfg"), py::arg("lambda_"));
  m.def("plugin_lambda",
        py::overload_cast<const ads::WeightedSample&, const ads::LassoConfig&,
                          ads::Stage, double>(&ads::plugin_lambda),
        py::arg("sample"), py::arg("cfg"), py::arg("stage"),
        py::arg("effective_n"));
  m.def("fit_individual", &ads::fit_individual, py::arg("data"), py::arg("i"),
        py::arg("estimator"), py::arg("cfg") = ads::LassoConfig{});

  // ads-engine
  m.def("coef_distance", &ads::coef_distance, py::arg("a"), py::arg("b"));
  m.def("resolve_gamma", &ads::resolve_gamma, py::arg("first_stage"),
        py::arg("cfg"));
  m.def("build_weight_matrix", &ads::build_weight_matrix, py::arg("first_stage"),
        py::arg("cfg"));
  m.def("ads_fit", &ads::ads_fit, py::arg("data"),
        py::arg("cfg") = ads::AdsConfig{});
  m.def("naive_fit", &ads::naive_fit, py::arg("data"));

  // dgp
  m.def("gen_design", &ads::gen_design, py::arg("cfg"), py::arg("rng"));
  m.def("gen_beta_dgp1", &ads::gen_beta_dgp1, py::arg("cfg"), py::arg("rng"));
  m.def("gen_beta_dgp2", &ads::gen_beta_dgp2, py::arg("cfg"), py::arg("rng"));
  m.def("gen_beta_sparse", &ads::gen_beta_sparse, py::arg("cfg"), py::arg("rng"));
  m.def("gen_panel", &ads::gen_panel, py::arg("cfg"));

  // sim-harness
  m.def("estimator_name", &ads::estimator_name);
  m.def("parse_estimator", &ads::parse_estimator);
  m.def("cell_id", &ads::cell_id, py::arg("cell"));
  m.def("fit_estimator", &ads::fit_estimator, py::arg("train"),
        py::arg("estimator"), py::arg("ads") = ads::AdsConfig{});
  m.def("run_cell", &ads::run_cell, py::arg("cell"), py::arg("estimators"),
        py::arg("ads") = ads::AdsConfig{}, py::arg("reps") = 100,
        py::arg("master_seed") = 0, py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_suite", &ads::run_suite, py::arg("cfg"),
        py::arg("observer") = nullptr);
  m.def("paper_table", &ads::paper_table, py::arg("name"));

  // panel-io
  m.def("read_long_csv", &ads::read_long_csv, py::arg("path"),
        py::arg("y_column"), py::arg("id_column"), py::arg("time_column"));
  m.def("chronological_split", &ads::chronological_split, py::arg("data"),
        py::arg("test_fraction"));
  m.def("render_report", &ads::render_report, py::arg("report"),
        py::arg("format"));
  m.def(
      "write_report",
      [](const ads::MseReport& report, const std::filesystem::path& path,
         const std::string& format) {
        ads::write_report(report, path, ads::parse_report_format(format));
      },
      py::arg("report"), py::arg("path"), py::arg("format") = "csv");
  m.def("write_long_csv", &ads::write_long_csv, py::arg("data"), py::arg("path"));

  py::enum_<ads::ReportFormat>(m, "ReportFormat")
      .value("csv", ads::ReportFormat::csv)
      .value("markdown", ads::ReportFormat::markdown);

  py::register_exception<ads::DimensionError>(m, "DimensionError",
                                              PyExc_ValueError);
  py::register_exception<ads::ValidationError>(m, "ValidationError",
                                               PyExc_ValueError);
  py::register_exception<ads::DegenerateInput>(m, "DegenerateInputError",
                                               PyExc_ValueError);
  py::register_exception<ads::SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<ads::ParseError>(m, "ParseError", PyExc_ValueError);
}
