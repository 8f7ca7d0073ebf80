// Python bindings for the main operations: variogram algebra, grids and
// measures, Gaussian representations, the min-max measure solver, the
// simulation algorithms and the benchmark error estimator.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maxstab/bench.hpp"
#include "maxstab/errors.hpp"

namespace py = pybind11;
using namespace maxstab;

namespace {

std::shared_ptr<Representation> rep_from_measure(const Variogram& v, const Grid& grid,
                                                 const DiscreteMeasure& m) {
  return std::make_shared<Representation>(covariance_from_measure(v, grid, m));
}

std::shared_ptr<Representation> rep_k_stationary(const Variogram& v, const Grid& grid,
                                                 double radius) {
  return std::make_shared<Representation>(k_stationary_covariance(v, grid, radius));
}

std::shared_ptr<Representation> rep_optimized(const Variogram& v, const Grid& grid,
                                              double tol, long max_iter) {
  return std::make_shared<Representation>(optimized_representation(v, grid, tol, max_iter));
}

}  // namespace

PYBIND11_MODULE(_maxstab, m) {
  m.doc() = "Brown-Resnick max-stable simulation via variance-reduced spectral representations";

  py::register_exception<maxstab::domain_error>(m, "DomainError", PyExc_ValueError);
  py::register_exception<maxstab::contract_error>(m, "ContractError", PyExc_ValueError);
  py::register_exception<maxstab::numeric_error>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception<maxstab::calibration_error>(m, "CalibrationError", PyExc_RuntimeError);

  m.def("gneiting_constant", &gneiting_constant, py::arg("alpha"), py::arg("d"));
  m.def("scale_for_target_variance", &scale_for_target_variance, py::arg("alpha"),
        py::arg("sigma2_k"));
  m.def("scale_for_target_variance_ball", &scale_for_target_variance_ball, py::arg("alpha"),
        py::arg("d"), py::arg("radius"), py::arg("sigma2_k"));

  py::class_<Variogram>(m, "Variogram")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("scale"))
      .def(py::init<double, double, Eigen::MatrixXd>(), py::arg("alpha"), py::arg("scale"),
           py::arg("anisotropy"))
      .def_property_readonly("alpha", &Variogram::alpha)
      .def_property_readonly("scale", &Variogram::scale)
      .def("psi", &Variogram::psi, py::arg("t"))
      .def("__call__",
           [](const Variogram& v, const Eigen::VectorXd& h) { return eval_variogram(v, h); });

  py::class_<Hyperrectangle>(m, "Hyperrectangle")
      .def(py::init<Eigen::VectorXd>(), py::arg("half_widths"))
      .def_property_readonly("enclosing_radius", &Hyperrectangle::enclosing_radius)
      .def_readonly("half_widths", &Hyperrectangle::half_widths);

  py::class_<Grid>(m, "Grid")
      .def(py::init<Eigen::MatrixXd, std::string>(), py::arg("points"), py::arg("label") = "")
      .def_property_readonly("points", &Grid::points)
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("dim", &Grid::dim)
      .def("find_point", &Grid::find_point);

  m.def("regular_grid", &regular_grid, py::arg("rect"), py::arg("counts"),
        py::arg("label") = "");
  m.def("vertices", [](const Hyperrectangle& rect) {
    std::vector<std::pair<unsigned, Eigen::VectorXd>> out;
    for (const auto& v : vertices(rect)) out.emplace_back(v.label, v.point);
    return out;
  });

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def(py::init<Eigen::VectorXd>(), py::arg("weights"))
      .def_property_readonly("weights", &DiscreteMeasure::weights);
  m.def("uniform_vertex_measure", &uniform_vertex_measure, py::arg("grid"), py::arg("rect"));
  m.def("dirac_measure", &dirac_measure, py::arg("grid"), py::arg("index"));

  py::class_<Representation, std::shared_ptr<Representation>>(m, "Representation")
      .def_property_readonly("covariance", &Representation::covariance)
      .def_property_readonly("variance_profile", &Representation::variance_profile)
      .def_property_readonly("factor", &Representation::factor)
      .def_property_readonly("jitter_used", &Representation::jitter_used)
      .def_property_readonly("provenance",
                             [](const Representation& r) { return to_string(r.provenance()); })
      .def_property_readonly("size", &Representation::size);

  m.def("covariance_from_measure", &rep_from_measure, py::arg("variogram"), py::arg("grid"),
        py::arg("measure"));
  m.def("k_stationary_covariance", &rep_k_stationary, py::arg("variogram"), py::arg("grid"),
        py::arg("radius"));
  m.def("optimized_representation", &rep_optimized, py::arg("variogram"), py::arg("grid"),
        py::arg("tol") = 1e-9, py::arg("max_iter") = 500000);
  m.def("max_variance", [](const Representation& rep) {
    const MaxVariance mv = max_variance(rep);
    return std::make_pair(mv.value, mv.index);
  });

  m.def("stationary_candidate_measure", [](const Variogram& v, const Grid& g) {
    const StationaryCandidate sc = stationary_candidate_measure(v, g);
    py::dict out;
    out["raw_weights"] = sc.raw_weights;
    out["nonnegative"] = sc.nonnegative;
    out["condition"] = sc.condition;
    if (sc.measure) out["weights"] = sc.measure->weights();
    return out;
  });
  m.def("critical_alpha", &critical_alpha, py::arg("grid"), py::arg("tol") = 1e-4);
  m.def("solve_min_max_measure", [](const Variogram& v, const Grid& g, double tol,
                                    long max_iter) {
    const MinMaxSolution sol = solve_min_max_measure(v, g, tol, max_iter);
    return py::make_tuple(sol.measure.weights(), sol.max_variance, sol.gap, sol.iterations);
  }, py::arg("variogram"), py::arg("grid"), py::arg("tol") = 1e-8, py::arg("max_iter") = 500000);
  m.def("matheron_conditions", [](const Variogram& v, const Grid& g, const Hyperrectangle& r,
                                  const DiscreteMeasure& lam) {
    const MatheronReport rep = matheron_conditions(v, g, r, lam);
    return std::make_pair(rep.off_vertex_mass, rep.max_vertex_excess);
  });

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id"))
      .def("uniform", &RngStream::uniform)
      .def("normal", &RngStream::normal)
      .def("exponential", &RngStream::exponential);

  m.def("sample_gaussian",
        [](const Representation& rep, RngStream& rng) { return sample_gaussian(rep, rng); });
  m.def("log_gaussian_spectral", [](const Representation& rep, RngStream& rng) {
    return log_gaussian_spectral(rep, rng).values;
  });

  py::class_<SpectralSampler>(m, "SpectralSampler")
      .def_property_readonly("size", &SpectralSampler::size)
      .def("draw", [](const SpectralSampler& s, RngStream& rng) { return s.draw(rng); });
  m.def("log_gaussian_sampler", &SpectralSampler::log_gaussian, py::arg("rep"));
  m.def("constant_sampler", &SpectralSampler::constant, py::arg("n"));
  m.def("random_shift_sampler",
        [](const Representation& base) { return random_shift_sampler(base); });
  m.def("dieker_mikosch_sampler",
        [](const Representation& base) { return dieker_mikosch_sampler(base); });

  py::class_<StoppedField>(m, "StoppedField")
      .def_readonly("values", &StoppedField::values)
      .def_readonly("T", &StoppedField::T)
      .def_readonly("tau", &StoppedField::tau);
  m.def("threshold_stopping", [](const SpectralSampler& s, double tau, RngStream& rng) {
    return threshold_stopping(s, tau, rng);
  });
  m.def("extremal_functions_simulate",
        [](const Representation& base, const std::vector<int>& subset, RngStream& rng) {
          const ExtremalField f = extremal_functions_simulate(base, subset, rng);
          return std::make_pair(f.values, f.gaussian_draws);
        });
  m.def("equispaced_subset", &equispaced_subset, py::arg("grid_size"), py::arg("n"));

  m.def("estimate_expected_T", [](const SpectralSampler& s, double tau, int n_rep,
                                  std::uint64_t seed, std::uint64_t tag) {
    const MeanSe ms = estimate_expected_T(s, tau, n_rep, StreamFamily{seed, tag});
    return std::make_pair(ms.mean, ms.se);
  }, py::arg("sampler"), py::arg("tau"), py::arg("n_rep"), py::arg("seed"), py::arg("tag") = 0);
  m.def("calibrate_tau", [](const SpectralSampler& s, double target, double rel_tol,
                            std::uint64_t seed, std::uint64_t tag) {
    return calibrate_tau(s, target, rel_tol, StreamFamily{seed, tag});
  }, py::arg("sampler"), py::arg("target_et"), py::arg("rel_tol") = 0.01, py::arg("seed") = 7,
     py::arg("tag") = 0);

  m.def("error_probability", [](const Eigen::MatrixXd& z, const Eigen::MatrixXd& v, double tau) {
    const ErrorEstimate est = error_probability_fields(z, v, tau);
    return std::make_pair(est.p, est.se);
  }, py::arg("stopped"), py::arg("pool"), py::arg("tau"));
  m.def("frechet_ks_test", [](const std::vector<double>& samples) {
    const KsResult r = frechet_ks_test(samples);
    return std::make_pair(r.statistic, r.p_value);
  });

  m.def("run_scenario_json", [](const std::string& text) {
    const BenchResult res = run_scenario(scenario_from_json_text(text));
    py::list rows;
    for (const auto& row : res.rows) {
      py::dict d;
      d["algorithm"] = row.algorithm;
      d["tau"] = row.tau;
      d["n_extr"] = row.n_extr;
      d["ET_mean"] = row.et_mean;
      d["ET_se"] = row.et_se;
      d["Phat"] = row.p_hat;
      d["Phat_se"] = row.p_se;
      rows.append(d);
    }
    py::dict out;
    out["scenario"] = res.scenario_id;
    out["anchor_algorithm"] = res.anchor_algorithm;
    out["anchor_tau"] = res.anchor_tau;
    out["target_ET"] = res.target_ET;
    out["rows"] = rows;
    return out;
  }, py::arg("config_json"));
}
