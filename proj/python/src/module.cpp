#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gevstat/diagnostics.hpp"
#include "gevstat/distributions.hpp"
#include "gevstat/errors.hpp"
#include "gevstat/inference.hpp"
#include "gevstat/io.hpp"
#include "gevstat/likelihood.hpp"
#include "gevstat/orderstats.hpp"
#include "gevstat/resampling.hpp"
#include "gevstat/returns.hpp"
#include "gevstat/workflow.hpp"

namespace py = pybind11;
using namespace gevstat;

namespace {

std::vector<double> as_vector(const py::iterable& xs) {
  std::vector<double> out;
  for (auto h : xs) out.push_back(h.cast<double>());
  return out;
}

Statistic wrap_statistic(py::function fn) {
  // Python callables run under the GIL, so they are evaluated on one worker.
  return [fn](std::span<const double> s) {
    py::gil_scoped_acquire gil;
    return fn(std::vector<double>(s.begin(), s.end())).cast<std::vector<double>>();
  };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Block-maxima extreme-value analysis";

  auto base = py::register_exception<Error>(m, "GevstatError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<ResamplingError>(m, "ResamplingError", base.ptr());
  py::register_exception<SingularInformationError>(m, "SingularInformationError", base.ptr());
  py::register_exception<BracketError>(m, "BracketError", base.ptr());

  py::class_<GevParams>(m, "GevParams")
      .def(py::init([](double mu, double sigma, double xi) { return GevParams{mu, sigma, xi}; }),
           py::arg("mu"), py::arg("sigma"), py::arg("xi") = 0.0)
      .def_readwrite("mu", &GevParams::mu)
      .def_readwrite("sigma", &GevParams::sigma)
      .def_readwrite("xi", &GevParams::xi)
      .def("__repr__", [](const GevParams& p) {
        return "GevParams(mu=" + std::to_string(p.mu) + ", sigma=" + std::to_string(p.sigma) +
               ", xi=" + std::to_string(p.xi) + ")";
      });

  py::enum_<Model>(m, "Model").value("GEV", Model::Gev).value("GUMBEL", Model::Gumbel);
  py::enum_<Regularity>(m, "Regularity")
      .value("REGULAR", Regularity::Regular)
      .value("NON_STANDARD", Regularity::NonStandard)
      .value("UNOBTAINABLE", Regularity::Unobtainable);
  py::enum_<BiasVerdict>(m, "BiasVerdict")
      .value("IGNORE", BiasVerdict::Ignore)
      .value("CORRECT", BiasVerdict::Correct)
      .value("SUSPECT", BiasVerdict::Suspect);

  m.def("cdf", [](const GevParams& p, double x) { return cdf(p, x); }, py::arg("params"), py::arg("x"));
  m.def("pdf", [](const GevParams& p, double x) { return pdf(p, x); }, py::arg("params"), py::arg("x"));
  m.def("quantile", &quantile, py::arg("params"), py::arg("q"));
  m.def("classify", [](const GevParams& p) { return std::string(to_string(classify(p))); });
  m.def("support", [](const GevParams& p) {
    const auto s = support(p);
    return py::make_tuple(s.lower, s.upper);
  });
  m.def("sample", [](const GevParams& p, std::size_t n, std::uint64_t seed) {
    return sample(p, n, seed).values;
  }, py::arg("params"), py::arg("n"), py::arg("seed"));

  m.def("nllh", [](const py::iterable& x, const GevParams& p, Model model) {
    return nllh(as_vector(x), p, model).value;
  }, py::arg("x"), py::arg("params"), py::arg("model") = Model::Gev);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("model", &FitResult::model)
      .def_readonly("params", &FitResult::params)
      .def_readonly("nllh", &FitResult::nllh)
      .def_readonly("n", &FitResult::n)
      .def_readonly("cov", &FitResult::cov)
      .def_readonly("se", &FitResult::se)
      .def_readonly("se_note", &FitResult::se_note)
      .def_readonly("regularity", &FitResult::regularity)
      .def_property_readonly("converged", [](const FitResult& f) { return f.opt.converged; })
      .def_property_readonly("iterations", [](const FitResult& f) { return f.opt.iterations; })
      .def("estimate", &FitResult::estimate)
      .def("aic", [](const FitResult& f) { return aic(f); });

  m.def("fit", [](const py::iterable& x, Model model) { return fit(as_vector(x), model); },
        py::arg("x"), py::arg("model") = Model::Gev);
  m.def("normal_ci", [](double est, double se, double tau, bool one_sided) {
    const auto i = normal_ci(est, se, tau, one_sided ? Sidedness::OneSided : Sidedness::TwoSided);
    return py::make_tuple(i.lower, i.upper);
  }, py::arg("estimate"), py::arg("se"), py::arg("tau") = 0.05, py::arg("one_sided") = false);

  m.def("lrt", [](double nllh_null, int d_null, double nllh_alt, int d_alt, double level) {
    const auto r = lrt(nllh_null, d_null, nllh_alt, d_alt, level);
    return py::dict(py::arg("statistic") = r.statistic, py::arg("df") = r.df,
                    py::arg("critical") = r.critical, py::arg("p_value") = r.p_value,
                    py::arg("reject") = r.reject);
  }, py::arg("nllh_null"), py::arg("d_null"), py::arg("nllh_alt"), py::arg("d_alt"),
     py::arg("level") = 0.05);
  m.def("aic", [](double nllh, int d) { return aic(nllh, d); }, py::arg("nllh"), py::arg("d"));
  m.def("delta_method", [](const Eigen::MatrixXd& cov, const std::vector<double>& g) {
    return delta_method(cov, g);
  }, py::arg("cov"), py::arg("gradient"));

  m.def("profile", [](const py::iterable& x, const FitResult& f, int index, double tau) {
    ProfileOptions o;
    o.tau = tau;
    const auto c = profile(as_vector(x), f, ProfileTarget::parameter(index), o);
    return py::dict(py::arg("grid") = c.grid, py::arg("loglik") = c.lp,
                    py::arg("deviance") = c.deviance, py::arg("estimate") = c.estimate,
                    py::arg("ci") = py::make_tuple(c.ci.lower, c.ci.upper));
  }, py::arg("x"), py::arg("fit"), py::arg("index"), py::arg("tau") = 0.05);

  m.def("return_level", &return_level, py::arg("params"), py::arg("p"));
  m.def("return_level_gradient",
        [](const GevParams& p, double prob) { return return_level_gradient(p, prob); },
        py::arg("params"), py::arg("p"));
  m.def("return_level_ci", [](const FitResult& f, double prob, double tau, bool one_sided) {
    const auto e = return_level_ci(f, prob, tau, one_sided ? Sidedness::OneSided : Sidedness::TwoSided);
    return py::dict(py::arg("period") = e.period, py::arg("level") = e.level,
                    py::arg("variance") = e.variance,
                    py::arg("ci") = py::make_tuple(e.ci.lower, e.ci.upper));
  }, py::arg("fit"), py::arg("p"), py::arg("tau") = 0.05, py::arg("one_sided") = false);

  m.def("order_cdf", &order_cdf, py::arg("F"), py::arg("r"), py::arg("n"));
  m.def("order_pdf", &order_pdf, py::arg("params"), py::arg("x"), py::arg("r"), py::arg("n"));

  py::class_<ResamplingReport>(m, "ResamplingReport")
      .def_property_readonly("method", [](const ResamplingReport& r) { return std::string(to_string(r.method)); })
      .def_readonly("replicates", &ResamplingReport::replicates)
      .def_readonly("failed", &ResamplingReport::failed)
      .def_readonly("labels", &ResamplingReport::labels)
      .def_readonly("estimate", &ResamplingReport::estimate)
      .def_readonly("bias", &ResamplingReport::bias)
      .def_readonly("se", &ResamplingReport::se)
      .def_readonly("ratio", &ResamplingReport::ratio)
      .def_readonly("rmse", &ResamplingReport::rmse)
      .def_readonly("corrected", &ResamplingReport::corrected);

  m.def("bootstrap_fit", [](const py::iterable& x, Model model, std::size_t B, std::uint64_t seed,
                            unsigned workers) {
    BootstrapOptions o;
    o.replicates = B;
    o.seed = seed;
    o.workers = workers;
    const auto v = as_vector(x);
    py::gil_scoped_release nogil;
    return bootstrap(v, fit_statistic(model), o, parameter_labels(model));
  }, py::arg("x"), py::arg("model") = Model::Gumbel, py::arg("B") = 999, py::arg("seed") = 0,
     py::arg("workers") = 1);
  m.def("bootstrap", [](const py::iterable& x, py::function stat, std::size_t B, std::uint64_t seed) {
    BootstrapOptions o;
    o.replicates = B;
    o.seed = seed;
    const auto v = as_vector(x);
    const auto f = wrap_statistic(std::move(stat));
    py::gil_scoped_release nogil;
    return bootstrap(v, f, o);
  }, py::arg("x"), py::arg("statistic"), py::arg("B") = 999, py::arg("seed") = 0);
  m.def("jackknife_fit", [](const py::iterable& x, Model model) {
    const auto v = as_vector(x);
    py::gil_scoped_release nogil;
    return jackknife(v, fit_statistic(model), parameter_labels(model));
  }, py::arg("x"), py::arg("model") = Model::Gumbel);
  m.def("jackknife", [](const py::iterable& x, py::function stat) {
    const auto v = as_vector(x);
    const auto f = wrap_statistic(std::move(stat));
    py::gil_scoped_release nogil;
    return jackknife(v, f);
  }, py::arg("x"), py::arg("statistic"));
  m.def("rmse", &rmse, py::arg("bias"), py::arg("se"));
  m.def("screen", [](double ratio) { return screen(ratio); }, py::arg("ratio"));

  m.def("probability_plot", [](const py::iterable& x, const GevParams& p) {
    std::vector<std::pair<double, double>> out;
    for (const auto& q : probability_plot(as_vector(x), p).points) out.emplace_back(q.x, q.y);
    return out;
  });
  m.def("quantile_plot", [](const py::iterable& x, const GevParams& p) {
    std::vector<std::pair<double, double>> out;
    for (const auto& q : quantile_plot(as_vector(x), p).points) out.emplace_back(q.x, q.y);
    return out;
  });

  m.def("read_table", [](const std::string& path) {
    const auto r = ingest(path);
    return py::make_tuple(r.sample.values, r.sample.years.value_or(std::vector<int>{}));
  }, py::arg("path"));

  m.def("report_json", [](const py::iterable& x, std::size_t B, std::uint64_t seed,
                          std::vector<double> periods) {
    WorkflowConfig c;
    c.boot_replicates = B;
    c.seed = seed;
    c.periods = std::move(periods);
    const MaximaSample s(as_vector(x));
    std::string out;
    {
      py::gil_scoped_release nogil;
      out = to_json(run_workflow(s, c)).dump();
    }
    return out;
  }, py::arg("x"), py::arg("B") = 999, py::arg("seed") = 0,
     py::arg("periods") = std::vector<double>{4, 10, 40, 100});
}
