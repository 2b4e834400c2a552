#include "gevstat/workflow.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "gevstat/errors.hpp"
#include "gevstat/orderstats.hpp"

namespace gevstat {

using nlohmann::json;

namespace {

// Runs fn and re-raises any library error with the stage name prefixed.
template <class Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  const std::string tag = std::string("[") + stage + "] ";
  try {
    return fn();
  } catch (const SingularInformationError& e) {
    throw SingularInformationError(tag + e.what(), e.condition());
  } catch (const BracketError& e) {
    throw BracketError(tag + e.what(), e.side());
  } catch (const InputError& e) {
    throw InputError(tag + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(tag + e.what());
  } catch (const ResamplingError& e) {
    throw ResamplingError(tag + e.what());
  } catch (const DomainError& e) {
    throw DomainError(tag + e.what());
  } catch (const Error& e) {
    throw Error(tag + e.what());
  }
}

const std::vector<double> kCurvePeriods{1.1, 1.5, 2, 3, 5, 10, 20, 50, 100, 200, 500, 1000};

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_sig10(v);
}

json nums(const std::vector<double>& v) {
  json out = json::array();
  for (double e : v) out.push_back(num(e));
  return out;
}

json params_json(const GevParams& p) {
  return {{"mu", num(p.mu)}, {"sigma", num(p.sigma)}, {"xi", num(p.xi)}};
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", round_sig10(v));
  return buf;
}

ReturnLevelEstimate level_without_cov(const GevParams& params, double p, LevelBasis basis) {
  ReturnLevelEstimate est;
  est.p = p;
  est.period = 1.0 / p;
  est.level = return_level(params, p);
  est.variance = std::numeric_limits<double>::quiet_NaN();
  est.ci = {est.variance, est.variance};
  est.basis = basis;
  est.params = params;
  return est;
}

}  // namespace

double round_sig10(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::strtod(buf, nullptr);
}

Model select_model(const LrtResult& test) noexcept {
  return test.reject ? Model::Gev : Model::Gumbel;
}

ModelPair fit_both(std::span<const double> x) {
  ModelPair out{fit_gev(x), fit_gumbel(x)};
  if (out.gev.nllh > out.gumbel.nllh) {
    auto refit = fit(x, Model::Gev, {}, out.gumbel.params);
    if (refit.nllh < out.gev.nllh) out.gev = std::move(refit);
  }
  return out;
}

WorkflowReport run_workflow(const MaximaSample& sample, const WorkflowConfig& config) {
  staged("input", [&] { sample.validate(); });
  const auto x = sample.view();
  const Sidedness sided = config.one_sided ? Sidedness::OneSided : Sidedness::TwoSided;

  WorkflowReport r;
  r.n = sample.size();
  auto pair = staged("fit", [&] { return fit_both(x); });
  r.gev = std::move(pair.gev);
  r.gumbel = std::move(pair.gumbel);

  staged("selection", [&] {
    r.lrt = lrt(r.gumbel, r.gev);
    r.aic_gev = aic(r.gev);
    r.aic_gumbel = aic(r.gumbel);
    switch (config.model) {
      case ModelChoice::Gev:
        r.selected = Model::Gev;
        r.selection_reason = "forced by --model";
        break;
      case ModelChoice::Gumbel:
        r.selected = Model::Gumbel;
        r.selection_reason = "forced by --model";
        break;
      case ModelChoice::Auto:
        r.selected = select_model(r.lrt);
        r.selection_reason = r.lrt.reject ? "likelihood-ratio test rejects the Gumbel model"
                                          : "likelihood-ratio test does not reject the Gumbel model";
        break;
    }
  });
  const FitResult& chosen = r.selected_fit();

  if (config.resample) {
    staged("resampling", [&] {
      const auto stat = fit_statistic(chosen.model);
      const auto labels = parameter_labels(chosen.model);
      BootstrapOptions opts;
      opts.replicates = config.boot_replicates;
      opts.seed = config.seed;
      opts.workers = config.workers;
      r.bootstrap = bootstrap(x, stat, opts, labels);
      r.jackknife = jackknife(x, stat, labels);
      r.verdicts = screen(*r.jackknife);
    });
    if (config.bias_correct != BiasCorrection::Off) {
      auto theta = chosen.estimate();
      bool changed = false;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const bool apply = config.bias_correct == BiasCorrection::On ||
                           r.verdicts[i] == BiasVerdict::Correct;
        if (apply) {
          theta[i] = r.jackknife->corrected[i];
          changed = true;
        }
      }
      if (changed) {
        const auto corrected = from_vector(theta, chosen.model);
        if (corrected.valid()) r.corrected = corrected;
      }
    }
  }
  const GevParams level_params = r.corrected.value_or(chosen.params);
  const LevelBasis basis = r.corrected ? LevelBasis::BiasCorrected : LevelBasis::RawFit;

  staged("return_levels", [&] {
    for (double period : config.periods) {
      if (!(period > 1.0)) throw DomainError("return period must exceed 1");
      const double p = 1.0 / period;
      if (chosen.cov) {
        r.return_levels.push_back(return_level_ci(chosen, p, config.tau, sided, r.corrected));
      } else {
        r.return_levels.push_back(level_without_cov(level_params, p, basis));
      }
    }
  });

  staged("diagnostics", [&] {
    r.diagnostics.push_back(probability_plot(x, chosen.params));
    r.diagnostics.push_back(quantile_plot(x, chosen.params));
    if (chosen.cov) {
      r.diagnostics.push_back(return_curve(chosen, kCurvePeriods, config.tau, sided, r.corrected));
    }
    r.diagnostics.push_back(density_overlay(x, chosen.params, config.bins));
  });

  staged("order_statistics", [&] {
    for (const auto& q : config.order_queries) {
      const double F = cdf(level_params, q.x);
      r.order_stats.push_back({q, F, order_cdf(F, q.r, q.n)});
    }
  });

  if (!config.holdout.empty()) {
    HoldoutCheck h;
    h.values = config.holdout;
    h.period = static_cast<double>(config.holdout.size());
    if (h.period > 1.0) {
      h.level = return_level(level_params, 1.0 / h.period);
      for (double v : h.values) h.below.push_back(v <= h.level);
      r.holdout = std::move(h);
    }
  }

  if (config.profile_shape) {
    try {
      ProfileOptions opts;
      opts.tau = config.tau;
      r.shape_profile = profile(x, r.gev, ProfileTarget::parameter(2), opts);
    } catch (const Error& e) {
      r.shape_profile_note = e.what();
    }
  }
  return r;
}

json to_json(const FitResult& fit) {
  json j;
  j["model"] = std::string(to_string(fit.model));
  j["n"] = fit.n;
  j["params"] = params_json(fit.params);
  j["type"] = std::string(to_string(classify(fit.params)));
  j["nllh"] = num(fit.nllh);
  j["loglik"] = num(-fit.nllh);
  j["aic"] = num(aic(fit));
  j["regularity"] = std::string(to_string(fit.regularity));
  j["se"] = fit.se ? nums(*fit.se) : json(nullptr);
  if (fit.cov) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < fit.cov->rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < fit.cov->cols(); ++k) row.push_back(num((*fit.cov)(i, k)));
      rows.push_back(row);
    }
    j["cov"] = rows;
  } else {
    j["cov"] = nullptr;
  }
  j["se_note"] = fit.se_note;
  j["info_condition"] = num(fit.info_condition);
  j["optimizer"] = {{"iterations", fit.opt.iterations},
                    {"converged", fit.opt.converged},
                    {"restarts", fit.opt.restarts}};
  return j;
}

json to_json(const ResamplingReport& report) {
  json j;
  j["method"] = std::string(to_string(report.method));
  j["replicates"] = report.replicates;
  if (report.method == ResamplingMethod::Bootstrap) {
    j["seed"] = report.seed;
    j["failed"] = report.failed;
  }
  j["labels"] = report.labels;
  j["estimate"] = nums(report.estimate);
  j["mean"] = nums(report.mean);
  j["bias"] = nums(report.bias);
  j["se"] = nums(report.se);
  j["ratio"] = nums(report.ratio);
  j["rmse"] = nums(report.rmse);
  j["corrected"] = nums(report.corrected);
  json verdicts = json::array();
  for (auto v : screen(report)) verdicts.push_back(std::string(to_string(v)));
  j["verdicts"] = verdicts;
  return j;
}

json to_json(const ReturnLevelEstimate& est) {
  return {{"period", num(est.period)},   {"p", num(est.p)},
          {"level", num(est.level)},     {"variance", num(est.variance)},
          {"lower", num(est.ci.lower)},  {"upper", num(est.ci.upper)},
          {"basis", std::string(to_string(est.basis))}};
}

json to_json(const ProfileCurve& curve) {
  json j;
  j["target"] = curve.target.kind == ProfileTarget::Kind::Parameter
                    ? json{{"parameter", curve.target.index}}
                    : json{{"return_level_p", num(curve.target.p)}};
  j["estimate"] = num(curve.estimate);
  j["max_loglik"] = num(curve.max_loglik);
  j["threshold"] = num(curve.threshold);
  j["ci"] = {num(curve.ci.lower), num(curve.ci.upper)};
  j["grid"] = nums(curve.grid);
  j["profile_loglik"] = nums(curve.lp);
  j["deviance"] = nums(curve.deviance);
  return j;
}

json to_json(const WorkflowReport& r) {
  json j;
  j["n"] = r.n;
  j["fits"] = {{"gev", to_json(r.gev)}, {"gumbel", to_json(r.gumbel)}};
  j["model_selection"] = {
      {"lrt",
       {{"statistic", num(r.lrt.statistic)},
        {"df", r.lrt.df},
        {"critical", num(r.lrt.critical)},
        {"p_value", num(r.lrt.p_value)},
        {"reject", r.lrt.reject}}},
      {"aic", {{"gev", num(r.aic_gev)}, {"gumbel", num(r.aic_gumbel)}}},
      {"selected", std::string(to_string(r.selected))},
      {"reason", r.selection_reason}};
  if (r.bootstrap || r.jackknife) {
    json res;
    if (r.bootstrap) res["bootstrap"] = to_json(*r.bootstrap);
    if (r.jackknife) res["jackknife"] = to_json(*r.jackknife);
    res["corrected_params"] = r.corrected ? params_json(*r.corrected) : json(nullptr);
    j["resampling"] = res;
  }
  if (!r.return_levels.empty()) {
    json levels = json::array();
    for (const auto& e : r.return_levels) levels.push_back(to_json(e));
    j["return_levels"] = levels;
  }
  if (!r.order_stats.empty()) {
    json os = json::array();
    for (const auto& o : r.order_stats) {
      os.push_back({{"x", num(o.query.x)},
                    {"r", o.query.r},
                    {"n", o.query.n},
                    {"cdf_at_x", num(o.cdf_at_x)},
                    {"probability", num(o.probability)}});
    }
    j["order_statistics"] = os;
  }
  if (r.holdout) {
    j["holdout"] = {{"values", nums(r.holdout->values)},
                    {"period", num(r.holdout->period)},
                    {"level", num(r.holdout->level)},
                    {"below", r.holdout->below}};
  }
  if (r.shape_profile) {
    j["shape_profile"] = to_json(*r.shape_profile);
  } else if (!r.shape_profile_note.empty()) {
    j["shape_profile"] = {{"error", r.shape_profile_note}};
  }
  json diags = json::array();
  for (const auto& s : r.diagnostics) {
    json d;
    d["kind"] = std::string(to_string(s.kind));
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back({num(p.x), num(p.y)});
    d["points"] = pts;
    if (s.bands) {
      json b = json::array();
      for (const auto& iv : *s.bands) b.push_back({num(iv.lower), num(iv.upper)});
      d["bands"] = b;
    }
    if (!s.model.empty()) d["model"] = nums(s.model);
    d["reference"] = s.reference;
    diags.push_back(d);
  }
  j["diagnostics"] = diags;
  return j;
}

std::string format_tables(const WorkflowReport& r) {
  std::ostringstream os;
  char line[256];
  os << "Table 1. Model comparison\n";
  std::snprintf(line, sizeof line, "  %-8s %-16s %-16s %-16s\n", "model", "xi", "loglik", "AIC");
  os << line;
  for (const FitResult* f : {&r.gumbel, &r.gev}) {
    std::snprintf(line, sizeof line, "  %-8s %-16s %-16s %-16s\n",
                  std::string(to_string(f->model)).c_str(), fmt(f->params.xi).c_str(),
                  fmt(-f->nllh).c_str(), fmt(aic(*f)).c_str());
    os << line;
  }
  os << "  LRT D = " << fmt(r.lrt.statistic) << " (critical " << fmt(r.lrt.critical)
     << "), selected: " << to_string(r.selected) << "\n\n";

  if (r.bootstrap && r.jackknife) {
    os << "Table 2. Bias and standard error (" << to_string(r.selected) << " fit)\n";
    std::snprintf(line, sizeof line, "  %-6s %-14s %-14s %-14s %-14s %-14s %-14s\n", "param",
                  "boot bias", "boot se", "boot ratio", "jack bias", "jack se", "jack ratio");
    os << line;
    for (std::size_t i = 0; i < r.bootstrap->labels.size(); ++i) {
      std::snprintf(line, sizeof line, "  %-6s %-14s %-14s %-14s %-14s %-14s %-14s\n",
                    r.bootstrap->labels[i].c_str(), fmt(r.bootstrap->bias[i]).c_str(),
                    fmt(r.bootstrap->se[i]).c_str(), fmt(r.bootstrap->ratio[i]).c_str(),
                    fmt(r.jackknife->bias[i]).c_str(), fmt(r.jackknife->se[i]).c_str(),
                    fmt(r.jackknife->ratio[i]).c_str());
      os << line;
    }
    if (r.corrected) {
      os << "  corrected parameters: mu=" << fmt(r.corrected->mu)
         << " sigma=" << fmt(r.corrected->sigma) << " xi=" << fmt(r.corrected->xi) << "\n";
    }
    os << "\n";
  }

  if (!r.return_levels.empty()) {
    os << "Table 3. Return levels\n";
    std::snprintf(line, sizeof line, "  %-10s %-16s %-16s %-16s\n", "period", "level", "lower",
                  "upper");
    os << line;
    for (const auto& e : r.return_levels) {
      std::snprintf(line, sizeof line, "  %-10s %-16s %-16s %-16s\n", fmt(e.period).c_str(),
                    fmt(e.level).c_str(), fmt(e.ci.lower).c_str(), fmt(e.ci.upper).c_str());
      os << line;
    }
    os << "\n";
  }

  if (!r.order_stats.empty()) {
    os << "Table 4. Order statistics P(X_{r:n} <= x)\n";
    std::snprintf(line, sizeof line, "  %-10s %-6s %-6s %-16s\n", "x", "r", "n", "probability");
    os << line;
    for (const auto& o : r.order_stats) {
      std::snprintf(line, sizeof line, "  %-10s %-6d %-6d %-16s\n", fmt(o.query.x).c_str(),
                    o.query.r, o.query.n, fmt(o.probability).c_str());
      os << line;
    }
    os << "\n";
  }

  if (r.holdout) {
    os << "Held-out maxima vs the " << fmt(r.holdout->period)
       << "-block return level " << fmt(r.holdout->level) << ":";
    for (std::size_t i = 0; i < r.holdout->values.size(); ++i) {
      os << ' ' << fmt(r.holdout->values[i]) << (r.holdout->below[i] ? " (below)" : " (above)");
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace gevstat
