// gevstat command-line tool.
//
// Exit codes: 0 success, 2 input error, 3 convergence failure, 4 resampling failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gevstat/diagnostics.hpp"
#include "gevstat/distributions.hpp"
#include "gevstat/errors.hpp"
#include "gevstat/inference.hpp"
#include "gevstat/io.hpp"
#include "gevstat/orderstats.hpp"
#include "gevstat/resampling.hpp"
#include "gevstat/returns.hpp"
#include "gevstat/workflow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gevstat;

namespace {

enum class OutFormat { Table, Json, Csv };

struct Common {
  std::string input;
  std::string input_format = "auto";
  std::string year_column = "Year";
  std::string value_column = "data";
  std::size_t max_bad = 5;
  std::string model = "auto";
  std::string format = "table";
  std::string out_dir;
  double tau = 0.05;
  bool one_sided = false;
  std::string periods_text = "4,10,40,100";
  std::vector<double> periods;
  std::size_t boot_b = 999;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string bias_correct = "auto";
  std::vector<double> holdout;
  std::optional<double> mu, sigma, xi;
  std::vector<double> ostat_x;
  std::vector<int> ranks;
  int block = 10;
  std::size_t sim_n = 100;
  int first_year = 1;
  std::optional<int> bins;
  std::string output;
};

std::string num(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", round_sig10(v));
  return buf;
}

OutFormat out_format(const Common& c) {
  if (c.format == "json") return OutFormat::Json;
  if (c.format == "csv") return OutFormat::Csv;
  return OutFormat::Table;
}

MaximaSample load(const Common& c) {
  IngestOptions o;
  o.format = c.input_format == "csv"          ? TableFormat::Csv
             : c.input_format == "whitespace" ? TableFormat::Whitespace
                                              : TableFormat::Auto;
  o.year_column = c.year_column;
  o.value_column = c.value_column;
  o.max_bad = c.max_bad;
  const auto r = c.input == "-" ? [&] {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ingest_text(ss.str(), o);
  }()
                                : ingest(c.input, o);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return r.sample;
}

GevParams explicit_params(const Common& c) {
  if (!c.mu || !c.sigma) throw InputError("need --mu and --sigma (or an input file)");
  GevParams p{*c.mu, *c.sigma, c.xi.value_or(0.0)};
  require_valid(p);
  return p;
}

FitResult fit_selected(const Common& c, std::span<const double> x, std::string* reason = nullptr) {
  if (c.model == "gev") return fit_gev(x);
  if (c.model == "gumbel") return fit_gumbel(x);
  auto pair = fit_both(x);
  const auto t = lrt(pair.gumbel, pair.gev);
  if (reason) *reason = "likelihood-ratio D = " + num(t.statistic) + " vs " + num(t.critical);
  return select_model(t) == Model::Gev ? std::move(pair.gev) : std::move(pair.gumbel);
}

Sidedness sidedness(const Common& c) {
  return c.one_sided ? Sidedness::OneSided : Sidedness::TwoSided;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

fs::path out_dir(const Common& c) {
  fs::path d = c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir);
  fs::create_directories(d);
  return d;
}

void write_plots(const std::vector<PlotSeries>& series, const fs::path& dir) {
  for (const auto& s : series) {
    const std::string stem(to_string(s.kind));
    write_file(dir / (stem + ".csv"), to_csv(s));
    write_file(dir / (stem + ".svg"), to_svg(s));
  }
}

// --- per-table CSV --------------------------------------------------------

std::string models_csv(const WorkflowReport& r) {
  std::ostringstream os;
  os << "model,mu,sigma,xi,se_mu,se_sigma,se_xi,nllh,loglik,aic\n";
  for (const FitResult* f : {&r.gumbel, &r.gev}) {
    os << to_string(f->model) << ',' << num(f->params.mu) << ',' << num(f->params.sigma) << ','
       << num(f->params.xi);
    for (int i = 0; i < 3; ++i) {
      os << ',';
      if (f->se && i < static_cast<int>(f->se->size())) os << num((*f->se)[i]);
    }
    os << ',' << num(f->nllh) << ',' << num(-f->nllh) << ',' << num(aic(*f)) << '\n';
  }
  return os.str();
}

std::string resampling_csv(const std::vector<const ResamplingReport*>& reports) {
  std::ostringstream os;
  os << "method,parameter,estimate,bias,se,ratio,rmse,corrected,verdict\n";
  for (const auto* rep : reports) {
    const auto verdicts = screen(*rep);
    for (std::size_t i = 0; i < rep->labels.size(); ++i) {
      os << to_string(rep->method) << ',' << rep->labels[i] << ',' << num(rep->estimate[i]) << ','
         << num(rep->bias[i]) << ',' << num(rep->se[i]) << ',' << num(rep->ratio[i]) << ','
         << num(rep->rmse[i]) << ',' << num(rep->corrected[i]) << ',' << to_string(verdicts[i])
         << '\n';
    }
  }
  return os.str();
}

std::string levels_csv(const std::vector<ReturnLevelEstimate>& levels) {
  std::ostringstream os;
  os << "period,p,level,variance,lower,upper,basis\n";
  for (const auto& e : levels) {
    os << num(e.period) << ',' << num(e.p) << ',' << num(e.level) << ',' << num(e.variance) << ','
       << num(e.ci.lower) << ',' << num(e.ci.upper) << ',' << to_string(e.basis) << '\n';
  }
  return os.str();
}

std::string order_csv(const std::vector<OrderResult>& rows) {
  std::ostringstream os;
  os << "x,r,n,cdf_at_x,probability\n";
  for (const auto& o : rows) {
    os << num(o.query.x) << ',' << o.query.r << ',' << o.query.n << ',' << num(o.cdf_at_x) << ','
       << num(o.probability) << '\n';
  }
  return os.str();
}

std::vector<OrderQuery> order_queries(const Common& c) {
  std::vector<OrderQuery> q;
  for (double x : c.ostat_x)
    for (int r : c.ranks) q.push_back({x, r, c.block});
  return q;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (text == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw InputError("not a number in list: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

// --- subcommands ----------------------------------------------------------

int cmd_fit(const Common& c) {
  const auto s = load(c);
  std::string reason;
  const auto f = fit_selected(c, s.view(), &reason);
  const Model m = f.model;
  switch (out_format(c)) {
    case OutFormat::Json:
      std::cout << to_json(f).dump(2) << "\n";
      break;
    case OutFormat::Csv: {
      WorkflowReport r;
      r.gev = m == Model::Gev ? f : fit_gev(s.view());
      r.gumbel = m == Model::Gumbel ? f : fit_gumbel(s.view());
      std::cout << models_csv(r);
      break;
    }
    case OutFormat::Table: {
      const auto names = parameter_labels(m);
      std::cout << "model " << to_string(m) << " (n=" << f.n << ")";
      if (!reason.empty()) std::cout << ", " << reason;
      std::cout << "\n";
      const auto est = f.estimate();
      for (std::size_t i = 0; i < est.size(); ++i) {
        std::cout << "  " << names[i] << " = " << num(est[i]);
        if (f.se) {
          const auto ci = normal_ci(f, static_cast<int>(i), c.tau, sidedness(c));
          std::cout << "  se " << num((*f.se)[i]) << "  ci [" << num(ci.lower) << ", "
                    << num(ci.upper) << "]";
        }
        std::cout << "\n";
      }
      if (!f.se) std::cout << "  standard errors unavailable: " << f.se_note << "\n";
      std::cout << "  nllh " << num(f.nllh) << "  AIC " << num(aic(f)) << "  regularity "
                << to_string(f.regularity) << "\n";
      break;
    }
  }
  return 0;
}

int cmd_diag(const Common& c) {
  const auto s = load(c);
  const auto f = fit_selected(c, s.view());
  std::vector<PlotSeries> series{probability_plot(s.view(), f.params),
                                 quantile_plot(s.view(), f.params)};
  if (f.cov) {
    const std::vector<double> periods{1.1, 1.5, 2, 3, 5, 10, 20, 50, 100, 200, 500, 1000};
    series.push_back(return_curve(f, periods, c.tau, sidedness(c)));
  }
  series.push_back(density_overlay(s.view(), f.params, c.bins));
  const auto dir = out_dir(c);
  write_plots(series, dir);
  if (out_format(c) == OutFormat::Csv) {
    for (const auto& p : series) std::cout << to_csv(p);
  } else {
    for (const auto& p : series) {
      std::cout << to_string(p.kind) << ": " << p.points.size() << " points -> "
                << (dir / (std::string(to_string(p.kind)) + ".csv")).string() << "\n";
    }
  }
  return 0;
}

int cmd_resample(const Common& c) {
  const auto s = load(c);
  const Model m = fit_selected(c, s.view()).model;
  const auto stat = fit_statistic(m);
  const auto labels = parameter_labels(m);
  BootstrapOptions o;
  o.replicates = c.boot_b;
  o.seed = c.seed;
  o.workers = c.workers;
  const auto b = bootstrap(s.view(), stat, o, labels);
  const auto j = jackknife(s.view(), stat, labels);
  switch (out_format(c)) {
    case OutFormat::Json:
      std::cout << json{{"model", std::string(to_string(m))},
                        {"bootstrap", to_json(b)},
                        {"jackknife", to_json(j)}}
                       .dump(2)
                << "\n";
      break;
    case OutFormat::Csv:
      std::cout << resampling_csv({&b, &j});
      break;
    case OutFormat::Table: {
      std::cout << "model " << to_string(m) << ", bootstrap B=" << b.replicates
                << " seed=" << b.seed << " (failed " << b.failed << "), jackknife n="
                << j.replicates << "\n";
      for (const auto* rep : {&b, &j}) {
        const auto v = screen(*rep);
        for (std::size_t i = 0; i < labels.size(); ++i) {
          std::cout << "  " << to_string(rep->method) << ' ' << labels[i] << ": bias "
                    << num(rep->bias[i]) << "  se " << num(rep->se[i]) << "  ratio "
                    << num(rep->ratio[i]) << "  rmse " << num(rep->rmse[i]) << "  corrected "
                    << num(rep->corrected[i]) << "  " << to_string(v[i]) << "\n";
        }
      }
      break;
    }
  }
  return 0;
}

int cmd_rlevel(const Common& c) {
  std::vector<ReturnLevelEstimate> levels;
  if (c.input.empty()) {
    const auto p = explicit_params(c);
    for (double period : c.periods) {
      if (!(period > 1.0)) throw DomainError("return period must exceed 1");
      ReturnLevelEstimate e;
      e.p = 1.0 / period;
      e.period = period;
      e.level = return_level(p, e.p);
      e.variance = std::nan("");
      e.ci = {e.variance, e.variance};
      e.params = p;
      levels.push_back(e);
    }
  } else {
    const auto s = load(c);
    const auto f = fit_selected(c, s.view());
    for (double period : c.periods) {
      if (!(period > 1.0)) throw DomainError("return period must exceed 1");
      levels.push_back(return_level_ci(f, 1.0 / period, c.tau, sidedness(c)));
    }
  }
  switch (out_format(c)) {
    case OutFormat::Json: {
      json a = json::array();
      for (const auto& e : levels) a.push_back(to_json(e));
      std::cout << a.dump(2) << "\n";
      break;
    }
    case OutFormat::Csv:
      std::cout << levels_csv(levels);
      break;
    case OutFormat::Table:
      for (const auto& e : levels) {
        std::cout << "  period " << num(e.period) << "  level " << num(e.level);
        if (std::isfinite(e.variance)) {
          std::cout << "  ci [" << num(e.ci.lower) << ", " << num(e.ci.upper) << "]";
        }
        std::cout << "\n";
      }
      break;
  }
  return 0;
}

int cmd_ostat(const Common& c) {
  GevParams p;
  if (c.input.empty()) {
    p = explicit_params(c);
  } else {
    const auto s = load(c);
    p = fit_selected(c, s.view()).params;
  }
  if (c.ostat_x.empty() || c.ranks.empty()) throw InputError("ostat needs --x and --rank");
  std::vector<OrderResult> rows;
  for (const auto& q : order_queries(c)) {
    const double F = cdf(p, q.x);
    rows.push_back({q, F, order_cdf(F, q.r, q.n)});
  }
  switch (out_format(c)) {
    case OutFormat::Json: {
      json a = json::array();
      for (const auto& o : rows) {
        a.push_back({{"x", round_sig10(o.query.x)},
                     {"r", o.query.r},
                     {"n", o.query.n},
                     {"cdf_at_x", round_sig10(o.cdf_at_x)},
                     {"probability", round_sig10(o.probability)}});
      }
      std::cout << a.dump(2) << "\n";
      break;
    }
    case OutFormat::Csv:
      std::cout << order_csv(rows);
      break;
    case OutFormat::Table:
      for (const auto& o : rows) {
        std::cout << "  P(X_{" << o.query.r << ":" << o.query.n << "} <= " << num(o.query.x)
                  << ") = " << num(o.probability) << "\n";
      }
      break;
  }
  return 0;
}

int cmd_simulate(const Common& c) {
  const auto p = explicit_params(c);
  const auto s = sample(p, c.sim_n, c.seed);
  const auto text = write_table(s, c.first_year);
  if (c.output.empty()) {
    std::cout << text;
  } else {
    write_file(c.output, text);
  }
  return 0;
}

int cmd_report(const Common& c) {
  const auto s = load(c);
  WorkflowConfig w;
  w.model = c.model == "gev" ? ModelChoice::Gev : c.model == "gumbel" ? ModelChoice::Gumbel
                                                                      : ModelChoice::Auto;
  w.boot_replicates = c.boot_b;
  w.seed = c.seed;
  w.workers = c.workers;
  w.periods = c.periods;
  w.tau = c.tau;
  w.one_sided = c.one_sided;
  w.bias_correct = c.bias_correct == "on"    ? BiasCorrection::On
                   : c.bias_correct == "off" ? BiasCorrection::Off
                                             : BiasCorrection::Auto;
  w.order_queries = order_queries(c);
  w.holdout = c.holdout;
  w.bins = c.bins;
  const auto r = run_workflow(s, w);
  const auto j = to_json(r);

  const auto dir = out_dir(c);
  write_file(dir / "report.json", j.dump(2) + "\n");
  write_file(dir / "table1_models.csv", models_csv(r));
  if (r.bootstrap && r.jackknife) {
    write_file(dir / "table2_resampling.csv", resampling_csv({&*r.bootstrap, &*r.jackknife}));
  }
  if (!r.return_levels.empty()) write_file(dir / "table3_return_levels.csv", levels_csv(r.return_levels));
  if (!r.order_stats.empty()) write_file(dir / "table4_order_statistics.csv", order_csv(r.order_stats));
  write_plots(r.diagnostics, dir);

  switch (out_format(c)) {
    case OutFormat::Json:
      std::cout << j.dump(2) << "\n";
      break;
    case OutFormat::Csv:
      std::cout << models_csv(r);
      if (!r.return_levels.empty()) std::cout << "\n" << levels_csv(r.return_levels);
      break;
    case OutFormat::Table:
      std::cout << format_tables(r);
      break;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-maxima extreme-value analysis"};
  app.require_subcommand(1);
  Common c;
  if (const char* env = std::getenv("EVT_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: EVT_SEED is not an unsigned integer\n";
      return 2;
    }
  }

  auto input_opts = [&](CLI::App* s, bool required) {
    auto* in = s->add_option("input", c.input, "Table of block maxima ('-' for stdin)");
    if (required) in->required();
    s->add_option("--input-format", c.input_format, "auto, whitespace or csv")
        ->check(CLI::IsMember({"auto", "whitespace", "csv"}));
    s->add_option("--year-column", c.year_column, "Year column header");
    s->add_option("--value-column", c.value_column, "Value column header");
    s->add_option("--max-bad", c.max_bad, "Malformed rows tolerated");
  };
  auto model_opt = [&](CLI::App* s) {
    s->add_option("--model", c.model, "gev, gumbel or auto (likelihood-ratio choice)")
        ->check(CLI::IsMember({"gev", "gumbel", "auto"}));
  };
  auto format_opt = [&](CLI::App* s) {
    s->add_option("--format", c.format, "table, json or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
  };
  auto ci_opts = [&](CLI::App* s) {
    s->add_option("--tau", c.tau, "Confidence-interval error level");
    s->add_flag("--one-sided", c.one_sided, "Use the one-sided normal quantile z_{1-tau}");
  };
  auto param_opts = [&](CLI::App* s) {
    s->add_option("--mu", c.mu, "Location");
    s->add_option("--sigma", c.sigma, "Scale");
    s->add_option("--xi", c.xi, "Shape (default 0)");
  };
  auto seed_opts = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "RNG seed (default: $EVT_SEED or 0)");
  };
  auto boot_opts = [&](CLI::App* s) {
    s->add_option("--boot-B", c.boot_b, "Bootstrap replicates")->check(CLI::PositiveNumber);
    s->add_option("--workers", c.workers, "Bootstrap threads (0 = all cores)");
    seed_opts(s);
  };
  auto ostat_opts = [&](CLI::App* s) {
    s->add_option("--x", c.ostat_x, "Level(s) for order-statistic probabilities")->delimiter(',');
    s->add_option("--rank", c.ranks, "Rank(s) r")->delimiter(',');
    s->add_option("--block", c.block, "Number of draws n")->check(CLI::PositiveNumber);
  };

  auto* fit_cmd = app.add_subcommand("fit", "Fit a GEV or Gumbel model");
  input_opts(fit_cmd, true);
  model_opt(fit_cmd);
  format_opt(fit_cmd);
  ci_opts(fit_cmd);

  auto* diag_cmd = app.add_subcommand("diag", "Write diagnostic plot series (CSV and SVG)");
  input_opts(diag_cmd, true);
  model_opt(diag_cmd);
  format_opt(diag_cmd);
  ci_opts(diag_cmd);
  diag_cmd->add_option("--out-dir", c.out_dir, "Output directory");
  diag_cmd->add_option("--bins", c.bins, "Histogram bins (default: Sturges)");

  auto* res_cmd = app.add_subcommand("resample", "Bootstrap and jackknife bias/SE");
  input_opts(res_cmd, true);
  model_opt(res_cmd);
  format_opt(res_cmd);
  boot_opts(res_cmd);

  auto* rl_cmd = app.add_subcommand("rlevel", "Return levels from data or given parameters");
  input_opts(rl_cmd, false);
  model_opt(rl_cmd);
  format_opt(rl_cmd);
  ci_opts(rl_cmd);
  param_opts(rl_cmd);
  rl_cmd->add_option("--periods", c.periods_text, "Comma-separated return periods (> 1)");

  auto* os_cmd = app.add_subcommand("ostat", "Order-statistic probabilities");
  input_opts(os_cmd, false);
  model_opt(os_cmd);
  format_opt(os_cmd);
  param_opts(os_cmd);
  ostat_opts(os_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "Draw a synthetic table of block maxima");
  param_opts(sim_cmd);
  seed_opts(sim_cmd);
  sim_cmd->add_option("-n,--n", c.sim_n, "Number of blocks")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--first-year", c.first_year, "Label of the first block");
  sim_cmd->add_option("-o,--output", c.output, "Output file (default stdout)");

  auto* rep_cmd = app.add_subcommand("report", "Full analysis: fits, tests, resampling, levels");
  input_opts(rep_cmd, true);
  model_opt(rep_cmd);
  format_opt(rep_cmd);
  ci_opts(rep_cmd);
  boot_opts(rep_cmd);
  ostat_opts(rep_cmd);
  rep_cmd->add_option("--periods", c.periods_text,
                      "Comma-separated return periods (> 1), or none");
  rep_cmd->add_option("--bias-correct", c.bias_correct, "auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  rep_cmd->add_option("--holdout", c.holdout, "Held-out maxima to compare with the return level")
      ->delimiter(',');
  rep_cmd->add_option("--out-dir", c.out_dir, "Output directory");
  rep_cmd->add_option("--bins", c.bins, "Histogram bins (default: Sturges)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    c.periods = parse_list(c.periods_text);
    if (*fit_cmd) return cmd_fit(c);
    if (*diag_cmd) return cmd_diag(c);
    if (*res_cmd) return cmd_resample(c);
    if (*rl_cmd) return cmd_rlevel(c);
    if (*os_cmd) return cmd_ostat(c);
    if (*sim_cmd) return cmd_simulate(c);
    if (*rep_cmd) return cmd_report(c);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const SingularInformationError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const BracketError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const ResamplingError& e) {
    std::cerr << "resampling failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
