#include "varbound/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "varbound/bounds.hpp"
#include "varbound/csv.hpp"
#include "varbound/errors.hpp"
#include "varbound/instance.hpp"
#include "varbound/lln.hpp"
#include "varbound/processes.hpp"
#include "varbound/table1.hpp"
#include "varbound/tails.hpp"
#include "varbound/verify.hpp"

namespace varbound {

namespace {

using nlohmann::json;

enum class Format { Csv, Json };

struct ProcessFlags {
  std::string name = "running-mean";
  double lambda = 1.0;
  double sigma = 1.0;
  double mu = 0.0;
  double p = 0.5;
};

struct Config {
  std::string output;
  unsigned workers = 0;
  Format format = Format::Csv;
  std::string instance;
  ProcessFlags process;
  std::size_t n = 20;
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  std::vector<double> deltas;
  bool empirical = false;

  std::string condition = "28";
  std::size_t n_max = 200;
  double s = 1.0;
  bool s_given = false;
  double threshold = 0.05;
  double cap = 1.0;
  bool cap_given = false;

  std::string statistic = "mean_n";
  std::size_t i = 0;
  std::size_t j = 0;

  std::string method = "float";
  GridSpec grid;
};

unsigned effective_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

ProcessModel make_process(const ProcessFlags& f) {
  if (f.name == "running-mean") return ProcessModel::running_mean(f.mu, f.sigma);
  if (f.name == "telegraph") return ProcessModel::telegraph(f.lambda, f.p);
  throw InvalidInput("unknown process '" + f.name + "' (expected running-mean or telegraph)");
}

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---------------------------------------------------------------------------

int run_bounds(const Config& c, std::ostream& out) {
  if (c.instance.empty()) throw InvalidInput("bounds needs --instance");
  const Instance inst = load_instance(c.instance);
  const BoundReport r = bound_report(inst.weights, inst.model);
  if (c.format == Format::Json) {
    json doc;
    doc["exact"] = r.exact;
    doc["weight_class"] = std::string(to_string(r.weight_class));
    doc["hypothetical"] = r.hypothetical;
    doc["bounds"] = json::array();
    for (const auto& e : r.entries) {
      json b{{"tag", std::string(to_string(e.tag))}, {"applicable", e.applicable}, {"value", e.value}};
      b["slack"] = e.applicable ? json(e.slack) : json(nullptr);
      if (!e.chain.empty()) b["chain"] = e.chain;
      doc["bounds"].push_back(b);
    }
    doc["violations"] = r.violations;
    out << doc.dump(2) << '\n';
  } else {
    out << csv_line({"tag", "applicable", "value", "slack"}) << '\n';
    out << csv_line({"exact", "true", format_real(r.exact), format_real(0.0)}) << '\n';
    for (const auto& e : r.entries) {
      out << csv_line({std::string(to_string(e.tag)), e.applicable ? "true" : "false", format_real(e.value),
                       e.applicable ? format_real(e.slack) : std::string()})
          << '\n';
    }
    out << "# weight_class=" << to_string(r.weight_class) << '\n';
    if (r.hypothetical) out << "# hypothetical=true\n";
    for (const auto& v : r.violations) out << "# violation: " << v << '\n';
  }
  return r.ok() ? kExitOk : kExitInvariant;
}

int run_tails(const Config& c, std::ostream& out) {
  if (c.deltas.empty()) throw InvalidInput("tails needs --delta");
  for (double d : c.deltas) {
    if (!(d > 0.0)) throw InvalidInput("delta must be > 0");
  }
  std::optional<Instance> inst;
  if (!c.instance.empty()) inst = load_instance(c.instance);
  if (!inst && !c.empirical) throw InvalidInput("tails needs --instance or --empirical");

  struct Row {
    double delta;
    double bound;
    std::optional<double> frequency;
    std::optional<double> std_error;
  };
  std::vector<Row> rows;
  if (c.empirical) {
    const ProcessModel p = make_process(c.process);
    const VarianceProfile profile = process_profile(p, c.n);
    for (std::size_t k = 0; k < c.deltas.size(); ++k) {
      const double d = c.deltas[k];
      const McEstimate e = empirical_tail(p, c.n, d, c.reps, derive_seed(c.seed, k), effective_workers(c.workers));
      rows.push_back({d, tail_bound_mean(profile, d, Dependence::Correlated), e.estimate, e.std_error});
    }
  } else {
    for (double d : c.deltas) {
      rows.push_back({d, tail_bound_weighted(inst->weights, inst->model.profile(), d), std::nullopt, std::nullopt});
    }
  }

  if (c.format == Format::Json) {
    json doc = json::array();
    for (const auto& r : rows) {
      doc.push_back({{"delta", r.delta},
                     {"bound", r.bound},
                     {"frequency", optional_json(r.frequency)},
                     {"std_error", optional_json(r.std_error)},
                     {"vacuous", vacuous(r.bound)}});
    }
    out << doc.dump(2) << '\n';
  } else {
    out << csv_line({"delta", "bound", "frequency", "std_error", "vacuous"}) << '\n';
    for (const auto& r : rows) {
      out << csv_line({format_real(r.delta), format_real(r.bound), optional_real(r.frequency),
                       optional_real(r.std_error), vacuous(r.bound) ? "true" : "false"})
          << '\n';
    }
  }
  return kExitOk;
}

LlnCondition parse_condition(const std::string& text) {
  if (text == "25") return LlnCondition::Markov25;
  if (text == "28") return LlnCondition::Markov28;
  if (text == "30") return LlnCondition::PowerMean30;
  if (text == "32") return LlnCondition::Theorem9;
  if (text == "36") return LlnCondition::Theorem12;
  throw InvalidInput("unknown condition '" + text + "' (expected 25, 28, 30, 32 or 36)");
}

int run_lln(const Config& c, std::ostream& out) {
  const ProcessModel p = make_process(c.process);
  const LlnCondition cond = parse_condition(c.condition);
  if (c.n_max < 2) throw InvalidInput("--n-max must be >= 2");
  if (!(c.threshold > 0.0)) throw InvalidInput("--threshold must be > 0");
  const auto grid = full_grid(c.n_max);
  ConvergenceRule rule;
  rule.threshold = c.threshold;

  LlnDiagnostic d;
  std::vector<std::string> extra;
  switch (cond) {
    case LlnCondition::Markov25:
    case LlnCondition::Markov28:
    case LlnCondition::PowerMean30:
      d = diagnose(p, cond, grid, c.s_given ? c.s : 1.0, rule);
      break;
    case LlnCondition::Theorem9: {
      const double s = c.s_given ? c.s : 0.5;
      const auto var = variance_sequence(p);
      d.condition = cond;
      d.s = s;
      d.threshold = rule.threshold;
      if (c.cap_given) d.cap = c.cap;
      for (std::size_t n : grid) {
        const ScaledVariance sv =
            theorem9_scaled_variance(var, n, s, c.cap_given ? std::optional<double>(c.cap) : std::nullopt);
        d.samples.push_back({n, sv.value, sv.bound});
      }
      d.verdict = judge_vanishing(d.samples, rule.threshold);
      break;
    }
    case LlnCondition::Theorem12: {
      const Theorem12Report r = theorem12_check(p, grid, c.cap, c.s_given ? c.s : 0.5, rule);
      d = r.diagnostic;
      extra.push_back(fmt::format("mean_variance_vanishes={}", r.mean_variance_vanishes ? "true" : "false"));
      extra.push_back(fmt::format("variance_branch={}", to_string(r.variance_branch)));
      extra.push_back(fmt::format("covariance_branch={}", to_string(r.covariance_branch)));
      break;
    }
  }

  if (c.format == Format::Json) {
    json doc;
    doc["condition"] = std::string(to_string(cond));
    doc["process"] = p.name();
    doc["verdict"] = std::string(to_string(d.verdict));
    doc["samples"] = json::array();
    for (const auto& s : d.samples) doc["samples"].push_back({{"n", s.n}, {"value", s.value}, {"bound", optional_json(s.bound)}});
    for (const auto& e : extra) {
      const auto eq = e.find('=');
      doc[e.substr(0, eq)] = e.substr(eq + 1);
    }
    out << doc.dump(2) << '\n';
  } else {
    out << csv_line({"n", "value", "bound"}) << '\n';
    for (const auto& s : d.samples) {
      out << csv_line({std::to_string(s.n), format_real(s.value), optional_real(s.bound)}) << '\n';
    }
    for (const auto& e : extra) out << "# " << e << '\n';
    out << "# verdict=" << to_string(d.verdict) << '\n';
  }
  return kExitOk;
}

Statistic resolve_statistic(const Config& c) {
  if (c.statistic == "cov") {
    if (c.i == 0 || c.j == 0) throw InvalidInput("--statistic cov needs --i and --j");
    return Statistic::cov(c.i, c.j);
  }
  if (c.statistic == "tail") {
    if (c.deltas.size() != 1) throw InvalidInput("--statistic tail needs one --delta");
    return Statistic::tail(c.deltas.front());
  }
  return Statistic::parse(c.statistic);
}

int run_simulate(const Config& c, std::ostream& out) {
  const ProcessModel p = make_process(c.process);
  const Statistic stat = resolve_statistic(c);
  const McEstimate e = mc_estimate(p, stat, c.n, c.reps, c.seed, effective_workers(c.workers));
  const std::optional<double> exact = closed_form(p, stat, c.n);
  const std::optional<double> err = exact ? std::optional<double>(std::abs(e.estimate - *exact)) : std::nullopt;
  if (c.format == Format::Json) {
    json doc{{"statistic", stat.label()},         {"process", p.name()},
             {"n", c.n},                          {"reps", c.reps},
             {"seed", c.seed},                    {"estimate", e.estimate},
             {"std_error", e.std_error},          {"closed_form", optional_json(exact)},
             {"abs_error", optional_json(err)}};
    out << doc.dump(2) << '\n';
  } else {
    out << csv_line({"statistic", "estimate", "std_error", "closed_form", "abs_error"}) << '\n';
    out << csv_line({stat.label(), format_real(e.estimate), format_real(e.std_error), optional_real(exact),
                     optional_real(err)})
        << '\n';
  }
  return kExitOk;
}

int run_table1_command(const Config& c, std::ostream& out) {
  GridSpec g = c.grid;
  g.n = c.n;
  const Table1Row row = run_table1(g, parse_table1_method(c.method), effective_workers(c.workers));
  if (c.format == Format::Json) {
    json doc{{"n", row.n},
             {"total", row.total},
             {"violations", row.violations},
             {"ratio_percent", row.ratio_percent},
             {"method", std::string(to_string(row.method))},
             {"weight_tuples", row.weight_tuples},
             {"note", row.note}};
    out << doc.dump(2) << '\n';
  } else {
    out << csv_line({"n", "total", "violations", "ratio_percent"}) << '\n';
    out << csv_line({std::to_string(row.n), std::to_string(row.total), std::to_string(row.violations),
                     format_ratio_percent(row.ratio_percent)})
        << '\n';
    out << "# method=" << to_string(row.method) << '\n';
    if (!row.note.empty()) out << "# note: " << row.note << '\n';
  }
  return kExitOk;
}

int run_verify(const Config& c, std::ostream& out) {
  const unsigned workers = effective_workers(c.workers);
  auto results = run_properties(workers);
  auto acceptance = run_acceptance(workers);
  results.insert(results.end(), acceptance.begin(), acceptance.end());
  bool all = true;
  if (c.format == Format::Json) {
    json doc = json::array();
    for (const auto& r : results) {
      doc.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
      all = all && r.passed;
    }
    out << doc.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      out << format_check(r) << '\n';
      all = all && r.passed;
    }
    const auto passed = std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
    out << fmt::format("{}/{} checks passed\n", passed, results.size());
  }
  return all ? kExitOk : kExitInvariant;
}

// ---------------------------------------------------------------------------

void add_format(CLI::App* sub, Config& c) {
  sub->add_option("--format", c.format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::Csv}, {"json", Format::Json}}));
}

void add_process(CLI::App* sub, Config& c) {
  sub->add_option("--process", c.process.name, "running-mean or telegraph")
      ->check(CLI::IsMember({"running-mean", "telegraph"}));
  sub->add_option("--lambda", c.process.lambda, "Telegraph rate");
  sub->add_option("--p", c.process.p, "Telegraph stationary probability of state 1");
  sub->add_option("--sigma", c.process.sigma, "Running-mean noise standard deviation");
  sub->add_option("--mu", c.process.mu, "Running-mean noise mean");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Variance bounds for weighted sums of correlated random variables", "varbound"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--output,-o", c.output, "Write the report to this file instead of standard output");
  app.add_option("--workers", c.workers, "Worker threads (0 = hardware concurrency)");

  auto* bounds = app.add_subcommand("bounds", "Exact variance and every upper bound for an instance");
  bounds->add_option("--instance", c.instance, "Instance JSON file")->required();
  add_format(bounds, c);

  auto* tails = app.add_subcommand("tails", "Chebyshev tail bounds, optionally against simulation");
  tails->add_option("--instance", c.instance, "Instance JSON file");
  tails->add_option("--delta", c.deltas, "Deviation(s), comma separated")->required()->delimiter(',');
  tails->add_flag("--empirical", c.empirical, "Compare the mean bound with simulated frequencies");
  tails->add_option("--n", c.n, "Path length");
  tails->add_option("--reps", c.reps, "Monte Carlo replicates");
  tails->add_option("--seed", c.seed, "Seed");
  add_process(tails, c);
  add_format(tails, c);

  auto* lln = app.add_subcommand("lln", "Weak-law sufficient conditions over n = 1..n-max");
  add_process(lln, c);
  lln->add_option("--condition", c.condition, "25, 28, 30, 32 or 36");
  lln->add_option("--n-max", c.n_max, "Largest n");
  lln->add_option("--s", c.s, "Exponent s")->each([&c](const std::string&) { c.s_given = true; });
  lln->add_option("--threshold", c.threshold, "Final value below which a decreasing sequence counts as vanishing");
  lln->add_option("--cap", c.cap, "Constant C")->each([&c](const std::string&) { c.cap_given = true; });
  add_format(lln, c);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a statistic against its closed form");
  add_process(simulate, c);
  simulate->add_option("--n", c.n, "Path length");
  simulate->add_option("--reps", c.reps, "Monte Carlo replicates");
  simulate->add_option("--seed", c.seed, "Seed");
  simulate->add_option("--statistic", c.statistic, "mean_n, var_of_mean_n, cov, cov(i,j), tail or tail(d)");
  simulate->add_option("--i", c.i, "First cov index (1-based)");
  simulate->add_option("--j", c.j, "Second cov index (1-based)");
  simulate->add_option("--delta", c.deltas, "Tail deviation");
  add_format(simulate, c);

  auto* table1 = app.add_subcommand("table1", "Grid enumeration of sum a_i v_i > (sum a_i^2)(sum v_i)");
  table1->add_option("--n", c.n, "Number of variables")->required();
  table1->add_option("--method", c.method, "float or exact")->check(CLI::IsMember({"float", "exact"}));
  table1->add_option("--weight-denominator", c.grid.weight_denominator, "Weights are k/D");
  table1->add_option("--variance-steps", c.grid.variance_steps, "Variances are 1/E .. S/E");
  table1->add_option("--variance-denominator", c.grid.variance_denominator, "Variance grid denominator E");
  add_format(table1, c);

  auto* verify = app.add_subcommand("verify", "Run every property suite and acceptance criterion");
  add_format(verify, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }

  std::ostringstream report;
  int code = kExitOk;
  try {
    if (bounds->parsed()) code = run_bounds(c, report);
    else if (tails->parsed()) code = run_tails(c, report);
    else if (lln->parsed()) code = run_lln(c, report);
    else if (simulate->parsed()) code = run_simulate(c, report);
    else if (table1->parsed()) code = run_table1_command(c, report);
    else if (verify->parsed()) code = run_verify(c, report);
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }

  if (c.output.empty()) {
    out << report.str();
  } else {
    std::ofstream file(c.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << c.output << '\n';
      return kExitInvalidInput;
    }
    file << report.str();
  }
  return code;
}

}  // namespace varbound
