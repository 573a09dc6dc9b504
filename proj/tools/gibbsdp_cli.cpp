// gibbsdp: discovery-probability estimation for species-sampling data under
// Gibbs-type priors (two-parameter Poisson-Dirichlet and normalized
// generalized gamma), with credible intervals, large-sample approximations,
// Good-Turing baselines, and a simulation harness.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "../vendor/CLI11.hpp"
#include "../vendor/json.hpp"

#include "gibbsdp/dataio.hpp"
#include "gibbsdp/errors.hpp"
#include "gibbsdp/estimators.hpp"
#include "gibbsdp/fit.hpp"
#include "gibbsdp/metrics.hpp"
#include "gibbsdp/parallel.hpp"
#include "gibbsdp/posterior.hpp"
#include "gibbsdp/prior.hpp"
#include "gibbsdp/weights.hpp"
#include "gibbsdp/zeta.hpp"

namespace {

using gibbsdp::PriorKind;
using gibbsdp::PriorSpec;
using gibbsdp::SampleSummary;
using json = nlohmann::ordered_json;

constexpr int kExitFlags = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumeric = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PriorFlags {
  std::string kind;
  bool do_fit = false;
  std::optional<double> sigma, theta, tau;
};

struct LRange {
  long lo = 0, hi = 0;
};

LRange parse_l_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    LRange r;
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stol(text);
    } else {
      r.lo = std::stol(text.substr(0, dots));
      r.hi = std::stol(text.substr(dots + 2));
    }
    if (r.lo < 0 || r.hi < r.lo) throw std::invalid_argument("bad range");
    return r;
  } catch (const std::exception&) {
    throw UsageError("--l expects a nonnegative integer or range a..b, got '" + text + "'");
  }
}

void add_prior_flags(CLI::App* cmd, PriorFlags& pf, bool kind_required = true) {
  auto* kind = cmd->add_option("--prior", pf.kind, "prior family: pd or gg")
                   ->check(CLI::IsMember({"pd", "gg"}));
  if (kind_required) kind->required();
  cmd->add_flag("--fit", pf.do_fit, "fit the prior parameters by empirical Bayes");
  cmd->add_option("--sigma", pf.sigma, "stability parameter in (0,1)");
  cmd->add_option("--theta", pf.theta, "PD concentration, > -sigma");
  cmd->add_option("--tau", pf.tau, "GG scale, > 0");
}

PriorKind kind_of(const std::string& name) {
  return name == "pd" ? PriorKind::pd : PriorKind::gg;
}

// resolve --fit / explicit parameters into a concrete prior
PriorSpec resolve_prior(const SampleSummary& s, const PriorFlags& pf, json* fit_detail) {
  const PriorKind kind = kind_of(pf.kind);
  if (pf.do_fit) {
    if (pf.sigma || pf.theta || pf.tau)
      throw UsageError("--fit excludes --sigma/--theta/--tau");
    const gibbsdp::FitResult fr = gibbsdp::fit(s, kind);
    if (fit_detail) {
      (*fit_detail)["log_likelihood"] = fr.log_likelihood;
      (*fit_detail)["converged"] = fr.converged;
      (*fit_detail)["evaluations"] = fr.evaluations;
      (*fit_detail)["multi_start_spread"] = fr.multi_start_spread;
    }
    return fr.prior;
  }
  if (!pf.sigma) throw UsageError("either --fit or --sigma (with --theta/--tau) is required");
  try {
    if (kind == PriorKind::pd) {
      if (!pf.theta || pf.tau) throw UsageError("--prior pd takes --sigma and --theta");
      return PriorSpec::pd(*pf.sigma, *pf.theta);
    }
    if (!pf.tau || pf.theta) throw UsageError("--prior gg takes --sigma and --tau");
    return PriorSpec::gg(*pf.sigma, *pf.tau);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
}

json prior_json(const PriorSpec& p) {
  json j;
  j["kind"] = p.kind() == PriorKind::pd ? "pd" : "gg";
  j["sigma"] = p.sigma();
  if (p.kind() == PriorKind::pd)
    j["theta"] = p.theta();
  else
    j["tau"] = p.tau();
  return j;
}

SampleSummary load_validated(const std::string& path, bool force) {
  SampleSummary s = gibbsdp::read_frequency_csv(path);
  const gibbsdp::ValidationReport rep = gibbsdp::validate(s);
  if (!rep.pass && !force) {
    std::cerr << "error: '" << path << "' fails validation (residual k="
              << rep.residual_k << ", n=" << rep.residual_n
              << "); pass --force to analyze anyway\n";
    std::exit(kExitValidation);
  }
  return s;
}

void emit(const json& report, const std::string& out_path, const std::string& format) {
  std::string text;
  if (format == "csv") {
    if (!report.contains("estimates"))
      throw UsageError("--format csv is only available for estimate tables");
    std::string csv = "l,value,lo,hi,method\n";
    for (const auto& e : report["estimates"]) {
      csv += e["l"].dump();
      csv += ',' + e["value"].dump();
      csv += ',' + (e.contains("lo") ? e["lo"].dump() : std::string());
      csv += ',' + (e.contains("hi") ? e["hi"].dump() : std::string());
      csv += ',' + e["method"].get<std::string>();
      csv += '\n';
    }
    text = csv;
  } else {
    text = report.dump(2) + "\n";
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << text;
  }
}

const char* method_name(gibbsdp::Method m) {
  switch (m) {
    case gibbsdp::Method::bnp: return "bnp";
    case gibbsdp::Method::good_turing: return "good_turing";
    case gibbsdp::Method::smoothed_good_turing: return "smoothed_good_turing";
    case gibbsdp::Method::first_order: return "first_order";
    case gibbsdp::Method::second_order: return "second_order";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// subcommand drivers
// ---------------------------------------------------------------------------

int run_fit(const std::string& path, const PriorFlags& pf, bool force,
            const std::string& out, const std::string& format) {
  const SampleSummary s = load_validated(path, force);
  const gibbsdp::FitResult fr = gibbsdp::fit(s, kind_of(pf.kind));
  json rep;
  rep["dataset"] = path;
  rep["n"] = s.n;
  rep["k"] = s.k;
  rep["prior"] = prior_json(fr.prior);
  rep["log_likelihood"] = fr.log_likelihood;
  rep["converged"] = fr.converged;
  rep["evaluations"] = fr.evaluations;
  rep["multi_start_spread"] = fr.multi_start_spread;
  emit(rep, out, format);
  return 0;
}

int run_estimate(const std::string& path, const PriorFlags& pf, const LRange& lr,
                 bool force, const std::string& out, const std::string& format) {
  const SampleSummary s = load_validated(path, force);
  json fit_detail;
  const PriorSpec prior = resolve_prior(s, pf, &fit_detail);
  json rep;
  rep["dataset"] = path;
  rep["prior"] = prior_json(prior);
  if (!fit_detail.is_null()) rep["fit"] = fit_detail;
  rep["estimates"] = json::array();
  for (long l = lr.lo; l <= std::min(lr.hi, s.n); ++l) {
    const auto e = gibbsdp::bnp_discovery(s, prior, l);
    json je;
    je["l"] = l;
    je["value"] = e.value;
    je["method"] = method_name(e.method);
    rep["estimates"].push_back(je);
  }
  rep["metrics"] = json::object();
  emit(rep, out, format);
  return 0;
}

int run_ci(const std::string& path, const PriorFlags& pf, const LRange& lr, double level,
           long draws, std::uint64_t seed, bool force, const std::string& out,
           const std::string& format) {
  if (!(level > 0.0 && level < 1.0)) throw UsageError("--level must be in (0,1)");
  if (draws < 1) throw UsageError("--draws must be positive");
  const SampleSummary s = load_validated(path, force);
  json fit_detail;
  const PriorSpec prior = resolve_prior(s, pf, &fit_detail);
  json rep;
  rep["dataset"] = path;
  rep["prior"] = prior_json(prior);
  if (!fit_detail.is_null()) rep["fit"] = fit_detail;
  rep["level"] = level;
  rep["draws"] = draws;
  rep["seed"] = seed;
  rep["estimates"] = json::array();
  for (long l = lr.lo; l <= std::min(lr.hi, s.n); ++l) {
    const auto e = gibbsdp::bnp_discovery(s, prior, l);
    json je;
    je["l"] = l;
    je["value"] = e.value;
    if (l >= 1 && s.count(l) == 0) {
      // no species at this frequency: degenerate law, interval (0, 0)
      je["lo"] = 0.0;
      je["hi"] = 0.0;
    } else {
      const gibbsdp::PosteriorLaw law = gibbsdp::posterior_law(s, prior, l);
      gibbsdp::RngStream rng(seed, std::uint64_t(l));
      const auto [lo, hi] =
          gibbsdp::credible_interval(law, level, std::size_t(draws), rng);
      je["lo"] = lo;
      je["hi"] = hi;
    }
    je["method"] = method_name(e.method);
    rep["estimates"].push_back(je);
  }
  rep["metrics"] = json::object();
  emit(rep, out, format);
  return 0;
}

int run_approx(const std::string& path, const PriorFlags& pf, const LRange& lr, int order,
               bool force, const std::string& out, const std::string& format) {
  const SampleSummary s = load_validated(path, force);
  json fit_detail;
  const PriorSpec prior = resolve_prior(s, pf, &fit_detail);
  json rep;
  rep["dataset"] = path;
  rep["prior"] = prior_json(prior);
  if (!fit_detail.is_null()) rep["fit"] = fit_detail;
  rep["order"] = order;
  rep["estimates"] = json::array();
  for (long l = lr.lo; l <= std::min(lr.hi, s.n); ++l) {
    const auto e = order == 1 ? gibbsdp::first_order(s, prior.sigma(), l)
                              : gibbsdp::second_order(s, prior, l);
    json je;
    je["l"] = l;
    je["value"] = e.value;
    je["method"] = method_name(e.method);
    rep["estimates"].push_back(je);
  }
  rep["metrics"] = json::object();
  emit(rep, out, format);
  return 0;
}

int run_validate(const std::string& path, const std::string& out,
                 const std::string& format) {
  const SampleSummary s = gibbsdp::read_frequency_csv(path);
  const gibbsdp::ValidationReport rep = gibbsdp::validate(s);
  long sum_m = 0, sum_lm = 0;
  for (const auto& [l, ml] : s.m) {
    sum_m += ml;
    sum_lm += l * ml;
  }
  json j;
  j["dataset"] = path;
  j["pass"] = rep.pass;
  j["n"] = s.n;
  j["k"] = s.k;
  j["sum_m"] = sum_m;
  j["sum_l_m"] = sum_lm;
  j["residual_k"] = rep.residual_k;
  j["residual_n"] = rep.residual_n;
  emit(j, out, format);
  return rep.pass ? 0 : kExitValidation;
}

struct ReplicateOutcome {
  long k = 0;
  double sse_exact = 0.0, sse_first = 0.0, sse_second = 0.0, sse_gt = 0.0;
  double r12 = std::numeric_limits<double>::quiet_NaN();
  double sigma = 0.0, loc = 0.0;
};

int run_simulate(const std::string& dist, double s_param, long n, long replicates,
                 long groups, std::uint64_t seed, const std::string& prior_kind,
                 const std::string& out, const std::string& format) {
  if (dist != "zeta") throw UsageError("--dist only supports 'zeta'");
  if (n < 2 || replicates < 1 || groups < 1)
    throw UsageError("--n >= 2, --replicates >= 1, --groups >= 1 required");
  const PriorKind kind = kind_of(prior_kind);
  const gibbsdp::ZetaPopulation pop(s_param);

  std::vector<ReplicateOutcome> outs(replicates);
  std::vector<SampleSummary> summaries(replicates);
  gibbsdp::parallel_for(std::size_t(replicates), [&](std::size_t rep) {
    gibbsdp::RngStream rng(seed, rep);
    const gibbsdp::RawSample raw = gibbsdp::sample_zeta(pop, std::size_t(n), rng);
    const SampleSummary sum = gibbsdp::summarize(raw);
    const std::map<long, double> truth = gibbsdp::true_discovery_all(raw, pop);
    const gibbsdp::FitResult fr = gibbsdp::fit(sum, kind);
    const PriorSpec& prior = fr.prior;

    std::map<long, double> exact, first, second, gt;
    const gibbsdp::WeightRatioPair w = gibbsdp::weight_ratios(sum.n, sum.k, prior);
    exact[0] = w.g0;
    first[0] = gibbsdp::first_order(sum, prior.sigma(), 0).value;
    second[0] = gibbsdp::second_order(sum, prior, 0).value;
    gt[0] = gibbsdp::good_turing(sum, 0).value;
    for (const auto& [l, ml] : sum.m) {
      if (ml == 0) continue;
      exact[l] = std::min(1.0, (l - prior.sigma()) * double(ml) * w.g1);
      first[l] = gibbsdp::first_order(sum, prior.sigma(), l).value;
      second[l] = gibbsdp::second_order(sum, prior, l).value;
      if (l >= 1 && sum.count(l + 1) > 0 && l + 1 <= sum.n)
        gt[l] = gibbsdp::good_turing(sum, l).value;
    }

    ReplicateOutcome& o = outs[rep];
    o.k = sum.k;
    o.sse_exact = gibbsdp::sse(exact, truth);
    o.sse_first = gibbsdp::sse(first, truth);
    o.sse_second = gibbsdp::sse(second, truth);
    o.sse_gt = gibbsdp::sse(gt, truth);
    try {
      o.r12 = gibbsdp::approx_ratio(exact, first, second);
    } catch (const std::domain_error&) {
      // identical approximations; leave NaN, excluded from the mean
    }
    o.sigma = prior.sigma();
    o.loc = kind == PriorKind::pd ? prior.theta() : prior.tau();
    summaries[rep] = sum;
  });

  const std::vector<std::size_t> group_of = gibbsdp::group_by_k(summaries, groups);

  json rep;
  rep["dist"] = dist;
  rep["s"] = s_param;
  rep["n"] = n;
  rep["replicates"] = replicates;
  rep["groups"] = groups;
  rep["prior_kind"] = prior_kind;
  rep["seed"] = seed;

  auto mean_of = [&](auto getter, const std::vector<std::size_t>& members) {
    double acc = 0.0;
    long cnt = 0;
    for (std::size_t i : members) {
      const double v = getter(outs[i]);
      if (std::isnan(v)) continue;
      acc += v;
      ++cnt;
    }
    return cnt > 0 ? acc / cnt : std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<std::size_t> everyone(replicates);
  for (long i = 0; i < replicates; ++i) everyone[i] = std::size_t(i);

  json metrics;
  metrics["mean_sse_exact"] = mean_of([](const ReplicateOutcome& o) { return o.sse_exact; }, everyone);
  metrics["mean_sse_first"] = mean_of([](const ReplicateOutcome& o) { return o.sse_first; }, everyone);
  metrics["mean_sse_second"] = mean_of([](const ReplicateOutcome& o) { return o.sse_second; }, everyone);
  metrics["mean_sse_good_turing"] = mean_of([](const ReplicateOutcome& o) { return o.sse_gt; }, everyone);
  metrics["mean_ratio_r12"] = mean_of([](const ReplicateOutcome& o) { return o.r12; }, everyone);
  long adv_exact = 0, adv_first = 0, adv_second = 0;
  for (const auto& o : outs) {
    if (10.0 * o.sse_exact <= o.sse_gt) ++adv_exact;
    if (10.0 * o.sse_first <= o.sse_gt) ++adv_first;
    if (10.0 * o.sse_second <= o.sse_gt) ++adv_second;
  }
  metrics["frac_exact_10x_better_than_gt"] = double(adv_exact) / double(replicates);
  metrics["frac_first_10x_better_than_gt"] = double(adv_first) / double(replicates);
  metrics["frac_second_10x_better_than_gt"] = double(adv_second) / double(replicates);
  rep["metrics"] = metrics;

  rep["group_summaries"] = json::array();
  for (long g = 0; g < groups; ++g) {
    std::vector<std::size_t> members;
    for (long i = 0; i < replicates; ++i)
      if (group_of[i] == std::size_t(g)) members.push_back(std::size_t(i));
    if (members.empty()) continue;
    long kmin = outs[members.front()].k, kmax = kmin;
    for (std::size_t i : members) {
      kmin = std::min(kmin, outs[i].k);
      kmax = std::max(kmax, outs[i].k);
    }
    json jg;
    jg["group"] = g;
    jg["count"] = members.size();
    jg["k_min"] = kmin;
    jg["k_max"] = kmax;
    jg["mean_sse_exact"] = mean_of([](const ReplicateOutcome& o) { return o.sse_exact; }, members);
    jg["mean_sse_first"] = mean_of([](const ReplicateOutcome& o) { return o.sse_first; }, members);
    jg["mean_sse_second"] = mean_of([](const ReplicateOutcome& o) { return o.sse_second; }, members);
    jg["mean_sse_good_turing"] = mean_of([](const ReplicateOutcome& o) { return o.sse_gt; }, members);
    jg["mean_ratio_r12"] = mean_of([](const ReplicateOutcome& o) { return o.r12; }, members);
    rep["group_summaries"].push_back(jg);
  }
  emit(rep, out, format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discovery-probability estimation under Gibbs-type priors"};
  app.require_subcommand(1);

  std::string data_path, out_path, format = "json", l_text = "0";
  bool force = false;
  PriorFlags pf;
  double level = 0.95;
  long draws = 5000;
  std::uint64_t seed = 0;
  int order = 1;
  std::string dist = "zeta", sim_prior = "pd";
  double s_param = 1.1;
  long sim_n = 1000, replicates = 100, groups = 5;

  auto add_common = [&](CLI::App* cmd, bool with_data = true) {
    if (with_data) cmd->add_option("data", data_path, "frequency-count CSV")->required();
    cmd->add_option("--out", out_path, "write the report here instead of stdout");
    cmd->add_option("--format", format, "json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--force", force, "analyze even if validation fails");
  };

  auto* c_fit = app.add_subcommand("fit", "empirical-Bayes parameter estimates");
  add_common(c_fit);
  c_fit->add_option("--prior", pf.kind, "prior family: pd or gg")
      ->check(CLI::IsMember({"pd", "gg"}))
      ->required();

  auto* c_est = app.add_subcommand("estimate", "point estimates of the l-discovery");
  add_common(c_est);
  add_prior_flags(c_est, pf);
  c_est->add_option("--l", l_text, "frequency or range a..b (default 0)");

  auto* c_ci = app.add_subcommand("ci", "estimates with credible intervals");
  add_common(c_ci);
  add_prior_flags(c_ci, pf);
  c_ci->add_option("--l", l_text, "frequency or range a..b (default 0)");
  c_ci->add_option("--level", level, "credible level (default 0.95)");
  c_ci->add_option("--draws", draws, "posterior draws for sampled laws (default 5000)");
  c_ci->add_option("--seed", seed, "RNG seed (required)")->required();

  auto* c_approx = app.add_subcommand("approx", "large-n approximations");
  add_common(c_approx);
  add_prior_flags(c_approx, pf);
  c_approx->add_option("--l", l_text, "frequency or range a..b (default 0)");
  c_approx->add_option("--order", order, "1 or 2 (default 1)")->check(CLI::Range(1, 2));

  auto* c_val = app.add_subcommand("validate", "check the counting identities");
  add_common(c_val);

  auto* c_sim = app.add_subcommand("simulate", "synthetic-population study");
  add_common(c_sim, /*with_data=*/false);
  c_sim->add_option("--dist", dist, "population family (zeta)");
  c_sim->add_option("--s", s_param, "zeta exponent, > 1")->required();
  c_sim->add_option("--n", sim_n, "observations per replicate")->required();
  c_sim->add_option("--replicates", replicates, "number of replicates")->required();
  c_sim->add_option("--groups", groups, "quantile groups by k (default 5)");
  c_sim->add_option("--prior", sim_prior, "prior family to fit (default pd)")
      ->check(CLI::IsMember({"pd", "gg"}));
  c_sim->add_option("--seed", seed, "RNG seed (required)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFlags;
  }

  try {
    if (c_fit->parsed()) return run_fit(data_path, pf, force, out_path, format);
    if (c_est->parsed())
      return run_estimate(data_path, pf, parse_l_range(l_text), force, out_path, format);
    if (c_ci->parsed())
      return run_ci(data_path, pf, parse_l_range(l_text), level, draws, seed, force,
                    out_path, format);
    if (c_approx->parsed())
      return run_approx(data_path, pf, parse_l_range(l_text), order, force, out_path,
                        format);
    if (c_val->parsed()) return run_validate(data_path, out_path, format);
    if (c_sim->parsed())
      return run_simulate(dist, s_param, sim_n, replicates, groups, seed, sim_prior,
                          out_path, format);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFlags;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFlags;
  } catch (const gibbsdp::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
