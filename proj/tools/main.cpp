#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pointlab/dist.hpp"
#include "pointlab/gas.hpp"
#include "pointlab/io.hpp"
#include "pointlab/process.hpp"
#include "pointlab/simplex.hpp"
#include "pointlab/stats.hpp"

namespace {

using nlohmann::json;
using namespace pointlab;

// exit codes: 0 success, 2 violated numeric precondition, 3 a verify-style
// check failed its significance threshold; CLI11 reports its own (>= 100)
// codes for malformed flags
constexpr int kExitBadInput = 2;
constexpr int kExitCheckFailed = 3;

GenerationMethod parse_method(const std::string& name) {
  if (name == "interarrival") return GenerationMethod::interarrival;
  if (name == "conditional-uniform") return GenerationMethod::conditional_uniform;
  throw std::invalid_argument("method must be 'interarrival' or 'conditional-uniform'");
}

Region region_from_flat(const std::vector<double>& v) {
  if (v.size() != 6)
    throw std::invalid_argument("region needs 6 values: x0,y0,z0,x1,y1,z1");
  return Region({v[0], v[1], v[2]}, {v[3], v[4], v[5]});
}

Box box_from_flat(const std::vector<double>& v) {
  if (v.size() != 3) throw std::invalid_argument("box needs 3 values: lx,ly,lz");
  return Box(v[0], v[1], v[2]);
}

void maybe_write_report(const std::string& out, json report) {
  if (!out.empty()) write_json_report(out, std::move(report));
}

struct SimulateOpts {
  double rate = 0.0;
  double horizon = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  std::string method = "interarrival";
  std::string out;
};

int run_simulate(const SimulateOpts& o) {
  const ProcessConfig config(o.rate, o.horizon, o.seed, parse_method(o.method));
  const CountHistogram hist = replicate_counts(config, o.replicas);
  write_histogram_csv(o.out, hist);
  std::cout << "simulate: " << hist.total << " replicas of rate " << o.rate << " over (0, "
            << o.horizon << "]";
  if (hist.total >= 2)
    std::cout << ", mean count " << empirical_moments(hist).mean;
  std::cout << " -> " << o.out << "\n";
  return 0;
}

struct VerifyCommonOpts {
  double rate = 0.0;
  double horizon = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  std::string method = "interarrival";
  double alpha = 0.001;
  std::string out;
};

json verify_params(const VerifyCommonOpts& o) {
  return {{"rate", o.rate},         {"horizon", o.horizon}, {"replicas", o.replicas},
          {"seed", o.seed},         {"method", o.method},   {"significance", o.alpha}};
}

int finish_verify(const std::string& check, bool pass, json report, const std::string& out) {
  report["check"] = check;
  report["pass"] = pass;
  maybe_write_report(out, std::move(report));
  std::cout << "verify " << check << ": " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : kExitCheckFailed;
}

int run_verify_poisson(const VerifyCommonOpts& o) {
  const ProcessConfig config(o.rate, o.horizon, o.seed, parse_method(o.method));
  const CountHistogram hist = replicate_counts(config, o.replicas);
  const Pmf expected = poisson_pmf_table(PoissonParams(o.rate * o.horizon), 1e-12);
  const GofResult gof = chi_square_gof(hist, expected);
  const bool pass = gof.p_value >= o.alpha;
  std::cout << "counts vs exact law: statistic " << gof.statistic << ", dof " << gof.dof
            << ", p " << gof.p_value << "\n";
  return finish_verify("poisson", pass,
                       {{"params", verify_params(o)}, {"result", gof_json(gof)}}, o.out);
}

struct VerifyUniformityOpts : VerifyCommonOpts {
  std::int64_t count = -1;  // default: round(rate * horizon)
  std::int64_t bins = 20;
};

int run_verify_uniformity(const VerifyUniformityOpts& o) {
  const ProcessConfig config(o.rate, o.horizon, o.seed, parse_method(o.method));
  const std::int64_t count =
      o.count >= 0 ? o.count : static_cast<std::int64_t>(std::llround(o.rate * o.horizon));
  const UniformityResult res = conditional_uniformity_check(config, count, o.replicas, o.bins);
  const bool pass = res.gof.p_value >= o.alpha;
  std::cout << "pooled " << res.pooled_events << " event times from " << res.matching_replicas
            << " replicas with count " << count << ": p " << res.gof.p_value << "\n";
  json report{{"params", verify_params(o)},
              {"given_count", count},
              {"bins", o.bins},
              {"pooled_events", res.pooled_events},
              {"matching_replicas", res.matching_replicas},
              {"result", gof_json(res.gof)}};
  return finish_verify("uniformity", pass, std::move(report), o.out);
}

struct VerifyRarityOpts : VerifyCommonOpts {
  std::vector<double> widths;
};

int run_verify_rarity(const VerifyRarityOpts& o) {
  const ProcessConfig config(o.rate, o.horizon, o.seed, parse_method(o.method));
  const auto points = axiom_rarity_check(config, o.widths, o.replicas);

  bool all_in_band = true;
  bool decreasing = true;
  json jpoints = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const RarityPoint& p = points[i];
    const double ref = rarity_reference_ratio(o.rate, p.width);
    const double u = o.rate * p.width;
    const double p_single = u * std::exp(-u);
    // expected bin counts under the exact law anchor the sampling band
    const double exp_single = p_single * static_cast<double>(p.bins_total);
    const double exp_multi = ref * exp_single;
    const double band =
        3.0 * ref * std::sqrt(1.0 / exp_multi + 1.0 / exp_single);
    const bool in_band = p.defined && std::fabs(p.ratio - ref) <= band;
    all_in_band = all_in_band && in_band;
    if (i > 0 && (!p.defined || !points[i - 1].defined || !(p.ratio < points[i - 1].ratio)))
      decreasing = false;
    std::cout << "width " << p.width << ": ratio "
              << (p.defined ? std::to_string(p.ratio) : "undefined") << ", exact " << ref
              << (in_band ? "" : "  [outside band]") << "\n";
    jpoints.push_back({{"width", p.width},
                       {"ratio", p.defined ? json(p.ratio) : json()},
                       {"reference", ref},
                       {"band", band},
                       {"within_band", in_band}});
  }
  const bool pass = all_in_band && (points.size() < 2 || decreasing);
  json report{{"params", verify_params(o)},
              {"points", std::move(jpoints)},
              {"decreasing", decreasing}};
  return finish_verify("rarity", pass, std::move(report), o.out);
}

struct VerifyIndependenceOpts : VerifyCommonOpts {
  std::vector<double> interval_a;
  std::vector<double> interval_b;
};

int run_verify_independence(const VerifyIndependenceOpts& o) {
  if (o.interval_a.size() != 2 || o.interval_b.size() != 2)
    throw std::invalid_argument("each interval needs 2 values: lo,hi");
  const ProcessConfig config(o.rate, o.horizon, o.seed, parse_method(o.method));
  const Interval a{o.interval_a[0], o.interval_a[1]};
  const Interval b{o.interval_b[0], o.interval_b[1]};
  const CorrelationEstimate est = axiom_independence_check(config, a, b, o.replicas);
  const double bound = 4.0 / std::sqrt(static_cast<double>(o.replicas));
  const bool pass = est.defined && std::fabs(est.correlation) < bound;
  std::cout << "correlation " << (est.defined ? std::to_string(est.correlation) : "undefined")
            << " (null bound " << bound << ")\n";
  json report{{"params", verify_params(o)},
              {"correlation", est.defined ? json(est.correlation) : json()},
              {"std_error", est.std_error},
              {"bound", bound}};
  return finish_verify("independence", pass, std::move(report), o.out);
}

struct SimplexOpts {
  std::int64_t dim = 0;
  double extent = 0.0;
  std::uint64_t mc_samples = 0;
  std::uint64_t seed = 0;
  std::int64_t quad_steps = 10000;
  std::string out;
};

int run_simplex(const SimplexOpts& o) {
  json rows = json::array();
  std::cout << "dim        exact    recursive           mc       mc_se\n";
  for (std::int64_t x = 1; x <= o.dim; ++x) {
    const OrthantSpec spec(x, o.extent);
    const double exact = orthant_volume_exact(spec);
    const double recursive = orthant_volume_recursive(spec, o.quad_steps);
    const VolumeEstimate mc = orthant_volume_mc(spec, o.mc_samples, o.seed);
    std::printf("%3lld %12.8f %12.8f %12.8f %11.2e\n", static_cast<long long>(x), exact,
                recursive, mc.value, mc.std_error);
    rows.push_back({{"dim", x},
                    {"exact", exact},
                    {"recursive", recursive},
                    {"mc", mc.value},
                    {"mc_std_error", mc.std_error},
                    {"mc_samples", mc.samples}});
  }
  maybe_write_report(o.out, {{"extent", o.extent},
                             {"quad_steps", o.quad_steps},
                             {"seed", o.seed},
                             {"rows", std::move(rows)}});
  return 0;
}

struct LimitOpts {
  double mu = 0.0;
  std::vector<std::int64_t> n_values;
  std::string out;
};

int run_limit(const LimitOpts& o) {
  const auto sweep = poisson_limit_sweep(o.mu, o.n_values);
  json points = json::array();
  for (const LimitPoint& p : sweep) {
    std::cout << "n " << p.trials << ": tv " << p.tv << "\n";
    points.push_back({{"n", p.trials}, {"tv", p.tv}});
  }
  maybe_write_report(o.out, {{"mu", o.mu}, {"points", std::move(points)}});
  return 0;
}

struct GasBinomialOpts {
  std::int64_t particles = 0;
  std::vector<double> box;
  std::vector<double> region;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  double alpha = 0.001;
  std::string out;
  std::string out_hist;
};

int run_gas_binomial(const GasBinomialOpts& o) {
  const Box box = box_from_flat(o.box);
  const Region region = region_from_flat(o.region);
  const GasConfig config = GasConfig::fixed_count_config(o.particles, box, {}, o.seed);
  const auto res = conditional_binomial_experiment(config, region, o.replicas);
  const bool pass = res.gof.p_value >= o.alpha;
  std::cout << "region counts vs binomial(" << res.trials << ", " << res.p << "): p "
            << res.gof.p_value << "\n";
  if (!o.out_hist.empty()) write_histogram_csv(o.out_hist, res.histogram);
  json report{{"params",
               {{"particles", o.particles},
                {"replicas", o.replicas},
                {"seed", o.seed},
                {"significance", o.alpha},
                {"region_volume", region.volume()},
                {"box_volume", box.volume()}}},
              {"law", {{"trials", res.trials}, {"p", res.p}}},
              {"result", gof_json(res.gof)}};
  return finish_verify("gas-binomial", pass, std::move(report), o.out);
}

struct GasMultinomialOpts {
  std::int64_t particles = 0;
  std::vector<double> box;
  std::vector<std::vector<double>> regions;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  double alpha = 0.001;
  std::string out;
  std::string out_hist;
};

int run_gas_multinomial(const GasMultinomialOpts& o) {
  const Box box = box_from_flat(o.box);
  std::vector<Region> regions;
  regions.reserve(o.regions.size());
  for (const auto& r : o.regions) regions.push_back(region_from_flat(r));
  const GasConfig config = GasConfig::fixed_count_config(o.particles, box, regions, o.seed);
  const auto res = multinomial_partition_experiment(config, regions, o.replicas);
  const bool pass = res.gof.p_value >= o.alpha;
  std::cout << "joint counts over " << regions.size() << " regions: p " << res.gof.p_value
            << " (" << res.joint.frequencies.size() << " distinct outcomes)\n";
  if (!o.out_hist.empty()) write_joint_histogram_csv(o.out_hist, res.joint, regions.size());
  json report{{"params",
               {{"particles", o.particles},
                {"replicas", o.replicas},
                {"seed", o.seed},
                {"significance", o.alpha},
                {"regions", o.regions.size()}}},
              {"law", {{"trials", res.law.trials}, {"probs", res.law.probs}}},
              {"result", gof_json(res.gof)}};
  return finish_verify("gas-multinomial", pass, std::move(report), o.out);
}

struct GasSweepOpts {
  double density = 0.0;
  double subvolume = 0.0;
  std::vector<std::string> pairs;
  std::string out;
};

int run_gas_sweep(const GasSweepOpts& o) {
  std::vector<std::pair<std::int64_t, double>> pairs;
  for (const std::string& s : o.pairs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("pairs must look like N:V, e.g. 100:100");
    pairs.emplace_back(std::stoll(s.substr(0, colon)), std::stod(s.substr(colon + 1)));
  }
  const auto sweep = thermodynamic_limit_sweep(o.density, o.subvolume, pairs);
  json points = json::array();
  for (const ThermoPoint& p : sweep) {
    std::cout << "N " << p.particles << ", V " << p.volume << ": tv " << p.tv << "\n";
    points.push_back({{"particles", p.particles}, {"volume", p.volume}, {"tv", p.tv}});
  }
  maybe_write_report(
      o.out, {{"density", o.density}, {"subvolume", o.subvolume}, {"points", std::move(points)}});
  return 0;
}

void add_verify_common(CLI::App* cmd, VerifyCommonOpts& o) {
  cmd->add_option("--rate", o.rate, "event rate (> 0)")->required();
  cmd->add_option("--horizon", o.horizon, "observation window length (> 0)")->required();
  cmd->add_option("--replicas", o.replicas, "number of replicas")->required();
  cmd->add_option("--seed", o.seed, "random seed")->required();
  cmd->add_option("--method", o.method, "interarrival | conditional-uniform");
  cmd->add_option("--alpha", o.alpha, "significance threshold (default 0.001)");
  cmd->add_option("--out", o.out, "JSON report path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointlab: a homogeneous point-process laboratory"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "replica count histogram to CSV");
  simulate->add_option("--rate", sim.rate, "event rate (> 0)")->required();
  simulate->add_option("--horizon", sim.horizon, "observation window length (> 0)")->required();
  simulate->add_option("--replicas", sim.replicas, "number of replicas")->required();
  simulate->add_option("--seed", sim.seed, "random seed")->required();
  simulate->add_option("--method", sim.method, "interarrival | conditional-uniform");
  simulate->add_option("--out", sim.out, "histogram CSV path")->required();

  auto* verify = app.add_subcommand("verify", "statistical checks of the process laws");
  verify->require_subcommand(1);

  VerifyCommonOpts vpois;
  auto* verify_poisson = verify->add_subcommand("poisson", "count law vs the exact table");
  add_verify_common(verify_poisson, vpois);

  VerifyUniformityOpts vunif;
  auto* verify_uniformity =
      verify->add_subcommand("uniformity", "event times given a fixed total are uniform");
  add_verify_common(verify_uniformity, vunif);
  verify_uniformity->add_option("--count", vunif.count,
                                "condition on this total count (default round(rate*horizon))");
  verify_uniformity->add_option("--bins", vunif.bins, "number of equal bins (default 20)");

  VerifyRarityOpts vrar;
  auto* verify_rarity =
      verify->add_subcommand("rarity", "multiply-occupied bins vanish as bins shrink");
  add_verify_common(verify_rarity, vrar);
  verify_rarity->add_option("--widths", vrar.widths, "decreasing bin widths")
      ->required()
      ->delimiter(',');

  VerifyIndependenceOpts vind;
  auto* verify_independence =
      verify->add_subcommand("independence", "disjoint-interval counts are uncorrelated");
  add_verify_common(verify_independence, vind);
  verify_independence->add_option("--interval-a", vind.interval_a, "first interval lo,hi")
      ->required()
      ->delimiter(',');
  verify_independence->add_option("--interval-b", vind.interval_b, "second interval lo,hi")
      ->required()
      ->delimiter(',');

  SimplexOpts simplex;
  auto* simplex_cmd =
      app.add_subcommand("simplex", "ordered-region volume: exact vs quadrature vs MC");
  simplex_cmd->add_option("--dim", simplex.dim, "maximum dimension")->required();
  simplex_cmd->add_option("--extent", simplex.extent, "extent t (> 0)")->required();
  simplex_cmd->add_option("--mc-samples", simplex.mc_samples, "MC samples (>= 1000)")->required();
  simplex_cmd->add_option("--seed", simplex.seed, "random seed")->required();
  simplex_cmd->add_option("--quad-steps", simplex.quad_steps,
                          "trapezoid steps (default 10000)");
  simplex_cmd->add_option("--out", simplex.out, "JSON table path");

  LimitOpts limit;
  auto* limit_cmd = app.add_subcommand("limit", "exact binomial-to-Poisson distance sweep");
  limit_cmd->add_option("--mu", limit.mu, "expected count (> 0)")->required();
  limit_cmd->add_option("--n", limit.n_values, "trial counts, each >= ceil(mu)")
      ->required()
      ->delimiter(',');
  limit_cmd->add_option("--out", limit.out, "JSON report path");

  auto* gas = app.add_subcommand("gas", "particles in a box: sub-volume count laws");
  gas->require_subcommand(1);

  GasBinomialOpts gbin;
  auto* gas_binomial = gas->add_subcommand("binomial", "region counts of a closed reservoir");
  gas_binomial->add_option("--particles", gbin.particles, "particle count N")->required();
  gas_binomial->add_option("--box", gbin.box, "box extents lx,ly,lz")->required()->delimiter(',');
  gas_binomial->add_option("--region", gbin.region, "region x0,y0,z0,x1,y1,z1")
      ->required()
      ->delimiter(',');
  gas_binomial->add_option("--replicas", gbin.replicas, "number of replicas")->required();
  gas_binomial->add_option("--seed", gbin.seed, "random seed")->required();
  gas_binomial->add_option("--alpha", gbin.alpha, "significance threshold (default 0.001)");
  gas_binomial->add_option("--out", gbin.out, "JSON report path");
  gas_binomial->add_option("--out-hist", gbin.out_hist, "histogram CSV path");

  GasMultinomialOpts gmult;
  auto* gas_multinomial =
      gas->add_subcommand("multinomial", "joint region counts of a closed reservoir");
  gas_multinomial->add_option("--particles", gmult.particles, "particle count N")->required();
  gas_multinomial->add_option("--box", gmult.box, "box extents lx,ly,lz")
      ->required()
      ->delimiter(',');
  gas_multinomial
      ->add_option("--region", gmult.regions, "region x0,y0,z0,x1,y1,z1 (repeatable)")
      ->required()
      ->delimiter(',');
  gas_multinomial->add_option("--replicas", gmult.replicas, "number of replicas")->required();
  gas_multinomial->add_option("--seed", gmult.seed, "random seed")->required();
  gas_multinomial->add_option("--alpha", gmult.alpha, "significance threshold (default 0.001)");
  gas_multinomial->add_option("--out", gmult.out, "JSON report path");
  gas_multinomial->add_option("--out-hist", gmult.out_hist, "joint histogram CSV path");

  GasSweepOpts gsweep;
  auto* gas_sweep =
      gas->add_subcommand("sweep", "exact distance to the open-reservoir law (no sampling)");
  gas_sweep->add_option("--density", gsweep.density, "particles per unit volume")->required();
  gas_sweep->add_option("--subvolume", gsweep.subvolume, "probed sub-volume v")->required();
  gas_sweep->add_option("--pairs", gsweep.pairs, "N:V pairs with N/V = density")
      ->required()
      ->delimiter(',');
  gas_sweep->add_option("--out", gsweep.out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (verify_poisson->parsed()) return run_verify_poisson(vpois);
    if (verify_uniformity->parsed()) return run_verify_uniformity(vunif);
    if (verify_rarity->parsed()) return run_verify_rarity(vrar);
    if (verify_independence->parsed()) return run_verify_independence(vind);
    if (simplex_cmd->parsed()) return run_simplex(simplex);
    if (limit_cmd->parsed()) return run_limit(limit);
    if (gas_binomial->parsed()) return run_gas_binomial(gbin);
    if (gas_multinomial->parsed()) return run_gas_multinomial(gmult);
    if (gas_sweep->parsed()) return run_gas_sweep(gsweep);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
