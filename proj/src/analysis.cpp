#include "cfqbc/analysis.hpp"

#include <cmath>

namespace cfqbc::analysis {

namespace {

double log_in(double x, LogBase base) { return base == LogBase::Natural ? std::log(x) : std::log2(x); }

void require_unit_open(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(what) + " must lie in (0,1)");
}

}  // namespace

double binding_bound(double alpha, double p_alter, LogBase base) {
  require_unit_open(alpha, "alpha");
  if (p_alter >= 1.0) throw NoFiniteParameter("P(Aalter) >= 1: no finite m meets the binding threshold");
  require_unit_open(p_alter, "P(Aalter)");
  return log_in(alpha, base) / log_in(p_alter, base);
}

int binding_min_m(double alpha, double p_alter, LogBase base) {
  const double bound = binding_bound(alpha, p_alter, base);
  int m = std::max(1, static_cast<int>(std::floor(bound)) + 1);
  // The inequality is strict; settle rounding at integer bounds directly.
  while (std::pow(p_alter, m) >= alpha) ++m;
  while (m > 1 && std::pow(p_alter, m - 1) < alpha) --m;
  return m;
}

ConcealingTerms concealing_terms(int m, int n, double p_b) {
  if (m < 1 || n < 1) throw std::invalid_argument("m and n must be positive");
  if (!(p_b >= 0.0 && p_b <= 1.0)) throw std::invalid_argument("P_B must lie in [0,1]");
  const double per_sequence = std::pow(p_b, n);
  // 1 - (1 - x)^m without cancellation for tiny x.
  const double epsilon =
      per_sequence >= 1.0 ? 1.0 : -std::expm1(static_cast<double>(m) * std::log1p(-per_sequence));
  return {epsilon, 0.5 + epsilon / 2.0, epsilon / 2.0};
}

double concealing_advantage(int m, int n, double p_b) { return concealing_terms(m, n, p_b).advantage; }

double concealing_bound(double beta, int m, double p_b, LogBase base) {
  if (!(beta > 0.0 && beta < 0.5)) throw std::invalid_argument("beta must lie in (0,1/2)");
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (p_b <= 0.0 || p_b >= 1.0) throw NoFiniteParameter("P_B must lie strictly between 0 and 1");
  // 1 - (1 - 2 beta)^(1/m)
  const double x = -std::expm1(std::log1p(-2.0 * beta) / static_cast<double>(m));
  return log_in(x, base) / log_in(p_b, base);
}

int concealing_min_n(double beta, int m, double p_b, LogBase base) {
  const double bound = concealing_bound(beta, m, p_b, base);
  int n = std::max(1, static_cast<int>(std::floor(bound)) + 1);
  while (concealing_advantage(m, n, p_b) >= beta) ++n;
  while (n > 1 && concealing_advantage(m, n - 1, p_b) < beta) --n;
  return n;
}

MaliciousAliceOptimum optimize_malicious_alice(int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid needs at least two points");
  const Rational h = half<Rational>();
  auto at = [&](const Rational& t) { return ExactConfig::make(t, h, h); };

  // Both probabilities are affine in t_A.
  const Rational a0 = p_a_closed(at(0)), a1 = p_a_closed(at(1)) - a0;
  const Rational b0 = p_b_closed(at(0)), b1 = p_b_closed(at(1)) - b0;
  const Rational derivative = -b1 * (1 - a0) + a1 * (1 - b0);

  MaliciousAliceOptimum out;
  out.derivative_numerator = derivative;
  out.t_a = derivative < 0 ? Rational(0) : Rational(1);
  if (derivative == 0) out.t_a = 0;

  out.grid_max = -1;
  for (int k = 0; k < grid_points; ++k) {
    const Rational t(k, grid_points - 1);
    const Rational v = p_alter(at(t));
    if (v > out.grid_max) {
      out.grid_max = v;
      out.grid_argmax = t;
    }
  }

  const auto c = at(out.t_a);
  out.p_a = p_a_closed(c);
  out.p_b = p_b_closed(c);
  out.p_alter = p_alter(out.p_a, out.p_b);
  return out;
}

MaliciousBobOptimum optimize_malicious_bob(int resolution) {
  if (resolution < 101) throw std::invalid_argument("resolution must be at least 101");
  MaliciousBobOptimum out;
  out.resolution = resolution;
  out.surface.reserve(static_cast<std::size_t>(resolution) * resolution);
  out.p_b = -1.0;
  int best_i = 0, best_j = 0;
  const double step = 1.0 / (resolution - 1);
  for (int i = 0; i < resolution; ++i) {
    const double t0 = i == resolution - 1 ? 1.0 : i * step;
    for (int j = 0; j < resolution; ++j) {
      const double t1 = j == resolution - 1 ? 1.0 : j * step;
      const double v = p_b_closed(optics::RealConfig{0.5, t0, t1});
      out.surface.push_back({t0, t1, v, p_b_printed_bob_surface(t0, t1)});
      if (v > out.p_b) {
        out.p_b = v;
        best_i = i;
        best_j = j;
      }
    }
  }
  out.exact_t_b0 = Rational(best_i, resolution - 1);
  out.exact_t_b1 = Rational(best_j, resolution - 1);
  out.t_b0 = to_double(out.exact_t_b0);
  out.t_b1 = to_double(out.exact_t_b1);
  out.exact_p_b = p_b_closed(ExactConfig::make(half<Rational>(), out.exact_t_b0, out.exact_t_b1));
  return out;
}

std::string_view to_string(NoPhotonScenario s) { return s == NoPhotonScenario::BobNone ? "bob_none" : "alice_none"; }

SecurityQuantities<Rational> no_photon_quantities(NoPhotonScenario scenario, const ExactConfig& config,
                                                  SecurityParams params) {
  config.validate();
  const Rational h = half<Rational>();
  if (scenario == NoPhotonScenario::BobNone) {
    if (config.t_a != h) throw std::invalid_argument("honest Alice must use a balanced BS_A");
    const Rational p_b = p_b_bob_none(config);
    return make_quantities(p_b, p_b, params);
  }
  if (config.t_b0 != h || config.t_b1 != h)
    throw std::invalid_argument("honest Bob must use balanced BS_B0 and BS_B1");
  return make_quantities(p_a_alice_none(config), p_b_alice_none(config), params);
}

Plan plan_parameters(const SecurityTargets& targets) {
  if (!(targets.alpha > 0.0 && targets.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(targets.beta > 0.0 && targets.beta < 0.5)) throw std::invalid_argument("beta must lie in (0,1/2)");

  const Rational h = half<Rational>();
  const auto alice_best = optimize_malicious_alice();
  const auto bob_best = optimize_malicious_bob(101);

  Plan plan;
  plan.targets = targets;
  plan.worst_p_alter = alice_best.p_alter;
  plan.worst_p_b = bob_best.exact_p_b;
  plan.params.m = binding_min_m(targets.alpha, to_double(plan.worst_p_alter));
  plan.params.n = concealing_min_n(targets.beta, plan.params.m, to_double(plan.worst_p_b));

  auto binding = [&](std::string name, const Rational& p_a, const Rational& p_b) {
    ScenarioCheck s{std::move(name), "binding", p_a, p_b, std::nullopt, std::nullopt, std::nullopt, false};
    s.p_alter = p_alter(p_a, p_b);
    s.required_m = binding_min_m(targets.alpha, to_double(*s.p_alter));
    s.satisfied = std::pow(to_double(*s.p_alter), plan.params.m) < targets.alpha;
    plan.scenarios.push_back(std::move(s));
  };
  auto concealing = [&](std::string name, const Rational& p_a, const Rational& p_b) {
    ScenarioCheck s{std::move(name), "concealing", p_a, p_b, std::nullopt, std::nullopt, std::nullopt, false};
    if (p_a != 1) s.p_alter = p_alter(p_a, p_b);
    s.required_n = concealing_min_n(targets.beta, plan.params.m, to_double(p_b));
    s.satisfied = concealing_advantage(plan.params.m, plan.params.n, to_double(p_b)) < targets.beta;
    plan.scenarios.push_back(std::move(s));
  };

  const auto honest = ExactConfig::honest();
  const auto alice_splitter = ExactConfig::make(alice_best.t_a, h, h);
  const auto bob_splitters = ExactConfig::make(h, bob_best.exact_t_b0, bob_best.exact_t_b1);
  const auto alice_none = no_photon_quantities(NoPhotonScenario::AliceNone, honest, plan.params);
  const auto bob_none = no_photon_quantities(NoPhotonScenario::BobNone, honest, plan.params);

  binding("honest", p_a_closed(honest), p_b_closed(honest));
  binding("alice_optimal_splitter", p_a_closed(alice_splitter), p_b_closed(alice_splitter));
  binding("alice_no_photon", alice_none.p_a, alice_none.p_b);
  concealing("honest", p_a_closed(honest), p_b_closed(honest));
  concealing("bob_optimal_splitters", p_a_closed(bob_splitters), p_b_closed(bob_splitters));
  concealing("bob_no_photon", bob_none.p_a, bob_none.p_b);
  return plan;
}

ExactConfig sample_rational_config(SplitMix64& rng, int max_denominator) {
  if (max_denominator < 1) throw std::invalid_argument("max_denominator must be positive");
  auto coordinate = [&] {
    const auto q = static_cast<long long>(1 + rng.below(static_cast<std::uint64_t>(max_denominator)));
    const auto p = static_cast<long long>(rng.below(static_cast<std::uint64_t>(q) + 1));
    return Rational(p, q);
  };
  Rational t_a = coordinate();
  Rational t_b0 = coordinate();
  Rational t_b1 = coordinate();
  return ExactConfig::make(t_a, t_b0, t_b1);
}

namespace {

void record_deviation(OracleDeviation& d, const ExactConfig& c, const Rational& da, const Rational& db) {
  const Rational abs_a = da < 0 ? Rational(-da) : da;
  const Rational abs_b = db < 0 ? Rational(-db) : db;
  if (abs_a == 0 && abs_b == 0) return;
  ++d.mismatches;
  if (!d.worst || abs_a + abs_b > d.max_p_a + d.max_p_b) d.worst = c;
  if (abs_a > d.max_p_a) d.max_p_a = abs_a;
  if (abs_b > d.max_p_b) d.max_p_b = abs_b;
}

}  // namespace

OracleReport verify_closed_forms(int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  OracleReport r;
  r.samples = samples;
  r.seed = seed;
  auto rng = derive_stream(seed, {tag(StreamTag::ConfigSample)});
  for (int k = 0; k < samples; ++k) {
    const ExactConfig c = k == 0 ? ExactConfig::honest() : sample_rational_config(rng);
    const Rational pa = p_a_enum(c), pb = p_b_enum(c);
    if (k == 0) {
      r.honest_p_a = pa;
      r.honest_p_b = pb;
    }
    record_deviation(r.closed, c, p_a_closed(c) - pa, p_b_closed(c) - pb);
    record_deviation(r.printed, c, p_a_printed(c) - pa, p_b_printed(c) - pb);
  }
  return r;
}

}  // namespace cfqbc::analysis
