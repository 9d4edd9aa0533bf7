#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfqbc/optics.hpp"
#include "cfqbc/random.hpp"
#include "cfqbc/rational.hpp"
#include "cfqbc/rounds.hpp"

namespace cfqbc::analysis {

using optics::ExactConfig;
using optics::SenderMode;
using optics::SplitterConfig;

/// Raised when a threshold cannot be met by any finite parameter, or a ratio
/// is undefined (P_A = 1).
class NoFiniteParameter : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Per-slot probabilities

/// Probability that Alice can tell Bob learned her bit: both photons ended up
/// at the same site. Reduced form of the two-photon case sums:
///   P_A = t_A t_B0 r_B0 (r_B1 + t_B0^2 t_B1) + 1/2 t_B1 (1 - t_B0^2)
template <class T>
T p_a_closed(const SplitterConfig<T>& c) {
  c.validate();
  const T& ta = c.t_a;
  const T& t0 = c.t_b0;
  const T& t1 = c.t_b1;
  return ta * t0 * c.r_b0() * (c.r_b1() + t0 * t0 * t1) + half<T>() * t1 * (T(1) - t0 * t0);
}

/// P_B - P_A = 1/2 t_B1 r_B1 (1 + t_B0^2 - 2 t_A t_B0^3 r_B0): the slots where
/// one photon is at DB1 and the other at Alice's site.
template <class T>
T p_b_minus_p_a(const SplitterConfig<T>& c) {
  c.validate();
  const T& t0 = c.t_b0;
  return half<T>() * c.t_b1 * c.r_b1() * (T(1) + t0 * t0 - T(2) * c.t_a * t0 * t0 * t0 * c.r_b0());
}

/// Probability that Bob learns Alice's bit with certainty in one slot.
template <class T>
T p_b_closed(const SplitterConfig<T>& c) {
  return p_a_closed(c) + p_b_minus_p_a(c);
}

/// The published expanded polynomial for P_A, term for term. It agrees with
/// the case sums only on the plane t_B1 = 1/2 (and a few edges); kept for
/// comparison.
template <class T>
T p_a_printed(const SplitterConfig<T>& c) {
  c.validate();
  const T a = c.t_a, x = c.t_b0, y = c.t_b1;
  const T x2 = x * x, x3 = x2 * x, x4 = x3 * x, y2 = y * y, y3 = y2 * y;
  const T s = a * x + 2 * a * x * y - 5 * a * x * y2 + 2 * a * x * y3 - a * x2 - 2 * a * x2 * y + 5 * a * x2 * y2 -
              2 * a * x2 * y3 + 3 * a * x3 * y - 3 * a * x3 * y2 + 2 * a * x3 * y3 - 3 * a * x4 * y +
              3 * a * x4 * y2 - 2 * a * x4 * y3 - x2 * y + y;
  return half<T>() * s;
}

/// The published expanded polynomial for P_B, term for term.
template <class T>
T p_b_printed(const SplitterConfig<T>& c) {
  c.validate();
  const T a = c.t_a, x = c.t_b0, y = c.t_b1;
  const T x2 = x * x, x3 = x2 * x, x4 = x3 * x, y2 = y * y, y3 = y2 * y;
  const T s = a * x + 2 * a * x * y - 5 * a * x * y2 + 2 * a * x * y3 - a * x2 - 2 * a * x2 * y + 5 * a * x2 * y2 -
              2 * a * x2 * y3 + a * x3 * y - a * x3 * y2 + 2 * a * x3 * y3 - a * x4 * y + a * x4 * y2 -
              2 * a * x4 * y3 - x2 * y2 + 2 * y - y2;
  return half<T>() * s;
}

/// The published malicious-Bob surface (t_A = 1/2), term for term.
template <class T>
T p_b_printed_bob_surface(const T& t_b0, const T& t_b1) {
  const T x = t_b0, y = t_b1;
  const T x2 = x * x, x3 = x2 * x, x4 = x3 * x, y2 = y * y, y3 = y2 * y;
  const T h = half<T>();
  const T s = x * h + x * y - 5 * x * y2 * h + x * y3 - x2 * h - x2 * y + 3 * x2 * y2 * h - x2 * y3 + x3 * y * h -
              x3 * y2 * h + x3 * y3 - x4 * y * h + x4 * y2 * h - x4 * y3 + 2 * y - y2;
  return h * s;
}

/// Enumeration oracle for P_A: total probability of the joint atoms that
/// Alice classifies as BobKnows.
template <class T>
T p_a_enum(const SplitterConfig<T>& c, SenderMode alice_mode = SenderMode::SinglePhoton,
           SenderMode bob_mode = SenderMode::SinglePhoton) {
  T sum(0);
  for (const auto& atom : rounds::joint_distribution(c, alice_mode, bob_mode))
    if (rounds::classify_alice(atom.outcome) == rounds::AliceKnowledge::BobKnows) sum += atom.probability;
  return sum;
}

/// Enumeration oracle for P_B: total probability of the joint atoms on which
/// Bob's inference is certain.
template <class T>
T p_b_enum(const SplitterConfig<T>& c, SenderMode alice_mode = SenderMode::SinglePhoton,
           SenderMode bob_mode = SenderMode::SinglePhoton) {
  T sum(0);
  for (const auto& atom : rounds::joint_distribution(c, alice_mode, bob_mode))
    if (rounds::classify_bob(atom.outcome, 0).known()) sum += atom.probability;
  return sum;
}

/// Per-sequence success probability of flipping one revealed bit:
/// (1 - P_B) / (1 - P_A).
template <class T>
T p_alter(const T& p_a, const T& p_b) {
  if (p_a == T(1)) throw NoFiniteParameter("P(Aalter) undefined: P_A = 1");
  return (T(1) - p_b) / (T(1) - p_a);
}

template <class T>
T p_alter(const SplitterConfig<T>& c) {
  return p_alter(p_a_closed(c), p_b_closed(c));
}

/// Necessary condition for binding and concealing: 0 <= P_A < P_B < 1.
template <class T>
bool qbc_channel_check(const T& p_a, const T& p_b) {
  return T(0) <= p_a && p_a < p_b && p_b < T(1);
}

// ---------------------------------------------------------------------------
// Thresholds

struct SecurityParams {
  int m = 1;  // number of sequences
  int n = 1;  // sequence length

  friend bool operator==(const SecurityParams&, const SecurityParams&) = default;
};

struct SecurityTargets {
  double alpha = 1e-6;  // binding
  double beta = 1e-6;   // concealing
};

enum class LogBase { Natural, Two };

/// log(alpha) / log(p_alter), the real-valued bound m must exceed.
double binding_bound(double alpha, double p_alter, LogBase base = LogBase::Natural);

/// Smallest m with p_alter^m < alpha.
int binding_min_m(double alpha, double p_alter, LogBase base = LogBase::Natural);

struct ConcealingTerms {
  double epsilon;        // P(Bob ascertains the commit bit) = 1 - (1 - P_B^n)^m
  double p_bob_correct;  // 1/2 + epsilon/2
  double advantage;      // epsilon/2
};

ConcealingTerms concealing_terms(int m, int n, double p_b);
double concealing_advantage(int m, int n, double p_b);

/// log[1 - (1 - 2 beta)^(1/m)] / log(P_B), the real-valued bound n must exceed.
double concealing_bound(double beta, int m, double p_b, LogBase base = LogBase::Natural);

/// Smallest n with concealing_advantage(m, n, p_b) < beta.
int concealing_min_n(double beta, int m, double p_b, LogBase base = LogBase::Natural);

// ---------------------------------------------------------------------------
// Adversary optima

/// P(Aalter) against honest splitters at Bob: (42 - 9 t_A) / (52 - 10 t_A).
template <class T>
T malicious_alice_p_alter(const T& t_a) {
  return (T(42) - T(9) * t_a) / (T(52) - T(10) * t_a);
}

struct MaliciousAliceOptimum {
  Rational t_a;
  Rational p_alter;
  Rational p_a;
  Rational p_b;
  /// Numerator of d P(Aalter)/d t_A; it does not depend on t_A because both
  /// probabilities are affine in t_A.
  Rational derivative_numerator;
  Rational grid_argmax;
  Rational grid_max;
};

/// Best BS_A for a cheating Alice when Bob's splitters are balanced.
MaliciousAliceOptimum optimize_malicious_alice(int grid_points = 101);

struct SurfacePoint {
  double t_b0;
  double t_b1;
  double p_b;
  double p_b_printed;
};

struct MaliciousBobOptimum {
  int resolution;
  double t_b0;
  double t_b1;
  double p_b;
  Rational exact_t_b0;
  Rational exact_t_b1;
  Rational exact_p_b;
  std::vector<SurfacePoint> surface;  // row-major in t_B0, then t_B1
};

/// Grid search of P_B over (t_B0, t_B1) with t_A = 1/2. `resolution` points
/// per axis, at least 101.
MaliciousBobOptimum optimize_malicious_bob(int resolution = 201);

// ---------------------------------------------------------------------------
// Scenario quantities

template <class T>
struct SecurityQuantities {
  T p_a;
  T p_b;
  std::optional<T> p_alter;  // empty when P_A = 1
  SecurityParams params;
  double epsilon;
  double bob_advantage;
};

template <class T>
SecurityQuantities<T> make_quantities(T p_a, T p_b, SecurityParams params) {
  SecurityQuantities<T> q{std::move(p_a), std::move(p_b), std::nullopt, params, 0.0, 0.0};
  if (q.p_a != T(1)) q.p_alter = p_alter(q.p_a, q.p_b);
  const auto terms = concealing_terms(params.m, params.n, to_double(q.p_b));
  q.epsilon = terms.epsilon;
  q.bob_advantage = terms.advantage;
  return q;
}

enum class NoPhotonScenario { BobNone, AliceNone };

std::string_view to_string(NoPhotonScenario s);

/// Bob learns Alice's bit whenever her photon reaches his site:
/// t_A r_B0 t_B0.
template <class T>
T p_b_bob_none(const SplitterConfig<T>& c) {
  return c.t_a * c.r_b0() * c.t_b0;
}

/// Bob is certain unless his photon lands alone on DB0:
/// 1/2 (P_D0 + P_D1 + P_D2 + P_DB1) of his equal-bits column.
template <class T>
T p_b_alice_none(const SplitterConfig<T>& c) {
  const auto p = optics::no_photon_distribution(optics::PhotonSource::Alice, true, c);
  using optics::Detector;
  using optics::index;
  return half<T>() * (p[index(Detector::D0)] + p[index(Detector::D1)] + p[index(Detector::D2)] +
                      p[index(Detector::DB1)]);
}

/// Alice knows Bob is certain exactly when his photon reaches her detectors.
template <class T>
T p_a_alice_none(const SplitterConfig<T>& c) {
  const auto p = optics::no_photon_distribution(optics::PhotonSource::Alice, true, c);
  using optics::Detector;
  using optics::index;
  return half<T>() * (p[index(Detector::D0)] + p[index(Detector::D1)] + p[index(Detector::D2)]);
}

/// Quantities when one party sends no photon and the other is honest. The
/// honest party's splitters must be balanced. For BobNone, P_A follows the same
/// count rule as always and equals P_B (Alice's photon is at Bob's site exactly
/// when her detectors stay dark).
SecurityQuantities<Rational> no_photon_quantities(NoPhotonScenario scenario, const ExactConfig& config,
                                                  SecurityParams params = {65, 25});

// ---------------------------------------------------------------------------
// Oracle sweep

/// Random splitter triple with coordinates p/q, q uniform in [1, max_denominator].
ExactConfig sample_rational_config(SplitMix64& rng, int max_denominator = 100);

struct OracleDeviation {
  Rational max_p_a{0};
  Rational max_p_b{0};
  std::uint64_t mismatches = 0;
  std::optional<ExactConfig> worst;  // config with the largest deviation
};

struct OracleReport {
  int samples = 0;
  std::uint64_t seed = 0;
  OracleDeviation closed;   // closed forms vs enumeration
  OracleDeviation printed;  // published expanded polynomials vs enumeration
  Rational honest_p_a;
  Rational honest_p_b;

  bool pass() const { return closed.mismatches == 0; }
};

/// Compares the closed forms (and, for reference, the published polynomials)
/// with enumeration on `samples` configs; the first is the balanced one.
OracleReport verify_closed_forms(int samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Planner

struct ScenarioCheck {
  std::string name;
  std::string check;  // "binding" or "concealing"
  Rational p_a;
  Rational p_b;
  std::optional<Rational> p_alter;
  std::optional<int> required_m;  // binding scenarios
  std::optional<int> required_n;  // concealing scenarios, at the planned m
  bool satisfied;
};

struct Plan {
  SecurityTargets targets;
  SecurityParams params;
  Rational worst_p_alter;  // drives m
  Rational worst_p_b;      // drives n
  std::vector<ScenarioCheck> scenarios;
};

/// Picks m against the best cheating Alice (P(Aalter) = 21/26) and n against
/// the best cheating Bob (P_B = 1/2) at that m, then confirms every analyzed
/// attack (balanced, optimal splitters, no-photon) meets both thresholds.
Plan plan_parameters(const SecurityTargets& targets);

}  // namespace cfqbc::analysis
