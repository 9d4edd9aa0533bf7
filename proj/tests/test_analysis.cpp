#include <doctest.h>

#include <cmath>

#include "cfqbc/analysis.hpp"
#include "support.hpp"

using namespace cfqbc;
using namespace cfqbc::analysis;
using optics::ExactConfig;

TEST_CASE("balanced splitters") {
  const auto c = ExactConfig::honest();
  CHECK(p_a_enum(c) == Rational(17, 64));
  CHECK(p_b_enum(c) == Rational(53, 128));
  CHECK(p_alter(c) == Rational(75, 94));
  CHECK(qbc_channel_check(p_a_enum(c), p_b_enum(c)));
}

TEST_CASE("closed forms agree with enumeration everywhere") {
  SplitMix64 rng(21);
  for (int k = 0; k < testing::kRandomConfigs; ++k) {
    const auto c = testing::random_config(rng);
    REQUIRE(p_a_closed(c) == p_a_enum(c));
    REQUIRE(p_b_closed(c) == p_b_enum(c));
    REQUIRE(p_b_minus_p_a(c) == p_b_enum(c) - p_a_enum(c));
  }
}

TEST_CASE("printed reduced forms agree with enumeration on t_B1 = 1/2") {
  SplitMix64 rng(22);
  for (int k = 0; k < 300; ++k) {
    const auto c = ExactConfig::make(testing::random_unit(rng), testing::random_unit(rng), Rational(1, 2));
    REQUIRE(p_a_printed(c) == p_a_enum(c));
    REQUIRE(p_b_printed(c) == p_b_enum(c));
  }
}

TEST_CASE("printed reduced forms deviate from enumeration off t_B1 = 1/2") {
  const auto c = ExactConfig::make(Rational(1, 2), Rational(1, 2), Rational(1, 4));
  const Rational gap = p_a_enum(c) - p_a_printed(c);
  const Rational t_a = c.t_a, t_b0 = c.t_b0, t_b1 = c.t_b1;
  const Rational predicted = Rational(1, 2) * t_a * t_b0 * c.r_b0() * c.r_b1() * (2 * t_b1 - 1) *
                             (t_b0 * t_b0 * t_b1 + t_b1 - 1);
  CHECK(gap != 0);
  CHECK(gap == predicted);
  CHECK(p_b_enum(c) - p_b_printed(c) == predicted);
}

TEST_CASE("t_B1 = 0: Alice's photon reaching DB1 is the only certain event") {
  const auto c = ExactConfig::make(Rational(1, 3), Rational(2, 5), Rational(0));
  CHECK(p_a_enum(c) == c.t_a * c.t_b0 * c.r_b0());
  CHECK(p_a_printed(c) == c.t_a * c.t_b0 * c.r_b0() / 2);
  CHECK(p_b_enum(c) == p_a_enum(c));
}

TEST_CASE("Bob surface row t_B1 = 0 is not identically zero") {
  for (int k = 0; k <= 10; ++k) {
    const Rational x(k, 10);
    const auto c = ExactConfig::make(Rational(1, 2), x, Rational(0));
    CHECK(p_b_enum(c) == x * (1 - x) / 2);
    CHECK(p_b_printed_bob_surface(x, Rational(0)) == x * (1 - x) / 4);
  }
}

TEST_CASE("P_A <= P_B with equality exactly on t_B1 in {0, 1}") {
  SplitMix64 rng(23);
  for (int k = 0; k < testing::kRandomConfigs; ++k) {
    const auto c = testing::random_config(rng);
    const auto pa = p_a_enum(c), pb = p_b_enum(c);
    REQUIRE(pa <= pb);
    REQUIRE((pa == pb) == (c.t_b1 == 0 || c.t_b1 == 1));
  }
}

TEST_CASE("cheating Alice: P(Aalter) as a function of t_A") {
  for (int k = 0; k <= 20; ++k) {
    const Rational t(k, 20);
    const auto c = ExactConfig::make(t, Rational(1, 2), Rational(1, 2));
    CHECK(p_a_enum(c) == Rational(5, 32) * t + Rational(3, 16));
    CHECK(p_b_enum(c) == Rational(9, 64) * t + Rational(11, 32));
    CHECK(p_alter(c) == malicious_alice_p_alter(t));
  }
  const auto opt = optimize_malicious_alice();
  CHECK(opt.t_a == 0);
  CHECK(opt.p_alter == Rational(21, 26));
  CHECK(opt.p_b == Rational(11, 32));
  CHECK(opt.p_a == Rational(3, 16));
  CHECK(opt.derivative_numerator < 0);
  CHECK(opt.grid_argmax == 0);
  CHECK(opt.grid_max == Rational(21, 26));
}

TEST_CASE("cheating Bob: grid optimum") {
  const auto opt = optimize_malicious_bob(201);
  CHECK(opt.t_b0 == 0.0);
  CHECK(opt.t_b1 == 1.0);
  CHECK(opt.exact_p_b == Rational(1, 2));
  CHECK(opt.surface.size() == 201u * 201u);
  double best = 0;
  for (const auto& s : opt.surface) best = std::max(best, s.p_b);
  CHECK(best == doctest::Approx(0.5).epsilon(1e-15));
  const auto& center = opt.surface[100 * 201 + 100];
  CHECK(center.t_b0 == 0.5);
  CHECK(center.t_b1 == 0.5);
  CHECK(center.p_b == doctest::Approx(53.0 / 128).epsilon(1e-15));
  CHECK_THROWS(optimize_malicious_bob(100));
}

TEST_CASE("binding threshold is minimal") {
  struct Case {
    double alpha;
    Rational p;
    int m;
  };
  for (const auto& k : {Case{1e-6, Rational(21, 26), 65}, Case{1e-6, Rational(75, 94), 62},
                        Case{1e-3, Rational(21, 26), 33}}) {
    const int m = binding_min_m(k.alpha, to_double(k.p));
    CHECK(m == k.m);
    CHECK(std::pow(to_double(k.p), m) < k.alpha);
    CHECK(std::pow(to_double(k.p), m - 1) >= k.alpha);
    CHECK(binding_min_m(k.alpha, to_double(k.p), LogBase::Two) == m);
  }
  CHECK(binding_bound(1e-6, 21.0 / 26) == doctest::Approx(64.687).epsilon(1e-4));
}

TEST_CASE("concealing threshold is minimal") {
  struct Case {
    double beta;
    int m;
    double p_b;
    int n;
  };
  for (const auto& k : {Case{1e-6, 65, 0.5, 25}, Case{1e-6, 65, 53.0 / 128, 20}, Case{1e-3, 33, 0.5, 15}}) {
    const int n = concealing_min_n(k.beta, k.m, k.p_b);
    CHECK(n == k.n);
    CHECK(concealing_advantage(k.m, n, k.p_b) < k.beta);
    CHECK(concealing_advantage(k.m, n - 1, k.p_b) >= k.beta);
    CHECK(concealing_min_n(k.beta, k.m, k.p_b, LogBase::Two) == n);
  }
  CHECK(concealing_bound(1e-6, 65, 0.5) == doctest::Approx(24.95).epsilon(1e-3));
}

TEST_CASE("thresholds are monotone in the targets") {
  int last_m = 0, last_n = 0;
  for (double target : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-9}) {
    const int m = binding_min_m(target, 21.0 / 26);
    const int n = concealing_min_n(target, 65, 0.5);
    CHECK(m >= last_m);
    CHECK(n >= last_n);
    last_m = m;
    last_n = n;
  }
}

TEST_CASE("concealing terms") {
  const auto t = concealing_terms(65, 25, 0.5);
  CHECK(t.epsilon == doctest::Approx(1 - std::pow(1 - std::pow(0.5, 25), 65)).epsilon(1e-9));
  CHECK(t.advantage == doctest::Approx(9.6857e-7).epsilon(1e-4));
  CHECK(t.p_bob_correct == doctest::Approx(0.5 + t.epsilon / 2));
  CHECK(concealing_advantage(65, 25, 53.0 / 128) == doctest::Approx(8.68e-9).epsilon(1e-2));
}

TEST_CASE("sender-less scenarios") {
  const auto honest = ExactConfig::honest();
  CHECK(p_b_enum(honest, SenderMode::SinglePhoton, SenderMode::NoPhoton) == Rational(1, 8));
  CHECK(p_a_enum(honest, SenderMode::SinglePhoton, SenderMode::NoPhoton) == Rational(1, 8));
  CHECK(p_b_enum(honest, SenderMode::NoPhoton, SenderMode::SinglePhoton) == Rational(11, 32));
  CHECK(p_a_enum(honest, SenderMode::NoPhoton, SenderMode::SinglePhoton) == Rational(3, 16));

  SplitMix64 rng(24);
  for (int k = 0; k < 300; ++k) {
    const auto c = testing::random_config(rng);
    CHECK(p_b_bob_none(c) == p_b_enum(c, SenderMode::SinglePhoton, SenderMode::NoPhoton));
    CHECK(p_b_alice_none(c) == p_b_enum(c, SenderMode::NoPhoton, SenderMode::SinglePhoton));
    CHECK(p_a_alice_none(c) == p_a_enum(c, SenderMode::NoPhoton, SenderMode::SinglePhoton));
  }

  const auto bob_none = no_photon_quantities(NoPhotonScenario::BobNone, honest);
  CHECK(bob_none.p_b == Rational(1, 8));
  CHECK(bob_none.p_alter == Rational(1));
  const auto alice_none = no_photon_quantities(NoPhotonScenario::AliceNone, honest);
  CHECK(alice_none.p_b == Rational(11, 32));
  CHECK(alice_none.p_a == Rational(3, 16));
  CHECK(alice_none.p_alter == Rational(21, 26));
}

TEST_CASE("P(Aalter) is undefined when P_A = 1") {
  CHECK_THROWS_AS(p_alter(Rational(1), Rational(1)), NoFiniteParameter);
}

TEST_CASE("planner") {
  const auto plan = plan_parameters({1e-6, 1e-6});
  CHECK(plan.params == SecurityParams{65, 25});
  CHECK(plan.worst_p_alter == Rational(21, 26));
  CHECK(plan.worst_p_b == Rational(1, 2));
  CHECK(plan.scenarios.size() == 6);
  for (const auto& s : plan.scenarios) CHECK_MESSAGE(s.satisfied, s.name);
}
