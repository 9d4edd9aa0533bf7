#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <map>

#include "cfqbc/rounds.hpp"
#include "support.hpp"

using namespace cfqbc;
using namespace cfqbc::rounds;
using optics::ExactConfig;
using optics::index;

namespace {

constexpr SenderMode kModes[] = {SenderMode::SinglePhoton, SenderMode::NoPhoton};

Rational total(const JointDistribution<Rational>& atoms) {
  Rational s(0);
  for (const auto& a : atoms) s += a.probability;
  return s;
}

}  // namespace

TEST_CASE("joint distribution sums to one for every sender mode") {
  SplitMix64 rng(3);
  for (int k = 0; k < testing::kRandomConfigs; ++k) {
    const auto c = testing::random_config(rng);
    for (auto am : kModes)
      for (auto bm : kModes) {
        if (am == SenderMode::NoPhoton && bm == SenderMode::NoPhoton) continue;
        REQUIRE(total(joint_distribution(c, am, bm)) == 1);
      }
  }
}

TEST_CASE("marginals of the joint distribution match the per-photon columns") {
  SplitMix64 rng(4);
  for (int k = 0; k < 300; ++k) {
    const auto c = testing::random_config(rng);
    const auto atoms = joint_distribution(c, SenderMode::SinglePhoton, SenderMode::SinglePhoton);
    for (bool equal : {true, false}) {
      const auto pa = optics::per_photon_distribution(PhotonSource::Alice, equal, c);
      const auto pb = optics::per_photon_distribution(PhotonSource::Bob, equal, c);
      for (Detector d : optics::kAllDetectors) {
        Rational alice(0), bob(0);
        for (const auto& a : atoms) {
          if (a.outcome.bits_equal != equal) continue;
          if (a.outcome.alice_photon == d) alice += a.probability;
          if (a.outcome.bob_photon == d) bob += a.probability;
        }
        REQUIRE(alice == pa[index(d)] / 2);
        REQUIRE(bob == pb[index(d)] / 2);
      }
    }
  }
}

TEST_CASE("Bob's inference is never wrong when Alice sends her photon") {
  SplitMix64 rng(5);
  for (int k = 0; k < 300; ++k) {
    const auto c = testing::random_config(rng);
    for (auto bm : kModes)
      for (const auto& atom : joint_distribution(c, SenderMode::SinglePhoton, bm))
        for (int a : {0, 1})
          for (int b : {0, 1}) {
            if ((a == b) != atom.outcome.bits_equal) continue;
            const auto known = classify_bob(atom.outcome, b);
            if (known.known()) REQUIRE(*known.bit == a);
          }
  }
}

TEST_CASE("Alice only reports certainty when Bob is certain") {
  SplitMix64 rng(6);
  for (int k = 0; k < 300; ++k) {
    const auto c = testing::random_config(rng);
    for (auto am : kModes)
      for (auto bm : kModes) {
        if (am == SenderMode::NoPhoton && bm == SenderMode::NoPhoton) continue;
        for (const auto& atom : joint_distribution(c, am, bm))
          for (int b : {0, 1})
            if (classify_alice(atom.outcome) == AliceKnowledge::BobKnows) REQUIRE(classify_bob(atom.outcome, b).known());
      }
  }
}

TEST_CASE("classification from readings agrees with classification from outcomes") {
  const auto c = ExactConfig::make(Rational(2, 3), Rational(1, 3), Rational(3, 4));
  for (auto bm : kModes)
    for (const auto& atom : joint_distribution(c, SenderMode::SinglePhoton, bm))
      for (int a : {0, 1})
        for (int b : {0, 1}) {
          if ((a == b) != atom.outcome.bits_equal) continue;
          const auto r = readings(atom.outcome, a, b);
          const std::optional<int> own = atom.outcome.bob_photon ? std::optional<int>(b) : std::nullopt;
          CHECK(classify_bob_readings(r[index(Detector::DB0)], r[index(Detector::DB1)], own) ==
                classify_bob(atom.outcome, b));
          CHECK(alice_site_count(r) + bob_site_count(r) == atom.outcome.photons_sent());
          CHECK(classify_alice_count(alice_site_count(r), atom.outcome.alice_photon.has_value()) ==
                classify_alice(atom.outcome));
        }
}

TEST_CASE("readings carry each sender's polarization") {
  const RoundOutcome o{false, Detector::DB1, Detector::DB0};
  const auto r = readings(o, 1, 0);
  CHECK(r[index(Detector::DB1)].v == 1);
  CHECK(r[index(Detector::DB0)].h == 1);
  CHECK(r[index(Detector::D0)].count() == 0);
}

TEST_CASE("Bob's rules on representative readings") {
  DetectorReading none, h, v, hh;
  h.add(Polarization::H);
  v.add(Polarization::V);
  hh.add(Polarization::H);
  hh.add(Polarization::H);
  // Own photon H (bit 0).
  CHECK_FALSE(classify_bob_readings(h, none, 0).known());
  CHECK(classify_bob_readings(none, none, 0) == BobKnowledge::knows(0));
  CHECK(classify_bob_readings(none, h, 0) == BobKnowledge::knows(0));
  CHECK(classify_bob_readings(hh, none, 0) == BobKnowledge::knows(0));
  CHECK(classify_bob_readings(v, h, 0) == BobKnowledge::knows(1));
  // No own photon.
  CHECK_FALSE(classify_bob_readings(none, none, std::nullopt).known());
  CHECK(classify_bob_readings(v, none, std::nullopt) == BobKnowledge::knows(1));
  CHECK(classify_bob_readings(none, h, std::nullopt) == BobKnowledge::knows(0));
}

TEST_CASE("Alice's count rule") {
  CHECK(classify_alice_count(0, true) == AliceKnowledge::BobKnows);
  CHECK(classify_alice_count(1, true) == AliceKnowledge::Uncertain);
  CHECK(classify_alice_count(2, true) == AliceKnowledge::BobKnows);
  CHECK(classify_alice_count(0, false) == AliceKnowledge::Uncertain);
  CHECK(classify_alice_count(1, false) == AliceKnowledge::BobKnows);
}

TEST_CASE("sampler frequencies pass a chi-square test against the exact atoms") {
  const auto c = ExactConfig::make(Rational(1, 2), Rational(1, 3), Rational(3, 5));
  const auto atoms = joint_distribution(c, SenderMode::SinglePhoton, SenderMode::SinglePhoton);
  const RoundSampler sampler(optics::to_real(c), SenderMode::SinglePhoton, SenderMode::SinglePhoton);
  constexpr int kSamples = 200000;
  for (int a : {0, 1})
    for (int b : {0, 1}) {
      std::map<std::string, double> expected;
      for (const auto& atom : atoms)
        if (atom.outcome.bits_equal == (a == b)) expected[describe(atom.outcome)] = to_double(atom.probability) * 2;
      std::map<std::string, int> seen;
      auto rng = derive_stream(99, {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)});
      for (int k = 0; k < kSamples; ++k) {
        const auto o = sampler.sample(a, b, rng);
        REQUIRE(o.bits_equal == (a == b));
        ++seen[describe(o)];
      }
      double chi2 = 0;
      for (const auto& [key, count] : seen) REQUIRE(expected.count(key) == 1);
      for (const auto& [key, p] : expected) {
        const double e = p * kSamples;
        const double d = seen[key] - e;
        chi2 += d * d / e;
      }
      const boost::math::chi_squared dist(static_cast<double>(expected.size() - 1));
      CHECK(chi2 < boost::math::quantile(boost::math::complement(dist, 1e-4)));
    }
}

TEST_CASE("sampler is a pure function of its stream") {
  const RoundSampler sampler(optics::RealConfig::honest(), SenderMode::SinglePhoton, SenderMode::SinglePhoton);
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto r1 = derive_stream(s, {1});
    auto r2 = derive_stream(s, {1});
    CHECK(sampler.sample(1, 0, r1) == sampler.sample(1, 0, r2));
  }
}

TEST_CASE("no-photon senders leave their side empty") {
  const RoundSampler sampler(optics::RealConfig::honest(), SenderMode::NoPhoton, SenderMode::SinglePhoton);
  SplitMix64 rng(8);
  for (int k = 0; k < 1000; ++k) {
    const auto o = sampler.sample(0, 1, rng);
    CHECK_FALSE(o.alice_photon.has_value());
    CHECK(o.bob_photon.has_value());
  }
}
