#include <doctest.h>

#include <numeric>

#include "cfqbc/optics.hpp"
#include "support.hpp"

using namespace cfqbc;
using namespace cfqbc::optics;

namespace {

Rational column_sum(const DetectorDistribution<Rational>& p) { return std::accumulate(p.begin(), p.end(), Rational(0)); }

}  // namespace

TEST_CASE("balanced splitters give the hand-computed columns") {
  const auto c = ExactConfig::honest();
  const auto alice = per_photon_distribution(PhotonSource::Alice, true, c);
  CHECK(alice[index(Detector::D0)] == Rational(5, 16));
  CHECK(alice[index(Detector::D1)] == Rational(5, 16));
  CHECK(alice[index(Detector::D2)] == Rational(1, 4));
  CHECK(alice[index(Detector::DB0)] == Rational(1, 16));
  CHECK(alice[index(Detector::DB1)] == Rational(1, 16));

  const auto bob = per_photon_distribution(PhotonSource::Bob, true, c);
  CHECK(bob[index(Detector::D0)] == Rational(1, 16));
  CHECK(bob[index(Detector::D1)] == Rational(1, 16));
  CHECK(bob[index(Detector::D2)] == Rational(1, 4));
  CHECK(bob[index(Detector::DB0)] == Rational(5, 16));
  CHECK(bob[index(Detector::DB1)] == Rational(5, 16));

  const auto differ = per_photon_distribution(PhotonSource::Bob, false, c);
  CHECK(differ[index(Detector::DB0)] == 1);
  CHECK(column_sum(differ) == 1);
}

TEST_CASE("Alice's photon does not depend on the bit relation") {
  SplitMix64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto c = testing::random_config(rng);
    CHECK(per_photon_distribution(PhotonSource::Alice, true, c) ==
          per_photon_distribution(PhotonSource::Alice, false, c));
  }
}

TEST_CASE("every column is a probability distribution") {
  SplitMix64 rng(1);
  for (int k = 0; k < testing::kRandomConfigs; ++k) {
    const auto c = testing::random_config(rng);
    for (auto source : {PhotonSource::Alice, PhotonSource::Bob})
      for (bool equal : {true, false}) {
        const auto p = per_photon_distribution(source, equal, c);
        REQUIRE(column_sum(p) == 1);
        for (const auto& v : p) REQUIRE(v >= 0);
      }
  }
}

TEST_CASE("path catalog grouped by detector reproduces the table") {
  SplitMix64 rng(2);
  for (int k = 0; k < testing::kRandomConfigs; ++k) {
    const auto c = testing::random_config(rng);
    for (auto source : {PhotonSource::Alice, PhotonSource::Bob})
      for (bool equal : {true, false}) {
        const auto paths = enumerate_paths(source, equal);
        REQUIRE(group_by_detector<Rational>(paths, c) == per_photon_distribution(source, equal, c));
      }
  }
}

TEST_CASE("path catalog structure") {
  for (auto source : {PhotonSource::Alice, PhotonSource::Bob})
    for (bool equal : {true, false})
      for (const auto& path : enumerate_paths(source, equal)) {
        CHECK_FALSE(path.route.empty());
        CHECK(path.source == source);
        CHECK(path.bits_equal == equal);
      }
  const auto differ = enumerate_paths(PhotonSource::Bob, false);
  REQUIRE(differ.size() == 1);
  CHECK(differ[0].detector == Detector::DB0);
  CHECK(differ[0].factors.empty());
  CHECK(differ[0].expression() == "1");
}

TEST_CASE("the table expressions name every cell") {
  for (auto source : {PhotonSource::Alice, PhotonSource::Bob})
    for (bool equal : {true, false})
      for (Detector d : kAllDetectors) CHECK_FALSE(table_expression(source, equal, d).empty());
}

TEST_CASE("no-photon distribution is the present photon's column") {
  const auto c = ExactConfig::make(Rational(1, 3), Rational(2, 5), Rational(3, 7));
  CHECK(no_photon_distribution(PhotonSource::Alice, true, c) == per_photon_distribution(PhotonSource::Bob, true, c));
  CHECK(no_photon_distribution(PhotonSource::Bob, true, c) == per_photon_distribution(PhotonSource::Alice, true, c));
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(ExactConfig::make(Rational(-1, 2), Rational(1, 2), Rational(1, 2)), DomainError);
  CHECK_THROWS_AS(RealConfig::make(0.5, 1.5, 0.5), DomainError);
  CHECK_NOTHROW(RealConfig::make(0.0, 1.0, 0.0));
  const auto c = ExactConfig::make(Rational(1, 3), Rational(1, 4), Rational(1, 5));
  CHECK(c.r_a() == Rational(2, 3));
  CHECK(c.r_b0() == Rational(3, 4));
  CHECK(c.r_b1() == Rational(4, 5));
}

TEST_CASE("names and polarizations") {
  for (Detector d : kAllDetectors) CHECK(parse_detector(to_string(d)) == d);
  CHECK_FALSE(parse_detector("D3").has_value());
  CHECK(polarization_for(0) == Polarization::H);
  CHECK(polarization_for(1) == Polarization::V);
  CHECK(bit_for(Polarization::V) == 1);
  CHECK(at_alice_site(Detector::D2));
  CHECK(at_bob_site(Detector::DB0));
  CHECK(parse_sender_mode(to_string(SenderMode::NoPhoton)) == SenderMode::NoPhoton);
  CHECK_THROWS(parse_sender_mode("two-photons"));
}
