#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfqbc/optics.hpp"
#include "cfqbc/random.hpp"

namespace cfqbc::rounds {

using optics::Detector;
using optics::DetectorDistribution;
using optics::PhotonSource;
using optics::Polarization;
using optics::SenderMode;
using optics::SplitterConfig;

/// Where the (up to) two photons of one time slot ended up. A missing
/// detector means that party sent no photon. Polarizations are implied: each
/// photon carries its sender's bit.
struct RoundOutcome {
  bool bits_equal = true;
  std::optional<Detector> alice_photon;
  std::optional<Detector> bob_photon;

  int photons_sent() const { return int(alice_photon.has_value()) + int(bob_photon.has_value()); }

  friend bool operator==(const RoundOutcome&, const RoundOutcome&) = default;
};

std::string describe(const RoundOutcome& o);

/// Photon count at one detector, split by polarization.
struct DetectorReading {
  std::uint8_t h = 0;
  std::uint8_t v = 0;

  int count() const { return h + v; }
  void add(Polarization p) { (p == Polarization::H ? h : v) += 1; }

  friend bool operator==(const DetectorReading&, const DetectorReading&) = default;
};

/// Readings of all five detectors for one slot, indexed by `optics::index`.
using SlotReadings = std::array<DetectorReading, optics::kDetectorCount>;

/// Detector readings produced by an outcome when Alice sent `alice_bit` and
/// Bob sent `bob_bit`.
SlotReadings readings(const RoundOutcome& o, int alice_bit, int bob_bit);

int alice_site_count(const SlotReadings& r);
int bob_site_count(const SlotReadings& r);

/// Bob's certainty about Alice's bit in one slot.
struct BobKnowledge {
  std::optional<int> bit;

  static BobKnowledge unknown() { return {}; }
  static BobKnowledge knows(int b) { return {b}; }
  bool known() const { return bit.has_value(); }

  friend bool operator==(const BobKnowledge&, const BobKnowledge&) = default;
};

enum class AliceKnowledge : std::uint8_t { BobKnows, Uncertain };

std::string_view to_string(AliceKnowledge k);

/// Bob's inference from his two detectors. `own_bit` is nullopt when Bob sent
/// no photon in the slot.
///
/// With a photon of his own in flight, Bob knows Alice's bit unless exactly one
/// photon reached DB0 and none reached DB1: an empty site or a DB1 click rules
/// out interference (bits equal), and a second photon at his site exposes
/// Alice's polarization. Without his own photon, any photon he catches is
/// Alice's and its polarization is her bit.
BobKnowledge classify_bob_readings(DetectorReading db0, DetectorReading db1, std::optional<int> own_bit);

/// Alice's inference from the number of photons at her three detectors.
/// Assuming Bob sent his photon, Bob's site holds (sent - count) photons; Bob
/// is certain whenever that is 0 or 2 and may be uncertain when it is 1.
AliceKnowledge classify_alice_count(int alice_count, bool alice_sent);

BobKnowledge classify_bob(const RoundOutcome& o, int bob_bit);
AliceKnowledge classify_alice(const RoundOutcome& o);

template <class T>
struct Atom {
  RoundOutcome outcome;
  T probability;
};

/// Outcome distribution of one slot with the equality of the bits uniform.
/// Photons route independently given equality; only positive-probability
/// atoms are kept.
template <class T>
using JointDistribution = std::vector<Atom<T>>;

template <class T>
JointDistribution<T> joint_distribution(const SplitterConfig<T>& config, SenderMode alice_mode, SenderMode bob_mode) {
  config.validate();
  JointDistribution<T> atoms;
  const bool alice_sends = alice_mode == SenderMode::SinglePhoton;
  const bool bob_sends = bob_mode == SenderMode::SinglePhoton;
  for (bool equal : {false, true}) {
    const auto pa = optics::per_photon_distribution(PhotonSource::Alice, equal, config);
    const auto pb = optics::per_photon_distribution(PhotonSource::Bob, equal, config);
    std::vector<std::optional<Detector>> alice_spots{std::nullopt};
    std::vector<std::optional<Detector>> bob_spots{std::nullopt};
    if (alice_sends) alice_spots.assign(optics::kAllDetectors.begin(), optics::kAllDetectors.end());
    if (bob_sends) bob_spots.assign(optics::kAllDetectors.begin(), optics::kAllDetectors.end());
    for (const auto& da : alice_spots) {
      for (const auto& db : bob_spots) {
        T p = half<T>();
        if (da) p *= pa[optics::index(*da)];
        if (db) p *= pb[optics::index(*db)];
        if (p == T(0)) continue;
        atoms.push_back({RoundOutcome{equal, da, db}, p});
      }
    }
  }
  return atoms;
}

/// Draws slot outcomes from precomputed cumulative tables.
class RoundSampler {
 public:
  RoundSampler(const optics::RealConfig& config, SenderMode alice_mode, SenderMode bob_mode);

  RoundOutcome sample(int alice_bit, int bob_bit, SplitMix64& rng) const;

  SenderMode alice_mode() const { return alice_mode_; }
  SenderMode bob_mode() const { return bob_mode_; }

 private:
  using Cdf = std::array<double, optics::kDetectorCount>;
  static Cdf cumulative(const DetectorDistribution<double>& p);
  static Detector draw(const Cdf& cdf, double u);

  SenderMode alice_mode_;
  SenderMode bob_mode_;
  Cdf alice_;
  Cdf bob_equal_;
  Cdf bob_differ_;
};

RoundOutcome sample_round(const optics::RealConfig& config, int alice_bit, int bob_bit, SenderMode alice_mode,
                          SenderMode bob_mode, SplitMix64& rng);

}  // namespace cfqbc::rounds
