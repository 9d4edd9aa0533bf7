#include "cfqbc/rounds.hpp"

#include <numeric>

namespace cfqbc::rounds {

using optics::index;
using optics::polarization_for;

std::string describe(const RoundOutcome& o) {
  auto spot = [](const std::optional<Detector>& d) {
    return d ? std::string(optics::to_string(*d)) : std::string("none");
  };
  return std::string(o.bits_equal ? "equal" : "differ") + " alice@" + spot(o.alice_photon) + " bob@" +
         spot(o.bob_photon);
}

SlotReadings readings(const RoundOutcome& o, int alice_bit, int bob_bit) {
  SlotReadings r{};
  if (o.alice_photon) r[index(*o.alice_photon)].add(polarization_for(alice_bit));
  if (o.bob_photon) r[index(*o.bob_photon)].add(polarization_for(bob_bit));
  return r;
}

int alice_site_count(const SlotReadings& r) {
  int n = 0;
  for (Detector d : optics::kAliceDetectors) n += r[index(d)].count();
  return n;
}

int bob_site_count(const SlotReadings& r) {
  int n = 0;
  for (Detector d : optics::kBobDetectors) n += r[index(d)].count();
  return n;
}

std::string_view to_string(AliceKnowledge k) { return k == AliceKnowledge::BobKnows ? "bob_knows" : "uncertain"; }

BobKnowledge classify_bob_readings(DetectorReading db0, DetectorReading db1, std::optional<int> own_bit) {
  const int h = db0.h + db1.h;
  const int v = db0.v + db1.v;
  if (!own_bit) {
    if (h > 0) return BobKnowledge::knows(0);
    if (v > 0) return BobKnowledge::knows(1);
    return BobKnowledge::unknown();
  }
  const int b = *own_bit;
  const int foreign = b == 0 ? v : h;
  if (foreign > 0) return BobKnowledge::knows(1 - b);
  if (db0.count() == 1 && db1.count() == 0) return BobKnowledge::unknown();
  return BobKnowledge::knows(b);
}

AliceKnowledge classify_alice_count(int alice_count, bool alice_sent) {
  const int at_bob = (alice_sent ? 1 : 0) + 1 - alice_count;
  return (at_bob == 0 || at_bob == 2) ? AliceKnowledge::BobKnows : AliceKnowledge::Uncertain;
}

BobKnowledge classify_bob(const RoundOutcome& o, int bob_bit) {
  const int alice_bit = o.bits_equal ? bob_bit : 1 - bob_bit;
  const auto r = readings(o, alice_bit, bob_bit);
  const std::optional<int> own = o.bob_photon ? std::optional<int>(bob_bit) : std::nullopt;
  return classify_bob_readings(r[index(Detector::DB0)], r[index(Detector::DB1)], own);
}

AliceKnowledge classify_alice(const RoundOutcome& o) {
  const int count = int(o.alice_photon && optics::at_alice_site(*o.alice_photon)) +
                    int(o.bob_photon && optics::at_alice_site(*o.bob_photon));
  return classify_alice_count(count, o.alice_photon.has_value());
}

RoundSampler::RoundSampler(const optics::RealConfig& config, SenderMode alice_mode, SenderMode bob_mode)
    : alice_mode_(alice_mode),
      bob_mode_(bob_mode),
      alice_(cumulative(optics::per_photon_distribution(PhotonSource::Alice, true, config))),
      bob_equal_(cumulative(optics::per_photon_distribution(PhotonSource::Bob, true, config))),
      bob_differ_(cumulative(optics::per_photon_distribution(PhotonSource::Bob, false, config))) {}

RoundSampler::Cdf RoundSampler::cumulative(const DetectorDistribution<double>& p) {
  Cdf cdf{};
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  // Anything past the last positive entry (rounding in the partial sums)
  // belongs to that entry.
  for (std::size_t k = cdf.size(); k-- > 0;) {
    if (p[k] > 0.0) {
      for (std::size_t j = k; j < cdf.size(); ++j) cdf[j] = 2.0;
      break;
    }
  }
  return cdf;
}

Detector RoundSampler::draw(const Cdf& cdf, double u) {
  for (std::size_t k = 0; k < cdf.size(); ++k)
    if (u < cdf[k]) return optics::kAllDetectors[k];
  return optics::kAllDetectors.back();
}

RoundOutcome RoundSampler::sample(int alice_bit, int bob_bit, SplitMix64& rng) const {
  RoundOutcome o;
  o.bits_equal = alice_bit == bob_bit;
  const double ua = rng.uniform();
  const double ub = rng.uniform();
  if (alice_mode_ == SenderMode::SinglePhoton) o.alice_photon = draw(alice_, ua);
  if (bob_mode_ == SenderMode::SinglePhoton) o.bob_photon = draw(o.bits_equal ? bob_equal_ : bob_differ_, ub);
  return o;
}

RoundOutcome sample_round(const optics::RealConfig& config, int alice_bit, int bob_bit, SenderMode alice_mode,
                          SenderMode bob_mode, SplitMix64& rng) {
  return RoundSampler(config, alice_mode, bob_mode).sample(alice_bit, bob_bit, rng);
}

}  // namespace cfqbc::rounds
