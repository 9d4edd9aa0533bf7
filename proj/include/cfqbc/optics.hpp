#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cfqbc/rational.hpp"

namespace cfqbc::optics {

enum class Detector : std::uint8_t { D0 = 0, D1 = 1, D2 = 2, DB0 = 3, DB1 = 4 };

inline constexpr std::size_t kDetectorCount = 5;
inline constexpr std::array<Detector, kDetectorCount> kAllDetectors = {
    Detector::D0, Detector::D1, Detector::D2, Detector::DB0, Detector::DB1};
inline constexpr std::array<Detector, 3> kAliceDetectors = {Detector::D0, Detector::D1, Detector::D2};
inline constexpr std::array<Detector, 2> kBobDetectors = {Detector::DB0, Detector::DB1};

constexpr std::size_t index(Detector d) { return static_cast<std::size_t>(d); }
constexpr bool at_alice_site(Detector d) { return index(d) < 3; }
constexpr bool at_bob_site(Detector d) { return !at_alice_site(d); }

std::string_view to_string(Detector d);
std::optional<Detector> parse_detector(std::string_view name);

/// Bit 0 is sent as H, bit 1 as V.
enum class Polarization : std::uint8_t { H = 0, V = 1 };

constexpr Polarization polarization_for(int bit) { return bit ? Polarization::V : Polarization::H; }
constexpr int bit_for(Polarization p) { return p == Polarization::V ? 1 : 0; }
std::string_view to_string(Polarization p);

enum class PhotonSource : std::uint8_t { Alice, Bob };
std::string_view to_string(PhotonSource s);

/// Multi-photon emission has no representation here; it is refused when a
/// setup is parsed.
enum class SenderMode : std::uint8_t { SinglePhoton, NoPhoton };
std::string_view to_string(SenderMode m);
SenderMode parse_sender_mode(std::string_view name);

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Transmissivities of BS_A, BS_B0 and BS_B1. Reflectivities are 1 - t.
template <class T>
struct SplitterConfig {
  T t_a{};
  T t_b0{};
  T t_b1{};

  static SplitterConfig make(T t_a, T t_b0, T t_b1) {
    SplitterConfig c{std::move(t_a), std::move(t_b0), std::move(t_b1)};
    c.validate();
    return c;
  }

  static SplitterConfig honest() { return {half<T>(), half<T>(), half<T>()}; }

  void validate() const {
    auto check = [](const T& v, const char* name) {
      if (!(v >= T(0) && v <= T(1)))
        throw DomainError(std::string("transmissivity ") + name + " outside [0,1]");
    };
    check(t_a, "t_A");
    check(t_b0, "t_B0");
    check(t_b1, "t_B1");
  }

  T r_a() const { return T(1) - t_a; }
  T r_b0() const { return T(1) - t_b0; }
  T r_b1() const { return T(1) - t_b1; }

  friend bool operator==(const SplitterConfig&, const SplitterConfig&) = default;
};

using ExactConfig = SplitterConfig<Rational>;
using RealConfig = SplitterConfig<double>;

RealConfig to_real(const ExactConfig& c);

/// Probability of each detector, indexed by `index(Detector)`.
template <class T>
using DetectorDistribution = std::array<T, kDetectorCount>;

/// Detection probabilities of a single photon. Alice's photon never
/// self-interferes, so its column is the same for both equality cases; Bob's
/// photon returns to DB0 with certainty when the bits differ.
template <class T>
DetectorDistribution<T> per_photon_distribution(PhotonSource source, bool bits_equal,
                                                const SplitterConfig<T>& c) {
  c.validate();
  const T ta = c.t_a, tb0 = c.t_b0, tb1 = c.t_b1;
  const T ra = c.r_a(), rb0 = c.r_b0(), rb1 = c.r_b1();
  DetectorDistribution<T> p{};
  if (source == PhotonSource::Alice) {
    p[index(Detector::D0)] = ra * ra + ta * ta * rb0 * rb0;
    p[index(Detector::D1)] = ra * ta + ta * rb0 * rb0 * ra;
    p[index(Detector::D2)] = ta * tb0;
    p[index(Detector::DB0)] = ta * rb0 * tb0 * tb1;
    p[index(Detector::DB1)] = ta * rb0 * tb0 * rb1;
    return p;
  }
  if (!bits_equal) {
    p.fill(T(0));
    p[index(Detector::DB0)] = T(1);
    return p;
  }
  p[index(Detector::D0)] = tb1 * tb0 * rb0 * ta;
  p[index(Detector::D1)] = tb1 * tb0 * rb0 * ra;
  p[index(Detector::D2)] = tb1 * rb0;
  p[index(Detector::DB0)] = tb1 * tb1 * tb0 * tb0 + rb1 * rb1;
  p[index(Detector::DB1)] = tb1 * tb0 * tb0 * rb1 + rb1 * tb1;
  return p;
}

/// Distribution of the one photon left in the network when `absent` sent
/// nothing: simply the other party's single-photon column.
template <class T>
DetectorDistribution<T> no_photon_distribution(PhotonSource absent, bool bits_equal,
                                               const SplitterConfig<T>& c) {
  const PhotonSource present = absent == PhotonSource::Alice ? PhotonSource::Bob : PhotonSource::Alice;
  return per_photon_distribution(present, bits_equal, c);
}

/// Symbolic form of a table cell, e.g. "r_A^2 + t_A^2 r_B0^2".
std::string_view table_expression(PhotonSource source, bool bits_equal, Detector d);

/// One splitter interaction along an optical path.
enum class Coefficient : std::uint8_t { TransmitA, ReflectA, TransmitB0, ReflectB0, TransmitB1, ReflectB1 };

std::string_view to_string(Coefficient k);

template <class T>
T evaluate(Coefficient k, const SplitterConfig<T>& c) {
  switch (k) {
    case Coefficient::TransmitA: return c.t_a;
    case Coefficient::ReflectA: return c.r_a();
    case Coefficient::TransmitB0: return c.t_b0;
    case Coefficient::ReflectB0: return c.r_b0();
    case Coefficient::TransmitB1: return c.t_b1;
    case Coefficient::ReflectB1: return c.r_b1();
  }
  return T(0);
}

struct PathRecord {
  PhotonSource source;
  bool bits_equal;
  Detector detector;
  std::vector<Coefficient> factors;  // empty product: the interference path
  std::string route;

  template <class T>
  T probability(const SplitterConfig<T>& c) const {
    T p(1);
    for (Coefficient k : factors) p *= evaluate(k, c);
    return p;
  }

  /// Product of factor symbols, e.g. "t_A r_B0 t_B0 t_B1"; "1" for the empty product.
  std::string expression() const;
};

/// Every optical route a photon can take to a detector for the given case.
std::vector<PathRecord> enumerate_paths(PhotonSource source, bool bits_equal);

/// Sums path probabilities per detector.
template <class T>
DetectorDistribution<T> group_by_detector(std::span<const PathRecord> paths, const SplitterConfig<T>& c) {
  DetectorDistribution<T> p{};
  p.fill(T(0));
  for (const auto& path : paths) p[index(path.detector)] += path.probability(c);
  return p;
}

}  // namespace cfqbc::optics
