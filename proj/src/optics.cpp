#include "cfqbc/optics.hpp"

namespace cfqbc::optics {

std::string_view to_string(Detector d) {
  switch (d) {
    case Detector::D0: return "D0";
    case Detector::D1: return "D1";
    case Detector::D2: return "D2";
    case Detector::DB0: return "DB0";
    case Detector::DB1: return "DB1";
  }
  return "?";
}

std::optional<Detector> parse_detector(std::string_view name) {
  for (Detector d : kAllDetectors)
    if (to_string(d) == name) return d;
  return std::nullopt;
}

std::string_view to_string(Polarization p) { return p == Polarization::H ? "H" : "V"; }

std::string_view to_string(PhotonSource s) { return s == PhotonSource::Alice ? "alice" : "bob"; }

std::string_view to_string(SenderMode m) { return m == SenderMode::SinglePhoton ? "single_photon" : "no_photon"; }

SenderMode parse_sender_mode(std::string_view name) {
  if (name == "single_photon") return SenderMode::SinglePhoton;
  if (name == "no_photon") return SenderMode::NoPhoton;
  throw std::invalid_argument("unsupported sender mode: " + std::string(name) +
                              " (multi-photon emission is detectable and not simulated)");
}

RealConfig to_real(const ExactConfig& c) {
  return RealConfig{to_double(c.t_a), to_double(c.t_b0), to_double(c.t_b1)};
}

std::string_view table_expression(PhotonSource source, bool bits_equal, Detector d) {
  if (source == PhotonSource::Alice) {
    switch (d) {
      case Detector::D0: return "r_A^2 + t_A^2 r_B0^2";
      case Detector::D1: return "r_A t_A + t_A r_B0^2 r_A";
      case Detector::D2: return "t_A t_B0";
      case Detector::DB0: return "t_A r_B0 t_B0 t_B1";
      case Detector::DB1: return "t_A r_B0 t_B0 r_B1";
    }
  }
  if (!bits_equal) return d == Detector::DB0 ? "1" : "0";
  switch (d) {
    case Detector::D0: return "t_B1 t_B0 r_B0 t_A";
    case Detector::D1: return "t_B1 t_B0 r_B0 r_A";
    case Detector::D2: return "t_B1 r_B0";
    case Detector::DB0: return "t_B1^2 t_B0^2 + r_B1^2";
    case Detector::DB1: return "t_B1 t_B0^2 r_B1 + r_B1 t_B1";
  }
  return "?";
}

std::string_view to_string(Coefficient k) {
  switch (k) {
    case Coefficient::TransmitA: return "t_A";
    case Coefficient::ReflectA: return "r_A";
    case Coefficient::TransmitB0: return "t_B0";
    case Coefficient::ReflectB0: return "r_B0";
    case Coefficient::TransmitB1: return "t_B1";
    case Coefficient::ReflectB1: return "r_B1";
  }
  return "?";
}

std::string PathRecord::expression() const {
  if (factors.empty()) return "1";
  std::string out;
  for (Coefficient k : factors) {
    if (!out.empty()) out += ' ';
    out += to_string(k);
  }
  return out;
}

namespace {

using enum Coefficient;

struct PathSpec {
  Detector detector;
  std::vector<Coefficient> factors;
  const char* route;
};

// Routes of Alice's photon. Identical whether or not the bits agree: the
// switch SW is driven by Alice's own bit, so her photon cannot interfere.
const std::vector<PathSpec>& alice_paths() {
  static const std::vector<PathSpec> paths = {
      {Detector::D0, {ReflectA, ReflectA}, "S_A → C_0 → BS_A → FM_0 → BS_A → C_0 → D_0"},
      {Detector::D0, {TransmitA, ReflectB0, ReflectB0, TransmitA},
       "S_A → C_0 → BS_A → BS_B0 → FM_2 → BS_B0 → BS_A → C_0 → D_0"},
      {Detector::D1, {ReflectA, TransmitA}, "S_A → C_0 → BS_A → FM_0 → BS_A → D_1"},
      {Detector::D1, {TransmitA, ReflectB0, ReflectB0, ReflectA},
       "S_A → C_0 → BS_A → BS_B0 → FM_2 → BS_B0 → BS_A → D_1"},
      {Detector::D2, {TransmitA, TransmitB0}, "S_A → C_0 → BS_A → BS_B0 → PBS → D_2"},
      {Detector::DB0, {TransmitA, ReflectB0, TransmitB0, TransmitB1},
       "S_A → C_0 → BS_A → BS_B0 → FM_2 → BS_B0 → BS_B1 → C_1 → D_B0"},
      {Detector::DB1, {TransmitA, ReflectB0, TransmitB0, ReflectB1},
       "S_A → C_0 → BS_A → BS_B0 → FM_2 → BS_B0 → BS_B1 → D_B1"},
  };
  return paths;
}

const std::vector<PathSpec>& bob_paths_equal() {
  static const std::vector<PathSpec> paths = {
      {Detector::D0, {TransmitB1, TransmitB0, ReflectB0, TransmitA},
       "S_B → C_1 → BS_B1 → BS_B0 → FM_2 → BS_B0 → BS_A → C_0 → D_0"},
      {Detector::D1, {TransmitB1, TransmitB0, ReflectB0, ReflectA},
       "S_B → C_1 → BS_B1 → BS_B0 → FM_2 → BS_B0 → BS_A → D_1"},
      {Detector::D2, {TransmitB1, ReflectB0}, "S_B → C_1 → BS_B1 → BS_B0 → PBS → D_2"},
      {Detector::DB0, {TransmitB1, TransmitB0, TransmitB0, TransmitB1},
       "S_B → C_1 → BS_B1 → BS_B0 → FM_2 → BS_B0 → BS_B1 → C_1 → D_B0"},
      {Detector::DB0, {ReflectB1, ReflectB1}, "S_B → C_1 → BS_B1 → FM_3 → BS_B1 → C_1 → D_B0"},
      {Detector::DB1, {TransmitB1, TransmitB0, TransmitB0, ReflectB1},
       "S_B → C_1 → BS_B1 → BS_B0 → FM_2 → BS_B0 → BS_B1 → D_B1"},
      {Detector::DB1, {ReflectB1, TransmitB1}, "S_B → C_1 → BS_B1 → FM_3 → BS_B1 → D_B1"},
  };
  return paths;
}

const std::vector<PathSpec>& bob_paths_differ() {
  static const std::vector<PathSpec> paths = {
      {Detector::DB0, {}, "S_B → C_1 → BS_B1 → interference → C_1 → D_B0"},
  };
  return paths;
}

}  // namespace

std::vector<PathRecord> enumerate_paths(PhotonSource source, bool bits_equal) {
  const auto& specs = source == PhotonSource::Alice ? alice_paths()
                      : bits_equal                  ? bob_paths_equal()
                                                    : bob_paths_differ();
  std::vector<PathRecord> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back({source, bits_equal, s.detector, s.factors, s.route});
  return out;
}

}  // namespace cfqbc::optics
