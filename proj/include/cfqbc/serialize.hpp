#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfqbc/adversary.hpp"
#include "cfqbc/analysis.hpp"
#include "cfqbc/optics.hpp"
#include "cfqbc/protocol.hpp"

namespace cfqbc::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest form with `precision` significant digits.
std::string format_double(double value, int precision);

json to_json(const optics::RealConfig& c);
optics::RealConfig real_config_from_json(const json& j);

json to_json(const protocol::CommitmentSetup& s);
protocol::CommitmentSetup setup_from_json(const json& j);

/// Detector readings restricted to one site, e.g.
/// {"D0": {"count": 1, "polarizations": ["H"]}, "D1": ..., "D2": ...}.
json readings_to_json(const rounds::SlotReadings& r, bool alice_site);
rounds::SlotReadings readings_from_json(const json& j);

/// JSON lines: a header object, then one object per slot in row-major order.
/// A non-null `manifest` is embedded in the header line.
void write_alice_transcript(std::ostream& out, const protocol::CommitmentSetup& setup,
                            const protocol::AliceView& view, const json& manifest = nullptr);
void write_bob_transcript(std::ostream& out, const protocol::CommitmentSetup& setup, const protocol::BobView& view,
                          const json& manifest = nullptr);

struct BobTranscript {
  protocol::CommitmentSetup setup;
  protocol::BobView view;
};

BobTranscript read_bob_transcript(std::istream& in);

json to_json(const protocol::Opening& o);
protocol::Opening opening_from_json(const json& j);

json to_json(const protocol::VerificationResult& v);

json to_json(const adversary::ExperimentReport& r);
json to_json(const adversary::BindingReport& r);
json to_json(const adversary::ConcealingReport& r);

json to_json(const analysis::Plan& p);

/// Per-detector table rows for both photons and both bit relations. Exact
/// values are printed as fractions.
void write_tables_csv(std::ostream& out, const optics::ExactConfig& c, int precision);
json tables_json(const optics::ExactConfig& c);

void write_paths_csv(std::ostream& out, const optics::ExactConfig& c, int precision);

void write_surface_csv(std::ostream& out, const analysis::MaliciousBobOptimum& opt, int precision);

}  // namespace cfqbc::io
