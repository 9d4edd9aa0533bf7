#include "cfqbc/serialize.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace cfqbc::io {

using optics::Detector;
using optics::index;
using optics::PhotonSource;
using protocol::BitSequences;
using protocol::RoundRecord;

std::string format_double(double value, int precision) {
  std::ostringstream s;
  s << std::setprecision(precision) << value;
  return s.str();
}

json to_json(const optics::RealConfig& c) { return {{"t_A", c.t_a}, {"t_B0", c.t_b0}, {"t_B1", c.t_b1}}; }

optics::RealConfig real_config_from_json(const json& j) {
  return optics::RealConfig::make(j.at("t_A").get<double>(), j.at("t_B0").get<double>(), j.at("t_B1").get<double>());
}

json to_json(const protocol::CommitmentSetup& s) {
  return {{"m", s.params.m},
          {"n", s.params.n},
          {"config", to_json(s.config)},
          {"alice_mode", optics::to_string(s.alice_mode)},
          {"bob_mode", optics::to_string(s.bob_mode)},
          {"seed", s.seed}};
}

protocol::CommitmentSetup setup_from_json(const json& j) {
  protocol::CommitmentSetup s;
  s.params = {j.at("m").get<int>(), j.at("n").get<int>()};
  s.config = real_config_from_json(j.at("config"));
  s.alice_mode = optics::parse_sender_mode(j.at("alice_mode").get<std::string>());
  s.bob_mode = optics::parse_sender_mode(j.at("bob_mode").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  s.validate();
  return s;
}

json readings_to_json(const rounds::SlotReadings& r, bool alice_site) {
  json out = json::object();
  for (Detector d : optics::kAllDetectors) {
    if (optics::at_alice_site(d) != alice_site) continue;
    const auto& reading = r[index(d)];
    json pols = json::array();
    for (int k = 0; k < reading.h; ++k) pols.push_back("H");
    for (int k = 0; k < reading.v; ++k) pols.push_back("V");
    out[std::string(optics::to_string(d))] = {{"count", reading.count()}, {"polarizations", pols}};
  }
  return out;
}

rounds::SlotReadings readings_from_json(const json& j) {
  rounds::SlotReadings r{};
  for (const auto& [name, value] : j.items()) {
    const auto d = optics::parse_detector(name);
    if (!d) throw FormatError("unknown detector " + name);
    auto& reading = r[index(*d)];
    for (const auto& p : value.at("polarizations")) {
      const auto s = p.get<std::string>();
      if (s == "H") reading.add(optics::Polarization::H);
      else if (s == "V") reading.add(optics::Polarization::V);
      else throw FormatError("unknown polarization " + s);
    }
    if (value.contains("count") && value.at("count").get<int>() != reading.count())
      throw FormatError("detector " + name + " count does not match its polarizations");
  }
  return r;
}

namespace {

std::string_view knowledge_label(rounds::AliceKnowledge k) {
  return k == rounds::AliceKnowledge::BobKnows ? "bob_knows" : "uncertain";
}

json knowledge_json(const rounds::BobKnowledge& k) {
  if (!k.known()) return "unknown";
  return *k.bit ? "knows_1" : "knows_0";
}

rounds::BobKnowledge bob_knowledge_from_json(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "unknown") return rounds::BobKnowledge::unknown();
  if (s == "knows_0") return rounds::BobKnowledge::knows(0);
  if (s == "knows_1") return rounds::BobKnowledge::knows(1);
  throw FormatError("unknown knowledge label " + s);
}

json header(const protocol::CommitmentSetup& setup, std::string_view party, const json& manifest) {
  json h = {{"schema_version", kSchemaVersion}, {"kind", "transcript"}, {"party", party}, {"setup", to_json(setup)}};
  if (!manifest.is_null()) h["manifest"] = manifest;
  return h;
}

json record_line(const RoundRecord& r, int bit, bool alice_site) {
  return {{"i", r.i}, {"j", r.j}, {"bit", bit}, {"detectors", readings_to_json(r.readings, alice_site)}};
}

}  // namespace

void write_alice_transcript(std::ostream& out, const protocol::CommitmentSetup& setup,
                            const protocol::AliceView& view, const json& manifest) {
  json h = header(setup, "alice", manifest);
  h["commit_bit"] = view.commit_bit;
  out << h.dump() << '\n';
  for (std::size_t k = 0; k < view.records.size(); ++k) {
    const auto& r = view.records[k];
    json line = record_line(r, view.sequences.at(r.i, r.j), true);
    line["knowledge"] = knowledge_label(view.knowledge[k]);
    out << line.dump() << '\n';
  }
}

void write_bob_transcript(std::ostream& out, const protocol::CommitmentSetup& setup, const protocol::BobView& view,
                          const json& manifest) {
  json h = header(setup, "bob", manifest);
  h["reference_config"] = to_json(view.reference_config);
  out << h.dump() << '\n';
  for (std::size_t k = 0; k < view.records.size(); ++k) {
    const auto& r = view.records[k];
    json line = record_line(r, view.sequences.at(r.i, r.j), false);
    line["knowledge"] = knowledge_json(view.knowledge[k]);
    out << line.dump() << '\n';
  }
}

BobTranscript read_bob_transcript(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty transcript");
  BobTranscript t;
  try {
    const json h = json::parse(line);
    if (h.at("schema_version").get<int>() != kSchemaVersion) throw FormatError("unsupported schema version");
    if (h.at("party").get<std::string>() != "bob") throw FormatError("not a Bob transcript");
    t.setup = setup_from_json(h.at("setup"));
    t.view.mode = t.setup.bob_mode;
    t.view.reference_config = real_config_from_json(h.at("reference_config"));
    const int m = t.setup.params.m, n = t.setup.params.n;
    t.view.sequences = BitSequences(m, n);
    const std::size_t slots = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
    t.view.records.reserve(slots);
    t.view.knowledge.reserve(slots);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json r = json::parse(line);
      const int i = r.at("i").get<int>(), j = r.at("j").get<int>();
      if (t.view.records.size() >= slots || t.view.slot(i, j) != t.view.records.size())
        throw FormatError("transcript records out of order at line " + std::to_string(t.view.records.size() + 2));
      t.view.sequences.set(i, j, r.at("bit").get<int>());
      t.view.records.push_back({i, j, readings_from_json(r.at("detectors"))});
      t.view.knowledge.push_back(bob_knowledge_from_json(r.at("knowledge")));
    }
    if (t.view.records.size() != slots) throw FormatError("transcript is missing records");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed transcript: ") + e.what());
  }
  return t;
}

json to_json(const protocol::Opening& o) {
  const int m = o.sequences.m(), n = o.sequences.n();
  json seqs = json::array();
  for (int i = 0; i < m; ++i) {
    std::string row;
    for (int j = 0; j < n; ++j) row += static_cast<char>('0' + o.sequences.at(i, j));
    seqs.push_back(row);
  }
  json records = json::array();
  for (const auto& r : o.records)
    records.push_back({{"i", r.i}, {"j", r.j}, {"detectors", readings_to_json(r.readings, true)}});
  return {{"schema_version", kSchemaVersion},
          {"kind", "opening"},
          {"commit_bit", o.commit_bit},
          {"m", m},
          {"n", n},
          {"sequences", seqs},
          {"records", records}};
}

protocol::Opening opening_from_json(const json& j) {
  try {
    protocol::Opening o;
    o.commit_bit = j.at("commit_bit").get<int>();
    const int m = j.at("m").get<int>(), n = j.at("n").get<int>();
    const auto& seqs = j.at("sequences");
    if (m < 1 || n < 1 || seqs.size() != static_cast<std::size_t>(m))
      throw FormatError("opening must list m sequences");
    o.sequences = BitSequences(m, n);
    for (int i = 0; i < m; ++i) {
      const auto row = seqs[static_cast<std::size_t>(i)].get<std::string>();
      if (row.size() != static_cast<std::size_t>(n)) throw FormatError("sequence length differs from n");
      for (int k = 0; k < n; ++k) {
        const char c = row[static_cast<std::size_t>(k)];
        if (c != '0' && c != '1') throw FormatError("sequences must be binary strings");
        o.sequences.set(i, k, c - '0');
      }
    }
    for (const auto& r : j.at("records"))
      o.records.push_back({r.at("i").get<int>(), r.at("j").get<int>(), readings_from_json(r.at("detectors"))});
    return o;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed opening: ") + e.what());
  }
}

json to_json(const protocol::VerificationResult& v) {
  json out = {{"verdict", protocol::to_string(v.verdict)}, {"reason", protocol::to_string(v.reason)}};
  if (v.i >= 0) out["sequence"] = v.i;
  if (v.j >= 0) out["slot"] = v.j;
  return out;
}

json to_json(const adversary::ExperimentReport& r) {
  return {{"experiment", r.experiment}, {"trials", r.trials},   {"samples", r.samples},
          {"successes", r.successes},   {"empirical", r.empirical}, {"analytic", r.analytic},
          {"stderr", r.stderr_},        {"z", r.z},             {"sigma_bound", r.sigma_bound},
          {"pass", r.pass},             {"seed", r.seed}};
}

json to_json(const adversary::BindingReport& r) {
  return {{"per_sequence", to_json(r.per_sequence)},
          {"detected", r.detected},
          {"unattackable", r.unattackable},
          {"p_a", to_string(r.p_a)},
          {"p_b", to_string(r.p_b)},
          {"p_alter", to_string(r.p_alter)},
          {"extrapolate_m", r.extrapolate_m},
          {"extrapolated_empirical", r.extrapolated_empirical},
          {"extrapolated_analytic", r.extrapolated_analytic}};
}

json to_json(const adversary::ConcealingReport& r) {
  return {{"slot_knowledge", to_json(r.slot_knowledge)},
          {"certainty", to_json(r.certainty)},
          {"correct_guess", to_json(r.correct_guess)},
          {"certain_wrong", r.certain_wrong},
          {"p_b", to_string(r.p_b)},
          {"advantage_empirical", r.advantage_empirical},
          {"advantage_analytic", r.advantage_analytic},
          {"early_stop", r.early_stop}};
}

json to_json(const analysis::Plan& p) {
  json scenarios = json::array();
  for (const auto& s : p.scenarios) {
    json e = {{"name", s.name},
              {"check", s.check},
              {"p_a", to_string(s.p_a)},
              {"p_b", to_string(s.p_b)},
              {"satisfied", s.satisfied}};
    if (s.p_alter) e["p_alter"] = to_string(*s.p_alter);
    if (s.required_m) e["required_m"] = *s.required_m;
    if (s.required_n) e["required_n"] = *s.required_n;
    scenarios.push_back(e);
  }
  return {{"alpha", p.targets.alpha},
          {"beta", p.targets.beta},
          {"m", p.params.m},
          {"n", p.params.n},
          {"worst_p_alter", to_string(p.worst_p_alter)},
          {"worst_p_b", to_string(p.worst_p_b)},
          {"scenario_assumptions", scenarios}};
}

namespace {

struct TableRow {
  PhotonSource source;
  bool bits_equal;
  Detector detector;
  std::string expression;
  Rational value;
};

std::vector<TableRow> table_rows(const optics::ExactConfig& c) {
  std::vector<TableRow> rows;
  for (PhotonSource source : {PhotonSource::Alice, PhotonSource::Bob})
    for (bool equal : {true, false}) {
      const auto p = optics::per_photon_distribution(source, equal, c);
      for (Detector d : optics::kAllDetectors)
        rows.push_back({source, equal, d, std::string(optics::table_expression(source, equal, d)), p[index(d)]});
    }
  return rows;
}

}  // namespace

void write_tables_csv(std::ostream& out, const optics::ExactConfig& c, int precision) {
  out << "source,bits_equal,detector,expression,value,exact\n";
  for (const auto& r : table_rows(c))
    out << optics::to_string(r.source) << ',' << (r.bits_equal ? "true" : "false") << ','
        << optics::to_string(r.detector) << ",\"" << r.expression << "\"," << format_double(to_double(r.value), precision)
        << ',' << to_string(r.value) << '\n';
}

json tables_json(const optics::ExactConfig& c) {
  json rows = json::array();
  for (const auto& r : table_rows(c))
    rows.push_back({{"source", optics::to_string(r.source)},
                    {"bits_equal", r.bits_equal},
                    {"detector", optics::to_string(r.detector)},
                    {"expression", r.expression},
                    {"value", to_double(r.value)},
                    {"exact", to_string(r.value)}});
  return {{"config", {{"t_A", to_string(c.t_a)}, {"t_B0", to_string(c.t_b0)}, {"t_B1", to_string(c.t_b1)}}},
          {"rows", rows}};
}

void write_paths_csv(std::ostream& out, const optics::ExactConfig& c, int precision) {
  out << "source,bits_equal,detector,expression,value,exact,route\n";
  for (PhotonSource source : {PhotonSource::Alice, PhotonSource::Bob})
    for (bool equal : {true, false})
      for (const auto& path : optics::enumerate_paths(source, equal)) {
        const Rational p = path.probability(c);
        out << optics::to_string(source) << ',' << (equal ? "true" : "false") << ','
            << optics::to_string(path.detector) << ",\"" << path.expression() << "\","
            << format_double(to_double(p), precision) << ',' << to_string(p) << ",\"" << path.route << "\"\n";
      }
}

void write_surface_csv(std::ostream& out, const analysis::MaliciousBobOptimum& opt, int precision) {
  out << "t_B0,t_B1,p_B,p_B_printed\n";
  for (const auto& s : opt.surface)
    out << format_double(s.t_b0, precision) << ',' << format_double(s.t_b1, precision) << ','
        << format_double(s.p_b, precision) << ',' << format_double(s.p_b_printed, precision) << '\n';
}

}  // namespace cfqbc::io
