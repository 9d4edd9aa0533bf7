#include <doctest.h>

#include <sstream>

#include "cfqbc/serialize.hpp"

using namespace cfqbc;
using namespace cfqbc::io;

namespace {

protocol::CommitmentSetup setup_of(int m, int n, std::uint64_t seed) {
  protocol::CommitmentSetup s;
  s.params = {m, n};
  s.seed = seed;
  return s;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("openings survive JSON") {
  const auto phase = protocol::run_commit_phase(setup_of(3, 4, 1), 1);
  const auto opening = protocol::open(phase.alice, 1, phase.alice.sequences);
  const auto text = to_json(opening).dump();
  CHECK(opening_from_json(json::parse(text)) == opening);
}

TEST_CASE("malformed openings are rejected") {
  const auto phase = protocol::run_commit_phase(setup_of(1, 2, 1), 0);
  auto j = to_json(protocol::open(phase.alice, 0, phase.alice.sequences));
  auto bad = j;
  bad["sequences"][0] = "0x";
  CHECK_THROWS_AS(opening_from_json(bad), FormatError);
  bad = j;
  bad["sequences"][0] = "011";
  CHECK_THROWS_AS(opening_from_json(bad), FormatError);
  bad = j;
  bad.erase("records");
  CHECK_THROWS_AS(opening_from_json(bad), FormatError);
}

TEST_CASE("Bob's transcript carries everything verification needs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto setup = setup_of(2, 5, seed);
    const auto phase = protocol::run_commit_phase(setup, 0);
    std::stringstream out;
    write_bob_transcript(out, setup, phase.bob);
    CHECK(count_lines(out.str()) == 1 + 10);
    const auto back = read_bob_transcript(out);
    CHECK(back.setup.seed == seed);
    CHECK(back.view.records == phase.bob.records);
    CHECK(back.view.knowledge == phase.bob.knowledge);
    CHECK(back.view.sequences == phase.bob.sequences);

    auto opening = protocol::open(phase.alice, 0, phase.alice.sequences);
    CHECK(protocol::verify_opening(back.view, opening) == protocol::verify_opening(phase.bob, opening));
    opening.sequences.flip(0, 0);
    CHECK(protocol::verify_opening(back.view, opening) == protocol::verify_opening(phase.bob, opening));
  }
}

TEST_CASE("transcripts are byte-identical for a seed") {
  const auto setup = setup_of(3, 3, 123);
  std::string texts[2];
  for (auto& text : texts) {
    const auto phase = protocol::run_commit_phase(setup, 1);
    std::ostringstream out;
    write_alice_transcript(out, setup, phase.alice);
    write_bob_transcript(out, setup, phase.bob);
    text = out.str();
  }
  CHECK(texts[0] == texts[1]);
  const auto header = json::parse(texts[0].substr(0, texts[0].find('\n')));
  CHECK(header["schema_version"] == kSchemaVersion);
  CHECK(header["party"] == "alice");
  CHECK(header["commit_bit"] == 1);
}

TEST_CASE("readings list each photon's polarization") {
  rounds::SlotReadings r{};
  r[optics::index(optics::Detector::D1)].add(optics::Polarization::V);
  r[optics::index(optics::Detector::D1)].add(optics::Polarization::H);
  const auto j = readings_to_json(r, true);
  CHECK(j["D1"]["count"] == 2);
  CHECK(j["D1"]["polarizations"] == json::array({"H", "V"}));
  CHECK_FALSE(j.contains("DB0"));
  CHECK(readings_from_json(j) == r);
  auto bad = j;
  bad["D1"]["count"] = 3;
  CHECK_THROWS_AS(readings_from_json(bad), FormatError);
}

TEST_CASE("table and path exports") {
  const auto c = optics::ExactConfig::honest();
  std::ostringstream tables, paths;
  write_tables_csv(tables, c, 12);
  write_paths_csv(paths, c, 12);
  CHECK(count_lines(tables.str()) == 1 + 20);
  CHECK(tables.str().find("alice,true,D0,") != std::string::npos);
  CHECK(tables.str().find(",5/16\n") != std::string::npos);
  CHECK(paths.str().rfind("source,bits_equal,detector,expression,value,exact,route\n", 0) == 0);
  CHECK(tables_json(c)["rows"].size() == 20);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.5, 12) == "0.5");
  CHECK(format_double(53.0 / 128, 4) == "0.4141");
  CHECK(format_double(1e-7, 3) == "1e-07");
}

TEST_CASE("plans serialize their scenario checks") {
  const auto j = to_json(analysis::plan_parameters({1e-6, 1e-6}));
  CHECK(j["m"] == 65);
  CHECK(j["n"] == 25);
  CHECK(j["scenario_assumptions"].size() == 6);
  CHECK(j["worst_p_alter"] == "21/26");
}
