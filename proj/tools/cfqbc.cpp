// Command-line front end: tables, planning, simulation, experiments and oracle checks.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfqbc/adversary.hpp"
#include "cfqbc/analysis.hpp"
#include "cfqbc/serialize.hpp"
#include "cfqbc/version.hpp"

namespace fs = std::filesystem;
using namespace cfqbc;
using io::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailed = 2;
constexpr int kIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flags that only choose where output lands stay out of manifests, so reruns
/// into different directories produce identical bytes.
bool location_flag(const std::string& name) { return name == "out"; }

json make_manifest(const CLI::App& sub, const std::vector<std::string>& outputs) {
  json flags = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || location_flag(name)) continue;
    const auto& results = opt->results();
    if (results.empty()) {
      if (!opt->get_default_str().empty()) flags[name] = opt->get_default_str();
    } else if (results.size() == 1) {
      flags[name] = results.front();
    } else {
      flags[name] = results;
    }
  }
  return {{"tool", "cfqbc"}, {"version", kVersion}, {"subcommand", sub.get_name()}, {"flags", flags},
          {"outputs", outputs}};
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CFQBC_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Writes to `out` when given, else to stdout.
void emit(const std::string& out, const std::string& content) {
  if (out.empty()) std::cout << content;
  else write_file(out, content);
}

optics::ExactConfig parse_config(const std::string& text) {
  std::vector<Rational> values;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    try {
      values.push_back(parse_rational(item));
    } catch (const std::invalid_argument&) {
      throw UsageError("--config: cannot parse '" + item + "'");
    }
  }
  if (values.size() != 3) throw UsageError("--config expects t_A,t_B0,t_B1");
  try {
    return optics::ExactConfig::make(values[0], values[1], values[2]);
  } catch (const optics::DomainError& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

struct TablesArgs {
  std::string config = "1/2,1/2,1/2";
  std::string format = "csv";
  std::string out;
  int precision = 12;
};

int cmd_tables(const CLI::App& sub, const TablesArgs& a) {
  const auto c = parse_config(a.config);
  if (a.format == "json") {
    json j = io::tables_json(c);
    j["schema_version"] = io::kSchemaVersion;
    json sums = json::object();
    for (auto source : {optics::PhotonSource::Alice, optics::PhotonSource::Bob})
      for (bool equal : {true, false}) {
        Rational total(0);
        for (const auto& v : optics::per_photon_distribution(source, equal, c)) total += v;
        sums[std::string(optics::to_string(source)) + (equal ? "_equal" : "_differ")] = to_string(total);
      }
    j["column_sums"] = sums;
    j["manifest"] = make_manifest(sub, a.out.empty() ? std::vector<std::string>{} : std::vector{a.out});
    emit(a.out, dump(j));
    return kOk;
  }
  std::ostringstream s;
  io::write_tables_csv(s, c, a.precision);
  emit(a.out, s.str());
  if (!a.out.empty()) write_file(a.out + ".manifest.json", dump(make_manifest(sub, {a.out})));
  return kOk;
}

struct PathsArgs {
  std::string config = "1/2,1/2,1/2";
  std::string out;
  int precision = 12;
};

int cmd_paths(const CLI::App& sub, const PathsArgs& a) {
  const auto c = parse_config(a.config);
  std::ostringstream s;
  io::write_paths_csv(s, c, a.precision);
  emit(a.out, s.str());
  if (!a.out.empty()) write_file(a.out + ".manifest.json", dump(make_manifest(sub, {a.out})));
  return kOk;
}

struct PlanArgs {
  double alpha = 1e-6;
  double beta = 1e-6;
  std::string out;
};

int cmd_plan(const CLI::App& sub, const PlanArgs& a) {
  if (!(a.alpha > 0 && a.alpha < 1)) throw UsageError("--alpha must lie in (0, 1)");
  if (!(a.beta > 0 && a.beta < 1)) throw UsageError("--beta must lie in (0, 1)");
  const auto plan = analysis::plan_parameters({a.alpha, a.beta});
  json j = io::to_json(plan);
  j["schema_version"] = io::kSchemaVersion;
  j["manifest"] = make_manifest(sub, a.out.empty() ? std::vector<std::string>{} : std::vector{a.out});
  emit(a.out, dump(j));
  return kOk;
}

struct SimulateArgs {
  int m = 65;
  int n = 25;
  std::uint64_t seed = 0;
  std::string alice_strategy = "honest";
  std::string bob_strategy = "honest";
  std::optional<int> commit_bit;
  std::string out;
};

int cmd_simulate(const CLI::App& sub, const SimulateArgs& a) {
  adversary::AliceStrategy alice;
  adversary::BobStrategy bob;
  try {
    alice = adversary::parse_alice_strategy(a.alice_strategy);
    bob = adversary::parse_bob_strategy(a.bob_strategy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  protocol::CommitmentSetup base;
  base.params = {a.m, a.n};
  base.seed = a.seed;
  const auto setup = adversary::apply(base, alice, bob);
  setup.validate();

  const int b = a.commit_bit ? *a.commit_bit
                             : derive_stream(a.seed, {tag(StreamTag::AliceSequences), 1}).bit();
  const auto phase = protocol::run_commit_phase(setup, b);
  auto fabricate_rng = derive_stream(a.seed, {tag(StreamTag::Fabrication)});
  auto opening = adversary::alice_opening(alice, phase.alice, fabricate_rng);

  json report = {{"schema_version", io::kSchemaVersion},
                 {"kind", "simulation"},
                 {"setup", io::to_json(setup)},
                 {"alice_strategy", adversary::to_string(alice)},
                 {"bob_strategy", adversary::to_string(bob)},
                 {"commit_bit", b}};

  if (alice.alter_one_bit) {
    auto attack_rng = derive_stream(a.seed, {tag(StreamTag::AliceAttack)});
    auto altered = adversary::alice_alter_opening(phase.alice, opening, attack_rng);
    opening = std::move(altered.opening);
    std::uint64_t accepted = 0;
    json per_sequence = json::array();
    for (int i = 0; i < setup.params.m; ++i) {
      const auto r = protocol::verify_sequence(phase.bob, opening, i);
      accepted += r.accepted();
      per_sequence.push_back({{"sequence", i},
                              {"altered_slot", altered.altered_slot[static_cast<std::size_t>(i)]},
                              {"verdict", protocol::to_string(r.verdict)},
                              {"reason", protocol::to_string(r.reason)}});
    }
    const auto c = optics::ExactConfig::make(Rational(setup.config.t_a), Rational(setup.config.t_b0),
                                             Rational(setup.config.t_b1));
    const Rational p_a = analysis::p_a_enum(c, setup.alice_mode, setup.bob_mode);
    const Rational p_b = analysis::p_b_enum(c, setup.alice_mode, setup.bob_mode);
    const double p_alter = to_double(analysis::p_alter(p_a, p_b));
    const double per_seq = p_alter * (1.0 - std::pow(to_double(p_a), setup.params.n));
    report["alteration"] = {{"sequences", setup.params.m},
                            {"accepted", accepted},
                            {"detected", static_cast<std::uint64_t>(setup.params.m) - accepted},
                            {"unattackable", altered.unattackable()},
                            {"empirical_acceptance", static_cast<double>(accepted) / setup.params.m},
                            {"analytic_acceptance", per_seq},
                            {"p_alter", to_string(analysis::p_alter(p_a, p_b))},
                            {"p_a", to_string(p_a)},
                            {"p_b", to_string(p_b)},
                            {"analytic_all_accepted", std::pow(per_seq, setup.params.m)},
                            {"per_sequence", per_sequence}};
  }

  if (bob != adversary::BobStrategy::Honest) {
    auto guess_rng = derive_stream(a.seed, {tag(StreamTag::BobGuess)});
    const auto e = adversary::bob_extract_commit(phase.bob, guess_rng);
    std::uint64_t known = 0;
    for (const auto& k : phase.bob.knowledge) known += k.known();
    report["extraction"] = {{"guess", e.guess},
                            {"certain", e.certain},
                            {"correct", e.guess == b},
                            {"known_slots", known},
                            {"slots", phase.bob.knowledge.size()}};
  }

  const auto verdict = protocol::verify_opening(phase.bob, opening);
  report["verification"] = io::to_json(verdict);

  const fs::path dir = output_dir(a.out);
  const std::vector<std::string> files = {"alice_transcript.jsonl", "bob_transcript.jsonl", "opening.json",
                                          "verification.json", "report.json"};
  const json manifest = make_manifest(sub, files);
  report["manifest"] = manifest;

  std::ostringstream alice_text, bob_text;
  io::write_alice_transcript(alice_text, setup, phase.alice, manifest);
  io::write_bob_transcript(bob_text, setup, phase.bob, manifest);
  json opening_json = io::to_json(opening);
  opening_json["manifest"] = manifest;
  json verdict_json = io::to_json(verdict);
  verdict_json["schema_version"] = io::kSchemaVersion;
  verdict_json["kind"] = "verification";
  verdict_json["manifest"] = manifest;

  write_file(dir / files[0], alice_text.str());
  write_file(dir / files[1], bob_text.str());
  write_file(dir / files[2], dump(opening_json));
  write_file(dir / files[3], dump(verdict_json));
  write_file(dir / files[4], dump(report));

  std::cout << "verdict " << protocol::to_string(verdict.verdict);
  if (!verdict.accepted()) std::cout << " (" << protocol::to_string(verdict.reason) << ")";
  std::cout << "\n";
  return verdict.accepted() ? kOk : kFailed;
}

struct VerifyArgs {
  std::string transcript;
  std::string opening;
  std::string out;
};

int cmd_verify(const CLI::App& sub, const VerifyArgs& a) {
  std::istringstream transcript(read_file(a.transcript));
  const auto bob = io::read_bob_transcript(transcript);
  json opening_json;
  try {
    opening_json = json::parse(read_file(a.opening));
  } catch (const json::parse_error& e) {
    throw io::FormatError(std::string("malformed opening: ") + e.what());
  }
  const auto verdict = protocol::verify_opening(bob.view, io::opening_from_json(opening_json));
  json j = io::to_json(verdict);
  j["schema_version"] = io::kSchemaVersion;
  j["kind"] = "verification";
  j["manifest"] = make_manifest(sub, a.out.empty() ? std::vector<std::string>{} : std::vector{a.out});
  emit(a.out, dump(j));
  return verdict.accepted() ? kOk : kFailed;
}

json config_json(const optics::ExactConfig& c) {
  return {{"t_A", to_string(c.t_a)}, {"t_B0", to_string(c.t_b0)}, {"t_B1", to_string(c.t_b1)}};
}

json deviation_json(const analysis::OracleDeviation& d) {
  json j = {{"max_deviation_p_a", to_string(d.max_p_a)},
            {"max_deviation_p_b", to_string(d.max_p_b)},
            {"mismatches", d.mismatches}};
  if (d.worst) j["worst_config"] = config_json(*d.worst);
  return j;
}

struct OracleArgs {
  int samples = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_verify_oracle(const CLI::App& sub, const OracleArgs& a) {
  if (a.samples < 1) throw UsageError("--samples must be at least 1");
  const auto r = analysis::verify_closed_forms(a.samples, a.seed);
  json j = {{"schema_version", io::kSchemaVersion},
            {"kind", "oracle"},
            {"samples", r.samples},
            {"seed", r.seed},
            {"honest", {{"p_a", to_string(r.honest_p_a)}, {"p_b", to_string(r.honest_p_b)}}},
            {"closed_form", deviation_json(r.closed)},
            {"published_polynomials", deviation_json(r.printed)},
            {"pass", r.pass()},
            {"manifest", make_manifest(sub, a.out.empty() ? std::vector<std::string>{} : std::vector{a.out})}};
  emit(a.out, dump(j));
  if (!r.pass()) {
    std::cerr << "closed form disagrees with enumeration at " << config_json(*r.closed.worst).dump() << "\n";
    return kFailed;
  }
  return kOk;
}

struct Fig4Args {
  int resolution = 201;
  std::string out;
  std::string format = "csv";
  int precision = 12;
};

int cmd_fig4(const CLI::App& sub, const Fig4Args& a) {
  if (a.resolution < 101) throw UsageError("--resolution must be at least 101");
  const auto opt = analysis::optimize_malicious_bob(a.resolution);
  const std::string name = a.format == "json" ? "fig4_surface.json" : "fig4_surface.csv";
  const fs::path path = a.out.empty() ? output_dir("") / name : fs::path(a.out);
  const json manifest = make_manifest(sub, {path.filename().string()});
  if (a.format == "json") {
    json surface = json::array();
    for (const auto& s : opt.surface) surface.push_back({s.t_b0, s.t_b1, s.p_b, s.p_b_printed});
    const json j = {{"schema_version", io::kSchemaVersion},
                    {"kind", "surface"},
                    {"resolution", opt.resolution},
                    {"columns", {"t_B0", "t_B1", "p_B", "p_B_printed"}},
                    {"argmax",
                     {{"t_B0", to_string(opt.exact_t_b0)}, {"t_B1", to_string(opt.exact_t_b1)},
                      {"p_B", to_string(opt.exact_p_b)}}},
                    {"surface", surface},
                    {"manifest", manifest}};
    write_file(path, dump(j));
  } else {
    std::ostringstream s;
    io::write_surface_csv(s, opt, a.precision);
    write_file(path, s.str());
    write_file(path.string() + ".manifest.json", dump(manifest));
  }
  std::cout << "max " << io::format_double(opt.p_b, a.precision) << " at ("
            << io::format_double(opt.t_b0, a.precision) << "," << io::format_double(opt.t_b1, a.precision) << ")\n";
  return kOk;
}

struct ExperimentArgs {
  std::string kind = "binding";
  std::string alice_strategy = "alter";
  std::string bob_strategy = "extract-commit";
  int m = 1;
  int n = 25;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  double sigma = 3.0;
  std::string out;
};

int cmd_experiment(const CLI::App& sub, const ExperimentArgs& a) {
  protocol::CommitmentSetup base;
  base.params = {a.m, a.n};
  base.seed = a.seed;
  if (a.trials < 1) throw UsageError("--trials must be positive");
  json j = {{"schema_version", io::kSchemaVersion}, {"kind", "experiment/" + a.kind}};
  bool pass = false;
  try {
    if (a.kind == "binding") {
      const auto r = adversary::run_binding_experiment(base, adversary::parse_alice_strategy(a.alice_strategy),
                                                       a.trials, a.sigma);
      j["report"] = io::to_json(r);
      pass = r.per_sequence.pass;
    } else if (a.kind == "concealing") {
      const auto r = adversary::run_concealing_experiment(base, adversary::parse_bob_strategy(a.bob_strategy),
                                                          a.trials, a.sigma);
      j["report"] = io::to_json(r);
      pass = r.slot_knowledge.pass && r.certainty.pass && r.certain_wrong == 0;
    } else {
      const auto r = adversary::run_round_experiment(base, a.trials, a.sigma);
      j["report"] = {{"bob_knows", io::to_json(r.bob_knows)}, {"alice_confirms", io::to_json(r.alice_confirms)}};
      pass = r.bob_knows.pass && r.alice_confirms.pass;
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  j["pass"] = pass;
  j["manifest"] = make_manifest(sub, a.out.empty() ? std::vector<std::string>{} : std::vector{a.out});
  emit(a.out, dump(j));
  return pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual quantum bit commitment: tables, planning, simulation and checks", "cfqbc"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  TablesArgs tables;
  auto* tables_cmd = app.add_subcommand("tables", "Per-detector probability tables");
  tables_cmd->add_option("--config", tables.config, "t_A,t_B0,t_B1 as fractions or decimals")->capture_default_str();
  tables_cmd->add_option("--format", tables.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  tables_cmd->add_option("--precision", tables.precision)->check(CLI::Range(1, 17))->capture_default_str();
  tables_cmd->add_option("--out", tables.out, "output file (stdout when omitted)");

  PathsArgs paths;
  auto* paths_cmd = app.add_subcommand("paths", "Every optical route with its probability");
  paths_cmd->add_option("--config", paths.config)->capture_default_str();
  paths_cmd->add_option("--precision", paths.precision)->check(CLI::Range(1, 17))->capture_default_str();
  paths_cmd->add_option("--out", paths.out);

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Smallest (m, n) meeting the binding and concealing targets");
  plan_cmd->add_option("--alpha", plan.alpha)->capture_default_str();
  plan_cmd->add_option("--beta", plan.beta)->capture_default_str();
  plan_cmd->add_option("--out", plan.out);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "One commit/open cycle with transcripts");
  sim_cmd->add_option("--m", sim.m)->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--n", sim.n)->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--alice-strategy", sim.alice_strategy,
                      "honest | optimal-splitter | no-photon, optionally prefixed alter-; or alter")
      ->capture_default_str();
  sim_cmd->add_option("--bob-strategy", sim.bob_strategy, "honest | optimal-splitters | no-photon | extract-commit")
      ->capture_default_str();
  sim_cmd->add_option("--commit-bit", sim.commit_bit)->check(CLI::Range(0, 1));
  sim_cmd->add_option("--out", sim.out, "output directory (default $CFQBC_OUTPUT_DIR or .)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check an opening against Bob's transcript");
  verify_cmd->add_option("--transcript", verify.transcript)->required();
  verify_cmd->add_option("--opening", verify.opening)->required();
  verify_cmd->add_option("--out", verify.out);

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("verify-oracle", "Closed forms against exact enumeration");
  oracle_cmd->add_option("--samples", oracle.samples)->capture_default_str();
  oracle_cmd->add_option("--seed", oracle.seed)->capture_default_str();
  oracle_cmd->add_option("--out", oracle.out);

  Fig4Args fig4;
  auto* fig4_cmd = app.add_subcommand("fig4", "P_B surface over Bob's splitters with t_A = 1/2");
  fig4_cmd->add_option("--resolution", fig4.resolution)->capture_default_str();
  fig4_cmd->add_option("--format", fig4.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  fig4_cmd->add_option("--precision", fig4.precision)->check(CLI::Range(1, 17))->capture_default_str();
  fig4_cmd->add_option("--out", fig4.out, "output file (default $CFQBC_OUTPUT_DIR/fig4_surface.csv)");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo check of an attack against its prediction");
  exp_cmd->add_option("--kind", exp.kind)
      ->check(CLI::IsMember({"binding", "concealing", "rounds"}))
      ->capture_default_str();
  exp_cmd->add_option("--alice-strategy", exp.alice_strategy)->capture_default_str();
  exp_cmd->add_option("--bob-strategy", exp.bob_strategy)->capture_default_str();
  exp_cmd->add_option("--m", exp.m)->check(CLI::PositiveNumber)->capture_default_str();
  exp_cmd->add_option("--n", exp.n)->check(CLI::PositiveNumber)->capture_default_str();
  exp_cmd->add_option("--trials", exp.trials)->capture_default_str();
  exp_cmd->add_option("--seed", exp.seed)->capture_default_str();
  exp_cmd->add_option("--sigma", exp.sigma)->check(CLI::PositiveNumber)->capture_default_str();
  exp_cmd->add_option("--out", exp.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*tables_cmd) return cmd_tables(*tables_cmd, tables);
    if (*paths_cmd) return cmd_paths(*paths_cmd, paths);
    if (*plan_cmd) return cmd_plan(*plan_cmd, plan);
    if (*sim_cmd) return cmd_simulate(*sim_cmd, sim);
    if (*verify_cmd) return cmd_verify(*verify_cmd, verify);
    if (*oracle_cmd) return cmd_verify_oracle(*oracle_cmd, oracle);
    if (*fig4_cmd) return cmd_fig4(*fig4_cmd, fig4);
    if (*exp_cmd) return cmd_experiment(*exp_cmd, exp);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const io::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const protocol::ProtocolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
