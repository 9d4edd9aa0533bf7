#include "cfqbc/protocol.hpp"

#include <string>

namespace cfqbc::protocol {

using optics::Detector;
using optics::index;

void CommitmentSetup::validate() const {
  if (params.m < 1 || params.n < 1) throw std::invalid_argument("m and n must be positive");
  if (alice_mode == SenderMode::NoPhoton && bob_mode == SenderMode::NoPhoton)
    throw std::invalid_argument("at least one party must send photons");
  config.validate();
}

BitSequences::BitSequences(int m, int n) : m_(m), n_(n) {
  if (m < 1 || n < 1) throw std::invalid_argument("m and n must be positive");
  bits_.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), 0);
}

int BitSequences::row_parity(int i) const {
  int p = 0;
  for (auto bit : row(i)) p ^= bit;
  return p;
}

BitSequences alice_generate_sequences(int b, int m, int n, SplitMix64& rng) {
  BitSequences s(m, n);
  for (int i = 0; i < m; ++i) {
    int parity = 0;
    for (int j = 0; j + 1 < n; ++j) {
      const int bit = rng.bit();
      s.set(i, j, bit);
      parity ^= bit;
    }
    s.set(i, n - 1, parity ^ (b & 1));
  }
  return s;
}

BitSequences bob_generate_sequences(int m, int n, SplitMix64& rng) {
  BitSequences s(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) s.set(i, j, rng.bit());
  return s;
}

namespace {

RoundRecord project(int i, int j, const SlotReadings& full, bool alice_side) {
  RoundRecord r{i, j, {}};
  for (Detector d : optics::kAllDetectors)
    if (optics::at_alice_site(d) == alice_side) r.readings[index(d)] = full[index(d)];
  return r;
}

bool only_alice_detectors(const RoundRecord& r) {
  for (Detector d : optics::kBobDetectors)
    if (r.readings[index(d)].count() != 0) return false;
  return true;
}

class SupportChecker {
 public:
  explicit SupportChecker(const BobView& bob)
      : atoms_(rounds::joint_distribution(bob.reference_config, SenderMode::SinglePhoton, bob.mode)) {}

  bool consistent(int a, int b, const SlotReadings& alice_report, const SlotReadings& bob_report) const {
    for (const auto& atom : atoms_) {
      if (atom.outcome.bits_equal != (a == b)) continue;
      const auto r = rounds::readings(atom.outcome, a, b);
      bool match = true;
      for (Detector d : optics::kAllDetectors) {
        const auto& reported = optics::at_alice_site(d) ? alice_report[index(d)] : bob_report[index(d)];
        if (!(r[index(d)] == reported)) {
          match = false;
          break;
        }
      }
      if (match) return true;
    }
    return false;
  }

 private:
  rounds::JointDistribution<double> atoms_;
};

const RoundRecord* find_record(const Opening& opening, int i, int j, int n) {
  const std::size_t k = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
  if (k < opening.records.size() && opening.records[k].i == i && opening.records[k].j == j)
    return &opening.records[k];
  return nullptr;
}

void check_dimensions(const BobView& bob, const Opening& opening) {
  if (opening.sequences.m() != bob.sequences.m() || opening.sequences.n() != bob.sequences.n())
    throw ProtocolError("opening dimensions " + std::to_string(opening.sequences.m()) + "x" +
                        std::to_string(opening.sequences.n()) + " do not match the commit phase " +
                        std::to_string(bob.sequences.m()) + "x" + std::to_string(bob.sequences.n()));
  if (opening.commit_bit != 0 && opening.commit_bit != 1) throw ProtocolError("commit bit must be 0 or 1");
  const std::size_t slots = static_cast<std::size_t>(bob.sequences.m()) * static_cast<std::size_t>(bob.sequences.n());
  if (bob.records.size() != slots || bob.knowledge.size() != slots)
    throw ProtocolError("Bob's view is incomplete");
}

VerificationResult verify_rows(const BobView& bob, const Opening& opening, int first, int last) {
  const int n = bob.sequences.n();
  for (int i = first; i < last; ++i)
    if (opening.sequences.row_parity(i) != opening.commit_bit)
      return VerificationResult::reject(RejectReason::XorMismatch, i);

  for (int i = first; i < last; ++i)
    for (int j = 0; j < n; ++j) {
      const auto k = bob.knowledge_at(i, j);
      if (k.known() && *k.bit != opening.sequences.at(i, j))
        return VerificationResult::reject(RejectReason::KnowledgeContradiction, i, j);
    }

  const SupportChecker support(bob);
  for (int i = first; i < last; ++i)
    for (int j = 0; j < n; ++j) {
      const RoundRecord* alice = find_record(opening, i, j, n);
      if (alice == nullptr || !only_alice_detectors(*alice) ||
          !support.consistent(opening.sequences.at(i, j), bob.sequences.at(i, j), alice->readings,
                              bob.record(i, j).readings))
        return VerificationResult::reject(RejectReason::RecordInconsistency, i, j);
    }
  return VerificationResult::accept();
}

}  // namespace

AliceKnowledge alice_label(const RoundRecord& record, SenderMode alice_mode) {
  return rounds::classify_alice_count(rounds::alice_site_count(record.readings),
                                      alice_mode == SenderMode::SinglePhoton);
}

BobKnowledge bob_label(const RoundRecord& record, int bob_bit, SenderMode bob_mode) {
  const std::optional<int> own = bob_mode == SenderMode::SinglePhoton ? std::optional<int>(bob_bit) : std::nullopt;
  return rounds::classify_bob_readings(record.readings[index(Detector::DB0)], record.readings[index(Detector::DB1)],
                                       own);
}

CommitPhase run_commit_phase(const CommitmentSetup& setup, int commit_bit, const BitSequences& alice_sequences,
                             const BitSequences& bob_sequences) {
  setup.validate();
  const int m = setup.params.m, n = setup.params.n;
  if (alice_sequences.m() != m || alice_sequences.n() != n || bob_sequences.m() != m || bob_sequences.n() != n)
    throw ProtocolError("sequences must be " + std::to_string(m) + "x" + std::to_string(n));

  const std::size_t slots = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
  CommitPhase out;
  out.alice.mode = setup.alice_mode;
  out.alice.commit_bit = commit_bit & 1;
  out.alice.sequences = alice_sequences;
  out.bob.mode = setup.bob_mode;
  out.bob.reference_config = optics::RealConfig{0.5, setup.config.t_b0, setup.config.t_b1};
  out.bob.sequences = bob_sequences;
  out.alice.records.reserve(slots);
  out.alice.knowledge.reserve(slots);
  out.bob.records.reserve(slots);
  out.bob.knowledge.reserve(slots);
  out.outcomes.reserve(slots);

  const rounds::RoundSampler sampler(setup.config, setup.alice_mode, setup.bob_mode);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = alice_sequences.at(i, j);
      const int b = bob_sequences.at(i, j);
      auto rng = derive_stream(setup.seed, {tag(StreamTag::Round), static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(j)});
      const RoundOutcome outcome = sampler.sample(a, b, rng);
      const SlotReadings full = rounds::readings(outcome, a, b);

      RoundRecord alice_record = project(i, j, full, true);
      RoundRecord bob_record = project(i, j, full, false);
      out.alice.knowledge.push_back(alice_label(alice_record, setup.alice_mode));
      out.bob.knowledge.push_back(bob_label(bob_record, b, setup.bob_mode));
      out.alice.records.push_back(alice_record);
      out.bob.records.push_back(bob_record);
      out.outcomes.push_back(outcome);
    }
  }
  return out;
}

CommitPhase run_commit_phase(const CommitmentSetup& setup, int commit_bit) {
  setup.validate();
  auto alice_rng = derive_stream(setup.seed, {tag(StreamTag::AliceSequences)});
  auto bob_rng = derive_stream(setup.seed, {tag(StreamTag::BobSequences)});
  const auto a = alice_generate_sequences(commit_bit, setup.params.m, setup.params.n, alice_rng);
  const auto b = bob_generate_sequences(setup.params.m, setup.params.n, bob_rng);
  return run_commit_phase(setup, commit_bit, a, b);
}

Opening open(const AliceView& alice_view, int commit_bit, const BitSequences& alice_sequences) {
  return Opening{commit_bit, alice_sequences, alice_view.records};
}

std::string_view to_string(Verdict v) { return v == Verdict::Accept ? "accept" : "reject"; }

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::XorMismatch: return "xor_mismatch";
    case RejectReason::KnowledgeContradiction: return "knowledge_contradiction";
    case RejectReason::RecordInconsistency: return "record_inconsistency";
  }
  return "?";
}

VerificationResult verify_opening(const BobView& bob_view, const Opening& opening) {
  check_dimensions(bob_view, opening);
  return verify_rows(bob_view, opening, 0, bob_view.sequences.m());
}

VerificationResult verify_sequence(const BobView& bob_view, const Opening& opening, int i) {
  check_dimensions(bob_view, opening);
  if (i < 0 || i >= bob_view.sequences.m()) throw ProtocolError("sequence index out of range");
  return verify_rows(bob_view, opening, i, i + 1);
}

}  // namespace cfqbc::protocol
