#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cfqbc/analysis.hpp"
#include "cfqbc/optics.hpp"
#include "cfqbc/random.hpp"
#include "cfqbc/rounds.hpp"

namespace cfqbc::protocol {

using analysis::SecurityParams;
using optics::SenderMode;
using rounds::AliceKnowledge;
using rounds::BobKnowledge;
using rounds::RoundOutcome;
using rounds::SlotReadings;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommitmentSetup {
  SecurityParams params;
  optics::RealConfig config = optics::RealConfig::honest();
  SenderMode alice_mode = SenderMode::SinglePhoton;
  SenderMode bob_mode = SenderMode::SinglePhoton;
  std::uint64_t seed = 0;

  void validate() const;
};

/// m rows of n bits.
class BitSequences {
 public:
  BitSequences() = default;
  BitSequences(int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }

  int at(int i, int j) const { return bits_[offset(i, j)]; }
  void set(int i, int j, int bit) { bits_[offset(i, j)] = static_cast<std::uint8_t>(bit & 1); }
  void flip(int i, int j) { bits_[offset(i, j)] ^= 1; }

  std::span<const std::uint8_t> row(int i) const {
    return std::span<const std::uint8_t>(bits_).subspan(offset(i, 0), static_cast<std::size_t>(n_));
  }
  int row_parity(int i) const;

  friend bool operator==(const BitSequences&, const BitSequences&) = default;

 private:
  std::size_t offset(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int m_ = 0;
  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Each row is uniform over the 2^(n-1) strings whose XOR equals `b`.
BitSequences alice_generate_sequences(int b, int m, int n, SplitMix64& rng);

/// Independent uniform bits.
BitSequences bob_generate_sequences(int m, int n, SplitMix64& rng);

/// One party's detector report for slot (i, j). Only that party's detectors
/// are populated.
struct RoundRecord {
  int i = 0;
  int j = 0;
  SlotReadings readings{};

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct AliceView {
  SenderMode mode = SenderMode::SinglePhoton;
  int commit_bit = 0;
  BitSequences sequences;
  std::vector<RoundRecord> records;  // row-major (i, j)
  std::vector<AliceKnowledge> knowledge;

  const RoundRecord& record(int i, int j) const { return records[slot(i, j)]; }
  AliceKnowledge knowledge_at(int i, int j) const { return knowledge[slot(i, j)]; }
  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(sequences.n()) + static_cast<std::size_t>(j);
  }
};

struct BobView {
  SenderMode mode = SenderMode::SinglePhoton;
  /// Splitters Bob verifies against: the agreed balanced BS_A and his own BS_B0/BS_B1.
  optics::RealConfig reference_config = optics::RealConfig::honest();
  BitSequences sequences;
  std::vector<RoundRecord> records;
  std::vector<BobKnowledge> knowledge;

  const RoundRecord& record(int i, int j) const { return records[slot(i, j)]; }
  BobKnowledge knowledge_at(int i, int j) const { return knowledge[slot(i, j)]; }
  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(sequences.n()) + static_cast<std::size_t>(j);
  }
};

/// Both views plus the ground-truth outcomes, which neither party sees.
struct CommitPhase {
  AliceView alice;
  BobView bob;
  std::vector<RoundOutcome> outcomes;
};

/// Labels derived from a party's own record, exactly as that party would.
AliceKnowledge alice_label(const RoundRecord& record, SenderMode alice_mode);
BobKnowledge bob_label(const RoundRecord& record, int bob_bit, SenderMode bob_mode);

/// Simulates all m*n slots. Slot (i, j) draws from its own stream keyed by
/// (seed, i, j), so the result does not depend on evaluation order.
CommitPhase run_commit_phase(const CommitmentSetup& setup, int commit_bit, const BitSequences& alice_sequences,
                             const BitSequences& bob_sequences);

/// Draws both parties' sequences from the setup seed and runs the commit phase.
CommitPhase run_commit_phase(const CommitmentSetup& setup, int commit_bit);

struct Opening {
  int commit_bit = 0;
  BitSequences sequences;
  std::vector<RoundRecord> records;

  friend bool operator==(const Opening&, const Opening&) = default;
};

Opening open(const AliceView& alice_view, int commit_bit, const BitSequences& alice_sequences);

enum class Verdict { Accept, Reject };
enum class RejectReason { None, XorMismatch, KnowledgeContradiction, RecordInconsistency };

std::string_view to_string(Verdict v);
std::string_view to_string(RejectReason r);

struct VerificationResult {
  Verdict verdict = Verdict::Accept;
  RejectReason reason = RejectReason::None;
  int i = -1;
  int j = -1;

  bool accepted() const { return verdict == Verdict::Accept; }
  static VerificationResult accept() { return {}; }
  static VerificationResult reject(RejectReason r, int i, int j = -1) { return {Verdict::Reject, r, i, j}; }

  friend bool operator==(const VerificationResult&, const VerificationResult&) = default;
};

/// Bob's checks on an opening, in order: every row XORs to the commit bit;
/// every slot where he was certain matches the revealed bit; every slot's
/// combined report is a possible outcome of the network for the revealed bits.
/// Throws ProtocolError when the opening's dimensions differ from Bob's.
VerificationResult verify_opening(const BobView& bob_view, const Opening& opening);

/// The same checks restricted to sequence i.
VerificationResult verify_sequence(const BobView& bob_view, const Opening& opening, int i);

}  // namespace cfqbc::protocol
