#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cfqbc/protocol.hpp"

namespace cfqbc::adversary {

using protocol::AliceView;
using protocol::BobView;
using protocol::CommitmentSetup;
using protocol::Opening;

enum class AliceBase { Honest, OptimalSplitter, NoPhoton };

struct AliceStrategy {
  AliceBase base = AliceBase::Honest;
  bool alter_one_bit = false;
};

enum class BobStrategy { Honest, OptimalSplitters, NoPhoton, ExtractCommit };

std::string to_string(const AliceStrategy& s);
std::string_view to_string(BobStrategy s);

/// Accepts honest, optimal-splitter, no-photon, and each prefixed with
/// "alter" (e.g. "alter", "alter-optimal-splitter").
AliceStrategy parse_alice_strategy(std::string_view name);
BobStrategy parse_bob_strategy(std::string_view name);

/// Physical setup the strategies produce: splitter choices taken from the
/// analysis optimizers, no-photon variants switch the sender mode.
CommitmentSetup apply(const CommitmentSetup& base, const AliceStrategy& alice, BobStrategy bob);

/// Opening of an Alice who sent no photons: her real record (at most Bob's
/// photon) plus one invented photon of her revealed polarization at one of
/// her detectors, drawn from the balanced single-photon column.
Opening alice_fabricate_opening(const AliceView& view, int commit_bit, const protocol::BitSequences& sequences,
                                SplitMix64& rng);

/// The opening Alice sends before any alteration.
Opening alice_opening(const AliceStrategy& strategy, const AliceView& view, SplitMix64& rng);

struct AlteredOpening {
  Opening opening;
  /// Slot flipped in each sequence, or -1 when no slot was Uncertain and the
  /// sequence was left as is (it then fails the XOR check).
  std::vector<int> altered_slot;

  int unattackable() const;
};

/// Reveals the other commit bit: in every sequence flips one uniformly chosen
/// Uncertain slot and sets the polarization of every photon in Alice's record
/// for that slot to the new bit.
AlteredOpening alice_alter_opening(const AliceView& view, const Opening& original, SplitMix64& rng);

struct Extraction {
  int guess = 0;
  bool certain = false;
};

/// Certain when some sequence is known in every slot; the guess is then the
/// XOR of that sequence's inferred bits. Otherwise a fair coin from `rng`.
Extraction bob_extract_commit(const BobView& view, SplitMix64& rng);

struct ExperimentReport {
  std::string experiment;
  std::uint64_t trials = 0;
  std::uint64_t samples = 0;  // Bernoulli observations behind `empirical`
  std::uint64_t successes = 0;
  double empirical = 0.0;
  double analytic = 0.0;
  double stderr_ = 0.0;  // of the analytic Bernoulli rate over `samples`
  double z = 0.0;
  double sigma_bound = 3.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

/// Fills empirical, stderr, z and pass from counts.
ExperimentReport make_report(std::string name, std::uint64_t trials, std::uint64_t samples,
                             std::uint64_t successes, double analytic, double sigma_bound, std::uint64_t seed);

struct BindingReport {
  ExperimentReport per_sequence;  // acceptance rate of single sequences
  std::uint64_t detected = 0;
  std::uint64_t unattackable = 0;
  Rational p_a;
  Rational p_b;
  Rational p_alter;
  int extrapolate_m = 65;
  double extrapolated_empirical = 0.0;  // p_hat^m
  double extrapolated_analytic = 0.0;   // P(Aalter)^m
};

/// Runs `trials` commit/open cycles of the base setup under `strategy` and
/// verifies each sequence separately. With alter_one_bit the prediction is
/// P(Aalter) (1 - P_A^n); without it every sequence must be accepted.
BindingReport run_binding_experiment(const CommitmentSetup& base, const AliceStrategy& strategy,
                                     std::uint64_t trials, double sigma_bound = 3.0, int extrapolate_m = 65);

enum class ConcealingMode { Auto, FullTranscript, EarlyStop };

struct ConcealingReport {
  ExperimentReport slot_knowledge;  // per-slot rate of Bob's certainty vs P_B
  ExperimentReport certainty;       // per-trial rate of certain extraction vs epsilon
  ExperimentReport correct_guess;   // per-trial guessing rate vs 1/2 + epsilon/2
  std::uint64_t certain_wrong = 0;  // must stay zero
  Rational p_b;
  double advantage_empirical = 0.0;
  double advantage_analytic = 0.0;
  bool early_stop = false;
};

/// Bob's commit extraction over `trials` independent commit phases. EarlyStop
/// stops simulating a sequence at its first slot Bob cannot read (later slots
/// cannot make it certain) and reproduces FullTranscript decisions exactly for
/// the same seed; its slot-knowledge estimate then uses only each sequence's
/// first slot. Auto picks EarlyStop above 5e7 slots.
ConcealingReport run_concealing_experiment(const CommitmentSetup& base, BobStrategy strategy, std::uint64_t trials,
                                           double sigma_bound = 3.0, ConcealingMode mode = ConcealingMode::Auto);

struct RoundRates {
  ExperimentReport bob_knows;
  ExperimentReport alice_confirms;
};

/// Per-slot labelling rates over `trials` commit phases of the setup, against
/// the enumerated P_B and P_A for its splitters and sender modes.
RoundRates run_round_experiment(const CommitmentSetup& setup, std::uint64_t trials, double sigma_bound = 4.0);

}  // namespace cfqbc::adversary
