#include "cfqbc/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace cfqbc::adversary {

using optics::Detector;
using optics::ExactConfig;
using optics::index;
using optics::SenderMode;
using protocol::BitSequences;
using protocol::RoundRecord;
using rounds::AliceKnowledge;

namespace {

/// Runs fn(trial, acc) for every trial over a few worker threads and sums the
/// per-worker accumulators. Trials derive their own streams, so the sum does
/// not depend on the split.
template <class Acc, class Fn>
Acc parallel_trials(std::uint64_t trials, Fn fn) {
  const std::uint64_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::clamp<std::uint64_t>(trials / 256, 1, hw);
  std::vector<Acc> partial(workers);
  auto run = [&](std::uint64_t w) {
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    for (std::uint64_t t = begin; t < end; ++t) fn(t, partial[w]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  Acc total{};
  for (const auto& p : partial) total += p;
  return total;
}

ExactConfig exact(const optics::RealConfig& c) { return ExactConfig::make(Rational(c.t_a), Rational(c.t_b0), Rational(c.t_b1)); }

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t) { return derive_stream(seed, {tag(StreamTag::Trial), t})(); }

double pow_rational(const Rational& p, int n) { return std::pow(to_double(p), n); }

}  // namespace

std::string to_string(const AliceStrategy& s) {
  std::string base = s.base == AliceBase::Honest            ? "honest"
                     : s.base == AliceBase::OptimalSplitter ? "optimal-splitter"
                                                            : "no-photon";
  if (!s.alter_one_bit) return base;
  return s.base == AliceBase::Honest ? "alter" : "alter-" + base;
}

std::string_view to_string(BobStrategy s) {
  switch (s) {
    case BobStrategy::Honest: return "honest";
    case BobStrategy::OptimalSplitters: return "optimal-splitters";
    case BobStrategy::NoPhoton: return "no-photon";
    case BobStrategy::ExtractCommit: return "extract-commit";
  }
  return "?";
}

AliceStrategy parse_alice_strategy(std::string_view name) {
  AliceStrategy s;
  if (name == "alter") return {AliceBase::Honest, true};
  if (name.starts_with("alter-")) {
    s.alter_one_bit = true;
    name.remove_prefix(6);
  }
  if (name == "honest") s.base = AliceBase::Honest;
  else if (name == "optimal-splitter") s.base = AliceBase::OptimalSplitter;
  else if (name == "no-photon") s.base = AliceBase::NoPhoton;
  else throw std::invalid_argument("unknown Alice strategy: " + std::string(name));
  return s;
}

BobStrategy parse_bob_strategy(std::string_view name) {
  if (name == "honest") return BobStrategy::Honest;
  if (name == "optimal-splitters") return BobStrategy::OptimalSplitters;
  if (name == "no-photon") return BobStrategy::NoPhoton;
  if (name == "extract-commit") return BobStrategy::ExtractCommit;
  throw std::invalid_argument("unknown Bob strategy: " + std::string(name));
}

CommitmentSetup apply(const CommitmentSetup& base, const AliceStrategy& alice, BobStrategy bob) {
  if (alice.base != AliceBase::Honest && (bob == BobStrategy::OptimalSplitters || bob == BobStrategy::NoPhoton))
    throw std::invalid_argument("only one party may deviate from the protocol at a time");
  CommitmentSetup s = base;
  switch (alice.base) {
    case AliceBase::Honest: break;
    case AliceBase::OptimalSplitter: {
      static const double t_a = to_double(analysis::optimize_malicious_alice().t_a);
      s.config.t_a = t_a;
      break;
    }
    case AliceBase::NoPhoton: s.alice_mode = SenderMode::NoPhoton; break;
  }
  switch (bob) {
    case BobStrategy::Honest:
    case BobStrategy::ExtractCommit: break;
    case BobStrategy::OptimalSplitters: {
      static const auto best = analysis::optimize_malicious_bob(101);
      s.config.t_b0 = best.t_b0;
      s.config.t_b1 = best.t_b1;
      break;
    }
    case BobStrategy::NoPhoton: s.bob_mode = SenderMode::NoPhoton; break;
  }
  return s;
}

Opening alice_fabricate_opening(const AliceView& view, int commit_bit, const BitSequences& sequences,
                                SplitMix64& rng) {
  const auto column = optics::per_photon_distribution(optics::PhotonSource::Alice, true, optics::RealConfig::honest());
  const double at_alice = column[0] + column[1] + column[2];
  Opening out{commit_bit, sequences, view.records};
  for (auto& record : out.records) {
    double u = rng.uniform() * at_alice;
    Detector spot = Detector::D2;
    for (Detector d : optics::kAliceDetectors) {
      if (u < column[index(d)]) {
        spot = d;
        break;
      }
      u -= column[index(d)];
    }
    record.readings[index(spot)].add(optics::polarization_for(sequences.at(record.i, record.j)));
  }
  return out;
}

Opening alice_opening(const AliceStrategy& strategy, const AliceView& view, SplitMix64& rng) {
  if (strategy.base == AliceBase::NoPhoton)
    return alice_fabricate_opening(view, view.commit_bit, view.sequences, rng);
  return protocol::open(view, view.commit_bit, view.sequences);
}

int AlteredOpening::unattackable() const {
  return static_cast<int>(std::count(altered_slot.begin(), altered_slot.end(), -1));
}

AlteredOpening alice_alter_opening(const AliceView& view, const Opening& original, SplitMix64& rng) {
  const int m = view.sequences.m(), n = view.sequences.n();
  AlteredOpening out{original, std::vector<int>(static_cast<std::size_t>(m), -1)};
  out.opening.commit_bit = original.commit_bit ^ 1;
  std::vector<int> candidates;
  for (int i = 0; i < m; ++i) {
    candidates.clear();
    for (int j = 0; j < n; ++j)
      if (view.knowledge_at(i, j) == AliceKnowledge::Uncertain) candidates.push_back(j);
    if (candidates.empty()) continue;
    const int j = candidates[rng.below(candidates.size())];
    out.altered_slot[static_cast<std::size_t>(i)] = j;
    out.opening.sequences.flip(i, j);
    const auto pol = optics::polarization_for(out.opening.sequences.at(i, j));
    auto& record = out.opening.records[view.slot(i, j)];
    for (Detector d : optics::kAliceDetectors) {
      auto& reading = record.readings[index(d)];
      const int count = reading.count();
      reading = {};
      for (int k = 0; k < count; ++k) reading.add(pol);
    }
  }
  return out;
}

Extraction bob_extract_commit(const BobView& view, SplitMix64& rng) {
  const int m = view.sequences.m(), n = view.sequences.n();
  for (int i = 0; i < m; ++i) {
    int parity = 0;
    bool all_known = true;
    for (int j = 0; j < n && all_known; ++j) {
      const auto k = view.knowledge_at(i, j);
      if (!k.known()) all_known = false;
      else parity ^= *k.bit;
    }
    if (all_known) return {parity, true};
  }
  return {rng.bit(), false};
}

ExperimentReport make_report(std::string name, std::uint64_t trials, std::uint64_t samples, std::uint64_t successes,
                             double analytic, double sigma_bound, std::uint64_t seed) {
  ExperimentReport r;
  r.experiment = std::move(name);
  r.trials = trials;
  r.samples = samples;
  r.successes = successes;
  r.empirical = samples ? static_cast<double>(successes) / static_cast<double>(samples) : 0.0;
  r.analytic = analytic;
  r.stderr_ = samples ? std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(samples)) : 0.0;
  r.sigma_bound = sigma_bound;
  r.seed = seed;
  if (r.stderr_ > 0.0) {
    r.z = (r.empirical - analytic) / r.stderr_;
    r.pass = std::abs(r.z) <= sigma_bound;
  } else {
    r.z = 0.0;
    r.pass = r.empirical == analytic;
  }
  return r;
}

namespace {

struct BindingCounts {
  std::uint64_t sequences = 0;
  std::uint64_t accepted = 0;
  std::uint64_t unattackable = 0;

  BindingCounts& operator+=(const BindingCounts& o) {
    sequences += o.sequences;
    accepted += o.accepted;
    unattackable += o.unattackable;
    return *this;
  }
};

}  // namespace

BindingReport run_binding_experiment(const CommitmentSetup& base, const AliceStrategy& strategy, std::uint64_t trials,
                                     double sigma_bound, int extrapolate_m) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const CommitmentSetup setup = apply(base, strategy, BobStrategy::Honest);
  setup.validate();

  const auto counts = parallel_trials<BindingCounts>(trials, [&](std::uint64_t t, BindingCounts& acc) {
    CommitmentSetup s = setup;
    s.seed = trial_seed(base.seed, t);
    auto bit_rng = derive_stream(s.seed, {tag(StreamTag::AliceSequences), 1});
    const int b = bit_rng.bit();
    const auto phase = protocol::run_commit_phase(s, b);
    auto fabricate_rng = derive_stream(s.seed, {tag(StreamTag::Fabrication)});
    Opening opening = alice_opening(strategy, phase.alice, fabricate_rng);
    if (strategy.alter_one_bit) {
      auto attack_rng = derive_stream(s.seed, {tag(StreamTag::AliceAttack)});
      auto altered = alice_alter_opening(phase.alice, opening, attack_rng);
      acc.unattackable += static_cast<std::uint64_t>(altered.unattackable());
      opening = std::move(altered.opening);
    }
    for (int i = 0; i < s.params.m; ++i) {
      ++acc.sequences;
      if (protocol::verify_sequence(phase.bob, opening, i).accepted()) ++acc.accepted;
    }
  });

  BindingReport r;
  const auto c = exact(setup.config);
  r.p_a = analysis::p_a_enum(c, setup.alice_mode, setup.bob_mode);
  r.p_b = analysis::p_b_enum(c, setup.alice_mode, setup.bob_mode);
  r.p_alter = analysis::p_alter(r.p_a, r.p_b);
  const double analytic =
      strategy.alter_one_bit ? to_double(r.p_alter) * (1.0 - pow_rational(r.p_a, setup.params.n)) : 1.0;
  r.per_sequence = make_report("binding/" + to_string(strategy), trials, counts.sequences, counts.accepted, analytic,
                               sigma_bound, base.seed);
  r.detected = counts.sequences - counts.accepted;
  r.unattackable = counts.unattackable;
  r.extrapolate_m = extrapolate_m;
  r.extrapolated_empirical = std::pow(r.per_sequence.empirical, extrapolate_m);
  r.extrapolated_analytic = std::pow(analytic, extrapolate_m);
  return r;
}

namespace {

struct ConcealingCounts {
  std::uint64_t slots = 0;
  std::uint64_t known_slots = 0;
  std::uint64_t certain = 0;
  std::uint64_t correct = 0;
  std::uint64_t certain_wrong = 0;

  ConcealingCounts& operator+=(const ConcealingCounts& o) {
    slots += o.slots;
    known_slots += o.known_slots;
    certain += o.certain;
    correct += o.correct;
    certain_wrong += o.certain_wrong;
    return *this;
  }
};

void tally(ConcealingCounts& acc, const Extraction& e, int commit_bit) {
  if (e.certain) ++acc.certain;
  if (e.guess == commit_bit) ++acc.correct;
  if (e.certain && e.guess != commit_bit) ++acc.certain_wrong;
}

// Mirrors run_commit_phase + bob_extract_commit for one trial, sampling each
// sequence only up to its first slot Bob cannot read.
void early_stop_trial(const CommitmentSetup& s, int b, const rounds::RoundSampler& sampler, ConcealingCounts& acc) {
  const int m = s.params.m, n = s.params.n;
  auto alice_rng = derive_stream(s.seed, {tag(StreamTag::AliceSequences)});
  auto bob_rng = derive_stream(s.seed, {tag(StreamTag::BobSequences)});
  std::uint64_t alice_pos = 0, bob_pos = 0;
  for (int i = 0; i < m; ++i) {
    // Row i starts after i*(n-1) draws for Alice and i*n draws for Bob.
    alice_rng.discard(static_cast<std::uint64_t>(i) * (n - 1) - alice_pos);
    bob_rng.discard(static_cast<std::uint64_t>(i) * n - bob_pos);
    alice_pos = static_cast<std::uint64_t>(i) * (n - 1);
    bob_pos = static_cast<std::uint64_t>(i) * n;

    int alice_parity = 0;
    int inferred_parity = 0;
    bool all_known = true;
    for (int j = 0; j < n; ++j) {
      int a;
      if (j + 1 < n) {
        a = alice_rng.bit();
        ++alice_pos;
        alice_parity ^= a;
      } else {
        a = alice_parity ^ b;
      }
      const int bb = bob_rng.bit();
      ++bob_pos;
      auto round_rng = derive_stream(s.seed, {tag(StreamTag::Round), static_cast<std::uint64_t>(i),
                                              static_cast<std::uint64_t>(j)});
      const auto outcome = sampler.sample(a, bb, round_rng);
      const auto full = rounds::readings(outcome, a, bb);
      const std::optional<int> own = s.bob_mode == SenderMode::SinglePhoton ? std::optional<int>(bb) : std::nullopt;
      const auto k = rounds::classify_bob_readings(full[index(Detector::DB0)], full[index(Detector::DB1)], own);
      if (j == 0) {
        ++acc.slots;
        if (k.known()) ++acc.known_slots;
      }
      if (!k.known()) {
        all_known = false;
        break;
      }
      inferred_parity ^= *k.bit;
    }
    if (all_known) {
      tally(acc, {inferred_parity, true}, b);
      return;
    }
  }
  auto guess_rng = derive_stream(s.seed, {tag(StreamTag::BobGuess)});
  tally(acc, {guess_rng.bit(), false}, b);
}

}  // namespace

ConcealingReport run_concealing_experiment(const CommitmentSetup& base, BobStrategy strategy, std::uint64_t trials,
                                           double sigma_bound, ConcealingMode mode) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const CommitmentSetup setup = apply(base, AliceStrategy{}, strategy);
  setup.validate();
  const double slots_total =
      static_cast<double>(trials) * setup.params.m * static_cast<double>(setup.params.n);
  const bool early = mode == ConcealingMode::EarlyStop || (mode == ConcealingMode::Auto && slots_total > 5e7);
  const rounds::RoundSampler sampler(setup.config, setup.alice_mode, setup.bob_mode);

  const auto counts = parallel_trials<ConcealingCounts>(trials, [&](std::uint64_t t, ConcealingCounts& acc) {
    CommitmentSetup s = setup;
    s.seed = trial_seed(base.seed, t);
    auto bit_rng = derive_stream(s.seed, {tag(StreamTag::AliceSequences), 1});
    const int b = bit_rng.bit();
    if (early) {
      early_stop_trial(s, b, sampler, acc);
      return;
    }
    const auto phase = protocol::run_commit_phase(s, b);
    for (const auto& k : phase.bob.knowledge) {
      ++acc.slots;
      if (k.known()) ++acc.known_slots;
    }
    auto guess_rng = derive_stream(s.seed, {tag(StreamTag::BobGuess)});
    tally(acc, bob_extract_commit(phase.bob, guess_rng), b);
  });

  ConcealingReport r;
  r.early_stop = early;
  r.p_b = analysis::p_b_enum(exact(setup.config), setup.alice_mode, setup.bob_mode);
  const auto terms = analysis::concealing_terms(setup.params.m, setup.params.n, to_double(r.p_b));
  const std::string name = "concealing/" + std::string(to_string(strategy));
  r.slot_knowledge = make_report(name + "/slot_knowledge", trials, counts.slots, counts.known_slots,
                                 to_double(r.p_b), sigma_bound, base.seed);
  r.certainty = make_report(name + "/certainty", trials, trials, counts.certain, terms.epsilon, sigma_bound, base.seed);
  r.correct_guess =
      make_report(name + "/correct_guess", trials, trials, counts.correct, terms.p_bob_correct, sigma_bound, base.seed);
  r.certain_wrong = counts.certain_wrong;
  r.advantage_empirical = r.correct_guess.empirical - 0.5;
  r.advantage_analytic = terms.advantage;
  return r;
}

namespace {

struct RoundCounts {
  std::uint64_t slots = 0;
  std::uint64_t bob_knows = 0;
  std::uint64_t alice_confirms = 0;

  RoundCounts& operator+=(const RoundCounts& o) {
    slots += o.slots;
    bob_knows += o.bob_knows;
    alice_confirms += o.alice_confirms;
    return *this;
  }
};

}  // namespace

RoundRates run_round_experiment(const CommitmentSetup& setup, std::uint64_t trials, double sigma_bound) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  setup.validate();
  const auto counts = parallel_trials<RoundCounts>(trials, [&](std::uint64_t t, RoundCounts& acc) {
    CommitmentSetup s = setup;
    s.seed = trial_seed(setup.seed, t);
    auto bit_rng = derive_stream(s.seed, {tag(StreamTag::AliceSequences), 1});
    const auto phase = protocol::run_commit_phase(s, bit_rng.bit());
    for (std::size_t k = 0; k < phase.bob.knowledge.size(); ++k) {
      ++acc.slots;
      if (phase.bob.knowledge[k].known()) ++acc.bob_knows;
      if (phase.alice.knowledge[k] == AliceKnowledge::BobKnows) ++acc.alice_confirms;
    }
  });
  const auto c = exact(setup.config);
  const double p_b = to_double(analysis::p_b_enum(c, setup.alice_mode, setup.bob_mode));
  const double p_a = to_double(analysis::p_a_enum(c, setup.alice_mode, setup.bob_mode));
  return {make_report("rounds/bob_knows", trials, counts.slots, counts.bob_knows, p_b, sigma_bound, setup.seed),
          make_report("rounds/alice_confirms", trials, counts.slots, counts.alice_confirms, p_a, sigma_bound,
                      setup.seed)};
}

}  // namespace cfqbc::adversary
