#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cfqbc/adversary.hpp"
#include "cfqbc/analysis.hpp"
#include "cfqbc/serialize.hpp"
#include "cfqbc/version.hpp"

namespace py = pybind11;
using namespace cfqbc;
using io::json;

namespace {

/// Accepts Fraction, int, float or str ("3/8", "0.25").
Rational to_rational(const py::handle& value) { return parse_rational(py::str(value).cast<std::string>()); }

py::object fraction(const Rational& value) {
  py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(value));
}

py::object to_python(const json& j) {
  py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

optics::ExactConfig config(const py::handle& t_a, const py::handle& t_b0, const py::handle& t_b1) {
  return optics::ExactConfig::make(to_rational(t_a), to_rational(t_b0), to_rational(t_b1));
}

optics::SenderMode mode(bool sends) { return sends ? optics::SenderMode::SinglePhoton : optics::SenderMode::NoPhoton; }

protocol::CommitmentSetup setup_of(int m, int n, std::uint64_t seed) {
  protocol::CommitmentSetup s;
  s.params = {m, n};
  s.seed = seed;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Probability model, security analysis and simulator for counterfactual quantum bit commitment.";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<optics::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<protocol::ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);
  py::register_exception<analysis::NoFiniteParameter>(m, "NoFiniteParameter", PyExc_ArithmeticError);

  const auto half = py::str("1/2");

  m.def(
      "p_a",
      [](py::object t_a, py::object t_b0, py::object t_b1) { return fraction(analysis::p_a_closed(config(t_a, t_b0, t_b1))); },
      py::arg("t_a") = half, py::arg("t_b0") = half, py::arg("t_b1") = half,
      "Probability per slot that Alice can tell Bob learned her bit.");
  m.def(
      "p_b",
      [](py::object t_a, py::object t_b0, py::object t_b1) { return fraction(analysis::p_b_closed(config(t_a, t_b0, t_b1))); },
      py::arg("t_a") = half, py::arg("t_b0") = half, py::arg("t_b1") = half,
      "Probability per slot that Bob learns Alice's bit.");
  m.def(
      "p_a_enum",
      [](py::object t_a, py::object t_b0, py::object t_b1, bool alice_sends, bool bob_sends) {
        return fraction(analysis::p_a_enum(config(t_a, t_b0, t_b1), mode(alice_sends), mode(bob_sends)));
      },
      py::arg("t_a") = half, py::arg("t_b0") = half, py::arg("t_b1") = half, py::arg("alice_sends") = true,
      py::arg("bob_sends") = true);
  m.def(
      "p_b_enum",
      [](py::object t_a, py::object t_b0, py::object t_b1, bool alice_sends, bool bob_sends) {
        return fraction(analysis::p_b_enum(config(t_a, t_b0, t_b1), mode(alice_sends), mode(bob_sends)));
      },
      py::arg("t_a") = half, py::arg("t_b0") = half, py::arg("t_b1") = half, py::arg("alice_sends") = true,
      py::arg("bob_sends") = true);
  m.def(
      "p_alter", [](py::object p_a, py::object p_b) { return fraction(analysis::p_alter(to_rational(p_a), to_rational(p_b))); },
      py::arg("p_a"), py::arg("p_b"));

  m.def(
      "tables",
      [](py::object t_a, py::object t_b0, py::object t_b1) { return to_python(io::tables_json(config(t_a, t_b0, t_b1))["rows"]); },
      py::arg("t_a") = half, py::arg("t_b0") = half, py::arg("t_b1") = half,
      "Per-detector rows: source, bits_equal, detector, expression, value, exact.");

  py::enum_<analysis::LogBase>(m, "LogBase").value("Natural", analysis::LogBase::Natural).value("Two", analysis::LogBase::Two);
  m.def("binding_min_m", &analysis::binding_min_m, py::arg("alpha"), py::arg("p_alter"),
        py::arg("base") = analysis::LogBase::Natural);
  m.def("concealing_min_n", &analysis::concealing_min_n, py::arg("beta"), py::arg("m"), py::arg("p_b"),
        py::arg("base") = analysis::LogBase::Natural);
  m.def("concealing_advantage", &analysis::concealing_advantage, py::arg("m"), py::arg("n"), py::arg("p_b"));

  m.def(
      "plan", [](double alpha, double beta) { return to_python(io::to_json(analysis::plan_parameters({alpha, beta}))); },
      py::arg("alpha") = 1e-6, py::arg("beta") = 1e-6);

  m.def("optimize_malicious_alice", [] {
    const auto o = analysis::optimize_malicious_alice();
    py::dict d;
    d["t_a"] = fraction(o.t_a);
    d["p_alter"] = fraction(o.p_alter);
    d["p_a"] = fraction(o.p_a);
    d["p_b"] = fraction(o.p_b);
    return d;
  });
  m.def(
      "optimize_malicious_bob",
      [](int resolution) {
        const auto o = analysis::optimize_malicious_bob(resolution);
        py::list surface;
        for (const auto& s : o.surface) surface.append(py::make_tuple(s.t_b0, s.t_b1, s.p_b));
        py::dict d;
        d["t_b0"] = fraction(o.exact_t_b0);
        d["t_b1"] = fraction(o.exact_t_b1);
        d["p_b"] = fraction(o.exact_p_b);
        d["surface"] = surface;
        return d;
      },
      py::arg("resolution") = 201);

  m.def(
      "verify_oracle",
      [](int samples, std::uint64_t seed) {
        const auto r = analysis::verify_closed_forms(samples, seed);
        py::dict d;
        d["samples"] = r.samples;
        d["closed_mismatches"] = r.closed.mismatches;
        d["published_mismatches"] = r.printed.mismatches;
        d["honest_p_a"] = fraction(r.honest_p_a);
        d["honest_p_b"] = fraction(r.honest_p_b);
        d["pass"] = r.pass();
        return d;
      },
      py::arg("samples") = 1000, py::arg("seed") = 0);

  m.def(
      "simulate",
      [](int m_, int n, std::uint64_t seed, const std::string& alice, const std::string& bob, int commit_bit) {
        const auto a = adversary::parse_alice_strategy(alice);
        const auto b = adversary::parse_bob_strategy(bob);
        const auto setup = adversary::apply(setup_of(m_, n, seed), a, b);
        protocol::VerificationResult verdict;
        {
          py::gil_scoped_release release;
          const auto phase = protocol::run_commit_phase(setup, commit_bit);
          auto fabricate_rng = derive_stream(seed, {tag(StreamTag::Fabrication)});
          auto opening = adversary::alice_opening(a, phase.alice, fabricate_rng);
          if (a.alter_one_bit) {
            auto attack_rng = derive_stream(seed, {tag(StreamTag::AliceAttack)});
            opening = adversary::alice_alter_opening(phase.alice, opening, attack_rng).opening;
          }
          verdict = protocol::verify_opening(phase.bob, opening);
        }
        return to_python(io::to_json(verdict));
      },
      py::arg("m") = 65, py::arg("n") = 25, py::arg("seed") = 0, py::arg("alice_strategy") = "honest",
      py::arg("bob_strategy") = "honest", py::arg("commit_bit") = 0,
      "Runs one commit/open cycle and returns Bob's verdict.");

  m.def(
      "binding_experiment",
      [](int m_, int n, std::uint64_t seed, const std::string& alice, std::uint64_t trials) {
        const auto strategy = adversary::parse_alice_strategy(alice);
        adversary::BindingReport r;
        {
          py::gil_scoped_release release;
          r = adversary::run_binding_experiment(setup_of(m_, n, seed), strategy, trials);
        }
        return to_python(io::to_json(r));
      },
      py::arg("m") = 1, py::arg("n") = 25, py::arg("seed") = 0, py::arg("alice_strategy") = "alter",
      py::arg("trials") = 10000);
  m.def(
      "concealing_experiment",
      [](int m_, int n, std::uint64_t seed, const std::string& bob, std::uint64_t trials) {
        const auto strategy = adversary::parse_bob_strategy(bob);
        adversary::ConcealingReport r;
        {
          py::gil_scoped_release release;
          r = adversary::run_concealing_experiment(setup_of(m_, n, seed), strategy, trials);
        }
        return to_python(io::to_json(r));
      },
      py::arg("m") = 1, py::arg("n") = 4, py::arg("seed") = 0, py::arg("bob_strategy") = "extract-commit",
      py::arg("trials") = 10000);
}
