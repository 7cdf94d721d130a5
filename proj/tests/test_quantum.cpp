#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qnet/quantum.hpp"

using namespace qnet;
using Catch::Approx;

namespace {
constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kInvSqrt3 = 0.5773502691896258;

double amp_abs(const StateRegister& reg, std::size_t basis) {
  return std::abs(reg.amplitude(basis));
}
}  // namespace

TEST_CASE("register allocation") {
  StateRegister one = alloc_register(1);
  CHECK(amp_abs(one, 0) == Approx(1.0));
  CHECK(amp_abs(one, 1) == Approx(0.0));

  StateRegister two = alloc_register(2);
  CHECK(amp_abs(two, 0b00) == Approx(1.0));
  CHECK(two.norm_sq() == Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(alloc_register(13), std::invalid_argument);
  CHECK_THROWS_AS(alloc_register(0), std::invalid_argument);
}

TEST_CASE("basic gates") {
  SECTION("H on |0>") {
    StateRegister reg(1);
    apply_gate(reg, Gate::H, {0});
    CHECK(amp_abs(reg, 0) == Approx(kInvSqrt2));
    CHECK(amp_abs(reg, 1) == Approx(kInvSqrt2));
  }
  SECTION("CNOT on |10>") {
    StateRegister reg(2);
    reg.apply_x(0);
    apply_gate(reg, Gate::Cnot, {0, 1});
    CHECK(amp_abs(reg, 0b11) == Approx(1.0));
  }
  SECTION("H is an involution") {
    StateRegister reg(1);
    reg.apply_h(0);
    reg.apply_h(0);
    CHECK(amp_abs(reg, 0) == Approx(1.0).margin(1e-12));
  }
  SECTION("argument errors") {
    StateRegister reg(2);
    CHECK_THROWS_AS(apply_gate(reg, Gate::Cnot, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(reg, Gate::H, {5}), std::out_of_range);
    CHECK_THROWS_AS(apply_gate(reg, Gate::H, {0, 1}), std::invalid_argument);
  }
}

TEST_CASE("norm preserved under random gate sequences") {
  Rng rng(2024);
  StateRegister reg(5);
  for (int step = 0; step < 300; ++step) {
    const int which = static_cast<int>(rng.raw() % 4);
    const int a = static_cast<int>(rng.raw() % 5);
    int b = static_cast<int>(rng.raw() % 5);
    if (b == a) b = (b + 1) % 5;
    switch (which) {
      case 0: reg.apply_h(a); break;
      case 1: reg.apply_x(a); break;
      case 2: reg.apply_z(a); break;
      default: reg.apply_cnot(a, b); break;
    }
    REQUIRE(std::abs(reg.norm_sq() - 1.0) < 1e-12);
  }
}

TEST_CASE("W-state preparation") {
  StateRegister reg(3);
  reg.prepare_w(0, 1, 2);
  CHECK(amp_abs(reg, 0b001) == Approx(kInvSqrt3));
  CHECK(amp_abs(reg, 0b010) == Approx(kInvSqrt3));
  CHECK(amp_abs(reg, 0b100) == Approx(kInvSqrt3));
  CHECK(reg.norm_sq() == Approx(1.0).margin(1e-12));

  SECTION("exactly one excitation in every measurement") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      StateRegister w(3);
      w.prepare_w(0, 1, 2);
      const int ones = w.measure(0, rng) + w.measure(1, rng) + w.measure(2, rng);
      REQUIRE(ones == 1);
    }
  }

  SECTION("measuring the first qubit as 0 leaves (|01>+|10>)/sqrt(2)") {
    StateRegister w(3);
    w.prepare_w(0, 1, 2);
    CHECK(w.prob_one(0) == Approx(1.0 / 3.0).margin(1e-12));
    w.project(0, 0);  // the 2/3 branch
    CHECK(amp_abs(w, 0b001) == Approx(kInvSqrt2));
    CHECK(amp_abs(w, 0b010) == Approx(kInvSqrt2));
    CHECK(amp_abs(w, 0b100) == Approx(0.0).margin(1e-12));
  }

  SECTION("requires ground state") {
    StateRegister w(3);
    w.apply_x(1);
    CHECK_THROWS_AS(w.prepare_w(0, 1, 2), std::invalid_argument);
  }
}

TEST_CASE("Bell preparation and fidelity") {
  StateRegister reg(2);
  reg.prepare_bell(0, 1, BellKind::PhiPlus);
  CHECK(amp_abs(reg, 0b00) == Approx(kInvSqrt2));
  CHECK(amp_abs(reg, 0b11) == Approx(kInvSqrt2));
  CHECK(reg.fidelity_bell(0, 1, BellKind::PhiPlus) == Approx(1.0).margin(1e-12));

  StateRegister psi(2);
  psi.prepare_bell(0, 1, BellKind::PsiPlus);
  CHECK(amp_abs(psi, 0b01) == Approx(kInvSqrt2));
  CHECK(amp_abs(psi, 0b10) == Approx(kInvSqrt2));
  // |Phi+> and |Psi+> are orthogonal.
  CHECK(psi.fidelity_bell(0, 1, BellKind::PhiPlus) == Approx(0.0).margin(1e-12));
}

TEST_CASE("fidelity basics") {
  StateRegister reg(1);
  CHECK(reg.fidelity({0}, {cx{1, 0}, cx{0, 0}}) == Approx(1.0));
  CHECK(reg.fidelity({0}, {cx{0, 0}, cx{1, 0}}) == Approx(0.0).margin(1e-12));
  reg.apply_h(0);  // |+>
  CHECK(reg.fidelity({0}, {cx{1, 0}, cx{0, 0}}) == Approx(0.5).margin(1e-12));
  CHECK_THROWS_AS(reg.fidelity({0}, std::vector<cx>(4, cx{0.5, 0})), std::invalid_argument);
}

TEST_CASE("bell measurement convention") {
  SECTION("|Phi+> gives 00") {
    Rng rng(1);
    StateRegister reg(2);
    reg.prepare_bell(0, 1);
    const BellOutcome out = bell_measure(reg, 0, 1, rng);
    CHECK(out.phase_bit == 0);
    CHECK(out.parity_bit == 0);
  }
  SECTION("|Psi+> gives 01") {
    Rng rng(1);
    StateRegister reg(2);
    reg.prepare_bell(0, 1, BellKind::PsiPlus);
    const BellOutcome out = bell_measure(reg, 0, 1, rng);
    CHECK(out.phase_bit == 0);
    CHECK(out.parity_bit == 1);
  }
  SECTION("|00> splits between 00 and 10 evenly") {
    // |00> = (|Phi+> + |Phi->)/sqrt(2): parity always 0, phase uniform.
    Rng rng(42);
    int counts[4] = {0, 0, 0, 0};
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
      StateRegister reg(2);
      const BellOutcome out = bell_measure(reg, 0, 1, rng);
      counts[out.code()]++;
    }
    CHECK(counts[0b01] == 0);
    CHECK(counts[0b11] == 0);
    CHECK(std::abs(counts[0b00] / double(trials) - 0.5) < 0.02);
    CHECK(std::abs(counts[0b10] / double(trials) - 0.5) < 0.02);
  }
}

TEST_CASE("W-state to EPR conversion") {
  SECTION("analytic branch probability is exactly 2/3") {
    StateRegister reg(4);
    reg.prepare_w(0, 1, 2);
    Rng rng(5);
    const WConversion conv = convert_w_to_epr(reg, WQubits{0, 1, 2}, 3, rng);
    CHECK(std::abs(conv.two_epr_prob - 2.0 / 3.0) < 1e-12);
  }

  SECTION("TwoEpr branch state: |Phi+>(atom,p1) x |Psi+>(p2,a_lc)") {
    StateRegister reg(4);
    reg.prepare_w(0, 1, 2);
    reg.apply_h(3);
    reg.apply_cnot(3, 0);
    reg.project_parity(1, 2, 1);
    CHECK(reg.fidelity_bell(3, 0, BellKind::PhiPlus) == Approx(1.0).margin(1e-9));
    CHECK(reg.fidelity_bell(1, 2, BellKind::PsiPlus) == Approx(1.0).margin(1e-9));
  }

  SECTION("Residual branch state: |Psi+>(atom,p1) x |00>(p2,a_lc)") {
    StateRegister reg(4);
    reg.prepare_w(0, 1, 2);
    reg.apply_h(3);
    reg.apply_cnot(3, 0);
    reg.project_parity(1, 2, 0);
    CHECK(reg.fidelity_bell(3, 0, BellKind::PsiPlus) == Approx(1.0).margin(1e-9));
    CHECK(reg.prob_one(1) == Approx(0.0).margin(1e-12));
    CHECK(reg.prob_one(2) == Approx(0.0).margin(1e-12));
  }

  SECTION("Monte Carlo branch frequency") {
    Rng rng(2718);
    const int trials = 30000;
    int two_epr = 0;
    for (int i = 0; i < trials; ++i) {
      StateRegister reg(4);
      reg.prepare_w(0, 1, 2);
      const WConversion conv = convert_w_to_epr(reg, WQubits{0, 1, 2}, 3, rng);
      two_epr += conv.branch == WBranch::TwoEpr ? 1 : 0;
    }
    const double freq = two_epr / double(trials);
    CHECK(std::abs(freq - 0.667) < 0.01);
  }
}

TEST_CASE("entanglement swapping") {
  SECTION("Phi+ x Phi+ swaps to Phi+ exactly") {
    Rng rng(11);
    for (int i = 0; i < 32; ++i) {
      StateRegister reg(4);
      reg.prepare_bell(0, 1);
      reg.prepare_bell(2, 3);
      const SwapResult res = entanglement_swap(reg, QubitPair{0, 1}, QubitPair{2, 3}, rng);
      REQUIRE(reg.fidelity_bell(res.pair.a, res.pair.b) == Approx(1.0).margin(1e-9));
    }
  }

  SECTION("conversion output swaps onto a maximally entangled pair") {
    Rng rng(12);
    StateRegister reg(4);
    reg.prepare_w(0, 1, 2);
    convert_w_to_epr_postselected(reg, WQubits{0, 1, 2}, 3);
    // swap on the photons (p1=0, p2=1); outer pair is (atom=3, a_lc=2)
    entanglement_swap(reg, QubitPair{3, 0}, QubitPair{1, 2}, rng);
    // |Phi+> x |Psi+> composes to |Psi+> on the outer pair.
    CHECK(reg.fidelity_bell(3, 2, BellKind::PsiPlus) == Approx(1.0).margin(1e-9));
  }

  SECTION("all four BSM outcomes are uniform") {
    Rng rng(13);
    int counts[4] = {0, 0, 0, 0};
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
      StateRegister reg(4);
      reg.prepare_bell(0, 1);
      reg.prepare_bell(2, 3);
      const SwapResult res = entanglement_swap(reg, QubitPair{0, 1}, QubitPair{2, 3}, rng);
      counts[res.outcome.code()]++;
    }
    for (int c = 0; c < 4; ++c) {
      CHECK(std::abs(counts[c] / double(trials) - 0.25) < 0.02);
    }
  }

  SECTION("pairs must be disjoint") {
    Rng rng(14);
    StateRegister reg(4);
    reg.prepare_bell(0, 1);
    reg.prepare_bell(2, 3);
    CHECK_THROWS_AS(entanglement_swap(reg, QubitPair{0, 1}, QubitPair{1, 2}, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("teleportation") {
  SECTION("|0> payload") {
    Rng rng(21);
    StateRegister reg(3);
    reg.prepare_bell(1, 2);
    const TeleportResult res = teleport(reg, 0, QubitPair{1, 2}, rng);
    CHECK(reg.fidelity({res.delivered}, {cx{1, 0}, cx{0, 0}}) == Approx(1.0).margin(1e-12));
  }

  SECTION("(|0> + i|1>)/sqrt(2) payload") {
    Rng rng(22);
    StateRegister reg(3);
    reg.set_qubit_state(0, cx{kInvSqrt2, 0}, cx{0, kInvSqrt2});
    reg.prepare_bell(1, 2);
    const TeleportResult res = teleport(reg, 0, QubitPair{1, 2}, rng);
    CHECK(reg.fidelity({res.delivered}, {cx{kInvSqrt2, 0}, cx{0, kInvSqrt2}}) ==
          Approx(1.0).margin(1e-12));
  }

  SECTION("random payloads all deliver with fidelity 1") {
    Rng rng(23);
    for (int i = 0; i < 1000; ++i) {
      const double theta = rng.uniform() * 3.14159265358979323846;
      const double phi = rng.uniform() * 2 * 3.14159265358979323846;
      const cx alpha{std::cos(theta / 2), 0.0};
      const cx beta{std::sin(theta / 2) * std::cos(phi), std::sin(theta / 2) * std::sin(phi)};
      StateRegister reg(3);
      reg.set_qubit_state(0, alpha, beta);
      reg.prepare_bell(1, 2);
      const TeleportResult res = teleport(reg, 0, QubitPair{1, 2}, rng);
      REQUIRE(reg.fidelity({res.delivered}, {alpha, beta}) > 1.0 - 1e-9);
    }
  }

  SECTION("rejects an unentangled pair") {
    Rng rng(24);
    StateRegister reg(3);
    CHECK_THROWS_AS(teleport(reg, 0, QubitPair{1, 2}, rng), std::invalid_argument);
  }
}

TEST_CASE("swap-then-teleport over k noiseless hops") {
  Rng rng(31);
  for (int hops = 1; hops <= 4; ++hops) {
    const int segments = hops + 1;
    const int n = 1 + 2 * segments;
    const double theta = rng.uniform() * 3.14159265358979323846;
    const double phi = rng.uniform() * 2 * 3.14159265358979323846;
    const cx alpha{std::cos(theta / 2), 0.0};
    const cx beta{std::sin(theta / 2) * std::cos(phi), std::sin(theta / 2) * std::sin(phi)};

    StateRegister reg(n);
    reg.set_qubit_state(0, alpha, beta);
    for (int s = 0; s < segments; ++s) reg.prepare_bell(1 + 2 * s, 2 + 2 * s);
    // Chain swaps left to right at each intermediate device.
    QubitPair chain{1, 2};
    for (int s = 1; s < segments; ++s) {
      const SwapResult res =
          entanglement_swap(reg, chain, QubitPair{1 + 2 * s, 2 + 2 * s}, rng);
      chain = res.pair;
    }
    const TeleportResult res = teleport(reg, 0, chain, rng);
    REQUIRE(reg.fidelity({res.delivered}, {alpha, beta}) == Approx(1.0).margin(1e-9));
  }
}
