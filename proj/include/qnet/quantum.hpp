// Exact statevector kernel for small qubit registers.
//
// This is the ground-truth oracle for every quantum operation in the
// simulator: W-state conversion, Bell-state measurement, entanglement
// swapping and teleportation. It is deliberately noiseless; stochastic
// failure and fidelity decay live in noise.hpp and the engine.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnet {

using cx = std::complex<double>;

// Deterministic RNG. mt19937_64 output is portable; the uniform mapping
// below avoids std::uniform_real_distribution, whose output is
// implementation-defined, so traces are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  std::uint64_t raw() { return eng_(); }

  // Derive an independent child stream (for per-session / per-trial seeding).
  std::uint64_t derive() {
    std::uint64_t x = eng_();
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
  }

 private:
  std::mt19937_64 eng_;
};

enum class Gate { H, X, Z, Cnot };

// Two classical bits from a Bell-state measurement.
// phase_bit comes from the control qubit (after H), parity_bit from the
// target. Correction at the far end: X^parity then Z^phase.
// |Phi+> -> (0,0), |Psi+> -> (0,1), |Phi-> -> (1,0), |Psi-> -> (1,1).
struct BellOutcome {
  int phase_bit = 0;
  int parity_bit = 0;

  int code() const { return phase_bit * 2 + parity_bit; }
  bool operator==(const BellOutcome&) const = default;
};

enum class BellKind { PhiPlus, PsiPlus };

// Exact complex-amplitude state of up to kMaxQubits qubits.
// Qubit q maps to bit (n-1-q) of the basis index, so ket notation reads
// left to right: amplitude(0b001) of a 3-qubit register is <001|psi>.
class StateRegister {
 public:
  static constexpr int kMaxQubits = 12;

  explicit StateRegister(int n) : n_(n) {
    if (n < 1 || n > kMaxQubits) {
      throw std::invalid_argument("StateRegister: qubit count " + std::to_string(n) +
                                  " outside [1," + std::to_string(kMaxQubits) + "]");
    }
    amp_.assign(std::size_t{1} << n, cx{0.0, 0.0});
    amp_[0] = cx{1.0, 0.0};
  }

  int size() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  cx amplitude(std::size_t basis) const { return amp_.at(basis); }

  // Opaque labels mapping logical roles (q_p1, q_a_lc, ...) to indices.
  void set_label(const std::string& name, int q) {
    check_qubit(q);
    labels_[name] = q;
  }

  int label(const std::string& name) const {
    auto it = labels_.find(name);
    if (it == labels_.end()) throw std::out_of_range("no qubit labelled " + name);
    return it->second;
  }

  double norm_sq() const {
    double s = 0.0;
    for (const cx& a : amp_) s += std::norm(a);
    return s;
  }

  // P(qubit q measures 1).
  double prob_one(int q) const {
    check_qubit(q);
    const std::size_t bit = mask(q);
    double p = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) p += std::norm(amp_[i]);
    }
    return p;
  }

  void apply_h(int q) {
    check_qubit(q);
    const std::size_t bit = mask(q);
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) continue;
      const cx a0 = amp_[i];
      const cx a1 = amp_[i | bit];
      amp_[i] = (a0 + a1) * inv_sqrt2;
      amp_[i | bit] = (a0 - a1) * inv_sqrt2;
    }
  }

  void apply_x(int q) {
    check_qubit(q);
    const std::size_t bit = mask(q);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (!(i & bit)) std::swap(amp_[i], amp_[i | bit]);
    }
  }

  void apply_z(int q) {
    check_qubit(q);
    const std::size_t bit = mask(q);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) amp_[i] = -amp_[i];
    }
  }

  void apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw std::invalid_argument("apply_cnot: duplicate targets");
    const std::size_t cbit = mask(control);
    const std::size_t tbit = mask(target);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if ((i & cbit) && !(i & tbit)) std::swap(amp_[i], amp_[i | tbit]);
    }
  }

  // Computational-basis measurement of one qubit. The register keeps its
  // full size: inconsistent amplitudes are zeroed, the rest renormalized.
  int measure(int q, Rng& rng) {
    check_qubit(q);
    const double p1 = prob_one(q);
    const int outcome = rng.uniform() < p1 ? 1 : 0;
    project(q, outcome);
    return outcome;
  }

  // Joint parity measurement of two qubits (0 = even, 1 = odd) without
  // measuring either qubit individually.
  int measure_parity(int q1, int q2, Rng& rng) {
    const double p_odd = parity_odd_prob(q1, q2);
    const int outcome = rng.uniform() < p_odd ? 1 : 0;
    project_parity(q1, q2, outcome);
    return outcome;
  }

  double parity_odd_prob(int q1, int q2) const {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2) throw std::invalid_argument("parity: duplicate targets");
    const std::size_t b1 = mask(q1);
    const std::size_t b2 = mask(q2);
    double p = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      const bool odd = (bool(i & b1) != bool(i & b2));
      if (odd) p += std::norm(amp_[i]);
    }
    return p;
  }

  // Project onto a fixed single-qubit outcome and renormalize.
  // Throws if the outcome has (near) zero probability mass.
  void project(int q, int outcome) {
    const std::size_t bit = mask(q);
    double kept = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      const bool one = bool(i & bit);
      if (one != (outcome == 1)) {
        amp_[i] = cx{0.0, 0.0};
      } else {
        kept += std::norm(amp_[i]);
      }
    }
    renormalize(kept, "project");
  }

  void project_parity(int q1, int q2, int parity) {
    const std::size_t b1 = mask(q1);
    const std::size_t b2 = mask(q2);
    double kept = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      const bool odd = (bool(i & b1) != bool(i & b2));
      if (odd != (parity == 1)) {
        amp_[i] = cx{0.0, 0.0};
      } else {
        kept += std::norm(amp_[i]);
      }
    }
    renormalize(kept, "project_parity");
  }

  bool in_ground_state(int q, double tol = 1e-12) const { return prob_one(q) < tol; }

  // Write an arbitrary pure state onto a ground-state qubit. Used for
  // teleportation payloads; not a gate.
  void set_qubit_state(int q, cx alpha, cx beta) {
    check_qubit(q);
    if (!in_ground_state(q)) {
      throw std::invalid_argument("set_qubit_state: qubit not in |0>");
    }
    const double n2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(n2 - 1.0) > 1e-9) {
      throw std::invalid_argument("set_qubit_state: state not normalized");
    }
    const std::size_t bit = mask(q);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) continue;
      const cx a = amp_[i];
      amp_[i] = a * alpha;
      amp_[i | bit] = a * beta;
    }
  }

  // (|001>+|010>+|100>)/sqrt(3) on (q1,q2,q3); qubits must start in |000>.
  void prepare_w(int q1, int q2, int q3) {
    check_distinct({q1, q2, q3});
    for (int q : {q1, q2, q3}) {
      if (!in_ground_state(q)) throw std::invalid_argument("prepare_w: qubits not in |000>");
    }
    const std::size_t b1 = mask(q1), b2 = mask(q2), b3 = mask(q3);
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & (b1 | b2 | b3)) continue;
      const cx a = amp_[i] * inv_sqrt3;
      amp_[i] = cx{0.0, 0.0};
      amp_[i | b3] += a;  // |001>
      amp_[i | b2] += a;  // |010>
      amp_[i | b1] += a;  // |100>
    }
  }

  // |Phi+> = (|00>+|11>)/sqrt(2) or |Psi+> = (|01>+|10>)/sqrt(2).
  void prepare_bell(int q1, int q2, BellKind kind = BellKind::PhiPlus) {
    check_distinct({q1, q2});
    for (int q : {q1, q2}) {
      if (!in_ground_state(q)) throw std::invalid_argument("prepare_bell: qubits not in |00>");
    }
    const std::size_t b1 = mask(q1), b2 = mask(q2);
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & (b1 | b2)) continue;
      const cx a = amp_[i] * inv_sqrt2;
      amp_[i] = cx{0.0, 0.0};
      if (kind == BellKind::PhiPlus) {
        amp_[i] += a;
        amp_[i | b1 | b2] += a;
      } else {
        amp_[i | b2] += a;
        amp_[i | b1] += a;
      }
    }
  }

  // Fidelity |<target|psi>|^2 of the reduced state on `qubits` (partial
  // trace over the rest): F = sum_rest |<target (x) e_rest | psi>|^2.
  double fidelity(const std::vector<int>& qubits, const std::vector<cx>& target) const {
    check_distinct(qubits);
    const std::size_t k = qubits.size();
    if (target.size() != (std::size_t{1} << k)) {
      throw std::invalid_argument("fidelity: target dimension mismatch");
    }
    std::vector<int> rest;
    for (int q = 0; q < n_; ++q) {
      if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) rest.push_back(q);
    }
    const std::size_t rest_dim = std::size_t{1} << rest.size();
    double f = 0.0;
    for (std::size_t r = 0; r < rest_dim; ++r) {
      std::size_t base = 0;
      for (std::size_t j = 0; j < rest.size(); ++j) {
        if (r & (std::size_t{1} << (rest.size() - 1 - j))) base |= mask(rest[j]);
      }
      cx inner{0.0, 0.0};
      for (std::size_t s = 0; s < target.size(); ++s) {
        std::size_t idx = base;
        for (std::size_t j = 0; j < k; ++j) {
          if (s & (std::size_t{1} << (k - 1 - j))) idx |= mask(qubits[j]);
        }
        inner += std::conj(target[s]) * amp_[idx];
      }
      f += std::norm(inner);
    }
    return f;
  }

  double fidelity_bell(int q1, int q2, BellKind kind = BellKind::PhiPlus) const {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<cx> t(4, cx{0.0, 0.0});
    if (kind == BellKind::PhiPlus) {
      t[0] = t[3] = inv_sqrt2;
    } else {
      t[1] = t[2] = inv_sqrt2;
    }
    return fidelity({q1, q2}, t);
  }

 private:
  std::size_t mask(int q) const { return std::size_t{1} << (n_ - 1 - q); }

  void check_qubit(int q) const {
    if (q < 0 || q >= n_) throw std::out_of_range("qubit index out of range");
  }

  void check_distinct(const std::vector<int>& qs) const {
    for (std::size_t i = 0; i < qs.size(); ++i) {
      check_qubit(qs[i]);
      for (std::size_t j = i + 1; j < qs.size(); ++j) {
        if (qs[i] == qs[j]) throw std::invalid_argument("duplicate qubit targets");
      }
    }
  }

  void renormalize(double kept, const char* who) {
    if (kept <= 1e-300) {
      throw std::runtime_error(std::string(who) + ": projecting onto zero-probability outcome");
    }
    const double inv = 1.0 / std::sqrt(kept);
    for (cx& a : amp_) a *= inv;
  }

  int n_;
  std::vector<cx> amp_;
  std::map<std::string, int> labels_;
};

inline StateRegister alloc_register(int n) { return StateRegister(n); }

inline void apply_gate(StateRegister& reg, Gate gate, const std::vector<int>& targets) {
  switch (gate) {
    case Gate::H:
      if (targets.size() != 1) throw std::invalid_argument("H takes one target");
      reg.apply_h(targets[0]);
      return;
    case Gate::X:
      if (targets.size() != 1) throw std::invalid_argument("X takes one target");
      reg.apply_x(targets[0]);
      return;
    case Gate::Z:
      if (targets.size() != 1) throw std::invalid_argument("Z takes one target");
      reg.apply_z(targets[0]);
      return;
    case Gate::Cnot:
      if (targets.size() != 2) throw std::invalid_argument("CNOT takes control,target");
      reg.apply_cnot(targets[0], targets[1]);
      return;
  }
  throw std::invalid_argument("unknown gate");
}

// Bell-state measurement: CNOT(q1->q2), H(q1), measure both.
inline BellOutcome bell_measure(StateRegister& reg, int q1, int q2, Rng& rng) {
  reg.apply_cnot(q1, q2);
  reg.apply_h(q1);
  BellOutcome out;
  out.phase_bit = reg.measure(q1, rng);
  out.parity_bit = reg.measure(q2, rng);
  return out;
}

inline void apply_pauli_correction(StateRegister& reg, int q, const BellOutcome& out) {
  if (out.parity_bit) reg.apply_x(q);
  if (out.phase_bit) reg.apply_z(q);
}

// Outcome of converting one atom-photon-photon W-state plus a repeater atom
// into entangled pairs: H on the atom, CNOT(atom -> p1), then a heralding
// parity measurement on (p2, a_lc).
//   TwoEpr   (odd parity, prob 2/3):  |Phi+>(atom,p1) (x) |Psi+>(p2,a_lc)
//   Residual (even parity, prob 1/3): |Psi+>(atom,p1) (x) |00>(p2,a_lc)
enum class WBranch { TwoEpr, Residual };

struct WConversion {
  WBranch branch = WBranch::TwoEpr;
  double two_epr_prob = 0.0;  // analytic branch probability before collapse
};

struct WQubits {
  int p1 = 0;
  int p2 = 0;
  int a_lc = 0;
};

inline WConversion convert_w_to_epr(StateRegister& reg, const WQubits& w, int repeater_atom,
                                    Rng& rng) {
  if (!reg.in_ground_state(repeater_atom)) {
    throw std::invalid_argument("convert_w_to_epr: repeater atom not in |0>");
  }
  reg.apply_h(repeater_atom);
  reg.apply_cnot(repeater_atom, w.p1);
  WConversion result;
  result.two_epr_prob = reg.parity_odd_prob(w.p2, w.a_lc);
  const int parity = reg.measure_parity(w.p2, w.a_lc, rng);
  result.branch = parity == 1 ? WBranch::TwoEpr : WBranch::Residual;
  return result;
}

// Post-selected variant: projects the herald onto the TwoEpr branch.
// Used by distribution oracles where the residual outcome is handled as an
// in-attempt re-preparation rather than a fresh stochastic draw.
inline WConversion convert_w_to_epr_postselected(StateRegister& reg, const WQubits& w,
                                                 int repeater_atom) {
  if (!reg.in_ground_state(repeater_atom)) {
    throw std::invalid_argument("convert_w_to_epr: repeater atom not in |0>");
  }
  reg.apply_h(repeater_atom);
  reg.apply_cnot(repeater_atom, w.p1);
  WConversion result;
  result.two_epr_prob = reg.parity_odd_prob(w.p2, w.a_lc);
  reg.project_parity(w.p2, w.a_lc, 1);
  result.branch = WBranch::TwoEpr;
  return result;
}

struct QubitPair {
  int a = 0;
  int b = 0;
};

struct SwapResult {
  QubitPair pair;  // the surviving outer pair
  BellOutcome outcome;
};

// Entanglement swapping: BSM on (left.b, right.a), Pauli correction applied
// immediately at right.b. With both inputs in |Phi+>, (left.a, right.b)
// ends in |Phi+> exactly.
inline SwapResult entanglement_swap(StateRegister& reg, const QubitPair& left,
                                    const QubitPair& right, Rng& rng) {
  std::array<int, 4> qs{left.a, left.b, right.a, right.b};
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = i + 1; j < qs.size(); ++j) {
      if (qs[i] == qs[j]) throw std::invalid_argument("entanglement_swap: pairs not disjoint");
    }
  }
  SwapResult result;
  result.outcome = bell_measure(reg, left.b, right.a, rng);
  apply_pauli_correction(reg, right.b, result.outcome);
  result.pair = QubitPair{left.a, right.b};
  return result;
}

struct TeleportResult {
  int delivered = 0;  // destination qubit index
  BellOutcome outcome;
};

// Teleport `payload` through an EPR pair (epr.a at the source, epr.b at the
// destination). The pair must hold |Phi+>; corrections are applied at epr.b.
inline TeleportResult teleport(StateRegister& reg, int payload, const QubitPair& epr, Rng& rng) {
  if (payload == epr.a || payload == epr.b || epr.a == epr.b) {
    throw std::invalid_argument("teleport: qubits not distinct");
  }
  if (reg.fidelity_bell(epr.a, epr.b) < 1.0 - 1e-9) {
    throw std::invalid_argument("teleport: pair is not |Phi+> entangled");
  }
  TeleportResult result;
  result.outcome = bell_measure(reg, payload, epr.a, rng);
  apply_pauli_correction(reg, epr.b, result.outcome);
  result.delivered = epr.b;
  return result;
}

}  // namespace qnet
