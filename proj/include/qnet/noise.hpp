// Environmental-interference parameters and the closed-form success
// probability / parameter-mapping formulas used throughout the simulator.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qnet {

// Per-device / per-channel environmental interference.
//   depolarizing_rate : probability per unit time (memory decay)
//   dephasing_rate    : probability per quantum operation
//   loss_init         : initial photon-loss probability entering a channel
//   loss_noise        : channel noise in dB/km
struct EnvParams {
  double depolarizing_rate = 0.0;
  double dephasing_rate = 0.0;
  double loss_init = 0.0;
  double loss_noise = 0.0;
  double length_km = 100.0;

  void validate() const {
    auto prob = [](double v, const char* name) {
      if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument(std::string("EnvParams: ") + name + " outside [0,1]");
      }
    };
    prob(depolarizing_rate, "depolarizing_rate");
    prob(dephasing_rate, "dephasing_rate");
    prob(loss_init, "loss_init");
    if (loss_noise < 0.0) throw std::invalid_argument("EnvParams: loss_noise < 0");
    if (length_km <= 0.0) throw std::invalid_argument("EnvParams: length_km <= 0");
  }
};

// Component success probabilities of the four-step W-state distribution.
struct ComponentProbs {
  double p_w = 1.0;        // W-state preparation
  double p_qchannel = 1.0; // per-photon channel transmission
  double p_bsm = 1.0;      // atom-photon BSM
  double p_p_swap = 1.0;   // photon-photon swap
  double p_a_swap = 1.0;   // atom-atom swap

  void validate() const {
    for (double v : {p_w, p_qchannel, p_bsm, p_p_swap, p_a_swap}) {
      if (v < 0.0 || v > 1.0) throw std::invalid_argument("ComponentProbs outside [0,1]");
    }
  }
};

// Per-photon survival over a fiber channel:
// (1 - loss_init) * 10^(-loss_noise * length / 10).
inline double channel_success_prob(double loss_init, double loss_noise, double length_km) {
  if (loss_init < 0.0 || loss_init > 1.0) {
    throw std::invalid_argument("channel_success_prob: loss_init outside [0,1]");
  }
  if (loss_noise < 0.0) throw std::invalid_argument("channel_success_prob: loss_noise < 0");
  if (length_km <= 0.0) throw std::invalid_argument("channel_success_prob: length_km <= 0");
  return (1.0 - loss_init) * std::pow(10.0, -loss_noise * length_km / 10.0);
}

inline double channel_success_prob(const EnvParams& env) {
  return channel_success_prob(env.loss_init, env.loss_noise, env.length_km);
}

// Success probability of one complete W-state distribution:
//   p1 = p_w^2 * p_qchannel^2   (two preparations, two channels)
//   p2 = p_bsm^2                (atom-photon BSM at both repeaters)
//   p3 = p_p_swap^2             (photon swap at both repeaters)
//   p4 = p_a_swap               (atom swap at the controller)
inline double epr_distribution_prob(const ComponentProbs& c) {
  c.validate();
  const double p1 = c.p_w * c.p_w * c.p_qchannel * c.p_qchannel;
  const double p2 = c.p_bsm * c.p_bsm;
  const double p3 = c.p_p_swap * c.p_p_swap;
  const double p4 = c.p_a_swap;
  return p1 * p2 * p3 * p4;
}

// Channel quality on a 100 km reference channel. The 0.2 dB/km cap is where
// distribution success reaches zero; inputs above it are clamped and flagged.
struct ChannelQuality {
  double value = 1.0;
  bool clamped = false;
};

inline ChannelQuality channel_quality(double loss_init, double loss_noise) {
  constexpr double kNoiseCap = 0.2;
  if (loss_init < 0.0 || loss_init > 1.0) {
    throw std::invalid_argument("channel_quality: loss_init outside [0,1]");
  }
  if (loss_noise < 0.0) throw std::invalid_argument("channel_quality: loss_noise < 0");
  ChannelQuality q;
  if (loss_noise > kNoiseCap) {
    loss_noise = kNoiseCap;
    q.clamped = true;
  }
  q.value = 1.0 - (loss_init + loss_noise / kNoiseCap) / 2.0;
  if (q.value < 0.0) q.value = 0.0;
  return q;
}

// Quantum-operation ratio of W-state distribution to double-photon
// distribution for an n-hop path: ceil(6 + 5/n), bounded by 6 < ratio <= 11.
inline int wstate_op_ratio(int hops) {
  if (hops < 1) throw std::invalid_argument("wstate_op_ratio: hops < 1");
  return static_cast<int>(std::ceil(6.0 + 5.0 / static_cast<double>(hops)));
}

// Map double-photon environmental parameters onto the W-state scheme:
//   AMDR = OMDR / N
//   WDR  = 1 - (1 - DPDR)^ceil(6 + 5/hops)
//   WLIR = 1 - (1 - DPLIR)^2
//   WLN  = 2 * DPLN
inline EnvParams wstate_param_map(const EnvParams& base, double memory_ratio_n, int hops) {
  base.validate();
  if (memory_ratio_n < 1.0) throw std::invalid_argument("wstate_param_map: memory ratio < 1");
  const int ratio = wstate_op_ratio(hops);
  EnvParams mapped = base;
  mapped.depolarizing_rate = base.depolarizing_rate / memory_ratio_n;
  mapped.dephasing_rate = 1.0 - std::pow(1.0 - base.dephasing_rate, ratio);
  mapped.loss_init = 1.0 - (1.0 - base.loss_init) * (1.0 - base.loss_init);
  mapped.loss_noise = 2.0 * base.loss_noise;
  return mapped;
}

// Fidelity of a stored qubit after `elapsed` time units: exponential approach
// to the maximally mixed value 1/4.
inline double decohere_fidelity(double f0, double elapsed, double depolarizing_rate) {
  if (f0 < 0.0 || f0 > 1.0) throw std::invalid_argument("decohere_fidelity: f0 outside [0,1]");
  if (elapsed < 0.0) throw std::invalid_argument("decohere_fidelity: elapsed < 0");
  return 0.25 + (f0 - 0.25) * std::exp(-depolarizing_rate * elapsed);
}

// Probability that n quantum operations all succeed at a given per-operation
// dephasing rate.
inline double op_success_prob(double dephasing_rate, int n_ops) {
  if (dephasing_rate < 0.0 || dephasing_rate > 1.0) {
    throw std::invalid_argument("op_success_prob: rate outside [0,1]");
  }
  if (n_ops < 0) throw std::invalid_argument("op_success_prob: n_ops < 0");
  return std::pow(1.0 - dephasing_rate, n_ops);
}

// Component probabilities implied by an environment. W-state preparation
// success is a device constant, not derived from the environment.
inline ComponentProbs derive_component_probs(const EnvParams& env, double p_w) {
  env.validate();
  ComponentProbs c;
  c.p_w = p_w;
  c.p_qchannel = channel_success_prob(env);
  c.p_bsm = op_success_prob(env.dephasing_rate, 1);
  c.p_p_swap = op_success_prob(env.dephasing_rate, 1);
  c.p_a_swap = op_success_prob(env.dephasing_rate, 1);
  return c;
}

}  // namespace qnet
