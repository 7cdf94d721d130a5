#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qnet/noise.hpp"
#include "qnet/quantum.hpp"

using namespace qnet;
using Catch::Approx;

TEST_CASE("channel success probability") {
  CHECK(channel_success_prob(0.0, 0.0, 100.0) == Approx(1.0));
  // (1 - 1e-4) * 10^(-1e-5 * 100 / 10)
  CHECK(channel_success_prob(0.0001, 1e-5, 100.0) == Approx(0.99967).margin(1e-5));
  // 0.2 dB/km over 100 km: 1% per photon; four photons are practically zero.
  const double per_photon = channel_success_prob(0.0, 0.2, 100.0);
  CHECK(per_photon == Approx(0.01).margin(1e-12));
  CHECK(std::pow(per_photon, 4) == Approx(1e-8).margin(1e-12));
  CHECK_THROWS_AS(channel_success_prob(-0.1, 0.0, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(channel_success_prob(0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("EPR distribution probability") {
  SECTION("perfect components") {
    ComponentProbs c;
    CHECK(epr_distribution_prob(c) == Approx(1.0));
  }
  SECTION("worked example") {
    ComponentProbs c;
    c.p_w = 0.9;
    c.p_qchannel = 0.95;
    c.p_bsm = 0.9;
    c.p_p_swap = 0.9;
    c.p_a_swap = 0.9;
    // 0.81 * 0.9025 * 0.81 * 0.81 * 0.9
    CHECK(epr_distribution_prob(c) == Approx(0.4317).margin(1e-4));
  }
  SECTION("monotone in every component") {
    ComponentProbs lo;
    lo.p_w = 0.5;
    lo.p_qchannel = 0.6;
    lo.p_bsm = 0.7;
    lo.p_p_swap = 0.8;
    lo.p_a_swap = 0.9;
    const double base = epr_distribution_prob(lo);
    auto bumped = [&](int i) {
      ComponentProbs hi = lo;
      switch (i) {
        case 0: hi.p_w += 0.05; break;
        case 1: hi.p_qchannel += 0.05; break;
        case 2: hi.p_bsm += 0.05; break;
        case 3: hi.p_p_swap += 0.05; break;
        default: hi.p_a_swap += 0.05; break;
      }
      return hi;
    };
    for (int i = 0; i < 5; ++i) {
      CHECK(epr_distribution_prob(bumped(i)) >= base);
    }
  }
  SECTION("Monte Carlo over the four-step protocol matches the formula") {
    ComponentProbs c;
    c.p_w = 0.9;
    c.p_qchannel = 0.95;
    c.p_bsm = 0.9;
    c.p_p_swap = 0.9;
    c.p_a_swap = 0.9;
    Rng rng(99);
    const int trials = 100000;
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      // step 1: two preparations, two channel groups; step 2: two BSMs;
      // step 3: two photon swaps; step 4: one atom swap.
      bool s = rng.uniform() < c.p_w && rng.uniform() < c.p_w;
      s = s && rng.uniform() < c.p_qchannel && rng.uniform() < c.p_qchannel;
      s = s && rng.uniform() < c.p_bsm && rng.uniform() < c.p_bsm;
      s = s && rng.uniform() < c.p_p_swap && rng.uniform() < c.p_p_swap;
      s = s && rng.uniform() < c.p_a_swap;
      ok += s ? 1 : 0;
    }
    CHECK(std::abs(ok / double(trials) - epr_distribution_prob(c)) < 0.01);
  }
}

TEST_CASE("channel quality formula") {
  CHECK(channel_quality(0.0, 0.0).value == 1.0);
  CHECK(channel_quality(0.2, 0.02).value == 0.85);
  CHECK(channel_quality(1.0, 0.2).value == Approx(0.0).margin(1e-12));
  SECTION("monotone decreasing in both arguments") {
    double prev = 1.0;
    for (double li : {0.0, 0.1, 0.2, 0.4}) {
      const double v = channel_quality(li, 0.01).value;
      CHECK(v <= prev);
      prev = v;
    }
    prev = 1.0;
    for (double ln : {0.0, 0.05, 0.1, 0.2}) {
      const double v = channel_quality(0.1, ln).value;
      CHECK(v <= prev);
      prev = v;
    }
  }
  SECTION("clamp and flag above the cap") {
    const ChannelQuality q = channel_quality(0.0, 0.5);
    CHECK(q.clamped);
    CHECK(q.value == Approx(0.5));
  }
}

TEST_CASE("W-state parameter mapping") {
  SECTION("operation ratio") {
    CHECK(wstate_op_ratio(1) == 11);
    CHECK(wstate_op_ratio(4) == 8);  // 7.25 rounds up
    CHECK(wstate_op_ratio(5) == 7);
    CHECK(wstate_op_ratio(1000000) == 7);
  }
  SECTION("mapped parameters") {
    EnvParams base;
    base.depolarizing_rate = 0.1;
    base.dephasing_rate = 0.01;
    base.loss_init = 0.0001;
    base.loss_noise = 1e-5;
    const EnvParams w = wstate_param_map(base, 5.0, 4);
    CHECK(w.depolarizing_rate == Approx(0.02));
    CHECK(w.dephasing_rate == Approx(1.0 - std::pow(0.99, 8)).margin(1e-12));
    CHECK(w.dephasing_rate == Approx(0.07726).margin(1e-5));
    CHECK(w.loss_init == Approx(1.9999e-4).margin(1e-9));
    CHECK(w.loss_noise == Approx(2e-5).margin(1e-15));
  }
  SECTION("ratio one keeps the memory rate") {
    EnvParams base;
    base.depolarizing_rate = 0.1;
    base.dephasing_rate = 0.01;
    const EnvParams w = wstate_param_map(base, 1.0, 1000000);
    CHECK(w.depolarizing_rate == Approx(0.1));
    // op ratio floors just above 6
    CHECK(w.dephasing_rate == Approx(1.0 - std::pow(0.99, 7)).margin(1e-12));
  }
  SECTION("input validation") {
    EnvParams base;
    CHECK_THROWS_AS(wstate_param_map(base, 0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(wstate_op_ratio(0), std::invalid_argument);
  }
}

TEST_CASE("decoherence of stored fidelity") {
  CHECK(decohere_fidelity(0.9, 0.0, 0.1) == Approx(0.9));
  CHECK(decohere_fidelity(1.0, 1e9, 0.1) == Approx(0.25).margin(1e-9));
  // 0.25 + 0.75 * exp(-0.1)
  CHECK(decohere_fidelity(1.0, 1.0, 0.1) == Approx(0.9286).margin(1e-4));
  SECTION("monotone non-increasing in time") {
    double prev = 1.0;
    for (double t : {0.0, 0.5, 1.0, 5.0, 20.0}) {
      const double f = decohere_fidelity(1.0, t, 0.3);
      CHECK(f <= prev);
      prev = f;
    }
  }
}

TEST_CASE("operation success probability") {
  CHECK(op_success_prob(0.0, 100) == Approx(1.0));
  CHECK(op_success_prob(0.01, 8) == Approx(0.92274).margin(1e-5));
  CHECK(op_success_prob(1.0, 1) == Approx(0.0));
}

TEST_CASE("component probabilities from the environment") {
  EnvParams env;
  env.dephasing_rate = 0.02;
  env.loss_init = 0.001;
  env.loss_noise = 1e-4;
  env.length_km = 100.0;
  const ComponentProbs c = derive_component_probs(env, 0.93);
  CHECK(c.p_w == Approx(0.93));
  CHECK(c.p_qchannel == Approx(channel_success_prob(env)));
  CHECK(c.p_bsm == Approx(0.98));
  CHECK(c.p_a_swap == Approx(0.98));
  // every output lies in [0, 1]
  for (double v : {c.p_w, c.p_qchannel, c.p_bsm, c.p_p_swap, c.p_a_swap}) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}
