// Acceptance suite: one check per release criterion, each printing a single
// PASS/FAIL line. Run with no arguments for the full suite or with a
// criterion number to run one check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qnet/qnet.hpp"

using namespace qnet;

namespace {

struct Ctx {
  std::ostringstream detail;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- 1: W-state conversion branch probability ------------------------------

void criterion_01(Ctx& c) {
  const auto t0 = std::chrono::steady_clock::now();
  StateRegister reg(4);
  reg.prepare_w(0, 1, 2);
  Rng probe(1);
  const WConversion conv = convert_w_to_epr(reg, WQubits{0, 1, 2}, 3, probe);
  c.expect(std::abs(conv.two_epr_prob - 2.0 / 3.0) < 1e-12,
           "analytic branch probability != 2/3");

  Rng rng(20240614);
  const int trials = 30000;
  int two_epr = 0;
  for (int i = 0; i < trials; ++i) {
    StateRegister r(4);
    r.prepare_w(0, 1, 2);
    two_epr += convert_w_to_epr(r, WQubits{0, 1, 2}, 3, rng).branch == WBranch::TwoEpr ? 1 : 0;
  }
  const double freq = two_epr / double(trials);
  c.detail << "freq=" << freq;
  c.expect(freq >= 0.657 && freq <= 0.677, "Monte Carlo frequency outside [0.657, 0.677]");
  c.expect(elapsed_s(t0) < 5.0, "runtime exceeded 5 s");
}

// --- 2: noiseless end-to-end teleportation ---------------------------------

void criterion_02(Ctx& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const Topology topo = build_hierarchical_cellular(2);
  EngineConfig cfg;
  cfg.routing = RoutingAlgo::Greedy;
  cfg.scheme = Scheme::DpCepd;
  cfg.oracle_mode = true;
  cfg.p_w = 1.0;
  Rng payload_rng(99);
  double worst = 1.0;
  for (int i = 0; i < 100; ++i) {
    Engine eng(topo, cfg, 5000 + i);
    const double theta = payload_rng.uniform() * 3.141592653589793;
    const double phi = payload_rng.uniform() * 2 * 3.141592653589793;
    eng.set_payload(cx{std::cos(theta / 2), 0.0},
                    cx{std::sin(theta / 2) * std::cos(phi), std::sin(theta / 2) * std::sin(phi)});
    const Metrics m = eng.run_sessions("U_A", "U_B", 1);
    if (m.successes != 1) {
      c.expect(false, "noiseless session failed");
      return;
    }
    if (eng.outcomes().front().final_path.size() != 6) {
      c.expect(false, "route is not the four-repeater path");
    }
    worst = std::min(worst, m.fidelity_mean);
  }
  c.detail << "worst fidelity=" << worst;
  c.expect(worst > 1.0 - 1e-9, "delivered fidelity below 1 - 1e-9");
  c.expect(elapsed_s(t0) < 5.0, "runtime exceeded 5 s");
}

// --- 3: Eq. 9 equivalence ----------------------------------------------------

void criterion_03(Ctx& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng setting_rng(777);
  double worst_gap = 0.0;
  for (int setting = 0; setting < 20; ++setting) {
    ComponentProbs comp;
    comp.p_w = 0.75 + 0.25 * setting_rng.uniform();
    comp.p_qchannel = 0.75 + 0.25 * setting_rng.uniform();
    comp.p_bsm = 0.75 + 0.25 * setting_rng.uniform();
    comp.p_p_swap = 0.75 + 0.25 * setting_rng.uniform();
    comp.p_a_swap = 0.75 + 0.25 * setting_rng.uniform();
    const double analytic = epr_distribution_prob(comp);
    Rng rng(detail::mix_seed(424242, setting));
    const int trials = 100000;
    int ok = 0;
    const SegmentProbs probs = SegmentProbs::uniform(comp);
    for (int i = 0; i < trials; ++i) {
      ok += wstate_cepd_segment(probs, OpTiming{}, rng).success ? 1 : 0;
    }
    const double gap = std::abs(ok / double(trials) - analytic);
    worst_gap = std::max(worst_gap, gap);
  }
  c.detail << "worst |freq - analytic|=" << worst_gap;
  c.expect(worst_gap <= 0.01, "simulated frequency off the analytic product by > 0.01");
  c.expect(elapsed_s(t0) < 60.0, "runtime exceeded 60 s");
}

// --- 4: channel quality ------------------------------------------------------

void criterion_04(Ctx& c) {
  c.expect(channel_quality(0.2, 0.02).value == 0.85, "channel_quality(0.2, 0.02) != 0.85");
  c.expect(channel_quality(0.0, 0.0).value == 1.0, "channel_quality(0, 0) != 1");
}

// --- 5: W-state parameter mapping -------------------------------------------

void criterion_05(Ctx& c) {
  c.expect(wstate_op_ratio(4) == 8, "op ratio for 4 hops != 8");
  EnvParams base;
  base.depolarizing_rate = 0.1;
  base.dephasing_rate = 0.01;
  base.loss_init = 1e-4;
  base.loss_noise = 1e-5;
  const EnvParams w = wstate_param_map(base, 5.0, 4);
  c.expect(std::abs(w.dephasing_rate - (1.0 - std::pow(0.99, 8))) < 1e-10,
           "WDR(0.01) != 1 - 0.99^8");
  c.expect(w.loss_init == 1.0 - (1.0 - 1e-4) * (1.0 - 1e-4), "WLIR mismatch");
  c.expect(w.loss_noise == 2.0 * 1e-5, "WLN mismatch");
}

// --- 6: distribution counters ------------------------------------------------

void criterion_06(Ctx& c) {
  Rng rng(6);
  const std::vector<SegmentProbs> two(2), four(4);
  const ChainResult w = distribute_chain(Scheme::WStateCepd, two, 1.0, OpTiming{}, rng);
  const ChainResult dp = distribute_chain(Scheme::DpCepd, two, 1.0, OpTiming{}, rng);
  const ChainResult depd =
      distribute_chain(Scheme::DepdSenderReceiver, four, 1.0, OpTiming{}, rng);
  c.detail << "W=(" << w.total.ops_performed << "," << w.total.photons_sent << ") DP=("
           << dp.total.ops_performed << "," << dp.total.photons_sent << ") DEPD=("
           << depd.total.ops_performed << "," << depd.total.photons_sent << ")";
  c.expect(w.total.success && w.total.ops_performed == 11 && w.total.photons_sent == 8,
           "W-state CEPD counters != (11, 8)");
  c.expect(dp.total.success && dp.total.ops_performed == 1 && dp.total.photons_sent == 4,
           "DP CEPD counters != (1, 4)");
  c.expect(depd.total.success && depd.total.ops_performed == 3 && depd.total.photons_sent == 4,
           "DP DEPD counters != (3, 4)");
}

// --- 7: routing consumption and time (desk-scale Table III) ------------------

void criterion_07(Ctx& c) {
  ScenarioParams p = default_scenario_params("routing-cost");
  p.trials = 10;
  p.sessions = 40;
  const std::vector<CsvRow> rows = run_scenario(p);
  std::map<std::string, const CsvRow*> by_algo;
  for (const CsvRow& r : rows) by_algo[r.param_name] = &r;
  const CsvRow& greedy = *by_algo.at("cost[greedy]");
  const CsvRow& qcast = *by_algo.at("cost[qcast]");
  const CsvRow& cer = *by_algo.at("cost[cer]");
  const CsvRow& slmp = *by_algo.at("cost[slmp]");

  const Topology topo = build_hierarchical_cellular(2);
  c.detail << "pairs: greedy=" << greedy.pairs_consumed_mean << " qcast=" << qcast.pairs_consumed_mean
           << " cer=" << cer.pairs_consumed_mean << " slmp=" << slmp.pairs_consumed_mean
           << " (reference layout has 33 links); times ms: " << greedy.route_time_ms_mean << " "
           << qcast.route_time_ms_mean << " " << cer.route_time_ms_mean << " "
           << slmp.route_time_ms_mean;
  c.expect(greedy.pairs_consumed_mean == 5.0, "greedy consumption != 5 exactly");
  c.expect(slmp.pairs_consumed_mean == double(topo.quantum_link_count()),
           "SLMP consumption != quantum link count");
  c.expect(qcast.pairs_consumed_mean >= 5.0 && qcast.pairs_consumed_mean <= 5.4,
           "Q-Cast mean consumption outside [5.0, 5.4]");
  c.expect(greedy.route_time_ms_mean < qcast.route_time_ms_mean &&
               qcast.route_time_ms_mean < cer.route_time_ms_mean &&
               cer.route_time_ms_mean < slmp.route_time_ms_mean,
           "routing time ordering violated");
}

// --- 8: equivalent parameter network -----------------------------------------

void criterion_08(Ctx& c) {
  ScenarioParams p = default_scenario_params("routing-equivalent");
  const Topology topo = build_hierarchical_cellular(p.rings, p.env, p.channel_km);

  auto run_algo = [&](RoutingAlgo algo) {
    EngineConfig cfg;
    cfg.routing = algo;
    cfg.scheme = Scheme::DpCepd;
    cfg.base_env = p.env;
    cfg.p_w = p.p_w;
    Engine eng(topo, cfg, 8801);
    eng.prime_statistics();
    Metrics m = eng.run_sessions("U_A", "U_B", 200);
    int hops = -1;
    for (const SessionOutcome& out : eng.outcomes()) {
      if (out.success) {
        hops = static_cast<int>(out.final_path.size()) - 2;
        break;
      }
    }
    return std::pair<Metrics, int>(m, hops);
  };
  const auto [cer, cer_hops] = run_algo(RoutingAlgo::Cer);
  const auto [greedy, greedy_hops] = run_algo(RoutingAlgo::Greedy);
  c.detail << "hops cer=" << cer_hops << " greedy=" << greedy_hops
           << " fid cer=" << cer.fidelity_mean << " greedy=" << greedy.fidelity_mean;
  c.expect(cer_hops == greedy_hops, "hop counts differ in the equivalent network");
  c.expect(std::abs(cer.fidelity_mean - greedy.fidelity_mean) < 0.02,
           "|fidelity gap| >= 0.02 over 200 sessions");
}

// --- 9: diversified parameter network ----------------------------------------

void criterion_09(Ctx& c) {
  ScenarioParams p = default_scenario_params("routing-diversified");
  p.trials = 100;  // seeds per point
  p.sessions = 30;

  for (const std::string sweep : {"dephasing", "loss_init", "loss_noise"}) {
    const auto& sds = diversified_stddevs(sweep);
    std::vector<double> gap;
    std::map<std::string, double> fid_at_max, thr_at_max;
    for (std::size_t k = 0; k < sds.size(); ++k) {
      const double std_deph = sweep == std::string("dephasing") ? sds[k] : 0.0;
      const double std_li = sweep == std::string("loss_init") ? sds[k] : 0.0;
      const double std_ln = sweep == std::string("loss_noise") ? sds[k] : 0.0;
      std::map<std::string, detail::TrialAggregate> aggs;
      for (int trial = 0; trial < p.trials; ++trial) {
        auto ms = diversified_point(p, std_deph, std_li, std_ln,
                                    detail::mix_seed(p.seed, detail::salt_of(sweep) + trial));
        for (const auto& [algo, m] : ms) aggs[algo].add(m);
      }
      std::map<std::string, CsvRow> rows;
      for (const auto& [algo, agg] : aggs) agg.fill(rows[algo]);
      gap.push_back(rows["cer"].fidelity_mean - rows["greedy"].fidelity_mean);
      if (k + 1 == sds.size()) {
        for (const auto& [algo, row] : rows) {
          fid_at_max[algo] = row.fidelity_mean;
          thr_at_max[algo] = row.throughput_qps;
        }
      }
    }
    for (const std::string base : {"greedy", "slmp", "qcast"}) {
      c.expect(fid_at_max["cer"] >= fid_at_max[base],
               sweep + ": CER fidelity below " + base + " at max stddev");
      c.expect(thr_at_max["cer"] >= thr_at_max[base],
               sweep + ": CER throughput below " + base + " at max stddev");
    }
    // Monotone trend with one tolerated inversion; drops below the sampling
    // noise floor (five percent of the sweep's largest gap) do not count.
    double top = 0.0;
    for (double g : gap) top = std::max(top, g);
    const double noise_floor = 0.05 * top;
    int inversions = 0;
    for (std::size_t k = 1; k < gap.size(); ++k) {
      if (gap[k] < gap[k - 1] - noise_floor) ++inversions;
    }
    std::ostringstream gs;
    for (double g : gap) gs << g << " ";
    c.detail << "[" << sweep << " gaps: " << gs.str() << "] ";
    c.expect(inversions <= 1, sweep + ": CER-greedy gap trend has > 1 inversion");
    c.expect(gap.back() > gap.front(), sweep + ": gap did not grow across the sweep");
  }
}

// --- 10: entanglement distribution comparison --------------------------------

void criterion_10(Ctx& c) {
  ScenarioParams p = default_scenario_params("epd-comparison");
  p.trials = 6;
  p.sessions = 50;
  const std::vector<CsvRow> rows = run_scenario(p);
  std::map<double, std::map<std::string, double>> fid;  // ratio -> curve -> fidelity
  for (const CsvRow& r : rows) {
    std::string curve = r.param_name;
    fid[r.param_value][curve] = r.fidelity_mean;
  }
  double crossover = -1.0;
  double prev_w = -1.0;
  bool strictly_increasing = true;
  std::ostringstream series;
  for (const auto& [ratio, curves] : fid) {
    const double w = curves.at("memory_ratio[wstate-cepd]");
    const double dc = curves.at("memory_ratio[dp-cepd]");
    const double dd = curves.at("memory_ratio[dp-depd]");
    series << "r" << ratio << ": w=" << w << " dc=" << dc << " dd=" << dd << "; ";
    c.expect(dc > dd, "DP-CEPD not above DP-DEPD at ratio " + format_double(ratio));
    if (prev_w >= 0.0 && w <= prev_w) strictly_increasing = false;
    prev_w = w;
    if (crossover < 0.0 && w > dc && w > dd) crossover = ratio;
  }
  c.detail << series.str() << "crossover=" << crossover;
  c.expect(strictly_increasing, "W-state fidelity not strictly increasing in the memory ratio");
  c.expect(crossover >= 3.0 && crossover <= 8.0, "crossover outside [3, 8]");
}

// --- 11: cost models ----------------------------------------------------------

void criterion_11(Ctx& c) {
  for (int rings = 1; rings <= 6; ++rings) {
    const double hier = maintenance_cost(build_hierarchical_cellular(rings));
    const double dist = maintenance_cost(build_distributed_cellular(rings));
    c.expect(dist == 4.0 * hier, "maintenance ratio != 4 at rings " + std::to_string(rings));
  }
  c.expect(control_plane_load(1000.0) == 300.0e6, "control_plane_load(1000) != 300 MB/s");
}

// --- 12: protocol conformance and conservation --------------------------------

void criterion_12(Ctx& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const Topology topo = build_hierarchical_cellular(2);
  Rng fault_rng(121212);
  int bad_transitions = 0;
  int violations = 0;
  int leaked = 0;
  const int runs = 10000;
  for (int run = 0; run < runs; ++run) {
    EngineConfig cfg;
    cfg.routing = run % 4 == 0 ? RoutingAlgo::QCast : RoutingAlgo::Greedy;
    cfg.scheme = Scheme::DpCepd;
    cfg.base_env.depolarizing_rate = 0.1;
    cfg.base_env.dephasing_rate = 0.02 + 0.1 * fault_rng.uniform();
    cfg.base_env.loss_init = 0.01 * fault_rng.uniform();
    cfg.p_w = 0.8 + 0.2 * fault_rng.uniform();
    Engine eng(topo, cfg, detail::mix_seed(31337, run));
    FaultPlan plan;
    const char* devices[3] = {"R_C", "R_E", "R_I"};
    if (fault_rng.uniform() < 0.6) {
      const double start = 2.0 * fault_rng.uniform();
      plan.herald_outage[devices[run % 3]] = {{start, start + 2.0 * fault_rng.uniform()}};
    }
    if (fault_rng.uniform() < 0.6) {
      const double start = 2.0 * fault_rng.uniform();
      plan.swap_hang[devices[(run + 1) % 3]] = {{start, start + 3.0 * fault_rng.uniform()}};
    }
    if (fault_rng.uniform() < 0.05) plan.reject_request = true;
    eng.set_fault_plan(plan);
    eng.run_sessions("U_A", "U_B", 1);
    for (const SessionOutcome& out : eng.outcomes()) {
      for (const auto& [from, to] : out.transitions) {
        if (!allowed_transition(from, to)) ++bad_transitions;
      }
    }
    violations += static_cast<int>(eng.violations().size());
    leaked += eng.csm().occupied_total() != 0 ? 1 : 0;
  }
  c.detail << "runs=" << runs << " bad_transitions=" << bad_transitions
           << " timer/memory violations=" << violations << " leaks=" << leaked
           << " elapsed=" << elapsed_s(t0) << "s";
  c.expect(bad_transitions == 0, "illegal session transitions observed");
  c.expect(violations == 0, "timer soundness or release violations recorded");
  c.expect(leaked == 0, "occupied memories remained after a session");
  c.expect(elapsed_s(t0) < 120.0, "runtime exceeded 120 s");
}

// --- 13: environmental interference beats hops ---------------------------------

void criterion_13(Ctx& c) {
  ScenarioParams p = default_scenario_params("env-importance");
  p.trials = 6;
  p.sessions = 60;
  const std::vector<CsvRow> rows = run_scenario(p);
  double prev_gap = -1.0;
  for (int group = 1; group <= 3; ++group) {
    double fa = 0, fb = 0, fc = 0;
    for (const CsvRow& r : rows) {
      if (static_cast<int>(r.param_value) != group) continue;
      if (r.param_name.find("path_a") == 0) fa = r.fidelity_mean;
      if (r.param_name.find("path_b") == 0) fb = r.fidelity_mean;
      if (r.param_name.find("path_c") == 0) fc = r.fidelity_mean;
    }
    c.detail << "g" << group << ": a=" << fa << " b=" << fb << " c=" << fc << "; ";
    c.expect(fb > fa && fb > fc,
             "five-hop low-interference path not highest in group " + std::to_string(group));
    const double gap = std::min(fb - fa, fb - fc);
    if (group > 1) {
      c.expect(gap > prev_gap, "fidelity gap did not grow into group " + std::to_string(group));
    }
    prev_gap = gap;
  }
}

struct Criterion {
  int id;
  const char* name;
  void (*fn)(Ctx&);
};

const Criterion kCriteria[] = {
    {1, "W-state conversion branch probability", criterion_01},
    {2, "noiseless end-to-end teleportation fidelity", criterion_02},
    {3, "simulated distribution matches the success-probability product", criterion_03},
    {4, "channel quality formula", criterion_04},
    {5, "W-state parameter mapping", criterion_05},
    {6, "per-scheme operation and photon counters", criterion_06},
    {7, "routing pair consumption and time ordering", criterion_07},
    {8, "equivalent-parameter network parity", criterion_08},
    {9, "diversified network: centralized routing wins", criterion_09},
    {10, "distribution comparison and memory-ratio crossover", criterion_10},
    {11, "maintenance and control-plane cost models", criterion_11},
    {12, "protocol conformance, timers and memory conservation", criterion_12},
    {13, "environmental interference outweighs hops", criterion_13},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (const Criterion& cr : kCriteria) {
    if (only != 0 && cr.id != only) continue;
    Ctx ctx;
    try {
      cr.fn(ctx);
    } catch (const std::exception& e) {
      ctx.ok = false;
      ctx.detail << "exception: " << e.what();
    }
    std::printf("%s criterion %2d: %s%s%s\n", ctx.ok ? "PASS" : "FAIL", cr.id, cr.name,
                ctx.detail.str().empty() ? "" : " -- ", ctx.detail.str().c_str());
    std::fflush(stdout);
    failures += ctx.ok ? 0 : 1;
  }
  return failures;
}
