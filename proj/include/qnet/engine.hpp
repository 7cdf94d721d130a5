// Deterministic discrete-event engine: the full communication model as a
// session state machine with the distribution timer t_d, the swapping &
// teleportation timer t_st, retry / reroute error control and metrics.
//
// One logical event loop per run; identical (topology, scenario, seed)
// inputs produce bit-identical traces and metrics.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qnet/control.hpp"
#include "qnet/distribution.hpp"
#include "qnet/noise.hpp"
#include "qnet/path.hpp"
#include "qnet/quantum.hpp"
#include "qnet/routing.hpp"
#include "qnet/topology.hpp"

namespace qnet {

enum class SessionState {
  Requested,
  Routing,
  Reserving,
  Preparing,
  Distributing,
  Swapping,
  Teleporting,
  Succeeded,
  Failed,
};

inline std::string to_string(SessionState s) {
  switch (s) {
    case SessionState::Requested: return "Requested";
    case SessionState::Routing: return "Routing";
    case SessionState::Reserving: return "Reserving";
    case SessionState::Preparing: return "Preparing";
    case SessionState::Distributing: return "Distributing";
    case SessionState::Swapping: return "Swapping";
    case SessionState::Teleporting: return "Teleporting";
    case SessionState::Succeeded: return "Succeeded";
    case SessionState::Failed: return "Failed";
  }
  return "?";
}

// The transition relation of the communication model. Conformance tests
// check every observed transition against this set.
inline bool allowed_transition(SessionState from, SessionState to) {
  using S = SessionState;
  switch (from) {
    case S::Requested: return to == S::Routing || to == S::Preparing || to == S::Failed;
    case S::Routing: return to == S::Reserving || to == S::Failed;
    case S::Reserving: return to == S::Preparing || to == S::Routing || to == S::Failed;
    case S::Preparing:
      return to == S::Distributing || to == S::Preparing || to == S::Routing || to == S::Failed;
    case S::Distributing:
      return to == S::Swapping || to == S::Teleporting || to == S::Preparing ||
             to == S::Routing || to == S::Failed;
    case S::Swapping:
      return to == S::Teleporting || to == S::Preparing || to == S::Routing || to == S::Failed;
    case S::Teleporting:
      return to == S::Succeeded || to == S::Preparing || to == S::Routing || to == S::Failed;
    case S::Succeeded:
    case S::Failed: return false;
  }
  return false;
}

enum class RoutingAlgo { Cer, Greedy, Slmp, QCast };

inline std::string to_string(RoutingAlgo a) {
  switch (a) {
    case RoutingAlgo::Cer: return "cer";
    case RoutingAlgo::Greedy: return "greedy";
    case RoutingAlgo::Slmp: return "slmp";
    case RoutingAlgo::QCast: return "qcast";
  }
  return "?";
}

inline RoutingAlgo routing_algo_from_string(const std::string& s) {
  if (s == "cer") return RoutingAlgo::Cer;
  if (s == "greedy") return RoutingAlgo::Greedy;
  if (s == "slmp") return RoutingAlgo::Slmp;
  if (s == "qcast") return RoutingAlgo::QCast;
  throw std::invalid_argument("unknown routing algorithm: " + s);
}

struct EngineConfig {
  RoutingAlgo routing = RoutingAlgo::Cer;
  Scheme scheme = Scheme::WStateCepd;
  EnvParams base_env;                       // default per-device interference
  std::map<std::string, EnvParams> device_env;  // per-device overrides
  double p_w = 0.95;                        // preparation success constant
  double memory_ratio = 1.0;                // atomic vs optical memory efficiency
  int retry_limit = 3;
  int cer_recursion = 2;
  OpTiming timing;
  double classical_proc_s = 1e-6;
  double td_factor = 3.0;
  double tst_factor = 2.0;
  bool oracle_mode = false;                 // exact-kernel quantum operations
  double route_work_unit_ms = 3e-3;         // deterministic routing cost model
};

// Injected faults for protocol conformance testing. An outage swallows the
// distribution herald of any segment touching the device (t_d must catch
// it); a swap hang swallows the swap result (t_st must catch it).
struct FaultPlan {
  std::map<std::string, std::vector<std::pair<double, double>>> herald_outage;
  std::map<std::string, std::vector<std::pair<double, double>>> swap_hang;
  bool reject_request = false;

  static bool covers(const std::map<std::string, std::vector<std::pair<double, double>>>& m,
                     const std::string& dev, double t) {
    auto it = m.find(dev);
    if (it == m.end()) return false;
    for (const auto& [a, b] : it->second) {
      if (t >= a && t < b) return true;
    }
    return false;
  }
};

struct SessionOutcome {
  int id = 0;
  bool success = false;
  std::string failure_reason;
  double fidelity = 0.0;
  double duration_s = 0.0;
  double route_time_ms = 0.0;
  int pairs_consumed = 0;
  int reroutes = 0;
  std::vector<std::string> final_path;
  std::vector<std::pair<SessionState, SessionState>> transitions;
};

struct Metrics {
  int sessions = 0;
  int successes = 0;
  double fidelity_mean = 0.0;
  double fidelity_stderr = 0.0;
  double throughput_qps = 0.0;
  double pairs_consumed_mean = 0.0;
  double route_time_ms_mean = 0.0;
  double elapsed_s = 0.0;
  std::map<std::string, int> failure_counts;

  double success_rate() const {
    return sessions == 0 ? 0.0 : static_cast<double>(successes) / sessions;
  }
};

class Engine {
 public:
  Engine(const Topology& topology, EngineConfig config, std::uint64_t seed)
      : topo_(topology),
        cfg_(std::move(config)),
        rng_(seed),
        csm_(CentralStateMatrix::from_topology(topology)) {
    if (topo_.hierarchical) {
      auto tables = build_dspt_dert(topo_);
      dspt_ = std::move(tables.first);
      dert_ = std::move(tables.second);
    }
  }

  const CentralStateMatrix& csm() const { return csm_; }
  CentralStateMatrix& csm() { return csm_; }
  const std::vector<std::string>& trace() const { return trace_; }
  const std::vector<std::string>& violations() const { return violations_; }
  const std::vector<SessionOutcome>& outcomes() const { return outcomes_; }
  double now() const { return now_; }

  void set_fault_plan(FaultPlan plan) { faults_ = std::move(plan); }

  // Seed the control-plane statistics as if the controller had been
  // collecting them before the measured window, which is the premise of the
  // centralized design. LinkState reflects the device's channel and
  // preparation quality, SwappingSuccessRate its operation quality.
  void prime_statistics() {
    const int photons = cfg_.scheme == Scheme::WStateCepd ? 2 : 1;
    for (const Device& d : topo_.devices()) {
      if (!routable_kind(d.kind)) continue;
      DeviceRecord& rec = csm_.record(d.id);
      double sum = 0.0;
      int n = 0;
      for (const QuantumChannel& c : topo_.qchannels()) {
        if (c.a != d.id && c.b != d.id) continue;
        sum += channel_success_prob(c.env);
        ++n;
      }
      const double ch = n > 0 ? sum / n : 1.0;
      double link = cfg_.p_w;
      for (int i = 0; i < photons; ++i) link *= ch;
      rec.link_state.prime(link);
      rec.swapping_success_rate.prime(1.0 - dephasing_of(d.id));
    }
  }

  // Issue one session at the given time (sessions may overlap).
  int submit(const std::string& src, const std::string& dst, double at) {
    const int id = next_session_++;
    sessions_.emplace(id, Session{});
    Session& s = sessions_.at(id);
    s.id = id;
    s.src = src;
    s.dst = dst;
    s.started_at = at;
    schedule(at, id, EventKind::Request, "CC");
    return id;
  }

  // Run sessions back-to-back between the two users and aggregate metrics.
  // Devices marked maintain during one session are checked and returned by
  // the administrator before the next; the collected statistics persist.
  Metrics run_sessions(const std::string& src, const std::string& dst, int count) {
    Metrics m;
    double t = 0.0;
    for (int i = 0; i < count; ++i) {
      if (i > 0) repair_maintained();
      const int id = submit(src, dst, t);
      run_until_idle();
      const SessionOutcome& out = outcomes_.back();
      accumulate(m, out);
      t = now_ + 1e-6;
      (void)id;
    }
    finalize(m, t);
    return m;
  }

  void repair_maintained() {
    for (const Device& d : topo_.devices()) {
      if (csm_.has(d.id) && csm_.is_maintain(d.id)) csm_.mark_normal(d.id);
    }
  }

  void run_until_idle() {
    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      dispatch(ev);
    }
  }

  Metrics collect(double elapsed) const {
    Metrics m;
    for (const SessionOutcome& out : outcomes_) accumulate(m, out);
    finalize(m, elapsed);
    return m;
  }

 private:
  enum class EventKind {
    Request,
    RequestReply,
    RouteDone,
    ReserveDone,
    PrepDone,
    Herald,
    TdExpiry,
    SwapCmd,
    SwapDone,
    TstExpiry,
    TeleportCmd,
    TeleportDone,
  };

  static const char* kind_name(EventKind k) {
    switch (k) {
      case EventKind::Request: return "request";
      case EventKind::RequestReply: return "request-reply";
      case EventKind::RouteDone: return "route-done";
      case EventKind::ReserveDone: return "reserve-done";
      case EventKind::PrepDone: return "prep-done";
      case EventKind::Herald: return "herald";
      case EventKind::TdExpiry: return "t_d-expiry";
      case EventKind::SwapCmd: return "swap-cmd";
      case EventKind::SwapDone: return "swap-done";
      case EventKind::TstExpiry: return "t_st-expiry";
      case EventKind::TeleportCmd: return "teleport-cmd";
      case EventKind::TeleportDone: return "teleport-done";
    }
    return "?";
  }

  struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    int session = 0;
    EventKind kind = EventKind::Request;
    std::string device;
    int epoch = 0;
    int index = 0;
    bool ok = false;
    std::string detail;

    bool operator<(const Event& other) const {
      if (time != other.time) return time > other.time;  // min-heap
      return seq > other.seq;
    }
  };

  // A stored entangled pair spanning original path segments [left_seg,
  // right_seg]; ends sit at path devices left_seg and right_seg + 1.
  struct SpanPair {
    int left_seg = 0;
    int right_seg = 0;
    double quality = 1.0;
    double created_at = 0.0;
    int qubit_left = -1;  // oracle-mode register indices
    int qubit_right = -1;
  };

  struct Session {
    int id = 0;
    std::string src, dst;
    SessionState state = SessionState::Requested;
    double started_at = 0.0;
    double finished_at = 0.0;

    bool intra = false;
    std::vector<ScoredPath> candidates;  // CER ranked list
    std::size_t next_candidate = 0;
    std::vector<QCastDetour> detours;
    std::set<int> detours_used;
    CompletePath cpath;
    bool reserved = false;

    std::vector<bool> segment_done;
    int current_segment = -1;
    std::vector<SpanPair> spans;
    std::set<int> pending_segments;  // segments awaiting (re)distribution

    int epoch = 0;  // stale-event guard; bumped on every stage change
    double td_deadline = std::numeric_limits<double>::infinity();
    double tst_deadline = std::numeric_limits<double>::infinity();
    bool tst_armed = false;
    std::string pending_swap_device;
    double wave_done_at = 0.0;  // SLMP global distribution completion

    int consecutive_retries = 0;
    int reroutes = 0;
    int pairs_consumed = 0;
    double route_time_ms = 0.0;

    // oracle mode
    std::optional<StateRegister> reg;
    std::vector<cx> payload_state;

    SessionOutcome outcome;
  };

  // ---- scheduling & bookkeeping -------------------------------------------

  void schedule(double t, int session, EventKind kind, const std::string& device, int index = 0,
                bool ok = false, const std::string& detail = "") {
    Event ev;
    ev.time = t;
    ev.seq = seq_++;
    ev.session = session;
    ev.kind = kind;
    ev.device = device;
    ev.epoch = sessions_.count(session) ? sessions_.at(session).epoch : 0;
    ev.index = index;
    ev.ok = ok;
    ev.detail = detail;
    queue_.push(ev);
  }

  void trace_line(double t, const std::string& device, const std::string& event,
                  const std::string& detail) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(9);
    os << t << " | " << device << " | " << event << " | " << detail;
    trace_.push_back(os.str());
  }

  void transition(Session& s, SessionState to, const std::string& why) {
    if (!allowed_transition(s.state, to)) {
      violations_.push_back("illegal transition " + to_string(s.state) + " -> " + to_string(to) +
                            " (" + why + ")");
    }
    s.outcome.transitions.emplace_back(s.state, to);
    trace_line(now_, "CC", "session-" + std::to_string(s.id),
               to_string(s.state) + " -> " + to_string(to) + " : " + why);
    s.state = to;
  }

  const EnvParams& env_of(const std::string& device) const {
    auto it = cfg_.device_env.find(device);
    return it == cfg_.device_env.end() ? cfg_.base_env : it->second;
  }

  double dephasing_of(const std::string& device) const { return env_of(device).dephasing_rate; }

  // Stored-qubit quality decays with both memory depolarizing and dephasing
  // over time; atomic memories decay slower by the configured ratio.
  double decay_rate(const std::string& device) const {
    const EnvParams& e = env_of(device);
    const bool atomic = scheme_uses_atomic_memory(cfg_.scheme);
    const double depol = atomic ? e.depolarizing_rate / cfg_.memory_ratio : e.depolarizing_rate;
    return depol + e.dephasing_rate;
  }

  double classical_latency(double km) const {
    return km / cfg_.timing.c_fiber_km_s + cfg_.classical_proc_s;
  }

  double channel_photon_prob(const std::string& dev, const std::string& controller) const {
    const QuantumChannel* ch = topo_.find_qchannel(dev, controller);
    if (!ch) return 1.0;
    return channel_success_prob(ch->env);
  }

  double pair_quality(const Session& s, const SpanPair& p, double at) const {
    const std::string& left = s.cpath.middle.devices[p.left_seg];
    const std::string& right = s.cpath.middle.devices[p.right_seg + 1];
    const double rate = decay_rate(left) + decay_rate(right);
    return p.quality * std::exp(-rate * (at - p.created_at));
  }

  SegmentProbs segment_probs(const Session& s, int seg) const {
    const std::string& a = s.cpath.middle.devices[seg];
    const std::string& b = s.cpath.middle.devices[seg + 1];
    const std::string& controller = s.cpath.segs[seg].controller;
    SegmentProbs p;
    p.p_w_a = p.p_w_b = cfg_.p_w;
    double ch_a = 1.0, ch_b = 1.0;
    if (!controller.empty()) {
      ch_a = channel_photon_prob(a, controller);
      ch_b = channel_photon_prob(b, controller);
    } else {
      ch_a = channel_photon_prob(a, b);  // direct channel in distributed mode
      ch_b = 1.0;
    }
    if (cfg_.scheme == Scheme::WStateCepd) {
      // Two photons traverse each side's channel.
      p.p_ch_a = ch_a * ch_a;
      p.p_ch_b = ch_b * ch_b;
    } else {
      p.p_ch_a = ch_a;
      p.p_ch_b = ch_b;
    }
    p.p_bsm_a = 1.0 - dephasing_of(a);
    p.p_bsm_b = 1.0 - dephasing_of(b);
    p.p_pswap_a = 1.0 - dephasing_of(a);
    p.p_pswap_b = 1.0 - dephasing_of(b);
    p.p_aswap = controller.empty() ? 1.0 : 1.0 - dephasing_of(controller);
    return p;
  }

  double segment_distribution_latency() const {
    return cfg_.timing.flight_s() + 5 * cfg_.timing.op_latency_s +
           classical_latency(cfg_.timing.channel_km);
  }

  double swap_step_latency(double km) const {
    return 2 * classical_latency(km) + cfg_.timing.op_latency_s;
  }

  // ---- dispatch ------------------------------------------------------------

  void dispatch(const Event& ev) {
    auto it = sessions_.find(ev.session);
    if (it == sessions_.end()) return;
    Session& s = it->second;
    if (terminal(s.state)) return;
    // Stale events from an aborted stage carry an old epoch; dropping them
    // is what keeps quantum operations from running past their timer.
    if (ev.epoch != s.epoch && ev.kind != EventKind::Request) return;

    switch (ev.kind) {
      case EventKind::Request: return on_request(s);
      case EventKind::RequestReply: return on_request_reply(s, ev);
      case EventKind::RouteDone: return on_route_done(s);
      case EventKind::ReserveDone: return on_reserve_done(s);
      case EventKind::PrepDone: return on_prep_done(s, ev);
      case EventKind::Herald: return on_herald(s, ev);
      case EventKind::TdExpiry: return on_td_expiry(s, ev);
      case EventKind::SwapCmd: return on_swap_cmd(s, ev);
      case EventKind::SwapDone: return on_swap_done(s, ev);
      case EventKind::TstExpiry: return on_tst_expiry(s, ev);
      case EventKind::TeleportCmd: return on_teleport_cmd(s, ev);
      case EventKind::TeleportDone: return on_teleport_done(s, ev);
    }
  }

  static bool terminal(SessionState st) {
    return st == SessionState::Succeeded || st == SessionState::Failed;
  }

  // ---- request / routing / reservation ------------------------------------

  void on_request(Session& s) {
    trace_line(now_, s.src, "request", s.src + " -> " + s.dst);
    const std::string dom_src = topo_.device(s.src).domains.front();
    const std::string dom_dst = topo_.device(s.dst).domains.front();
    s.intra = dom_src == dom_dst;
    // Request and reply traverse the classical control plane.
    const double hops = s.intra ? 2.0 : 4.0;
    schedule(now_ + hops * classical_latency(cfg_.timing.channel_km), s.id,
             EventKind::RequestReply, s.dst);
  }

  void on_request_reply(Session& s, const Event&) {
    const MemoryKind kind =
        scheme_uses_atomic_memory(cfg_.scheme) ? MemoryKind::Atomic : MemoryKind::Optical;
    DeviceRecord& dst_rec = csm_.record(s.dst);
    DeviceRecord& src_rec = csm_.record(s.src);
    if (faults_.reject_request || dst_rec.device_state == DeviceState::Maintain ||
        dst_rec.idle_count(kind) == 0 || src_rec.idle_count(kind) == 0) {
      fail(s, "destination-busy");
      return;
    }
    trace_line(now_, s.dst, "request-accepted", "idle memories recorded");
    if (s.intra) {
      // Intra-domain: the local controller forms the two-user path directly.
      PathMiddle pm;
      pm.devices = {s.src, s.dst};
      pm.segment_domains = {topo_.device(s.src).domains.front()};
      s.candidates = {ScoredPath{pm, 1.0}};
      s.next_candidate = 0;
      transition(s, SessionState::Preparing, "intra-domain accept");
      reserve_current(s);
      return;
    }
    transition(s, SessionState::Routing, "inter-domain accept");
    run_routing(s);
  }

  void run_routing(Session& s) {
    double compute_ms = 0.0;
    s.candidates.clear();
    s.next_candidate = 0;
    s.detours.clear();
    s.detours_used.clear();

    const std::set<std::string> excluded = maintained_devices(csm_);
    switch (cfg_.routing) {
      case RoutingAlgo::Cer: {
        CerResult r = cer_route(csm_, dspt_, dert_, topo_, s.src, s.dst, cfg_.cer_recursion);
        s.candidates = std::move(r.ranked);
        compute_ms = static_cast<double>(r.work) * cfg_.route_work_unit_ms;
        break;
      }
      case RoutingAlgo::Greedy: {
        GreedyResult r = greedy_route(topo_, s.src, s.dst, excluded);
        if (r.path && !r.path->empty()) s.candidates.push_back({*r.path, 1.0});
        compute_ms = static_cast<double>(r.work) * cfg_.route_work_unit_ms;
        break;
      }
      case RoutingAlgo::Slmp: {
        SlmpResult r = slmp_route(topo_, cfg_.p_w, s.src, s.dst, rng_, excluded);
        if (r.path && !r.path->empty()) s.candidates.push_back({*r.path, 1.0});
        s.pairs_consumed += r.pairs_consumed;
        // The global distribution wave dominates SLMP's routing time, both
        // simulated and reported.
        compute_ms = static_cast<double>(r.work) * cfg_.route_work_unit_ms +
                     slmp_wave_duration() * 1e3;
        break;
      }
      case RoutingAlgo::QCast: {
        const MemoryKind kind =
            scheme_uses_atomic_memory(cfg_.scheme) ? MemoryKind::Atomic : MemoryKind::Optical;
        QCastResult r = qcast_route(topo_, csm_, s.src, s.dst, kind);
        if (r.path && !r.path->empty()) s.candidates.push_back({*r.path, 1.0});
        s.detours = std::move(r.recovery);
        compute_ms = static_cast<double>(r.work) * cfg_.route_work_unit_ms;
        break;
      }
    }
    s.route_time_ms += compute_ms;
    s.wave_done_at = now_ + compute_ms * 1e-3;
    trace_line(now_, "CC", "routing", to_string(cfg_.routing) + " candidates=" +
                                          std::to_string(s.candidates.size()) +
                                          " time_ms=" + std::to_string(compute_ms));
    schedule(s.wave_done_at, s.id, EventKind::RouteDone, "CC");
  }

  double slmp_wave_duration() const {
    // Every quantum link distributes once; each preparator handles its
    // incident links sequentially.
    std::map<std::string, int> incident;
    int max_incident = 1;
    for (const QuantumChannel& c : topo_.qchannels()) {
      const std::string& prep = topo_.hierarchical
                                    ? (topo_.device(c.a).kind == DeviceKind::LocalController ? c.a
                                                                                             : c.b)
                                    : c.a;
      max_incident = std::max(max_incident, ++incident[prep]);
    }
    return max_incident * (cfg_.timing.prep_latency_s + cfg_.timing.flight_s()) +
           classical_latency(cfg_.timing.channel_km);
  }

  void on_route_done(Session& s) {
    if (s.candidates.empty() || s.next_candidate >= s.candidates.size()) {
      fail(s, "no-path-found");
      return;
    }
    transition(s, SessionState::Reserving, "candidate path selected");
    schedule(now_ + classical_latency(cfg_.timing.channel_km), s.id, EventKind::ReserveDone, "CC");
  }

  void on_reserve_done(Session& s) { reserve_current(s); }

  void reserve_current(Session& s) {
    const ReservationPolicy policy = reservation_policy();
    while (s.next_candidate < s.candidates.size()) {
      const PathMiddle& pm = s.candidates[s.next_candidate].path;
      ReserveResult r = csm_.reserve_memories(pm, session_tag(s), policy);
      if (r.ok()) {
        s.cpath = std::move(*r.path);
        s.reserved = true;
        s.segment_done.assign(static_cast<std::size_t>(s.cpath.middle.segments()), false);
        s.pending_segments.clear();
        for (int k = 0; k < s.cpath.middle.segments(); ++k) s.pending_segments.insert(k);
        s.spans.clear();
        s.consecutive_retries = 0;
        // Pair consumption follows the plan: one pair per path segment
        // (SLMP already paid for every link in its global wave).
        if (cfg_.routing != RoutingAlgo::Slmp) {
          s.pairs_consumed += s.cpath.middle.segments();
        }
        trace_line(now_, "CC", "reserved", s.cpath.render());
        if (cfg_.oracle_mode) init_oracle(s);
        if (s.state != SessionState::Preparing) {
          transition(s, SessionState::Preparing, "reservation complete");
        }
        if (cfg_.routing == RoutingAlgo::Slmp) {
          // SLMP distributed globally before routing; the chosen path's
          // pairs were created at staggered points of the wave and have
          // been ageing since.
          transition(s, SessionState::Distributing, "pairs from global distribution wave");
          const double wave = slmp_wave_duration();
          const int nseg = s.cpath.middle.segments();
          for (int k = 0; k < nseg; ++k) {
            SpanPair pair;
            pair.left_seg = k;
            pair.right_seg = k;
            pair.quality = 1.0;
            pair.created_at = s.wave_done_at - wave * (1.0 - (k + 1.0) / (nseg + 1.0));
            if (cfg_.oracle_mode && s.reg) {
              pair.qubit_left = 1 + 2 * k;
              pair.qubit_right = 2 + 2 * k;
              s.reg->prepare_bell(pair.qubit_left, pair.qubit_right);
            }
            insert_span(s, pair);
            s.pending_segments.erase(k);
            s.segment_done[static_cast<std::size_t>(k)] = true;
          }
          distribution_complete(s);
          return;
        }
        start_next_segment(s);
        return;
      }
      trace_line(now_, "CC", "reservation-failed", "exhausted " + r.exhausted_device);
      ++s.next_candidate;
      if (s.next_candidate < s.candidates.size()) {
        // Alg. 1 pops the next ranked path and tries again.
        transition(s, SessionState::Routing, "reservation failed, next candidate");
        transition(s, SessionState::Reserving, "next candidate");
        continue;
      }
    }
    fail(s, "reservation-exhausted");
  }

  ReservationPolicy reservation_policy() const {
    ReservationPolicy p;
    p.endpoint_kind =
        scheme_uses_atomic_memory(cfg_.scheme) ? MemoryKind::Atomic : MemoryKind::Optical;
    p.controller_slots = cfg_.scheme == Scheme::WStateCepd ? 2 : 0;
    return p;
  }

  std::string session_tag(const Session& s) const { return "sess-" + std::to_string(s.id); }

  void init_oracle(Session& s) {
    const int segments = s.cpath.middle.segments();
    const int qubits = 1 + 2 * segments;
    if (qubits > StateRegister::kMaxQubits) {
      s.reg.reset();
      trace_line(now_, "CC", "oracle-skip", "register cap exceeded");
      return;
    }
    s.reg.emplace(qubits);
    if (payload_override_) {
      s.payload_state = {(*payload_override_)[0], (*payload_override_)[1]};
    } else if (s.payload_state.empty()) {
      s.payload_state = {cx{1.0, 0.0}, cx{0.0, 0.0}};
    }
    s.reg->set_qubit_state(0, s.payload_state[0], s.payload_state[1]);
  }

 public:
  // Payload for oracle-mode sessions (defaults to |0>).
  void set_payload(cx alpha, cx beta) { payload_override_ = std::array<cx, 2>{alpha, beta}; }

 private:
  // ---- preparation & distribution ------------------------------------------

  void start_next_segment(Session& s) {
    if (s.pending_segments.empty()) {
      distribution_complete(s);
      return;
    }
    const int seg = *s.pending_segments.begin();
    s.current_segment = seg;
    const std::string& controller = s.cpath.segs[seg].controller;
    const std::string& preparator = controller.empty() ? s.cpath.segs[seg].left_device : controller;
    csm_.record(preparator).preparation_state = "preparing(" + session_tag(s) + ")";
    csm_.record(preparator).aim_node = s.cpath.segs[seg].right_device;
    trace_line(now_, preparator, "prepare", "segment " + std::to_string(seg));
    // Preparation succeeds or fails locally; the draw happens at PrepDone.
    schedule(now_ + cfg_.timing.prep_latency_s, s.id, EventKind::PrepDone, preparator, seg);
  }

  static int preparations_per_segment(Scheme s) {
    switch (s) {
      case Scheme::WStateCepd:
      case Scheme::DepdMeetInMiddle: return 2;
      case Scheme::DepdMidpointSource: return 3;
      default: return 1;
    }
  }

  void on_prep_done(Session& s, const Event& ev) {
    if (s.state != SessionState::Preparing) return;
    const int seg = ev.index;
    const double pw = cfg_.oracle_mode ? 1.0 : cfg_.p_w;
    bool ok = true;
    for (int i = 0; i < preparations_per_segment(cfg_.scheme); ++i) {
      ok = (rng_.uniform() < pw) && ok;
    }
    if (!ok) {
      trace_line(now_, ev.device, "prepare-failed", "segment " + std::to_string(seg));
      segment_failed(s, seg, ev.device, "preparation");
      return;
    }
    csm_.record(ev.device).preparation_state = "prepared(" + session_tag(s) + ")";
    transition(s, SessionState::Distributing, "photons in flight, segment " + std::to_string(seg));
    arm_td(s);

    const std::string& a = s.cpath.segs[seg].left_device;
    const std::string& b = s.cpath.segs[seg].right_device;
    const double herald_at =
        now_ + cfg_.timing.flight_s() + 5 * cfg_.timing.op_latency_s +
        classical_latency(cfg_.timing.channel_km);
    // An injected outage swallows the herald entirely; only t_d recovers.
    if (FaultPlan::covers(faults_.herald_outage, a, now_) ||
        FaultPlan::covers(faults_.herald_outage, b, now_)) {
      trace_line(now_, ev.device, "outage", "segment " + std::to_string(seg) + " herald lost");
      return;
    }
    SegmentProbs probs = segment_probs(s, seg);
    if (cfg_.oracle_mode) probs = SegmentProbs{};  // noiseless
    // Preparation already drawn above; disable it in the segment cascade.
    probs.p_w_a = probs.p_w_b = 1.0;
    OpTiming t0 = cfg_.timing;
    t0.prep_latency_s = 0.0;
    DistributionResult r = run_segment(cfg_.scheme, probs, t0, rng_, false);
    schedule(herald_at, s.id, EventKind::Herald, "CC", seg, r.success, r.failed_stage +
                                                                           (r.failed_side == 1
                                                                                ? "@a"
                                                                                : r.failed_side == 2
                                                                                      ? "@b"
                                                                                      : ""));
  }

  void arm_td(Session& s) {
    const double expected = segment_distribution_latency();
    s.td_deadline = now_ + cfg_.td_factor * expected;
    schedule(s.td_deadline, s.id, EventKind::TdExpiry, "CC", s.current_segment);
  }

  void on_herald(Session& s, const Event& ev) {
    if (s.state != SessionState::Distributing) return;
    if (now_ > s.td_deadline) {
      violations_.push_back("herald processed after t_d deadline");
      return;
    }
    const int seg = ev.index;
    const std::string& a = s.cpath.segs[seg].left_device;
    const std::string& b = s.cpath.segs[seg].right_device;
    if (!ev.ok) {
      // The herald localizes the failed side; only that device's LinkState
      // takes the hit.
      const bool b_failed =
          ev.detail.size() >= 2 && ev.detail.substr(ev.detail.size() - 2) == "@b";
      const bool localized =
          ev.detail.size() >= 2 && ev.detail.substr(ev.detail.size() - 2, 1) == "@";
      const std::string& blamed = b_failed ? b : a;
      if (localized) {
        csm_.update_link_state(blamed, false);
        csm_.update_link_state(b_failed ? a : b, true);
      } else {
        csm_.update_link_state(a, false);
        csm_.update_link_state(b, false);
      }
      trace_line(now_, "CC", "distribution-failed",
                 "segment " + std::to_string(seg) + " stage=" + ev.detail);
      segment_failed(s, seg, blamed, "distribution");
      return;
    }
    csm_.update_link_state(a, true);
    csm_.update_link_state(b, true);
    // Pair delivered.
    s.epoch++;
    s.td_deadline = std::numeric_limits<double>::infinity();
    s.pending_segments.erase(seg);
    s.segment_done[static_cast<std::size_t>(seg)] = true;
    s.consecutive_retries = 0;
    SpanPair pair;
    pair.left_seg = seg;
    pair.right_seg = seg;
    pair.quality = 1.0;
    pair.created_at = now_;
    if (cfg_.oracle_mode && s.reg) {
      pair.qubit_left = 1 + 2 * seg;
      pair.qubit_right = 2 + 2 * seg;
      s.reg->prepare_bell(pair.qubit_left, pair.qubit_right);
    }
    insert_span(s, pair);
    csm_.record(a).distribution_state = "distributed(" + session_tag(s) + ")";
    csm_.record(b).distribution_state = "distributed(" + session_tag(s) + ")";
    trace_line(now_, "CC", "distributed", "segment " + std::to_string(seg));
    transition_after_segment(s);
  }

  void insert_span(Session& s, const SpanPair& pair) {
    auto it = s.spans.begin();
    while (it != s.spans.end() && it->left_seg < pair.left_seg) ++it;
    s.spans.insert(it, pair);
  }

  void transition_after_segment(Session& s) {
    if (!s.pending_segments.empty()) {
      transition(s, SessionState::Preparing, "next segment");
      start_next_segment(s);
      return;
    }
    distribution_complete(s);
  }

  void distribution_complete(Session& s) {
    if (s.spans.size() == 1) {
      transition(s, SessionState::Teleporting, "path entangled end to end");
      arm_tst(s);
      schedule_teleport(s);
      return;
    }
    transition(s, SessionState::Swapping, "all segments distributed");
    arm_tst(s);
    schedule_next_swap(s);
  }

  void arm_tst(Session& s) {
    const int swaps = static_cast<int>(s.spans.size()) - 1;
    const double expected = (swaps > 0 ? swaps : 1) * swap_step_latency(cfg_.timing.channel_km) +
                            2 * classical_latency(cfg_.timing.channel_km) +
                            2 * cfg_.timing.op_latency_s;
    s.tst_deadline = now_ + cfg_.tst_factor * expected;
    s.tst_armed = true;
    schedule(s.tst_deadline, s.id, EventKind::TstExpiry, "CC");
  }

  // ---- timers ---------------------------------------------------------------

  void on_td_expiry(Session& s, const Event& ev) {
    if (s.state != SessionState::Distributing) return;  // expiry on a done stage is ignored
    const int seg = ev.index;
    trace_line(now_, "CC", "t_d-timeout", "segment " + std::to_string(seg));
    const std::string& a = s.cpath.segs[seg].left_device;
    const std::string& b = s.cpath.segs[seg].right_device;
    csm_.update_link_state(a, false);
    csm_.update_link_state(b, false);
    // A timeout cannot be localized; suspect the infrastructure end first.
    const bool a_user = topo_.device(a).kind == DeviceKind::User;
    const bool b_user = topo_.device(b).kind == DeviceKind::User;
    segment_failed(s, seg, (a_user && !b_user) ? b : a, "t_d-timeout");
  }

  void on_tst_expiry(Session& s, const Event&) {
    if (s.state != SessionState::Swapping && s.state != SessionState::Teleporting) return;
    trace_line(now_, "CC", "t_st-timeout", "retry preparation in current path");
    failure_note(s, "t_st-timeout");
    // Too slow: stored qubits are assumed decohered. Discard every pair and
    // re-prepare on the same reserved path; memories stay reserved.
    s.epoch++;
    s.tst_armed = false;
    s.tst_deadline = std::numeric_limits<double>::infinity();
    ++s.consecutive_retries;
    if (s.consecutive_retries > cfg_.retry_limit) {
      exceed_limit(s, s.pending_swap_device.empty() ? s.src : s.pending_swap_device);
      return;
    }
    reset_all_pairs(s);
    transition(s, SessionState::Preparing, "t_st retry");
    start_next_segment(s);
  }

  void reset_all_pairs(Session& s) {
    s.spans.clear();
    s.pending_segments.clear();
    for (int k = 0; k < s.cpath.middle.segments(); ++k) {
      s.pending_segments.insert(k);
      s.segment_done[static_cast<std::size_t>(k)] = false;
    }
    if (cfg_.oracle_mode) init_oracle(s);
  }

  // ---- error control --------------------------------------------------------

  void segment_failed(Session& s, int seg, const std::string& blamed, const std::string& why) {
    s.epoch++;
    s.td_deadline = std::numeric_limits<double>::infinity();
    failure_note(s, why);
    ++s.consecutive_retries;
    if (s.consecutive_retries > cfg_.retry_limit) {
      exceed_limit(s, blamed);
      return;
    }
    // Q-Cast activates its precomputed detour on the first failure of a
    // primary segment.
    if (cfg_.routing == RoutingAlgo::QCast && !s.detours_used.count(seg)) {
      for (const QCastDetour& d : s.detours) {
        if (d.segment_index == seg && try_activate_detour(s, seg, d)) {
          transition(s, SessionState::Preparing, "recovery detour for segment " +
                                                     std::to_string(seg));
          start_next_segment(s);
          return;
        }
      }
    }
    if (s.state != SessionState::Preparing) {
      transition(s, SessionState::Preparing, "retry " + why + " on segment " +
                                                 std::to_string(seg));
    } else {
      transition(s, SessionState::Preparing, "retry " + why);
    }
    start_next_segment(s);
  }

  bool try_activate_detour(Session& s, int seg, const QCastDetour& d) {
    // Splice X -> via -> Y in place of the failed segment. The endpoints
    // keep their already-reserved memories; only the detour device and the
    // sub-segment controllers need fresh ones.
    const ReservationPolicy policy = reservation_policy();
    if (!csm_.has(d.via) || csm_.is_maintain(d.via)) return false;
    DeviceRecord& zrec = csm_.record(d.via);
    if (zrec.idle_count(policy.endpoint_kind) < 2) return false;

    CompleteSegment old = s.cpath.segs[static_cast<std::size_t>(seg)];
    CompleteSegment left_seg, right_seg;
    left_seg.left_device = old.left_device;
    left_seg.right_device = d.via;
    left_seg.domain = d.domain_left;
    left_seg.controller = csm_.controller_of(d.domain_left);
    left_seg.left_memory = old.left_memory;
    right_seg.left_device = d.via;
    right_seg.right_device = old.right_device;
    right_seg.domain = d.domain_right;
    right_seg.controller = csm_.controller_of(d.domain_right);
    right_seg.right_memory = old.right_memory;

    auto occupy = [&](const std::string& dev, const std::string& mem) {
      MemoryRecord* m = csm_.record(dev).find_memory(mem);
      m->memory_state = MemoryState::Occupy;
      m->aim_communication = session_tag(s);
    };
    // Two memories on the detour device.
    MemoryRecord* z1 = zrec.first_idle(policy.endpoint_kind);
    left_seg.right_memory = z1->memory_name;
    occupy(d.via, z1->memory_name);
    MemoryRecord* z2 = zrec.first_idle(policy.endpoint_kind);
    right_seg.left_memory = z2->memory_name;
    occupy(d.via, z2->memory_name);
    // Controller slots for the new sub-segments.
    for (CompleteSegment* sub : {&left_seg, &right_seg}) {
      if (sub->controller.empty()) continue;
      DeviceRecord& crec = csm_.record(sub->controller);
      for (int k = 0; k < policy.controller_slots; ++k) {
        MemoryRecord* cm = crec.first_idle(MemoryKind::Atomic);
        if (!cm) return false;  // session teardown releases the partial picks
        sub->controller_memories.push_back(cm->memory_name);
        occupy(sub->controller, cm->memory_name);
      }
    }

    s.detours_used.insert(seg);
    s.pairs_consumed += 1;  // the plan grows by one pair
    auto& mid = s.cpath.middle;
    mid.devices.insert(mid.devices.begin() + seg + 1, d.via);
    mid.segment_domains[static_cast<std::size_t>(seg)] = d.domain_left;
    mid.segment_domains.insert(mid.segment_domains.begin() + seg + 1, d.domain_right);
    s.cpath.segs[static_cast<std::size_t>(seg)] = left_seg;
    s.cpath.segs.insert(s.cpath.segs.begin() + seg + 1, right_seg);
    // Reindex bookkeeping past the insertion point.
    std::set<int> pending;
    for (int k : s.pending_segments) pending.insert(k > seg ? k + 1 : k);
    pending.insert(seg);
    pending.insert(seg + 1);
    s.pending_segments = std::move(pending);
    s.segment_done.assign(static_cast<std::size_t>(mid.segments()), false);
    for (SpanPair& p : s.spans) {
      if (p.left_seg > seg) ++p.left_seg;
      if (p.right_seg > seg) ++p.right_seg;
    }
    for (const SpanPair& p : s.spans) {
      for (int k = p.left_seg; k <= p.right_seg; ++k) {
        s.segment_done[static_cast<std::size_t>(k)] = true;
      }
    }
    if (cfg_.oracle_mode) {
      s.reg.reset();  // qubit map no longer contiguous; oracle off for this session
    }
    // Remaining precomputed detours index the original segments; one
    // recovery per path keeps the bookkeeping honest.
    s.detours.clear();
    trace_line(now_, "CC", "detour", "segment " + std::to_string(seg) + " via " + d.via);
    return true;
  }

  void exceed_limit(Session& s, const std::string& blamed) {
    // Users are communication endpoints, not maintainable infrastructure.
    if (topo_.device(blamed).kind != DeviceKind::User) {
      csm_.mark_maintain(blamed);
      trace_line(now_, "CC", "mark-maintain", blamed);
    }
    if (s.intra) {
      fail(s, "retry-limit-intra");
      return;
    }
    // Reroute: release the old path and run entanglement routing again.
    csm_.release_memories(session_tag(s));
    s.reserved = false;
    s.spans.clear();
    s.pending_segments.clear();
    s.consecutive_retries = 0;
    ++s.reroutes;
    s.epoch++;
    s.tst_armed = false;
    s.tst_deadline = std::numeric_limits<double>::infinity();
    s.td_deadline = std::numeric_limits<double>::infinity();
    transition(s, SessionState::Routing, "reroute after maintain");
    run_routing(s);
  }

  void failure_note(Session& s, const std::string& why) {
    s.outcome.failure_reason = why;
    failure_counts_[why]++;
  }

  // ---- swapping -------------------------------------------------------------

  void schedule_next_swap(Session& s) {
    if (s.spans.size() <= 1) {
      transition(s, SessionState::Teleporting, "swapping complete");
      schedule_teleport(s);
      return;
    }
    // Leftmost adjacent span pair; the shared device performs the swap.
    const SpanPair& left = s.spans[0];
    const std::string& dev = s.cpath.middle.devices[left.right_seg + 1];
    s.pending_swap_device = dev;
    csm_.record(dev).swapping_state = "swapping(" + session_tag(s) + ")";
    trace_line(now_, dev, "swap-cmd", "spans [" + std::to_string(left.left_seg) + "] + [" +
                                          std::to_string(s.spans[1].left_seg) + "]");
    schedule(now_ + classical_latency(cfg_.timing.channel_km), s.id, EventKind::SwapCmd, dev);
  }

  void on_swap_cmd(Session& s, const Event& ev) {
    if (s.state != SessionState::Swapping) return;
    if (now_ > s.tst_deadline) {
      violations_.push_back("swap command executed after t_st deadline");
      return;
    }
    const std::string dev = ev.device;
    if (FaultPlan::covers(faults_.swap_hang, dev, now_)) {
      trace_line(now_, dev, "swap-hang", "no result; t_st must recover");
      return;
    }
    const double p_ok = cfg_.oracle_mode ? 1.0 : 1.0 - dephasing_of(dev);
    const bool ok = rng_.uniform() < p_ok;
    schedule(now_ + cfg_.timing.op_latency_s + classical_latency(cfg_.timing.channel_km), s.id,
             EventKind::SwapDone, dev, 0, ok);
  }

  void on_swap_done(Session& s, const Event& ev) {
    if (s.state != SessionState::Swapping) return;
    if (now_ > s.tst_deadline) {
      violations_.push_back("swap result processed after t_st deadline");
      return;
    }
    csm_.update_swap_rate(ev.device, ev.ok);
    if (!ev.ok) {
      trace_line(now_, ev.device, "swap-failed", "re-prepare affected spans");
      failure_note(s, "swap-failed");
      // The measurement destroyed both adjacent pairs; their underlying
      // segments must redistribute while the rest keep waiting.
      s.epoch++;
      ++s.consecutive_retries;
      if (s.consecutive_retries > cfg_.retry_limit) {
        exceed_limit(s, ev.device);
        return;
      }
      SpanPair left = s.spans[0];
      SpanPair right = s.spans[1];
      s.spans.erase(s.spans.begin(), s.spans.begin() + 2);
      for (int k = left.left_seg; k <= right.right_seg; ++k) {
        s.pending_segments.insert(k);
        s.segment_done[static_cast<std::size_t>(k)] = false;
      }
      s.tst_armed = false;
      s.tst_deadline = std::numeric_limits<double>::infinity();
      transition(s, SessionState::Preparing, "redistribute after swap failure");
      start_next_segment(s);
      return;
    }
    // Merge the two leftmost spans.
    SpanPair left = s.spans[0];
    SpanPair right = s.spans[1];
    const double q = pair_quality(s, left, now_) * pair_quality(s, right, now_);
    SpanPair merged;
    merged.left_seg = left.left_seg;
    merged.right_seg = right.right_seg;
    merged.quality = q;
    merged.created_at = now_;
    if (cfg_.oracle_mode && s.reg) {
      entanglement_swap(*s.reg, QubitPair{left.qubit_left, left.qubit_right},
                        QubitPair{right.qubit_left, right.qubit_right}, rng_);
      merged.qubit_left = left.qubit_left;
      merged.qubit_right = right.qubit_right;
    }
    s.spans.erase(s.spans.begin(), s.spans.begin() + 2);
    s.spans.insert(s.spans.begin(), merged);
    csm_.record(ev.device).swapping_state = "swapped(" + session_tag(s) + ")";
    trace_line(now_, ev.device, "swapped", "span [" + std::to_string(merged.left_seg) + ".." +
                                               std::to_string(merged.right_seg) + "]");
    schedule_next_swap(s);
  }

  // ---- teleportation --------------------------------------------------------

  void schedule_teleport(Session& s) {
    trace_line(now_, s.src, "teleport-cmd", "BSM on payload and pair end");
    schedule(now_ + classical_latency(cfg_.timing.channel_km), s.id, EventKind::TeleportCmd,
             s.src);
  }

  void on_teleport_cmd(Session& s, const Event&) {
    if (s.state != SessionState::Teleporting) return;
    if (now_ > s.tst_deadline) {
      violations_.push_back("teleport BSM executed after t_st deadline");
      return;
    }
    const double p_bsm = cfg_.oracle_mode ? 1.0 : 1.0 - dephasing_of(s.src);
    const double p_corr = cfg_.oracle_mode ? 1.0 : 1.0 - dephasing_of(s.dst);
    const bool bsm_ok = rng_.uniform() < p_bsm;
    const bool corr_ok = rng_.uniform() < p_corr;
    // BSM result travels source -> central controller -> destination.
    const double done_at = now_ + cfg_.timing.op_latency_s +
                           2 * classical_latency(cfg_.timing.channel_km) +
                           cfg_.timing.op_latency_s;
    schedule(done_at, s.id, EventKind::TeleportDone, s.dst, 0, bsm_ok && corr_ok,
             bsm_ok ? "correction" : "bsm");
  }

  void on_teleport_done(Session& s, const Event& ev) {
    if (s.state != SessionState::Teleporting) return;
    if (now_ > s.tst_deadline) {
      violations_.push_back("teleport correction applied after t_st deadline");
      return;
    }
    if (!ev.ok) {
      trace_line(now_, s.dst, "correction-failed", "target qubit broken");
      fail(s, "teleport-" + ev.detail);
      return;
    }
    double fidelity = 0.0;
    if (cfg_.oracle_mode && s.reg && s.spans.size() == 1) {
      TeleportResult tr = teleport(*s.reg, 0,
                                   QubitPair{s.spans[0].qubit_left, s.spans[0].qubit_right}, rng_);
      fidelity = s.reg->fidelity({tr.delivered}, s.payload_state);
    } else {
      const double q = pair_quality(s, s.spans[0], now_);
      fidelity = 0.25 + 0.75 * q;
    }
    csm_.record(s.dst).teleportation_state = "teleported(" + session_tag(s) + ")";
    trace_line(now_, s.dst, "teleported", "fidelity=" + std::to_string(fidelity));
    s.outcome.success = true;
    s.outcome.fidelity = fidelity;
    finish(s, SessionState::Succeeded, "payload delivered");
  }

  // ---- teardown -------------------------------------------------------------

  void fail(Session& s, const std::string& reason) {
    if (s.outcome.failure_reason.empty()) s.outcome.failure_reason = reason;
    failure_counts_[reason]++;
    finish(s, SessionState::Failed, reason);
  }

  void finish(Session& s, SessionState st, const std::string& why) {
    transition(s, st, why);
    csm_.release_memories(session_tag(s));
    s.finished_at = now_;
    s.epoch++;
    s.outcome.id = s.id;
    s.outcome.duration_s = s.finished_at - s.started_at;
    s.outcome.route_time_ms = s.route_time_ms;
    s.outcome.pairs_consumed = s.pairs_consumed;
    s.outcome.reroutes = s.reroutes;
    s.outcome.final_path = s.cpath.middle.devices;
    if (csm_.occupied_count(session_tag(s)) != 0) {
      violations_.push_back("memories not fully released for " + session_tag(s));
    }
    outcomes_.push_back(s.outcome);
    sessions_.erase(s.id);
  }

  void accumulate(Metrics& m, const SessionOutcome& out) const {
    ++m.sessions;
    if (out.success) {
      ++m.successes;
      m.fidelity_mean += out.fidelity;
      m.fidelity_stderr += out.fidelity * out.fidelity;  // raw second moment until finalize
    }
    m.pairs_consumed_mean += out.pairs_consumed;
    m.route_time_ms_mean += out.route_time_ms;
  }

  void finalize(Metrics& m, double elapsed) const {
    if (m.successes > 0) {
      const double sum = m.fidelity_mean;
      const double sumsq = m.fidelity_stderr;
      const double mean = sum / m.successes;
      m.fidelity_mean = mean;
      const double var = std::max(0.0, sumsq / m.successes - mean * mean);
      m.fidelity_stderr = m.successes > 1 ? std::sqrt(var / m.successes) : 0.0;
    } else {
      m.fidelity_mean = 0.0;
      m.fidelity_stderr = 0.0;
    }
    if (m.sessions > 0) {
      m.pairs_consumed_mean /= m.sessions;
      m.route_time_ms_mean /= m.sessions;
    }
    m.elapsed_s = elapsed;
    m.throughput_qps = elapsed > 0.0 ? m.successes / elapsed : 0.0;
    m.failure_counts = failure_counts_;
  }

  Topology topo_;
  EngineConfig cfg_;
  Rng rng_;
  CentralStateMatrix csm_;
  Dspt dspt_;
  Dert dert_;
  FaultPlan faults_;

  std::priority_queue<Event> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  int next_session_ = 1;
  std::map<int, Session> sessions_;
  std::vector<SessionOutcome> outcomes_;
  std::vector<std::string> trace_;
  std::vector<std::string> violations_;
  std::map<std::string, int> failure_counts_;
  std::optional<std::array<cx, 2>> payload_override_;
};

}  // namespace qnet
