// Entanglement routing: the centralized algorithm (candidate generation from
// the domain tables, invalid-path elimination, state-based scoring) and the
// three distributed baselines used for comparison.

#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qnet/control.hpp"
#include "qnet/noise.hpp"
#include "qnet/path.hpp"
#include "qnet/quantum.hpp"
#include "qnet/topology.hpp"

namespace qnet {

inline double score_repeater(double swap_rate, double link_state) {
  if (swap_rate < 0.0 || swap_rate > 1.0 || link_state < 0.0 || link_state > 1.0) {
    throw std::invalid_argument("score_repeater: inputs outside [0,1]");
  }
  return 0.3 * swap_rate + 0.7 * link_state;
}

struct ScoredPath {
  PathMiddle path;
  double score = 0.0;
};

// Infrastructure-level routing graph: users and repeaters only. In the
// hierarchical architecture two devices are adjacent when they share a
// domain (the domain controller can distribute to both); in the distributed
// architecture adjacency follows the direct quantum channels.
struct RoutingGraph {
  std::map<std::string, std::vector<std::string>> adj;
  std::map<std::pair<std::string, std::string>, std::string> edge_domain;

  const std::string& domain_of_edge(const std::string& a, const std::string& b) const {
    static const std::string kEmpty;
    auto it = edge_domain.find({a, b});
    if (it != edge_domain.end()) return it->second;
    it = edge_domain.find({b, a});
    return it == edge_domain.end() ? kEmpty : it->second;
  }
};

inline bool routable_kind(DeviceKind k) {
  return k == DeviceKind::User || k == DeviceKind::Repeater || k == DeviceKind::EdgeRepeater;
}

inline RoutingGraph build_routing_graph(const Topology& t,
                                        const std::set<std::string>& exclude = {}) {
  RoutingGraph g;
  std::vector<const Device*> nodes;
  for (const Device& d : t.devices()) {
    if (!routable_kind(d.kind)) continue;
    if (exclude.count(d.id)) continue;
    nodes.push_back(&d);
    g.adj[d.id];
  }
  auto add_edge = [&](const std::string& a, const std::string& b, const std::string& dom) {
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
    g.edge_domain[{a, b}] = dom;
  };
  if (t.hierarchical) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        auto shared = t.shared_domains(nodes[i]->id, nodes[j]->id);
        if (!shared.empty()) add_edge(nodes[i]->id, nodes[j]->id, shared.front());
      }
    }
  } else {
    for (const QuantumChannel& c : t.qchannels()) {
      if (exclude.count(c.a) || exclude.count(c.b)) continue;
      if (!routable_kind(t.device(c.a).kind) || !routable_kind(t.device(c.b).kind)) continue;
      auto shared = t.shared_domains(c.a, c.b);
      std::string dom = shared.empty() ? t.device(c.a).domains.front() : shared.front();
      add_edge(c.a, c.b, dom);
    }
  }
  for (auto& [id, nbrs] : g.adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return g;
}

inline std::set<std::string> maintained_devices(const CentralStateMatrix& csm) {
  std::set<std::string> out;
  for (const auto& [domain, lsm] : csm.domains()) {
    for (const auto& [name, rec] : lsm.devices) {
      if (rec.device_state == DeviceState::Maintain) out.insert(name);
    }
  }
  return out;
}

namespace detail {

inline PathMiddle to_path_middle(const RoutingGraph& g, const std::vector<std::string>& devices) {
  PathMiddle p;
  p.devices = devices;
  for (std::size_t i = 0; i + 1 < devices.size(); ++i) {
    p.segment_domains.push_back(g.domain_of_edge(devices[i], devices[i + 1]));
  }
  return p;
}

// Breadth-first shortest path with deterministic lexicographic tie-break.
inline std::optional<std::vector<std::string>> bfs_path(const RoutingGraph& g,
                                                        const std::string& src,
                                                        const std::string& dst, long* work) {
  if (!g.adj.count(src) || !g.adj.count(dst)) return std::nullopt;
  std::map<std::string, std::string> parent;
  std::deque<std::string> queue;
  parent[src] = src;
  queue.push_back(src);
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    if (work) ++*work;
    if (cur == dst) break;
    auto it = g.adj.find(cur);
    if (it == g.adj.end()) continue;
    for (const std::string& nxt : it->second) {
      if (!parent.count(nxt)) {
        parent[nxt] = cur;
        queue.push_back(nxt);
      }
    }
  }
  if (!parent.count(dst)) return std::nullopt;
  std::vector<std::string> path;
  for (std::string cur = dst; cur != src; cur = parent[cur]) path.push_back(cur);
  path.push_back(src);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Greedy baseline: minimum-hop path by BFS, ignoring network state.
// ---------------------------------------------------------------------------

struct GreedyResult {
  std::optional<PathMiddle> path;
  long work = 0;
};

inline GreedyResult greedy_route(const Topology& t, const std::string& src, const std::string& dst,
                                 const std::set<std::string>& exclude = {}) {
  GreedyResult r;
  if (src == dst) {
    r.path = PathMiddle{};
    return r;
  }
  RoutingGraph g = build_routing_graph(t, exclude);
  auto devs = detail::bfs_path(g, src, dst, &r.work);
  if (devs) r.path = detail::to_path_middle(g, *devs);
  return r;
}

// ---------------------------------------------------------------------------
// SLMP baseline: global entanglement distribution first, then shortest path
// restricted to links whose distribution succeeded.
// ---------------------------------------------------------------------------

struct SlmpResult {
  std::optional<PathMiddle> path;
  int pairs_consumed = 0;  // every quantum link attempts one distribution
  long work = 0;
};

inline SlmpResult slmp_route(const Topology& t, double p_w, const std::string& src,
                             const std::string& dst, Rng& rng,
                             const std::set<std::string>& exclude = {}) {
  SlmpResult r;
  std::map<std::pair<std::string, std::string>, bool> link_ok;
  for (const QuantumChannel& c : t.qchannels()) {
    const double p = p_w * channel_success_prob(c.env);
    const bool ok = rng.uniform() < p;
    link_ok[{c.a, c.b}] = ok;
    link_ok[{c.b, c.a}] = ok;
    ++r.pairs_consumed;
    ++r.work;
  }
  RoutingGraph g = build_routing_graph(t, exclude);
  // Keep only edges whose underlying channel distribution succeeded.
  RoutingGraph usable;
  for (const auto& [id, nbrs] : g.adj) usable.adj[id];
  for (const auto& [edge, dom] : g.edge_domain) {
    bool ok = false;
    if (t.hierarchical) {
      std::string lc = "LC_" + dom;
      ok = link_ok.count({edge.first, lc}) && link_ok[{edge.first, lc}] &&
           link_ok.count({edge.second, lc}) && link_ok[{edge.second, lc}];
    } else {
      auto it = link_ok.find(edge);
      ok = it != link_ok.end() && it->second;
    }
    if (ok) {
      usable.adj[edge.first].push_back(edge.second);
      usable.adj[edge.second].push_back(edge.first);
      usable.edge_domain[edge] = dom;
    }
  }
  for (auto& [id, nbrs] : usable.adj) std::sort(nbrs.begin(), nbrs.end());
  auto devs = detail::bfs_path(usable, src, dst, &r.work);
  if (devs) r.path = detail::to_path_middle(usable, *devs);
  return r;
}

// ---------------------------------------------------------------------------
// Q-Cast baseline: memory-width-aware minimum-hop primary path plus
// precomputed per-segment recovery detours.
// ---------------------------------------------------------------------------

struct QCastDetour {
  int segment_index = 0;
  std::string via;  // X -> via -> Y replaces segment (X, Y)
  std::string domain_left;
  std::string domain_right;
};

struct QCastResult {
  std::optional<PathMiddle> path;
  std::vector<QCastDetour> recovery;
  long work = 0;
};

inline QCastResult qcast_route(const Topology& t, const CentralStateMatrix& csm,
                               const std::string& src, const std::string& dst,
                               MemoryKind endpoint_kind = MemoryKind::Atomic) {
  QCastResult r;
  std::set<std::string> exclude = maintained_devices(csm);
  // Memory width: drop repeaters that cannot host both segment ends.
  for (const auto& [domain, lsm] : csm.domains()) {
    for (const auto& [name, rec] : lsm.devices) {
      if (rec.kind == DeviceKind::Repeater || rec.kind == DeviceKind::EdgeRepeater) {
        if (rec.idle_count(endpoint_kind) < 2) exclude.insert(name);
      }
      if (rec.kind == DeviceKind::User && rec.idle_count(endpoint_kind) +
                                                  rec.idle_count(endpoint_kind == MemoryKind::Atomic
                                                                     ? MemoryKind::Optical
                                                                     : MemoryKind::Atomic) <
                                              1) {
        exclude.insert(name);
      }
    }
  }
  RoutingGraph g = build_routing_graph(t, exclude);
  auto devs = detail::bfs_path(g, src, dst, &r.work);
  if (!devs) return r;
  r.path = detail::to_path_middle(g, *devs);

  // One detour per segment: X -> Z -> Y with Z off the primary path.
  std::set<std::string> on_path(devs->begin(), devs->end());
  for (std::size_t s = 0; s + 1 < devs->size(); ++s) {
    const std::string& x = (*devs)[s];
    const std::string& y = (*devs)[s + 1];
    auto it = g.adj.find(x);
    if (it == g.adj.end()) continue;
    for (const std::string& z : it->second) {
      ++r.work;
      if (on_path.count(z)) continue;
      const Device& dz = t.device(z);
      if (dz.kind == DeviceKind::User) continue;
      const auto& zy = g.domain_of_edge(z, y);
      if (zy.empty() && std::find(g.adj.at(z).begin(), g.adj.at(z).end(), y) == g.adj.at(z).end()) {
        continue;
      }
      if (std::find(g.adj.at(z).begin(), g.adj.at(z).end(), y) == g.adj.at(z).end()) continue;
      QCastDetour d;
      d.segment_index = static_cast<int>(s);
      d.via = z;
      d.domain_left = g.domain_of_edge(x, z);
      d.domain_right = g.domain_of_edge(z, y);
      r.recovery.push_back(d);
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Centralized entanglement routing.
// ---------------------------------------------------------------------------

struct CerResult {
  std::vector<ScoredPath> ranked;  // descending score, then fewer segments
  long work = 0;
};

namespace detail {

inline bool has_consecutive_same_domain_triple(const Topology& t,
                                               const std::vector<std::string>& devices) {
  for (std::size_t i = 0; i + 2 < devices.size(); ++i) {
    const Device& a = t.device(devices[i]);
    const Device& b = t.device(devices[i + 1]);
    const Device& c = t.device(devices[i + 2]);
    for (const std::string& dom : a.domains) {
      if (b.in_domain(dom) && c.in_domain(dom)) return true;
    }
  }
  return false;
}

}  // namespace detail

// Three phases: seed candidates from the domain shortest-path and edge
// repeater tables, expand them by replacing each repeater with pairs of
// neighbouring repeaters for `recursion_n` rounds, eliminate paths with
// three consecutive same-domain devices, then score with the control-plane
// statistics. Paths are ranked by mean repeater score (Eq. 10 weights), with
// fewer repeater hops and lexicographic order as tie-breaks.
inline CerResult cer_route(const CentralStateMatrix& csm, const Dspt& dspt, const Dert& dert,
                           const Topology& t, const std::string& src, const std::string& dst,
                           int recursion_n = 2, std::size_t max_candidates = 512) {
  CerResult result;
  const std::string src_domain = t.device(src).domains.front();
  const std::string dst_domain = t.device(dst).domains.front();
  std::set<std::string> excluded = maintained_devices(csm);
  if (excluded.count(src) || excluded.count(dst)) return result;

  RoutingGraph g = build_routing_graph(t, excluded);

  // Phase 1: seeds straight out of the tables.
  std::vector<std::vector<std::string>> seeds;
  if (src_domain == dst_domain) {
    seeds.push_back({src, dst});
  } else {
    for (const auto& domain_seq : dspt.between(src_domain, dst_domain)) {
      std::vector<std::vector<std::string>> partial{{src}};
      for (std::size_t b = 0; b + 1 < domain_seq.size(); ++b) {
        std::vector<std::vector<std::string>> grown;
        for (const std::string& rep : dert.between(domain_seq[b], domain_seq[b + 1])) {
          if (excluded.count(rep)) continue;
          for (const auto& p : partial) {
            auto np = p;
            np.push_back(rep);
            grown.push_back(std::move(np));
          }
        }
        partial = std::move(grown);
        if (partial.empty()) break;
      }
      for (auto& p : partial) {
        p.push_back(dst);
        seeds.push_back(std::move(p));
      }
    }
  }

  std::set<std::string> seen;
  std::vector<std::vector<std::string>> all;
  auto admit = [&](std::vector<std::string> devs) {
    std::string key;
    for (const auto& d : devs) {
      key += d;
      key += '>';
    }
    if (seen.count(key)) return;
    seen.insert(key);
    all.push_back(std::move(devs));
  };
  for (auto& s : seeds) admit(std::move(s));

  // Expansion rounds: replace one repeater with two neighbours per new path.
  std::vector<std::vector<std::string>> previous = all;
  for (int round = 0; round < recursion_n && all.size() < max_candidates; ++round) {
    std::vector<std::vector<std::string>> current;
    for (const auto& path : previous) {
      for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const std::string& prev = path[i - 1];
        const std::string& old = path[i];
        const std::string& next = path[i + 1];
        result.work += static_cast<long>(g.adj[old].size());
        std::set<std::string> in_path(path.begin(), path.end());
        // Replacement pairs come from the shared-domain neighbourhood. The
        // old repeater may survive as one end of the pair (an insertion);
        // at least one of the two must be new.
        for (const std::string& r1 : g.adj[prev]) {
          if (in_path.count(r1) && r1 != old) continue;
          if (t.device(r1).kind == DeviceKind::User) continue;
          for (const std::string& r2 : g.adj[r1]) {
            if (r2 == r1) continue;
            if (in_path.count(r2) && r2 != old) continue;
            if (r1 == old && r2 == old) continue;
            if (t.device(r2).kind == DeviceKind::User) continue;
            if (g.domain_of_edge(r2, next).empty()) continue;
            std::vector<std::string> np;
            np.reserve(path.size() + 1);
            np.insert(np.end(), path.begin(), path.begin() + static_cast<long>(i));
            np.push_back(r1);
            np.push_back(r2);
            np.insert(np.end(), path.begin() + static_cast<long>(i) + 1, path.end());
            current.push_back(std::move(np));
          }
        }
      }
    }
    if (current.empty()) break;
    for (const auto& p : current) {
      if (all.size() >= max_candidates) break;
      admit(p);
    }
    previous = std::move(current);
  }

  // Phase 2: eliminate invalid paths (three consecutive devices that share a
  // single domain add a hop without any rerouting value).
  // Phase 3: score the survivors.
  std::vector<ScoredPath> scored;
  for (const auto& devs : all) {
    if (detail::has_consecutive_same_domain_triple(t, devs)) continue;
    PathMiddle pm = detail::to_path_middle(g, devs);
    bool valid = true;
    for (const auto& dom : pm.segment_domains) {
      if (dom.empty()) valid = false;
    }
    if (!valid) continue;
    double sum = 0.0;
    int repeaters = 0;
    for (std::size_t i = 1; i + 1 < devs.size(); ++i) {
      const DeviceRecord& rec = csm.record(devs[i]);
      sum += score_repeater(rec.swapping_success_rate.value(), rec.link_state.value());
      ++repeaters;
      ++result.work;
    }
    ScoredPath sp;
    sp.path = std::move(pm);
    sp.score = repeaters == 0 ? 1.0 : sum / repeaters;
    scored.push_back(std::move(sp));
  }

  // Ranking combines scores and hops: a longer path must beat a shorter one
  // by more than the sliding-window sampling noise (a relative margin, so
  // rescaling every repeater score leaves the ordering unchanged). Within
  // each contender group fewer hops win, then the exact score, then the
  // lexicographic key.
  constexpr double kScoreMargin = 0.03;
  std::sort(scored.begin(), scored.end(), [](const ScoredPath& a, const ScoredPath& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.path.segments() != b.path.segments()) return a.path.segments() < b.path.segments();
    return a.path.key() < b.path.key();
  });
  std::vector<ScoredPath> ranked;
  ranked.reserve(scored.size());
  std::vector<ScoredPath> rest = std::move(scored);
  while (!rest.empty()) {
    const double best = rest.front().score;
    std::size_t pick = 0;
    for (std::size_t i = 1; i < rest.size(); ++i) {
      if (rest[i].score < best * (1.0 - kScoreMargin)) break;
      if (rest[i].path.segments() < rest[pick].path.segments()) pick = i;
    }
    ranked.push_back(std::move(rest[pick]));
    rest.erase(rest.begin() + static_cast<long>(pick));
  }
  result.ranked = std::move(ranked);
  return result;
}

}  // namespace qnet
