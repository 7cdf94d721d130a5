// CSM / LSM control-plane state: the fourteen per-device fields, LSM
// reporting, memory reservation, link/swap statistics and maintenance
// marking.

#pragma once

#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnet/path.hpp"
#include "qnet/topology.hpp"

namespace qnet {

enum class MemoryState { Idle, Occupy };
enum class DeviceState { Normal, Maintain };

struct MemoryRecord {
  std::string memory_name;
  MemoryKind kind = MemoryKind::Atomic;
  MemoryState memory_state = MemoryState::Idle;
  std::string aim_pair;           // partner memory ("device/memory"), empty when idle
  std::string aim_communication;  // session id, empty when idle
};

// Sliding-window success fraction over the last K attempts, optimistically
// initialized to 1.0.
class SlidingRate {
 public:
  static constexpr std::size_t kWindow = 50;

  void record(bool ok) {
    window_.push_back(ok);
    if (window_.size() > kWindow) window_.pop_front();
  }

  // Fill the window as if a long-running collection phase had observed the
  // given success rate.
  void prime(double rate) {
    window_.clear();
    const std::size_t ok = static_cast<std::size_t>(rate * kWindow + 0.5);
    for (std::size_t i = 0; i < kWindow; ++i) window_.push_back(i < ok);
  }

  double value() const {
    if (window_.empty()) return 1.0;
    std::size_t ok = 0;
    for (bool b : window_) ok += b ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(window_.size());
  }

  std::size_t samples() const { return window_.size(); }

 private:
  std::deque<bool> window_;
};

// The fourteen control-plane fields of one device (memory-level fields live
// in the nested records).
struct DeviceRecord {
  std::string domain_name;                  // 1
  std::string device_name;                  // 2
  DeviceState device_state = DeviceState::Normal;  // 3
  std::vector<MemoryRecord> memories;       // 4-7
  std::string aim_node;                     // 8
  std::string distribution_state = "-";     // 9
  std::string preparation_state = "-";      // 10
  std::string swapping_state = "-";         // 11
  std::string teleportation_state = "-";    // 12
  SlidingRate link_state;                   // 13
  SlidingRate swapping_success_rate;        // 14

  DeviceKind kind = DeviceKind::User;
  std::vector<std::string> all_domains;

  MemoryRecord* find_memory(const std::string& name) {
    for (MemoryRecord& m : memories) {
      if (m.memory_name == name) return &m;
    }
    return nullptr;
  }

  MemoryRecord* first_idle(MemoryKind kind_wanted) {
    for (MemoryRecord& m : memories) {
      if (m.memory_state == MemoryState::Idle && m.kind == kind_wanted) return &m;
    }
    return nullptr;
  }

  std::size_t idle_count(MemoryKind kind_wanted) const {
    std::size_t n = 0;
    for (const MemoryRecord& m : memories) {
      if (m.memory_state == MemoryState::Idle && m.kind == kind_wanted) ++n;
    }
    return n;
  }
};

class LocalStateMatrix {
 public:
  std::string domain;
  std::map<std::string, DeviceRecord> devices;

  static LocalStateMatrix from_topology(const Topology& t, const std::string& domain) {
    LocalStateMatrix lsm;
    lsm.domain = domain;
    for (const Device& d : t.devices()) {
      if (d.domains.empty() || d.domains.front() != domain) continue;  // home domain only
      DeviceRecord rec;
      rec.domain_name = domain;
      rec.device_name = d.id;
      rec.kind = d.kind;
      rec.all_domains = d.domains;
      for (const MemorySlot& slot : d.memories) {
        MemoryRecord m;
        m.memory_name = slot.name;
        m.kind = slot.kind;
        rec.memories.push_back(m);
      }
      lsm.devices[d.id] = std::move(rec);
    }
    return lsm;
  }
};

// Memory requirements a reservation must satisfy, set by the distribution
// scheme in use.
struct ReservationPolicy {
  MemoryKind endpoint_kind = MemoryKind::Atomic;
  int controller_slots = 2;
};

struct ReservationFailure {
  std::string exhausted_device;
};

struct ReserveResult {
  std::optional<CompletePath> path;
  std::string exhausted_device;

  bool ok() const { return path.has_value(); }
};

class CentralStateMatrix {
 public:
  static CentralStateMatrix from_topology(const Topology& t) {
    CentralStateMatrix csm;
    for (const std::string& d : t.domains) {
      csm.install(LocalStateMatrix::from_topology(t, d));
    }
    return csm;
  }

  // Replaces the subtree of the reported domain; other domains untouched.
  void report_lsm(const LocalStateMatrix& lsm) {
    if (!domains_.count(lsm.domain)) {
      throw std::out_of_range("report_lsm: unknown domain " + lsm.domain);
    }
    install(lsm);
  }

  const std::map<std::string, LocalStateMatrix>& domains() const { return domains_; }

  bool has(const std::string& device) const { return home_.count(device) > 0; }

  DeviceRecord& record(const std::string& device) {
    auto it = home_.find(device);
    if (it == home_.end()) throw std::out_of_range("CSM: unknown device " + device);
    return domains_[it->second].devices[device];
  }

  const DeviceRecord& record(const std::string& device) const {
    auto it = home_.find(device);
    if (it == home_.end()) throw std::out_of_range("CSM: unknown device " + device);
    return domains_.at(it->second).devices.at(device);
  }

  LocalStateMatrix& lsm(const std::string& domain) {
    auto it = domains_.find(domain);
    if (it == domains_.end()) throw std::out_of_range("CSM: unknown domain " + domain);
    return it->second;
  }

  // Empty result when the domain has no controller (distributed mode).
  std::string controller_of(const std::string& domain) const {
    auto it = domains_.find(domain);
    if (it == domains_.end()) return "";
    for (const auto& [name, rec] : it->second.devices) {
      if (rec.kind == DeviceKind::LocalController) return name;
    }
    return "";
  }

  bool is_maintain(const std::string& device) const {
    return record(device).device_state == DeviceState::Maintain;
  }

  void mark_maintain(const std::string& device) {
    record(device).device_state = DeviceState::Maintain;
  }

  void mark_normal(const std::string& device) {
    record(device).device_state = DeviceState::Normal;
  }

  double update_link_state(const std::string& device, bool success) {
    DeviceRecord& rec = record(device);
    rec.link_state.record(success);
    return rec.link_state.value();
  }

  double update_swap_rate(const std::string& device, bool success) {
    DeviceRecord& rec = record(device);
    rec.swapping_success_rate.record(success);
    return rec.swapping_success_rate.value();
  }

  // All-or-nothing reservation of one complete path for a session: one
  // endpoint memory per segment side, plus the preparing controller's slots.
  // On failure nothing is modified and the exhausted device is named.
  ReserveResult reserve_memories(const PathMiddle& middle, const std::string& session,
                                 const ReservationPolicy& policy = {}) {
    ReserveResult result;
    if (middle.devices.size() < 2 ||
        middle.segment_domains.size() + 1 != middle.devices.size()) {
      throw std::invalid_argument("reserve_memories: malformed middle path");
    }

    struct Pick {
      std::string device;
      std::string memory;
      std::string partner_device;  // filled after all picks are known
      std::string partner_memory;
    };
    std::vector<Pick> picks;
    // Track tentative assignments so one device is not double-booked within
    // the same plan.
    std::map<std::string, std::vector<std::string>> planned;

    auto pick_one = [&](const std::string& device, MemoryKind k) -> std::optional<std::string> {
      if (!has(device)) return std::nullopt;
      DeviceRecord& rec = record(device);
      if (rec.device_state == DeviceState::Maintain) return std::nullopt;
      for (MemoryRecord& m : rec.memories) {
        if (m.memory_state != MemoryState::Idle || m.kind != k) continue;
        bool taken = false;
        for (const std::string& p : planned[device]) {
          if (p == m.memory_name) taken = true;
        }
        if (!taken) {
          planned[device].push_back(m.memory_name);
          return m.memory_name;
        }
      }
      return std::nullopt;
    };

    CompletePath complete;
    complete.middle = middle;
    for (std::size_t s = 0; s + 1 < middle.devices.size(); ++s) {
      CompleteSegment seg;
      seg.left_device = middle.devices[s];
      seg.right_device = middle.devices[s + 1];
      seg.domain = middle.segment_domains[s];
      seg.controller = controller_of(seg.domain);

      auto left = pick_one(seg.left_device, policy.endpoint_kind);
      if (!left) {
        result.exhausted_device = seg.left_device;
        return result;
      }
      auto right = pick_one(seg.right_device, policy.endpoint_kind);
      if (!right) {
        result.exhausted_device = seg.right_device;
        return result;
      }
      seg.left_memory = *left;
      seg.right_memory = *right;
      if (!seg.controller.empty()) {
        for (int k = 0; k < policy.controller_slots; ++k) {
          auto cm = pick_one(seg.controller, MemoryKind::Atomic);
          if (!cm) {
            result.exhausted_device = seg.controller;
            return result;
          }
          seg.controller_memories.push_back(*cm);
        }
      }
      complete.segs.push_back(std::move(seg));
    }

    // Commit: flip every planned memory to occupy.
    for (const CompleteSegment& seg : complete.segs) {
      auto occupy = [&](const std::string& dev, const std::string& mem, const std::string& pd,
                        const std::string& pm) {
        MemoryRecord* m = record(dev).find_memory(mem);
        m->memory_state = MemoryState::Occupy;
        m->aim_communication = session;
        m->aim_pair = pd + "/" + pm;
      };
      occupy(seg.left_device, seg.left_memory, seg.right_device, seg.right_memory);
      occupy(seg.right_device, seg.right_memory, seg.left_device, seg.left_memory);
      for (const std::string& cm : seg.controller_memories) {
        occupy(seg.controller, cm, seg.controller, cm);
      }
    }
    result.path = std::move(complete);
    return result;
  }

  // Returns every memory of the session to idle; double release is a no-op.
  void release_memories(const std::string& session) {
    for (auto& [domain, lsm] : domains_) {
      for (auto& [name, rec] : lsm.devices) {
        for (MemoryRecord& m : rec.memories) {
          if (m.aim_communication == session) {
            m.memory_state = MemoryState::Idle;
            m.aim_communication.clear();
            m.aim_pair.clear();
          }
        }
      }
    }
  }

  std::size_t occupied_count(const std::string& session) const {
    std::size_t n = 0;
    for (const auto& [domain, lsm] : domains_) {
      for (const auto& [name, rec] : lsm.devices) {
        for (const MemoryRecord& m : rec.memories) {
          if (m.aim_communication == session) ++n;
        }
      }
    }
    return n;
  }

  std::size_t occupied_total() const {
    std::size_t n = 0;
    for (const auto& [domain, lsm] : domains_) {
      for (const auto& [name, rec] : lsm.devices) {
        for (const MemoryRecord& m : rec.memories) {
          if (m.memory_state == MemoryState::Occupy) ++n;
        }
      }
    }
    return n;
  }

  // Human-readable table: one device per line, all fourteen fields.
  std::string dump() const {
    std::ostringstream os;
    for (const auto& [domain, lsm] : domains_) {
      for (const auto& [name, rec] : lsm.devices) {
        os << domain << " | " << name << " | "
           << (rec.device_state == DeviceState::Normal ? "normal" : "maintain") << " | mem=";
        for (std::size_t i = 0; i < rec.memories.size(); ++i) {
          const MemoryRecord& m = rec.memories[i];
          if (i) os << ";";
          os << m.memory_name << ":"
             << (m.memory_state == MemoryState::Idle ? "idle" : "occupy") << ":"
             << (m.aim_pair.empty() ? "-" : m.aim_pair) << ":"
             << (m.aim_communication.empty() ? "-" : m.aim_communication);
        }
        os << " | aim_node=" << (rec.aim_node.empty() ? "-" : rec.aim_node)
           << " | dist=" << rec.distribution_state << " | prep=" << rec.preparation_state
           << " | swap=" << rec.swapping_state << " | tele=" << rec.teleportation_state
           << " | link_state=" << rec.link_state.value()
           << " | swap_rate=" << rec.swapping_success_rate.value() << "\n";
      }
    }
    return os.str();
  }

 private:
  void install(const LocalStateMatrix& lsm) {
    auto old = domains_.find(lsm.domain);
    if (old != domains_.end()) {
      for (const auto& [name, rec] : old->second.devices) home_.erase(name);
    }
    domains_[lsm.domain] = lsm;
    for (const auto& [name, rec] : lsm.devices) home_[name] = lsm.domain;
  }

  std::map<std::string, LocalStateMatrix> domains_;
  std::map<std::string, std::string> home_;
};

}  // namespace qnet
