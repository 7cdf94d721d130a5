// Path records shared by the routing algorithms and the control plane.
//
// A middle-state path names users and repeaters only (plus the users'
// memories); controller and repeater memories are attached by resource
// reservation, which turns it into a complete path.

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnet {

struct PathMiddle {
  std::vector<std::string> devices;          // src user, repeaters..., dst user
  std::vector<std::string> segment_domains;  // one entry per consecutive pair
  std::string src_memory;
  std::string dst_memory;

  int segments() const { return devices.empty() ? 0 : static_cast<int>(devices.size()) - 1; }
  int repeater_hops() const {
    return devices.size() >= 2 ? static_cast<int>(devices.size()) - 2 : 0;
  }
  bool empty() const { return devices.empty(); }

  std::string key() const {
    std::string k;
    for (const std::string& d : devices) {
      k += d;
      k += '>';
    }
    return k;
  }

  // Middle-state rendering: controllers implied by segment domains, user
  // memories only.
  std::string render() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < devices.size(); ++i) {
      if (i) os << " -> ";
      os << devices[i] << "[";
      bool first = true;
      if (i < segment_domains.size()) {
        os << "LC_" << segment_domains[i];
        first = false;
      }
      if (i > 0 && i - 1 < segment_domains.size() &&
          (i >= segment_domains.size() || segment_domains[i - 1] != segment_domains[i])) {
        if (!first) os << ",";
        os << "LC_" << segment_domains[i - 1];
        first = false;
      }
      if (i == 0 && !src_memory.empty()) {
        if (!first) os << ",";
        os << src_memory;
      }
      if (i + 1 == devices.size() && !dst_memory.empty()) {
        if (!first) os << ",";
        os << dst_memory;
      }
      os << "]";
    }
    return os.str();
  }
};

// One segment of a complete path: both endpoint memories plus the preparing
// controller's memories (empty in distributed mode).
struct CompleteSegment {
  std::string left_device;
  std::string right_device;
  std::string domain;
  std::string controller;  // empty when no controller prepares this segment
  std::string left_memory;
  std::string right_memory;
  std::vector<std::string> controller_memories;
};

struct CompletePath {
  PathMiddle middle;
  std::vector<CompleteSegment> segs;

  std::string render() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < middle.devices.size(); ++i) {
      if (i) os << " -> ";
      os << middle.devices[i] << "[";
      bool first = true;
      auto emit_controller = [&](const CompleteSegment& s) {
        if (s.controller.empty()) return;
        if (!first) os << ",";
        first = false;
        os << s.controller << "(";
        for (std::size_t m = 0; m < s.controller_memories.size(); ++m) {
          if (m) os << ",";
          os << s.controller_memories[m];
        }
        os << ")";
      };
      if (i < segs.size()) emit_controller(segs[i]);
      if (i > 0 && (i >= segs.size() || segs[i - 1].controller != segs[i].controller)) {
        emit_controller(segs[i - 1]);
      }
      if (i > 0) {
        if (!first) os << ",";
        first = false;
        os << segs[i - 1].right_memory;
      }
      if (i < segs.size()) {
        if (!first) os << ",";
        first = false;
        os << segs[i].left_memory;
      }
      os << "]";
    }
    return os.str();
  }
};

}  // namespace qnet
