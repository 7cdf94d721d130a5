// Device / domain / channel graph, cellular topology builders, the domain
// shortest-path and edge-repeater tables, and the analytic cost models.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qnet/noise.hpp"

namespace qnet {

enum class DeviceKind { User, Repeater, EdgeRepeater, LocalController, CentralController };

inline std::string to_string(DeviceKind k) {
  switch (k) {
    case DeviceKind::User: return "user";
    case DeviceKind::Repeater: return "repeater";
    case DeviceKind::EdgeRepeater: return "edge-repeater";
    case DeviceKind::LocalController: return "local-controller";
    case DeviceKind::CentralController: return "central-controller";
  }
  return "?";
}

inline DeviceKind device_kind_from_string(const std::string& s) {
  if (s == "user") return DeviceKind::User;
  if (s == "repeater") return DeviceKind::Repeater;
  if (s == "edge-repeater") return DeviceKind::EdgeRepeater;
  if (s == "local-controller") return DeviceKind::LocalController;
  if (s == "central-controller") return DeviceKind::CentralController;
  throw std::invalid_argument("unknown device kind: " + s);
}

enum class MemoryKind { Optical, Atomic };

struct MemorySlot {
  std::string name;
  MemoryKind kind = MemoryKind::Atomic;
};

struct Device {
  std::string id;
  DeviceKind kind = DeviceKind::User;
  std::vector<std::string> domains;  // edge repeaters have two entries
  std::vector<MemorySlot> memories;
  double x_km = 0.0;
  double y_km = 0.0;

  bool in_domain(const std::string& d) const {
    return std::find(domains.begin(), domains.end(), d) != domains.end();
  }
};

struct QuantumChannel {
  std::string a;
  std::string b;
  double length_km = 100.0;
  EnvParams env;
};

struct ClassicalChannel {
  std::string a;
  std::string b;
  double length_km = 100.0;
};

class Topology {
 public:
  bool hierarchical = true;
  std::vector<std::string> domains;                       // construction order
  std::map<std::string, std::vector<std::string>> domain_adjacency;

  void add_device(Device d) {
    if (index_.count(d.id)) throw std::invalid_argument("duplicate device id: " + d.id);
    index_[d.id] = devices_.size();
    devices_.push_back(std::move(d));
  }

  void add_qchannel(QuantumChannel c) {
    require(c.a);
    require(c.b);
    qchannels_.push_back(std::move(c));
  }

  void add_cchannel(ClassicalChannel c) {
    require(c.a);
    require(c.b);
    cchannels_.push_back(std::move(c));
  }

  const std::vector<Device>& devices() const { return devices_; }
  const std::vector<QuantumChannel>& qchannels() const { return qchannels_; }
  const std::vector<ClassicalChannel>& cchannels() const { return cchannels_; }

  bool has_device(const std::string& id) const { return index_.count(id) > 0; }

  const Device& device(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("no such device: " + id);
    return devices_[it->second];
  }

  Device& device(const std::string& id) {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("no such device: " + id);
    return devices_[it->second];
  }

  std::size_t quantum_link_count() const { return qchannels_.size(); }

  std::vector<std::string> devices_in_domain(const std::string& domain) const {
    std::vector<std::string> out;
    for (const Device& d : devices_) {
      if (d.in_domain(domain)) out.push_back(d.id);
    }
    return out;
  }

  std::string controller_of(const std::string& domain) const {
    for (const Device& d : devices_) {
      if (d.kind == DeviceKind::LocalController && d.in_domain(domain)) return d.id;
    }
    throw std::out_of_range("no controller for domain " + domain);
  }

  // Domains shared by two devices, in domain construction order.
  std::vector<std::string> shared_domains(const std::string& a, const std::string& b) const {
    const Device& da = device(a);
    const Device& db = device(b);
    std::vector<std::string> out;
    for (const std::string& d : domains) {
      if (da.in_domain(d) && db.in_domain(d)) out.push_back(d);
    }
    return out;
  }

  const QuantumChannel* find_qchannel(const std::string& a, const std::string& b) const {
    for (const QuantumChannel& c : qchannels_) {
      if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) return &c;
    }
    return nullptr;
  }

  // Line-oriented text form used by scenario configs and tests.
  std::string to_text() const {
    std::ostringstream os;
    os << "mode " << (hierarchical ? "hierarchical" : "distributed") << "\n";
    for (const std::string& d : domains) {
      os << "domain " << d;
      auto it = domain_adjacency.find(d);
      if (it != domain_adjacency.end() && !it->second.empty()) {
        os << " adj=";
        for (std::size_t i = 0; i < it->second.size(); ++i) {
          if (i) os << ",";
          os << it->second[i];
        }
      }
      os << "\n";
    }
    for (const Device& d : devices_) {
      os << "device " << d.id << " " << to_string(d.kind) << " domains=";
      for (std::size_t i = 0; i < d.domains.size(); ++i) {
        if (i) os << ",";
        os << d.domains[i];
      }
      os << " mem=";
      for (std::size_t i = 0; i < d.memories.size(); ++i) {
        if (i) os << ",";
        os << d.memories[i].name << ":"
           << (d.memories[i].kind == MemoryKind::Atomic ? "atomic" : "optical");
      }
      os << " x=" << d.x_km << " y=" << d.y_km << "\n";
    }
    for (const QuantumChannel& c : qchannels_) {
      os << "qchannel " << c.a << " " << c.b << " length=" << c.length_km
         << " loss_init=" << c.env.loss_init << " loss_noise=" << c.env.loss_noise << "\n";
    }
    for (const ClassicalChannel& c : cchannels_) {
      os << "cchannel " << c.a << " " << c.b << " length=" << c.length_km << "\n";
    }
    return os.str();
  }

  static Topology from_text(const std::string& text) {
    Topology t;
    std::istringstream is(text);
    std::string line;
    auto split_list = [](const std::string& s) {
      std::vector<std::string> out;
      std::string cur;
      for (char ch : s) {
        if (ch == ',') {
          if (!cur.empty()) out.push_back(cur);
          cur.clear();
        } else {
          cur.push_back(ch);
        }
      }
      if (!cur.empty()) out.push_back(cur);
      return out;
    };
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string tag;
      ls >> tag;
      if (tag == "mode") {
        std::string m;
        ls >> m;
        t.hierarchical = (m == "hierarchical");
      } else if (tag == "domain") {
        std::string name;
        ls >> name;
        t.domains.push_back(name);
        std::string kv;
        while (ls >> kv) {
          if (kv.rfind("adj=", 0) == 0) t.domain_adjacency[name] = split_list(kv.substr(4));
        }
      } else if (tag == "device") {
        Device d;
        std::string kind;
        ls >> d.id >> kind;
        d.kind = device_kind_from_string(kind);
        std::string kv;
        while (ls >> kv) {
          if (kv.rfind("domains=", 0) == 0) {
            d.domains = split_list(kv.substr(8));
          } else if (kv.rfind("mem=", 0) == 0) {
            for (const std::string& m : split_list(kv.substr(4))) {
              auto pos = m.find(':');
              MemorySlot slot;
              slot.name = m.substr(0, pos);
              slot.kind = (pos != std::string::npos && m.substr(pos + 1) == "optical")
                              ? MemoryKind::Optical
                              : MemoryKind::Atomic;
              d.memories.push_back(slot);
            }
          } else if (kv.rfind("x=", 0) == 0) {
            d.x_km = std::stod(kv.substr(2));
          } else if (kv.rfind("y=", 0) == 0) {
            d.y_km = std::stod(kv.substr(2));
          }
        }
        t.add_device(std::move(d));
      } else if (tag == "qchannel") {
        QuantumChannel c;
        ls >> c.a >> c.b;
        std::string kv;
        while (ls >> kv) {
          if (kv.rfind("length=", 0) == 0) c.length_km = std::stod(kv.substr(7));
          if (kv.rfind("loss_init=", 0) == 0) c.env.loss_init = std::stod(kv.substr(10));
          if (kv.rfind("loss_noise=", 0) == 0) c.env.loss_noise = std::stod(kv.substr(11));
        }
        c.env.length_km = c.length_km;
        t.add_qchannel(std::move(c));
      } else if (tag == "cchannel") {
        ClassicalChannel c;
        ls >> c.a >> c.b;
        std::string kv;
        while (ls >> kv) {
          if (kv.rfind("length=", 0) == 0) c.length_km = std::stod(kv.substr(7));
        }
        t.add_cchannel(std::move(c));
      } else {
        throw std::invalid_argument("topology text: unknown record '" + tag + "'");
      }
    }
    return t;
  }

 private:
  void require(const std::string& id) const {
    if (!index_.count(id)) throw std::invalid_argument("channel references unknown device: " + id);
  }

  std::vector<Device> devices_;
  std::vector<QuantumChannel> qchannels_;
  std::vector<ClassicalChannel> cchannels_;
  std::map<std::string, std::size_t> index_;
};

namespace detail {

// A, B, ..., Z, AA, AB, ...
inline std::string letters(std::size_t idx) {
  std::string s;
  idx += 1;
  while (idx > 0) {
    idx -= 1;
    s.insert(s.begin(), static_cast<char>('A' + idx % 26));
    idx /= 26;
  }
  return s;
}

inline std::vector<MemorySlot> make_memories(const std::string& prefix, int atomic, int optical) {
  std::vector<MemorySlot> out;
  int n = 1;
  for (int i = 0; i < atomic; ++i) out.push_back({prefix + "_" + std::to_string(n++), MemoryKind::Atomic});
  for (int i = 0; i < optical; ++i) out.push_back({prefix + "_" + std::to_string(n++), MemoryKind::Optical});
  return out;
}

constexpr double kCellKm = 200.0;  // domain cell pitch; channels default to 100 km

struct GridSpec {
  int side = 0;
  std::vector<std::string> names;  // row-major cell names

  const std::string& at(int r, int c) const { return names[static_cast<std::size_t>(r) * side + c]; }
};

inline GridSpec make_grid(int rings) {
  if (rings < 1) throw std::invalid_argument("cellular builder: rings < 1");
  GridSpec g;
  g.side = 2 * rings - 1;
  const int cells = g.side * g.side;
  for (int i = 0; i < cells; ++i) g.names.push_back(letters(static_cast<std::size_t>(i)));
  return g;
}

// Borders of the grid in lexicographic (cell-index pair) order.
struct Border {
  int cell_a = 0;  // lower index
  int cell_b = 0;
  double x_km = 0.0;
  double y_km = 0.0;
};

inline std::vector<Border> grid_borders(const GridSpec& g) {
  std::vector<Border> out;
  for (int r = 0; r < g.side; ++r) {
    for (int c = 0; c < g.side; ++c) {
      const int idx = r * g.side + c;
      if (c + 1 < g.side) {
        out.push_back({idx, idx + 1, (c + 1) * kCellKm, r * kCellKm + kCellKm / 2});
      }
      if (r + 1 < g.side) {
        out.push_back({idx, idx + g.side, c * kCellKm + kCellKm / 2, (r + 1) * kCellKm});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Border& a, const Border& b) {
    return std::tie(a.cell_a, a.cell_b) < std::tie(b.cell_a, b.cell_b);
  });
  return out;
}

// Edge-repeater labels reproducing the published nine-domain example: the
// black path runs R_C, R_E, R_I, R_L and the A|D border carries R_B. Other
// ring counts fall back to plain lexicographic letters.
inline std::vector<std::string> border_labels(std::size_t count, int rings) {
  std::vector<std::string> out;
  if (rings == 2 && count == 12) {
    out = {"C", "B", "A", "E", "D", "F", "G", "H", "I", "J", "K", "L"};
  } else {
    for (std::size_t i = 0; i < count; ++i) out.push_back(letters(i));
  }
  return out;
}

inline void add_domain_adjacency(Topology& t, const GridSpec& g) {
  for (int r = 0; r < g.side; ++r) {
    for (int c = 0; c < g.side; ++c) {
      std::vector<std::string> adj;
      if (r > 0) adj.push_back(g.at(r - 1, c));
      if (c > 0) adj.push_back(g.at(r, c - 1));
      if (c + 1 < g.side) adj.push_back(g.at(r, c + 1));
      if (r + 1 < g.side) adj.push_back(g.at(r + 1, c));
      t.domain_adjacency[g.at(r, c)] = std::move(adj);
    }
  }
}

// User of cell k: endpoints of the published example are U_A (first cell)
// and U_B (last cell); interior cells get index names.
inline std::string user_name(int cell_idx, int cell_count) {
  if (cell_idx == 0) return "U_A";
  if (cell_idx == cell_count - 1) return "U_B";
  return "U_" + std::to_string(cell_idx + 1);
}

}  // namespace detail

// Hierarchical cellular topology: one local controller per domain cell, one
// shared edge repeater per cell border, one user per domain, one central
// controller with classical channels to every local controller. rings=2
// yields the nine-domain example layout (domains A..I, users U_A and U_B).
inline Topology build_hierarchical_cellular(int rings, const EnvParams& channel_env = {},
                                            double channel_km = 100.0) {
  using namespace detail;
  const GridSpec g = make_grid(rings);
  Topology t;
  t.hierarchical = true;
  t.domains = g.names;
  add_domain_adjacency(t, g);

  const int cells = g.side * g.side;
  for (int i = 0; i < cells; ++i) {
    const int r = i / g.side, c = i % g.side;
    Device lc;
    lc.id = "LC_" + g.names[i];
    lc.kind = DeviceKind::LocalController;
    lc.domains = {g.names[i]};
    lc.memories = make_memories("cm", 8, 0);
    lc.x_km = c * kCellKm + kCellKm / 2;
    lc.y_km = r * kCellKm + kCellKm / 2;
    t.add_device(lc);
  }

  Device cc;
  cc.id = "CC";
  cc.kind = DeviceKind::CentralController;
  cc.x_km = g.side * kCellKm / 2;
  cc.y_km = -kCellKm / 2;
  t.add_device(cc);

  auto connect = [&](const std::string& dev, const std::string& lc) {
    QuantumChannel qc;
    qc.a = dev;
    qc.b = lc;
    qc.length_km = channel_km;
    qc.env = channel_env;
    qc.env.length_km = channel_km;
    t.add_qchannel(qc);
    t.add_cchannel({dev, lc, channel_km});
  };

  // Users: one per domain, placed at the cell centre offset.
  for (int i = 0; i < cells; ++i) {
    const int r = i / g.side, c = i % g.side;
    Device u;
    u.id = user_name(i, cells);
    u.kind = DeviceKind::User;
    u.domains = {g.names[i]};
    u.memories = make_memories("um", 1, 1);
    u.x_km = c * kCellKm + kCellKm / 4;
    u.y_km = r * kCellKm + kCellKm / 4;
    t.add_device(u);
    connect(u.id, "LC_" + g.names[i]);
  }
  if (cells == 1) {
    // Single-domain layout keeps both endpoints; all communication is
    // intra-domain.
    Device u;
    u.id = "U_B";
    u.kind = DeviceKind::User;
    u.domains = {g.names[0]};
    u.memories = make_memories("um", 1, 1);
    u.x_km = 3 * kCellKm / 4;
    u.y_km = 3 * kCellKm / 4;
    t.add_device(u);
    connect(u.id, "LC_" + g.names[0]);
  }

  const std::vector<Border> borders = grid_borders(g);
  const std::vector<std::string> labels = border_labels(borders.size(), rings);
  for (std::size_t i = 0; i < borders.size(); ++i) {
    Device er;
    er.id = "R_" + labels[i];
    er.kind = DeviceKind::EdgeRepeater;
    er.domains = {g.names[borders[i].cell_a], g.names[borders[i].cell_b]};
    er.memories = make_memories("rm", 2, 2);
    er.x_km = borders[i].x_km;
    er.y_km = borders[i].y_km;
    t.add_device(er);
    connect(er.id, "LC_" + g.names[borders[i].cell_a]);
    connect(er.id, "LC_" + g.names[borders[i].cell_b]);
  }

  for (int i = 0; i < cells; ++i) {
    t.add_cchannel({"CC", "LC_" + g.names[i], channel_km});
  }
  return t;
}

// Distributed cellular topology: the same cell geography with no
// controllers. Every cell owns four preparation-capable repeaters on its
// border midpoints (N/E/S/W), fully connected inside the cell, with facing
// ports of adjacent cells linked. Users sit at the same positions as in the
// hierarchical builder and attach to their cell's east port.
inline Topology build_distributed_cellular(int rings, const EnvParams& channel_env = {},
                                           double channel_km = 100.0) {
  using namespace detail;
  const GridSpec g = make_grid(rings);
  Topology t;
  t.hierarchical = false;
  t.domains = g.names;
  add_domain_adjacency(t, g);

  const int cells = g.side * g.side;
  auto port = [&](int cell, const char* dir) { return "R_" + g.names[cell] + "_" + dir; };

  auto connect = [&](const std::string& a, const std::string& b) {
    QuantumChannel qc;
    qc.a = a;
    qc.b = b;
    qc.length_km = channel_km;
    qc.env = channel_env;
    qc.env.length_km = channel_km;
    t.add_qchannel(qc);
    t.add_cchannel({a, b, channel_km});
  };

  static const char* kDirs[4] = {"N", "E", "S", "W"};
  for (int i = 0; i < cells; ++i) {
    const int r = i / g.side, c = i % g.side;
    const double cx = c * kCellKm + kCellKm / 2;
    const double cy = r * kCellKm + kCellKm / 2;
    const double off[4][2] = {{0, -kCellKm / 2}, {kCellKm / 2, 0}, {0, kCellKm / 2}, {-kCellKm / 2, 0}};
    for (int d = 0; d < 4; ++d) {
      Device rep;
      rep.id = port(i, kDirs[d]);
      rep.kind = DeviceKind::Repeater;
      rep.domains = {g.names[i]};
      rep.memories = make_memories("rm", 2, 2);
      rep.x_km = cx + off[d][0];
      rep.y_km = cy + off[d][1];
      t.add_device(rep);
    }
    // Full connection inside the cell.
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        connect(port(i, kDirs[a]), port(i, kDirs[b]));
      }
    }
  }

  // Facing ports across each shared border.
  for (int r = 0; r < g.side; ++r) {
    for (int c = 0; c < g.side; ++c) {
      const int idx = r * g.side + c;
      if (c + 1 < g.side) connect(port(idx, "E"), port(idx + 1, "W"));
      if (r + 1 < g.side) connect(port(idx, "S"), port(idx + g.side, "N"));
    }
  }

  for (int i = 0; i < cells; ++i) {
    const int r = i / g.side, c = i % g.side;
    Device u;
    u.id = user_name(i, cells);
    u.kind = DeviceKind::User;
    u.domains = {g.names[i]};
    u.memories = make_memories("um", 1, 1);
    u.x_km = c * kCellKm + kCellKm / 4;
    u.y_km = r * kCellKm + kCellKm / 4;
    t.add_device(u);
    connect(u.id, port(i, "E"));
  }
  if (cells == 1) {
    Device u;
    u.id = "U_B";
    u.kind = DeviceKind::User;
    u.domains = {g.names[0]};
    u.memories = make_memories("um", 1, 1);
    u.x_km = 3 * kCellKm / 4;
    u.y_km = 3 * kCellKm / 4;
    t.add_device(u);
    connect(u.id, port(0, "E"));
  }
  return t;
}

// Linear hierarchical chain: n_domains in a row, one edge repeater per
// border, users at the two ends. A chain with k+1 domains yields a k-repeater
// route; used for fixed-path experiments.
inline Topology build_hierarchical_chain(int n_domains, const EnvParams& channel_env = {},
                                         double channel_km = 100.0) {
  using namespace detail;
  if (n_domains < 1) throw std::invalid_argument("chain builder: n_domains < 1");
  Topology t;
  t.hierarchical = true;
  for (int i = 0; i < n_domains; ++i) t.domains.push_back(letters(static_cast<std::size_t>(i)));
  for (int i = 0; i < n_domains; ++i) {
    std::vector<std::string> adj;
    if (i > 0) adj.push_back(t.domains[static_cast<std::size_t>(i - 1)]);
    if (i + 1 < n_domains) adj.push_back(t.domains[static_cast<std::size_t>(i + 1)]);
    t.domain_adjacency[t.domains[static_cast<std::size_t>(i)]] = std::move(adj);
  }
  auto connect = [&](const std::string& dev, const std::string& lc) {
    QuantumChannel qc;
    qc.a = dev;
    qc.b = lc;
    qc.length_km = channel_km;
    qc.env = channel_env;
    qc.env.length_km = channel_km;
    t.add_qchannel(qc);
    t.add_cchannel({dev, lc, channel_km});
  };
  for (int i = 0; i < n_domains; ++i) {
    Device lc;
    lc.id = "LC_" + t.domains[static_cast<std::size_t>(i)];
    lc.kind = DeviceKind::LocalController;
    lc.domains = {t.domains[static_cast<std::size_t>(i)]};
    lc.memories = make_memories("cm", 8, 0);
    lc.x_km = i * kCellKm + kCellKm / 2;
    t.add_device(lc);
  }
  Device cc;
  cc.id = "CC";
  cc.kind = DeviceKind::CentralController;
  t.add_device(cc);
  for (int i = 0; i < n_domains; ++i) t.add_cchannel({"CC", "LC_" + t.domains[static_cast<std::size_t>(i)], channel_km});

  Device ua;
  ua.id = "U_A";
  ua.kind = DeviceKind::User;
  ua.domains = {t.domains.front()};
  ua.memories = make_memories("um", 1, 1);
  t.add_device(ua);
  connect("U_A", "LC_" + t.domains.front());
  Device ub;
  ub.id = "U_B";
  ub.kind = DeviceKind::User;
  ub.domains = {t.domains.back()};
  ub.memories = make_memories("um", 1, 1);
  ub.x_km = (n_domains - 1) * kCellKm + kCellKm / 2;
  t.add_device(ub);
  connect("U_B", "LC_" + t.domains.back());

  for (int i = 0; i + 1 < n_domains; ++i) {
    Device er;
    er.id = "R_" + letters(static_cast<std::size_t>(i));
    er.kind = DeviceKind::EdgeRepeater;
    er.domains = {t.domains[static_cast<std::size_t>(i)], t.domains[static_cast<std::size_t>(i + 1)]};
    er.memories = make_memories("rm", 2, 2);
    er.x_km = (i + 1) * kCellKm;
    t.add_device(er);
    connect(er.id, "LC_" + t.domains[static_cast<std::size_t>(i)]);
    connect(er.id, "LC_" + t.domains[static_cast<std::size_t>(i + 1)]);
  }
  return t;
}

// Domain shortest-path table: every tied-shortest domain sequence per pair.
struct Dspt {
  std::map<std::pair<std::string, std::string>, std::vector<std::vector<std::string>>> paths;

  const std::vector<std::vector<std::string>>& between(const std::string& a,
                                                       const std::string& b) const {
    static const std::vector<std::vector<std::string>> kEmpty;
    auto it = paths.find({a, b});
    return it == paths.end() ? kEmpty : it->second;
  }
};

// Domain edge-repeater table: edge repeaters on the border of each adjacent
// domain pair (keyed with the pair in both orders).
struct Dert {
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> repeaters;

  const std::vector<std::string>& between(const std::string& a, const std::string& b) const {
    static const std::vector<std::string> kEmpty;
    auto it = repeaters.find({a, b});
    return it == repeaters.end() ? kEmpty : it->second;
  }
};

inline std::pair<Dspt, Dert> build_dspt_dert(const Topology& t, std::size_t max_paths_per_pair = 128) {
  if (!t.hierarchical) throw std::invalid_argument("build_dspt_dert: hierarchical topology required");
  Dspt dspt;
  Dert dert;

  for (const Device& d : t.devices()) {
    if (d.kind != DeviceKind::EdgeRepeater) continue;
    if (d.domains.size() < 2) continue;
    for (std::size_t i = 0; i < d.domains.size(); ++i) {
      for (std::size_t j = 0; j < d.domains.size(); ++j) {
        if (i == j) continue;
        dert.repeaters[{d.domains[i], d.domains[j]}].push_back(d.id);
      }
    }
  }
  for (auto& [key, reps] : dert.repeaters) std::sort(reps.begin(), reps.end());

  // BFS from each domain keeping every shortest predecessor, then enumerate.
  for (const std::string& src : t.domains) {
    std::map<std::string, int> dist;
    std::map<std::string, std::vector<std::string>> preds;
    std::deque<std::string> queue;
    dist[src] = 0;
    queue.push_back(src);
    while (!queue.empty()) {
      std::string cur = queue.front();
      queue.pop_front();
      auto adj = t.domain_adjacency.find(cur);
      if (adj == t.domain_adjacency.end()) continue;
      for (const std::string& nxt : adj->second) {
        auto it = dist.find(nxt);
        if (it == dist.end()) {
          dist[nxt] = dist[cur] + 1;
          preds[nxt].push_back(cur);
          queue.push_back(nxt);
        } else if (it->second == dist[cur] + 1) {
          preds[nxt].push_back(cur);
        }
      }
    }
    for (const std::string& dst : t.domains) {
      if (!dist.count(dst)) continue;  // unreachable pairs stay absent
      if (dst == src) {
        dspt.paths[{src, dst}] = {{}};  // empty sequence
        continue;
      }
      std::vector<std::vector<std::string>> sequences;
      std::vector<std::string> stack{dst};
      // Depth-first expansion over the predecessor DAG.
      struct Frame {
        std::string node;
        std::size_t next = 0;
      };
      std::vector<Frame> frames{{dst, 0}};
      std::vector<std::string> chain{dst};
      while (!frames.empty() && sequences.size() < max_paths_per_pair) {
        Frame& f = frames.back();
        if (f.node == src) {
          sequences.emplace_back(chain.rbegin(), chain.rend());
          frames.pop_back();
          chain.pop_back();
          continue;
        }
        const auto& ps = preds[f.node];
        if (f.next >= ps.size()) {
          frames.pop_back();
          chain.pop_back();
          continue;
        }
        const std::string nxt = ps[f.next++];
        frames.push_back({nxt, 0});
        chain.push_back(nxt);
      }
      std::sort(sequences.begin(), sequences.end());
      dspt.paths[{src, dst}] = std::move(sequences);
    }
  }
  return {dspt, dert};
}

// Maintenance cost in preparator units: local controllers carry preparation
// in the hierarchical architecture, repeaters in the distributed one.
inline double maintenance_cost(const Topology& t) {
  std::size_t n = 0;
  for (const Device& d : t.devices()) {
    if (t.hierarchical) {
      if (d.kind == DeviceKind::LocalController) ++n;
    } else {
      if (d.kind == DeviceKind::Repeater || d.kind == DeviceKind::EdgeRepeater) ++n;
    }
  }
  return static_cast<double>(n);
}

// Control-plane classical data per second: roughly 300 KB per communication.
inline double control_plane_load(double concurrent_qps) {
  if (concurrent_qps < 0.0) throw std::invalid_argument("control_plane_load: qps < 0");
  return 300.0e3 * concurrent_qps;
}

}  // namespace qnet
