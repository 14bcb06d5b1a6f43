#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncmi/core.hpp"

namespace ncmi {

// One entry per device: the packet of this vector that device wants, if any.
// The sum of the distinct entries is instantly decodable by every device.
struct WantVector {
  std::vector<std::optional<PacketId>> slots;

  PacketSet constituents() const {
    PacketSet out;
    for (const auto& s : slots) {
      if (s) out.insert(*s);
    }
    return out;
  }

  bool all_same() const {
    if (slots.empty() || !slots.front()) return false;
    for (const auto& s : slots) {
      if (s != slots.front()) return false;
    }
    return true;
  }

  bool disjoint_support(const WantVector& other) const {
    for (std::size_t n = 0; n < slots.size(); ++n) {
      if (slots[n] && other.slots[n]) return false;
    }
    return true;
  }

  void absorb(const WantVector& other) {
    for (std::size_t n = 0; n < slots.size(); ++n) {
      if (other.slots[n]) slots[n] = other.slots[n];
    }
  }

  bool operator==(const WantVector&) const = default;
};

struct Grouping {
  std::vector<WantVector> m_c;
  std::vector<WantVector> m_l;
  std::vector<WantVector> m_d;
  DeviceId n_star;
};

// First-fit greedy: packets in ascending order, each merged into the earliest
// vector whose occupied device slots are disjoint from its own.
inline std::vector<WantVector> build_vectors(const Instance& inst) {
  std::vector<WantVector> vectors;
  for (std::size_t m = 0; m < inst.n_packets; ++m) {
    const PacketId p{m};
    WantVector fresh{std::vector<std::optional<PacketId>>(inst.n_devices)};
    for (std::size_t n = 0; n < inst.n_devices; ++n) {
      if (inst.wants[n].contains(p)) fresh.slots[n] = p;
    }
    bool merged = false;
    for (auto& v : vectors) {
      if (v.disjoint_support(fresh)) {
        v.absorb(fresh);
        merged = true;
        break;
      }
    }
    if (!merged) vectors.push_back(std::move(fresh));
  }
  return vectors;
}

// n_star is the device with the smallest original Wants set, lowest index on ties.
inline Grouping classify(const std::vector<WantVector>& vectors, const Instance& inst) {
  Grouping g;
  for (std::size_t n = 1; n < inst.n_devices; ++n) {
    if (inst.wants[n].size() < inst.wants[g.n_star.index].size()) g.n_star = DeviceId{n};
  }
  for (const auto& v : vectors) {
    if (v.all_same()) {
      g.m_c.push_back(v);
    } else if (!v.slots[g.n_star.index]) {
      g.m_d.push_back(v);
    } else {
      g.m_l.push_back(v);
    }
  }
  return g;
}

inline Grouping group(const Instance& inst) { return classify(build_vectors(inst), inst); }

inline std::string format_vector(const WantVector& v) {
  std::string out;
  for (PacketId p : v.constituents()) {
    if (!out.empty()) out += '+';
    out += 'p' + std::to_string(p.index);
  }
  return out;
}

// MC: p0 p1 / ML: p2+p3 | p4+p5+p6 / MD: p7+p8 | p9 / NSTAR: 0
inline std::string format_grouping(const Grouping& g) {
  std::ostringstream out;
  out << "MC:";
  for (const auto& v : g.m_c) out << ' ' << format_vector(v);
  auto list = [&out](const char* tag, const std::vector<WantVector>& vs) {
    out << '\n' << tag << ':';
    for (std::size_t i = 0; i < vs.size(); ++i) out << (i == 0 ? " " : " | ") << format_vector(vs[i]);
  };
  list("ML", g.m_l);
  list("MD", g.m_d);
  out << "\nNSTAR: " << g.n_star.index << '\n';
  return out.str();
}

}  // namespace ncmi
