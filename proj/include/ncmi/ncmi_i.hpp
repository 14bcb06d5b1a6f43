#pragma once

#include <optional>
#include <vector>

#include "ncmi/bounds.hpp"
#include "ncmi/core.hpp"
#include "ncmi/grouping.hpp"

namespace ncmi {

class NotInstantlyDecodable : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

enum class VectorClass { Common, Local, Direct };

struct PoolEntry {
  WantVector vector;
  VectorClass cls = VectorClass::Common;
  bool claimed = false;
};

// Second half of a two-part local delivery of an M_l vector.
struct InProgress {
  std::size_t pool_index = 0;
  PacketId missing;
  DeviceId first_sender;
};

struct IdncState {
  Grouping grouping;
  std::vector<PoolEntry> pool;  // M_c, then M_l, then M_d, each in grouping order
  std::vector<PacketSet> decoded;
  std::vector<std::vector<std::optional<Bytes>>> known;  // device x packet payload
  std::optional<InProgress> in_progress;
  std::vector<std::size_t> decode_slot;
  std::size_t slot = 0;

  bool complete(std::size_t n_packets) const {
    for (const auto& d : decoded) {
      if (d.size() != n_packets) return false;
    }
    return true;
  }
};

// An instantly decodable packet sent on one link: the XOR of its constituents.
struct IdncTransmission {
  Link link = Link::Cellular;
  std::optional<DeviceId> sender;
  PacketSet constituents;
};

inline IdncState make_idnc_state(const Instance& inst, Grouping grouping) {
  IdncState st;
  st.grouping = std::move(grouping);
  for (const auto& v : st.grouping.m_c) st.pool.push_back({v, VectorClass::Common, false});
  for (const auto& v : st.grouping.m_l) st.pool.push_back({v, VectorClass::Local, false});
  for (const auto& v : st.grouping.m_d) st.pool.push_back({v, VectorClass::Direct, false});
  st.decoded = inst.has;
  st.known.assign(inst.n_devices, std::vector<std::optional<Bytes>>(inst.n_packets));
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    for (PacketId p : inst.has[n]) st.known[n][p.index] = inst.payloads[p.index];
  }
  st.decode_slot.assign(inst.n_devices, 0);
  return st;
}

inline IdncState make_idnc_state(const Instance& inst) { return make_idnc_state(inst, group(inst)); }

// Earliest unclaimed vector in M_c, then M_l, then M_d.
inline std::optional<IdncTransmission> next_cellular(IdncState& st) {
  for (auto& e : st.pool) {
    if (e.claimed) continue;
    e.claimed = true;
    return IdncTransmission{Link::Cellular, std::nullopt, e.vector.constituents()};
  }
  return std::nullopt;
}

namespace detail {

inline bool holds_all(const PacketSet& decoded, const PacketSet& packets) {
  for (PacketId p : packets) {
    if (!decoded.contains(p)) return false;
  }
  return true;
}

inline std::optional<std::size_t> claim_from_back(IdncState& st, VectorClass cls) {
  for (std::size_t i = st.pool.size(); i-- > 0;) {
    if (st.pool[i].cls == cls && !st.pool[i].claimed) {
      st.pool[i].claimed = true;
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Local link priority: finish an in-progress M_l vector, then M_d from the back
// (sent whole by n_star), then M_l from the back (whole when some device holds
// every constituent, otherwise a random device's partial combination).
inline std::optional<IdncTransmission> next_local(IdncState& st, const Instance& inst, Rng& rng) {
  if (st.in_progress) {
    const InProgress ip = *st.in_progress;
    st.in_progress.reset();
    const WantVector& v = st.pool[ip.pool_index].vector;
    bool still_wanted = false;
    for (std::size_t n = 0; n < inst.n_devices; ++n) {
      if (v.slots[n] == ip.missing && !st.decoded[n].contains(ip.missing)) still_wanted = true;
    }
    if (still_wanted) {
      for (std::size_t n = 0; n < inst.n_devices; ++n) {
        if (st.decoded[n].contains(ip.missing)) {
          return IdncTransmission{Link::Local, DeviceId{n}, PacketSet{ip.missing}};
        }
      }
      throw InvariantViolation("ncmi-i: no local holder of p" + std::to_string(ip.missing.index));
    }
  }

  if (auto idx = detail::claim_from_back(st, VectorClass::Direct)) {
    return IdncTransmission{Link::Local, st.grouping.n_star, st.pool[*idx].vector.constituents()};
  }

  if (auto idx = detail::claim_from_back(st, VectorClass::Local)) {
    const PacketSet all = st.pool[*idx].vector.constituents();
    for (std::size_t n = 0; n < inst.n_devices; ++n) {
      if (detail::holds_all(st.decoded[n], all)) {
        return IdncTransmission{Link::Local, DeviceId{n}, all};
      }
    }
    std::vector<DeviceId> partial_holders;
    for (std::size_t n = 0; n < inst.n_devices; ++n) {
      for (PacketId p : all) {
        if (st.decoded[n].contains(p)) {
          partial_holders.push_back(DeviceId{n});
          break;
        }
      }
    }
    if (partial_holders.empty()) {
      throw InvariantViolation("ncmi-i: no local device holds any constituent of " +
                               format_vector(st.pool[*idx].vector));
    }
    std::uniform_int_distribution<std::size_t> pick(0, partial_holders.size() - 1);
    const DeviceId sender = partial_holders[pick(rng)];
    PacketSet held;
    std::optional<PacketId> missing;
    for (PacketId p : all) {
      if (st.decoded[sender.index].contains(p)) {
        held.insert(p);
      } else {
        missing = p;
      }
    }
    st.in_progress = InProgress{*idx, *missing, sender};
    return IdncTransmission{Link::Local, sender, held};
  }
  return std::nullopt;
}

// Every device missing exactly one constituent decodes it on reception.
inline TransmissionRecord deliver(IdncState& st, const Instance& inst, const IdncTransmission& tx) {
  TransmissionRecord rec;
  rec.slot = st.slot;
  rec.link = tx.link;
  rec.sender = tx.sender;
  rec.constituents = tx.constituents;

  Bytes coded(inst.payload_len(), 0);
  for (PacketId p : tx.constituents) {
    const Bytes& src = tx.sender ? *st.known[tx.sender->index][p.index] : inst.payloads[p.index];
    for (std::size_t i = 0; i < coded.size(); ++i) coded[i] ^= src[i];
  }

  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    if (tx.sender && tx.sender->index == n) continue;
    std::optional<PacketId> unknown;
    std::size_t n_unknown = 0;
    for (PacketId p : tx.constituents) {
      if (!st.decoded[n].contains(p)) {
        unknown = p;
        ++n_unknown;
      }
    }
    if (n_unknown == 0) continue;
    if (n_unknown > 1) {
      throw NotInstantlyDecodable("ncmi-i: device " + std::to_string(n) + " misses " +
                                  std::to_string(n_unknown) + " constituents in slot " +
                                  std::to_string(st.slot));
    }
    Bytes payload = coded;
    for (PacketId p : tx.constituents) {
      if (p == *unknown) continue;
      const Bytes& k = *st.known[n][p.index];
      for (std::size_t i = 0; i < payload.size(); ++i) payload[i] ^= k[i];
    }
    st.known[n][unknown->index] = std::move(payload);
    st.decoded[n].insert(*unknown);
    rec.innovative_for.insert(DeviceId{n});
    rec.decoded[DeviceId{n}] = *unknown;
    if (st.decoded[n].size() == inst.n_packets) st.decode_slot[n] = st.slot;
  }
  return rec;
}

inline RunResult run_ncmi_i(const Instance& inst, Rng& rng) {
  IdncState st = make_idnc_state(inst);
  RunResult result;
  while (!st.complete(inst.n_packets)) {
    ++st.slot;
    if (st.slot > slot_guard(inst)) throw NonTermination("ncmi-i: slot guard exceeded");
    const auto cell = next_cellular(st);
    const auto local = next_local(st, inst, rng);
    if (!cell && !local) throw NonTermination("ncmi-i: pool exhausted before completion");
    if (cell) result.trace.push_back(deliver(st, inst, *cell));
    if (local) result.trace.push_back(deliver(st, inst, *local));
  }
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    for (std::size_t m = 0; m < inst.n_packets; ++m) {
      if (*st.known[n][m] != inst.payloads[m]) {
        throw InvariantViolation("ncmi-i: device " + std::to_string(n) + " decoded p" +
                                 std::to_string(m) + " incorrectly");
      }
    }
  }
  result.per_device_decode_slot = st.decode_slot;
  finalize(result);

  const auto lo = lower_bound(inst);
  const auto hi = upper_bound_i(inst, st.grouping);
  if (result.completion_time < lo || result.completion_time > hi) {
    throw InvariantViolation("ncmi-i: T=" + std::to_string(result.completion_time) +
                             " outside [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
  }
  return result;
}

}  // namespace ncmi
