#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ncmi/core.hpp"
#include "ncmi/knowledge_space.hpp"

namespace ncmi {

// Per-run state of the batch-coded scheme.  Also drives the single-interface
// coded baselines.
struct BatchState {
  std::vector<KnowledgeSpace> spaces;
  std::vector<std::size_t> innovative_from_local;
  std::vector<std::size_t> innovative_total;
  std::vector<std::size_t> decode_slot;
  std::size_t slot = 0;

  bool complete() const {
    for (const auto& s : spaces) {
      if (!s.full()) return false;
    }
    return true;
  }
};

inline BatchState make_batch_state(const Instance& inst) {
  BatchState st;
  st.spaces.reserve(inst.n_devices);
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    st.spaces.push_back(seed_with_units(KnowledgeSpace(inst.n_packets, inst.payload_len()),
                                        inst.has[n], inst.payloads));
  }
  st.innovative_from_local.assign(inst.n_devices, 0);
  st.innovative_total.assign(inst.n_devices, 0);
  st.decode_slot.assign(inst.n_devices, 0);
  return st;
}

// Local devices stop once every device has either all of its local-recoverable
// packets from the local link or everything it wants.
inline bool local_link_exhausted(const BatchState& st, const Instance& inst) {
  const std::size_t common = inst.common_missing.size();
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    const std::size_t want = inst.wants[n].size();
    if (st.innovative_from_local[n] < want - common && st.innovative_total[n] < want) return false;
  }
  return true;
}

// Highest-rank devices, one representative (the lowest index) per distinct span.
inline std::vector<DeviceId> local_candidates(const BatchState& st, const Instance& inst) {
  std::size_t top = 0;
  for (const auto& s : st.spaces) top = std::max(top, s.rank());

  std::vector<DeviceId> candidates;
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    if (st.spaces[n].rank() != top) continue;
    bool duplicate = false;
    for (DeviceId c : candidates) {
      if (st.spaces[c.index].same_span(st.spaces[n])) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) candidates.push_back(DeviceId{n});
  }
  return candidates;
}

// Ties among distinct spans are broken uniformly from rng.  nullopt when the
// local link can no longer help anyone.
inline std::optional<DeviceId> select_local_transmitter(const BatchState& st, const Instance& inst,
                                                        Rng& rng) {
  if (inst.n_devices < 2 || local_link_exhausted(st, inst)) return std::nullopt;

  const std::vector<DeviceId> candidates = local_candidates(st, inst);
  DeviceId chosen = candidates.front();
  if (candidates.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    chosen = candidates[pick(rng)];
  }
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    if (!st.spaces[n].contains_space(st.spaces[chosen.index])) return chosen;
  }
  return std::nullopt;
}

namespace detail {

inline TransmissionRecord describe(std::size_t slot, Link link, std::optional<DeviceId> sender,
                                   const CodedPacket& pkt) {
  TransmissionRecord rec;
  rec.slot = slot;
  rec.link = link;
  rec.sender = sender;
  for (std::size_t m = 0; m < pkt.coeffs.size(); ++m) {
    if (pkt.coeffs[m].is_zero()) continue;
    rec.constituents.insert(PacketId{m});
    rec.coefficients[PacketId{m}] = pkt.coeffs[m].value;
  }
  return rec;
}

inline void receive(BatchState& st, std::size_t n, const CodedPacket& pkt, bool local,
                    TransmissionRecord& rec) {
  if (!st.spaces[n].insert_if_innovative(pkt).inserted) return;
  rec.innovative_for.insert(DeviceId{n});
  ++st.innovative_total[n];
  if (local) ++st.innovative_from_local[n];
  if (st.spaces[n].full()) st.decode_slot[n] = st.slot;
}

// Source broadcast of a random combination of every missing packet, innovative
// for each device that is not yet complete.
inline TransmissionRecord cellular_coded(BatchState& st, const Instance& inst, Rng& rng) {
  std::vector<const KnowledgeSpace*> receivers;
  for (const auto& s : st.spaces) {
    if (!s.full()) receivers.push_back(&s);
  }
  PacketSet support;
  for (std::size_t m = 0; m < inst.n_packets; ++m) support.insert(PacketId{m});
  const CodedPacket pkt = draw_coded(support, inst.payloads, rng, receivers);
  TransmissionRecord rec = describe(st.slot, Link::Cellular, std::nullopt, pkt);
  for (std::size_t n = 0; n < inst.n_devices; ++n) receive(st, n, pkt, false, rec);
  return rec;
}

// Broadcast by tx of a combination drawn over `span` (tx's knowledge at the
// start of the slot), innovative for every other device that can still use it.
inline std::optional<TransmissionRecord> local_coded(BatchState& st, const Instance& inst,
                                                     Rng& rng, DeviceId tx,
                                                     const KnowledgeSpace& span) {
  std::vector<const KnowledgeSpace*> receivers;
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    if (n != tx.index && !st.spaces[n].contains_space(span)) receivers.push_back(&st.spaces[n]);
  }
  if (receivers.empty()) return std::nullopt;
  const CodedPacket pkt = draw_from_space(span, rng, receivers);
  TransmissionRecord rec = describe(st.slot, Link::Local, tx, pkt);
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    if (n != tx.index) receive(st, n, pkt, true, rec);
  }
  return rec;
}

inline void verify_decoding(const BatchState& st, const Instance& inst, const char* scheme) {
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    if (st.spaces[n].decode_all() != inst.payloads) {
      throw InvariantViolation(std::string(scheme) + ": device " + std::to_string(n) +
                               " decoded payloads differ from the originals");
    }
  }
}

inline void check_guard(const BatchState& st, const Instance& inst, const char* scheme) {
  if (st.slot > slot_guard(inst)) {
    throw NonTermination(std::string(scheme) + ": exceeded " + std::to_string(slot_guard(inst)) +
                         " slots");
  }
}

}  // namespace detail

struct BatchSlot {
  TransmissionRecord cellular;
  std::optional<TransmissionRecord> local;
};

// One slot: source and the selected local device transmit simultaneously.
// RNG order: transmitter tie-break, cellular coefficients, local coefficients.
inline BatchSlot step(BatchState& st, const Instance& inst, Rng& rng) {
  ++st.slot;
  const std::optional<DeviceId> tx = select_local_transmitter(st, inst, rng);
  std::optional<KnowledgeSpace> span;
  if (tx) span = st.spaces[tx->index];

  BatchSlot out{detail::cellular_coded(st, inst, rng), std::nullopt};
  if (tx) out.local = detail::local_coded(st, inst, rng, *tx, *span);
  return out;
}

inline RunResult run_ncmi_b(const Instance& inst, Rng& rng) {
  BatchState st = make_batch_state(inst);
  RunResult result;
  while (!st.complete()) {
    BatchSlot s = step(st, inst, rng);
    detail::check_guard(st, inst, "ncmi-b");
    result.trace.push_back(std::move(s.cellular));
    if (s.local) result.trace.push_back(std::move(*s.local));
  }
  detail::verify_decoding(st, inst, "ncmi-b");
  result.per_device_decode_slot = st.decode_slot;
  finalize(result);
  return result;
}

}  // namespace ncmi
