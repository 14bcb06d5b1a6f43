#pragma once

#include <optional>
#include <vector>

#include "ncmi/core.hpp"
#include "ncmi/knowledge_space.hpp"
#include "ncmi/ncmi_b.hpp"

namespace ncmi {

namespace detail {

struct UncodedState {
  std::vector<PacketSet> decoded;
  std::vector<std::size_t> decode_slot;
  std::size_t slot = 0;

  std::size_t wanting(PacketId p) const {
    std::size_t c = 0;
    for (const auto& d : decoded) c += d.contains(p) ? 0 : 1;
    return c;
  }
  std::optional<DeviceId> holder(PacketId p) const {
    for (std::size_t n = 0; n < decoded.size(); ++n) {
      if (decoded[n].contains(p)) return DeviceId{n};
    }
    return std::nullopt;
  }
};

inline TransmissionRecord broadcast_uncoded(UncodedState& st, const Instance& inst, Link link,
                                            std::optional<DeviceId> sender, PacketId p) {
  TransmissionRecord rec;
  rec.slot = st.slot;
  rec.link = link;
  rec.sender = sender;
  rec.constituents = {p};
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    if (!st.decoded[n].insert(p).second) continue;
    rec.innovative_for.insert(DeviceId{n});
    rec.decoded[DeviceId{n}] = p;
    if (st.decoded[n].size() == inst.n_packets) st.decode_slot[n] = st.slot;
  }
  return rec;
}

}  // namespace detail

// Cooperation over both links without coding.  The source sends the packet no
// device holds, else the most-wanted one; a local holder sends the most-wanted
// locally available packet other than the source's pick.  Ties by index.
inline RunResult run_no_nc(const Instance& inst, Rng& /*rng*/) {
  detail::UncodedState st{inst.has, std::vector<std::size_t>(inst.n_devices, 0), 0};
  RunResult result;
  auto done = [&] {
    for (const auto& d : st.decoded) {
      if (d.size() != inst.n_packets) return false;
    }
    return true;
  };
  while (!done()) {
    ++st.slot;
    if (st.slot > slot_guard(inst)) throw NonTermination("no-nc: slot guard exceeded");

    std::optional<PacketId> cell;
    bool cell_unheld = false;
    std::size_t cell_count = 0;
    for (std::size_t m = 0; m < inst.n_packets; ++m) {
      const PacketId p{m};
      const std::size_t count = st.wanting(p);
      if (count == 0) continue;
      const bool unheld = !st.holder(p).has_value();
      if (!cell || (unheld && !cell_unheld) || (unheld == cell_unheld && count > cell_count)) {
        cell = p;
        cell_unheld = unheld;
        cell_count = count;
      }
    }

    std::optional<PacketId> local;
    std::size_t local_count = 0;
    for (std::size_t m = 0; m < inst.n_packets; ++m) {
      const PacketId p{m};
      if (p == cell || !st.holder(p)) continue;
      const std::size_t count = st.wanting(p);
      if (count > local_count) {
        local = p;
        local_count = count;
      }
    }

    const std::optional<DeviceId> local_sender = local ? st.holder(*local) : std::nullopt;
    result.trace.push_back(detail::broadcast_uncoded(st, inst, Link::Cellular, std::nullopt, *cell));
    if (local) {
      result.trace.push_back(detail::broadcast_uncoded(st, inst, Link::Local, local_sender, *local));
    }
  }
  result.per_device_decode_slot = st.decode_slot;
  finalize(result);
  return result;
}

// Single interface: one coded source broadcast per slot.
inline RunResult run_cellular_nc(const Instance& inst, Rng& rng) {
  BatchState st = make_batch_state(inst);
  RunResult result;
  while (!st.complete()) {
    ++st.slot;
    detail::check_guard(st, inst, "si-cellular");
    result.trace.push_back(detail::cellular_coded(st, inst, rng));
  }
  detail::verify_decoding(st, inst, "si-cellular");
  result.per_device_decode_slot = st.decode_slot;
  finalize(result);
  return result;
}

// Single interface, mostly local: the source first sends M_c uncoded, one
// packet per slot, then only local coded broadcasts under the batch rule.
inline RunResult run_local_nc(const Instance& inst, Rng& rng) {
  BatchState st = make_batch_state(inst);
  RunResult result;
  for (PacketId p : inst.common_missing) {
    ++st.slot;
    TransmissionRecord rec;
    rec.slot = st.slot;
    rec.link = Link::Cellular;
    rec.constituents = {p};
    const CodedPacket pkt = unit_packet(inst.n_packets, p, inst.payloads[p.index]);
    for (std::size_t n = 0; n < inst.n_devices; ++n) detail::receive(st, n, pkt, false, rec);
    result.trace.push_back(std::move(rec));
  }
  while (!st.complete()) {
    ++st.slot;
    detail::check_guard(st, inst, "si-local");
    const std::optional<DeviceId> tx = select_local_transmitter(st, inst, rng);
    if (!tx) throw InvariantViolation("si-local: no useful local transmitter before completion");
    const KnowledgeSpace span = st.spaces[tx->index];
    auto rec = detail::local_coded(st, inst, rng, *tx, span);
    if (!rec) throw InvariantViolation("si-local: selected transmitter helps nobody");
    result.trace.push_back(std::move(*rec));
  }
  detail::verify_decoding(st, inst, "si-local");
  result.per_device_decode_slot = st.decode_slot;
  finalize(result);
  return result;
}

}  // namespace ncmi
