#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncmi {

using Rng = std::mt19937_64;
using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kDefaultPayloadLen = 8;

struct PacketId {
  std::size_t index = 0;
  auto operator<=>(const PacketId&) const = default;
};

struct DeviceId {
  std::size_t index = 0;
  auto operator<=>(const DeviceId&) const = default;
};

using PacketSet = std::set<PacketId>;
using DeviceSet = std::set<DeviceId>;

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InstanceError : public Error {
 public:
  enum class Kind { EmptyUniverse, OrphanPacket, PacketOutOfRange, DeviceCount };

  InstanceError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// A scheme broke one of its own guarantees (decode mismatch, bound violated,
// runaway slot loop).  Always a bug, never bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class NonTermination : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

// Per-device Wants/Has partition over the packets still missing somewhere
// after the stage-1 broadcast.
struct Instance {
  std::size_t n_devices = 0;
  std::size_t n_packets = 0;
  std::vector<PacketSet> wants;
  std::vector<PacketSet> has;
  PacketSet common_missing;
  std::vector<Bytes> payloads;
  // original_ids[m] is the stage-1 packet id that dense index m stands for.
  std::vector<std::size_t> original_ids;

  std::size_t payload_len() const {
    return payloads.empty() ? 0 : payloads.front().size();
  }

  std::size_t max_wants() const {
    std::size_t best = 0;
    for (const auto& w : wants) best = std::max(best, w.size());
    return best;
  }

  std::size_t min_wants() const {
    if (wants.empty()) return 0;
    std::size_t best = wants.front().size();
    for (const auto& w : wants) best = std::min(best, w.size());
    return best;
  }

  bool trivial() const { return n_packets == 0; }
};

inline Bytes random_payload(std::size_t len, Rng& rng) {
  std::uniform_int_distribution<int> byte(0, 255);
  Bytes out(len);
  for (auto& b : out) b = static_cast<std::uint8_t>(byte(rng));
  return out;
}

// Builds a validated instance from explicit Wants sets over packets [0, n_packets).
// Payloads are drawn from rng in packet order.
inline Instance make_instance(std::size_t n_devices, const std::vector<PacketSet>& wants_sets,
                              std::size_t n_packets, std::size_t payload_len, Rng& rng) {
  using Kind = InstanceError::Kind;
  if (n_devices == 0) throw InstanceError(Kind::DeviceCount, "instance needs at least one device");
  if (wants_sets.size() != n_devices) {
    throw InstanceError(Kind::DeviceCount, "expected " + std::to_string(n_devices) +
                                               " wants sets, got " +
                                               std::to_string(wants_sets.size()));
  }

  std::vector<std::size_t> wanted_by(n_packets, 0);
  for (std::size_t n = 0; n < n_devices; ++n) {
    for (PacketId p : wants_sets[n]) {
      if (n_packets == 0) {
        throw InstanceError(Kind::EmptyUniverse,
                            "device " + std::to_string(n) + " wants a packet but M=0");
      }
      if (p.index >= n_packets) {
        throw InstanceError(Kind::PacketOutOfRange, "packet " + std::to_string(p.index) +
                                                        " outside [0," +
                                                        std::to_string(n_packets) + ")");
      }
      ++wanted_by[p.index];
    }
  }
  for (std::size_t m = 0; m < n_packets; ++m) {
    if (wanted_by[m] == 0) {
      throw InstanceError(Kind::OrphanPacket,
                          "packet " + std::to_string(m) + " is wanted by no device");
    }
  }

  Instance inst;
  inst.n_devices = n_devices;
  inst.n_packets = n_packets;
  inst.wants = wants_sets;
  inst.has.resize(n_devices);
  for (std::size_t n = 0; n < n_devices; ++n) {
    for (std::size_t m = 0; m < n_packets; ++m) {
      if (!inst.wants[n].contains(PacketId{m})) inst.has[n].insert(PacketId{m});
    }
  }
  for (std::size_t m = 0; m < n_packets; ++m) {
    if (wanted_by[m] == n_devices) inst.common_missing.insert(PacketId{m});
  }
  inst.payloads.reserve(n_packets);
  for (std::size_t m = 0; m < n_packets; ++m) inst.payloads.push_back(random_payload(payload_len, rng));
  inst.original_ids.resize(n_packets);
  for (std::size_t m = 0; m < n_packets; ++m) inst.original_ids[m] = m;
  return inst;
}

// Drops packets every device received, re-indexes the rest densely.
inline Instance derive_from_stage1(const std::vector<std::set<std::size_t>>& received,
                                   std::size_t m_total, std::size_t payload_len, Rng& rng) {
  const std::size_t n_devices = received.size();
  std::vector<std::size_t> kept;
  for (std::size_t m = 0; m < m_total; ++m) {
    for (const auto& row : received) {
      if (!row.contains(m)) {
        kept.push_back(m);
        break;
      }
    }
  }
  std::vector<PacketSet> wants(n_devices);
  for (std::size_t n = 0; n < n_devices; ++n) {
    for (std::size_t dense = 0; dense < kept.size(); ++dense) {
      if (!received[n].contains(kept[dense])) wants[n].insert(PacketId{dense});
    }
  }
  Instance inst = make_instance(n_devices, wants, kept.size(), payload_len, rng);
  inst.original_ids = std::move(kept);
  return inst;
}

enum class Link { Cellular, Local };

struct TransmissionRecord {
  std::size_t slot = 0;
  Link link = Link::Cellular;
  std::optional<DeviceId> sender;  // nullopt is the source
  PacketSet constituents;
  // Empty for uncoded (XOR or single packet) transmissions.
  std::map<PacketId, std::uint8_t> coefficients;
  DeviceSet innovative_for;
  // Instantly-decoded packets, filled by the uncoded/IDNC schedulers.
  std::map<DeviceId, PacketId> decoded;
};

struct RunResult {
  std::size_t completion_time = 0;
  std::vector<TransmissionRecord> trace;
  std::vector<std::size_t> per_device_decode_slot;
};

// Slot cap shared by every scheduler; exceeding it is a scheduler bug.
inline std::size_t slot_guard(const Instance& inst) { return 4 * inst.n_packets + inst.n_devices; }

inline void finalize(RunResult& result) {
  result.completion_time = 0;
  for (std::size_t s : result.per_device_decode_slot) {
    result.completion_time = std::max(result.completion_time, s);
  }
}

}  // namespace ncmi
