#pragma once

#include <span>
#include <vector>

#include "ncmi/core.hpp"
#include "ncmi/gf256.hpp"

namespace ncmi {

using CoeffVector = std::vector<FieldElement>;

// A linear combination of the instance packets together with its payload.
struct CodedPacket {
  CoeffVector coeffs;
  Bytes payload;

  bool is_zero() const {
    for (auto c : coeffs) {
      if (!c.is_zero()) return false;
    }
    return true;
  }
};

class NoInnovativeCombination : public Error {
 public:
  using Error::Error;
};

class RetryExhausted : public Error {
 public:
  using Error::Error;
};

class Undecodable : public Error {
 public:
  using Error::Error;
};

inline constexpr int kDrawRetryCap = 100;

// target += factor * source, applied to coefficients and payload in lockstep.
inline void axpy(CodedPacket& target, FieldElement factor, const CodedPacket& source) {
  if (factor.is_zero()) return;
  for (std::size_t i = 0; i < target.coeffs.size(); ++i) target.coeffs[i] += factor * source.coeffs[i];
  for (std::size_t i = 0; i < target.payload.size(); ++i) {
    target.payload[i] = (FieldElement{target.payload[i]} + factor * FieldElement{source.payload[i]}).value;
  }
}

inline void scale(CodedPacket& target, FieldElement factor) {
  for (auto& c : target.coeffs) c *= factor;
  for (auto& b : target.payload) b = (FieldElement{b} * factor).value;
}

inline CodedPacket unit_packet(std::size_t n_packets, PacketId p, const Bytes& payload) {
  CodedPacket pkt{CoeffVector(n_packets, kZero), payload};
  pkt.coeffs[p.index] = kOne;
  return pkt;
}

// A device's knowledge: reduced row echelon basis of the coefficient vectors
// it has received.  Pivots are 1 and pivot columns are zero in every other row,
// so two spaces are equal iff their bases are equal.
class KnowledgeSpace {
 public:
  struct InsertResult {
    bool inserted = false;
    std::size_t new_rank = 0;
  };

  KnowledgeSpace() = default;
  KnowledgeSpace(std::size_t n_packets, std::size_t payload_len)
      : n_packets_(n_packets), payload_len_(payload_len), pivot_row_(n_packets, kNoPivot) {}

  std::size_t n_packets() const { return n_packets_; }
  std::size_t payload_len() const { return payload_len_; }
  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rank() == n_packets_; }
  std::span<const CodedPacket> basis() const { return rows_; }

  // Residual of pkt after eliminating every pivot column of the basis.
  CodedPacket reduce(CodedPacket pkt) const {
    for (std::size_t col = 0; col < n_packets_; ++col) {
      const std::size_t r = pivot_row_[col];
      if (r == kNoPivot || pkt.coeffs[col].is_zero()) continue;
      axpy(pkt, pkt.coeffs[col], rows_[r]);
    }
    return pkt;
  }

  bool contains(const CoeffVector& coeffs) const {
    return reduce(CodedPacket{coeffs, Bytes(payload_len_, 0)}).is_zero();
  }

  bool is_innovative(const CodedPacket& pkt) const { return !contains(pkt.coeffs); }

  bool contains_unit(PacketId p) const {
    CoeffVector e(n_packets_, kZero);
    e[p.index] = kOne;
    return contains(e);
  }

  bool contains_space(const KnowledgeSpace& other) const {
    for (const auto& row : other.rows_) {
      if (!contains(row.coeffs)) return false;
    }
    return true;
  }

  bool same_span(const KnowledgeSpace& other) const {
    return rank() == other.rank() && contains_space(other);
  }

  InsertResult insert_if_innovative(const CodedPacket& pkt) {
    CodedPacket residual = reduce(pkt);
    std::size_t lead = 0;
    while (lead < n_packets_ && residual.coeffs[lead].is_zero()) ++lead;
    if (lead == n_packets_) return {false, rank()};

    scale(residual, inverse(residual.coeffs[lead]));
    for (auto& row : rows_) axpy(row, row.coeffs[lead], residual);
    pivot_row_[lead] = rows_.size();
    rows_.push_back(std::move(residual));
    return {true, rank()};
  }

  // Original payloads indexed by packet; requires full rank.
  std::vector<Bytes> decode_all() const {
    if (!full()) {
      throw Undecodable("rank " + std::to_string(rank()) + " < M=" + std::to_string(n_packets_));
    }
    std::vector<Bytes> out(n_packets_);
    for (std::size_t col = 0; col < n_packets_; ++col) out[col] = rows_[pivot_row_[col]].payload;
    return out;
  }

 private:
  static constexpr std::size_t kNoPivot = static_cast<std::size_t>(-1);

  std::size_t n_packets_ = 0;
  std::size_t payload_len_ = 0;
  std::vector<CodedPacket> rows_;
  std::vector<std::size_t> pivot_row_;
};

inline KnowledgeSpace seed_with_units(KnowledgeSpace space, const PacketSet& packets,
                                      std::span<const Bytes> payloads) {
  for (PacketId p : packets) {
    space.insert_if_innovative(unit_packet(space.n_packets(), p, payloads[p.index]));
  }
  return space;
}

inline FieldElement random_element(Rng& rng) {
  std::uniform_int_distribution<int> dist(0, 255);
  return FieldElement{static_cast<std::uint8_t>(dist(rng))};
}

namespace detail {

// Random combination of generators that is innovative for every receiver.
// Preconditions are checked by the callers.
inline CodedPacket draw_combination(std::span<const CodedPacket> generators, std::size_t n_packets,
                                    std::size_t payload_len, Rng& rng,
                                    std::span<const KnowledgeSpace* const> receivers) {
  for (int attempt = 0; attempt < kDrawRetryCap; ++attempt) {
    CodedPacket pkt{CoeffVector(n_packets, kZero), Bytes(payload_len, 0)};
    for (const auto& g : generators) axpy(pkt, random_element(rng), g);
    if (pkt.is_zero()) continue;
    bool ok = true;
    for (const KnowledgeSpace* r : receivers) {
      if (!r->is_innovative(pkt)) {
        ok = false;
        break;
      }
    }
    if (ok) return pkt;
  }
  throw RetryExhausted("no simultaneously innovative combination after " +
                       std::to_string(kDrawRetryCap) + " draws");
}

}  // namespace detail

// Random combination of the packets in support (coefficients zero elsewhere),
// innovative for every listed receiver.
inline CodedPacket draw_coded(const PacketSet& support, std::span<const Bytes> payloads, Rng& rng,
                              std::span<const KnowledgeSpace* const> must_be_innovative_for) {
  if (support.empty()) throw NoInnovativeCombination("empty support");
  const std::size_t n_packets = payloads.size();
  const std::size_t payload_len = payloads.empty() ? 0 : payloads.front().size();
  for (const KnowledgeSpace* r : must_be_innovative_for) {
    bool lacks_some = false;
    for (PacketId p : support) {
      if (!r->contains_unit(p)) {
        lacks_some = true;
        break;
      }
    }
    if (!lacks_some) throw NoInnovativeCombination("receiver already spans the support");
  }
  std::vector<CodedPacket> gens;
  gens.reserve(support.size());
  for (PacketId p : support) gens.push_back(unit_packet(n_packets, p, payloads[p.index]));
  return detail::draw_combination(gens, n_packets, payload_len, rng, must_be_innovative_for);
}

// Random combination of a transmitter's whole knowledge span.
inline CodedPacket draw_from_space(const KnowledgeSpace& transmitter, Rng& rng,
                                   std::span<const KnowledgeSpace* const> must_be_innovative_for) {
  if (transmitter.rank() == 0) throw NoInnovativeCombination("transmitter knows nothing");
  for (const KnowledgeSpace* r : must_be_innovative_for) {
    if (r->contains_space(transmitter)) {
      throw NoInnovativeCombination("receiver already spans the transmitter");
    }
  }
  return detail::draw_combination(transmitter.basis(), transmitter.n_packets(),
                                  transmitter.payload_len(), rng, must_be_innovative_for);
}

}  // namespace ncmi
