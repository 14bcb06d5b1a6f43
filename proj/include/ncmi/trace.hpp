#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include "ncmi/core.hpp"

namespace ncmi {

namespace detail {

inline std::string device_list(const DeviceSet& ds) {
  std::string out;
  for (DeviceId d : ds) out += (out.empty() ? "" : ",") + std::to_string(d.index);
  return "{" + out + "}";
}

inline std::string describe_transmission(const TransmissionRecord& rec, std::size_t n_packets) {
  std::ostringstream out;
  out << (rec.link == Link::Cellular ? "CELL " : "LOCAL ");
  out << (rec.sender ? "dev" + std::to_string(rec.sender->index) : std::string("src"));
  if (!rec.coefficients.empty()) {
    out << " coeffs[";
    for (std::size_t m = 0; m < n_packets; ++m) {
      const auto it = rec.coefficients.find(PacketId{m});
      char hex[4];
      std::snprintf(hex, sizeof hex, "%02x", it == rec.coefficients.end() ? 0u : unsigned{it->second});
      out << (m == 0 ? "" : " ") << hex;
    }
    out << "] innovative_for=" << device_list(rec.innovative_for);
  } else {
    std::string parts;
    for (PacketId p : rec.constituents) parts += (parts.empty() ? "p" : "+p") + std::to_string(p.index);
    out << ' ' << parts << " decoded={";
    bool first = true;
    for (const auto& [d, p] : rec.decoded) {
      out << (first ? "" : ",") << d.index << ":p" << p.index;
      first = false;
    }
    out << '}';
  }
  return out.str();
}

}  // namespace detail

// One line per slot, cellular before local, then "T=<slots>".
inline std::string format_trace(const RunResult& result, std::size_t n_packets) {
  std::ostringstream out;
  std::size_t i = 0;
  for (std::size_t slot = 1; slot <= result.completion_time || i < result.trace.size(); ++slot) {
    out << "slot " << slot << ':';
    while (i < result.trace.size() && result.trace[i].slot == slot) {
      out << "  " << detail::describe_transmission(result.trace[i], n_packets);
      ++i;
    }
    out << '\n';
  }
  out << "T=" << result.completion_time << '\n';
  return out.str();
}

}  // namespace ncmi
