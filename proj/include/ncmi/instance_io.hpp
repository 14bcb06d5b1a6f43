#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "ncmi/core.hpp"

namespace ncmi {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::size_t parse_count(const std::string& token, std::size_t line) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError(line, "expected a non-negative integer, got '" + token + "'");
  }
  return std::stoull(token);
}

}  // namespace detail

// Text format:
//   M=<int> N=<int>
//   <device>: <wanted packet indices...>
// '#' starts a comment line.  Devices without a line want nothing.
inline Instance parse_instance(std::istream& in, std::size_t payload_len, Rng& rng) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<PacketSet> wants;
  std::vector<bool> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (!have_header) {
      std::istringstream tokens(line);
      std::string a, b, extra;
      tokens >> a >> b;
      if (tokens >> extra || a.rfind("M=", 0) != 0 || b.rfind("N=", 0) != 0) {
        throw ParseError(line_no, "header must be 'M=<int> N=<int>'");
      }
      m = detail::parse_count(a.substr(2), line_no);
      n = detail::parse_count(b.substr(2), line_no);
      wants.assign(n, {});
      seen.assign(n, false);
      have_header = true;
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "expected '<device>: <packets>'");
    const std::size_t dev = detail::parse_count(detail::trim(line.substr(0, colon)), line_no);
    if (dev >= n) throw ParseError(line_no, "device " + std::to_string(dev) + " out of range");
    if (seen[dev]) throw ParseError(line_no, "device " + std::to_string(dev) + " listed twice");
    seen[dev] = true;

    std::istringstream tokens(line.substr(colon + 1));
    std::string tok;
    while (tokens >> tok) {
      const std::size_t p = detail::parse_count(tok, line_no);
      if (p >= m) throw ParseError(line_no, "packet " + std::to_string(p) + " out of range");
      wants[dev].insert(PacketId{p});
    }
  }
  if (!have_header) throw ParseError(line_no, "missing 'M=<int> N=<int>' header");

  try {
    return make_instance(n, wants, m, payload_len, rng);
  } catch (const InstanceError& e) {
    throw ParseError(line_no, e.what());
  }
}

inline Instance load_instance(const std::string& path, std::size_t payload_len, Rng& rng) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_instance(in, payload_len, rng);
}

inline std::string format_instance(const Instance& inst) {
  std::ostringstream out;
  out << "M=" << inst.n_packets << " N=" << inst.n_devices << '\n';
  for (std::size_t n = 0; n < inst.n_devices; ++n) {
    out << n << ':';
    for (PacketId p : inst.wants[n]) out << ' ' << p.index;
    out << '\n';
  }
  return out.str();
}

}  // namespace ncmi
