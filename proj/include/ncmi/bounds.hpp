#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ncmi/core.hpp"
#include "ncmi/grouping.hpp"

namespace ncmi {

// Non-negative rational with a small denominator; only ever ceiled.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  std::uint64_t ceil() const { return (num + den - 1) / den; }
  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
};

inline std::uint64_t ceil_max(const std::vector<Fraction>& terms) {
  std::uint64_t best = 0;
  for (const auto& t : terms) best = std::max(best, t.ceil());
  return best;
}

struct BoundReport {
  std::uint64_t lower = 0;
  std::uint64_t upper_b = 0;
  std::uint64_t upper_i = 0;
  std::vector<Fraction> lower_terms;
  std::vector<Fraction> upper_b_terms;
  std::vector<Fraction> upper_i_terms;
};

inline std::vector<Fraction> lower_terms(const Instance& inst) {
  return {{inst.common_missing.size(), 1}, {inst.max_wants(), 2}};
}

inline std::vector<Fraction> upper_b_terms(const Instance& inst) {
  const std::uint64_t hi = inst.max_wants();
  const std::uint64_t lo = inst.min_wants();
  return {{inst.common_missing.size(), 1}, {hi + lo, 3}, {hi, 2}};
}

inline std::vector<Fraction> upper_i_terms(const Instance& inst, std::size_t m_d) {
  const std::uint64_t lo = inst.min_wants();
  return {{inst.common_missing.size(), 1}, {2 * lo + m_d, 3}, {lo + m_d, 2}};
}

// ceil(max(|Mc|, max|W|/2))
inline std::uint64_t lower_bound(const Instance& inst) { return ceil_max(lower_terms(inst)); }

// ceil(max(|Mc|, (max|W| + min|W|)/3, max|W|/2))
inline std::uint64_t upper_bound_b(const Instance& inst) { return ceil_max(upper_b_terms(inst)); }

// ceil(max(|Mc|, (2 min|W| + |Md|)/3, (min|W| + |Md|)/2)), |Md| from the grouping.
inline std::uint64_t upper_bound_i(const Instance& inst, const Grouping& g) {
  return ceil_max(upper_i_terms(inst, g.m_d.size()));
}

inline std::uint64_t upper_bound_i(const Instance& inst) { return upper_bound_i(inst, group(inst)); }

inline BoundReport bound_report(const Instance& inst) {
  const Grouping g = group(inst);
  BoundReport r;
  r.lower_terms = lower_terms(inst);
  r.upper_b_terms = upper_b_terms(inst);
  r.upper_i_terms = upper_i_terms(inst, g.m_d.size());
  r.lower = ceil_max(r.lower_terms);
  r.upper_b = ceil_max(r.upper_b_terms);
  r.upper_i = ceil_max(r.upper_i_terms);
  return r;
}

inline std::string format_bounds(const BoundReport& r) {
  auto terms = [](const std::vector<Fraction>& ts) {
    std::string out;
    for (const auto& t : ts) out += (out.empty() ? "" : " ") + t.str();
    return out;
  };
  std::ostringstream out;
  out << "LOWER=" << r.lower << " UPPER_B=" << r.upper_b << " UPPER_I=" << r.upper_i << '\n'
      << "LOWER_TERMS: " << terms(r.lower_terms) << '\n'
      << "UPPER_B_TERMS: " << terms(r.upper_b_terms) << '\n'
      << "UPPER_I_TERMS: " << terms(r.upper_i_terms) << '\n';
  return out.str();
}

}  // namespace ncmi
