#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "ncmi/baselines.hpp"
#include "ncmi/ncmi_b.hpp"
#include "ncmi/ncmi_i.hpp"

namespace ncmi {

enum class Scheme { NoNc, SiCellular, SiLocal, NcmiB, NcmiI };

inline constexpr std::array<Scheme, 5> kAllSchemes = {Scheme::NoNc, Scheme::SiCellular,
                                                      Scheme::SiLocal, Scheme::NcmiB,
                                                      Scheme::NcmiI};

inline constexpr std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::NoNc: return "no-nc";
    case Scheme::SiCellular: return "si-cellular";
    case Scheme::SiLocal: return "si-local";
    case Scheme::NcmiB: return "ncmi-b";
    case Scheme::NcmiI: return "ncmi-i";
  }
  return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

inline bool is_coded(Scheme s) { return s != Scheme::NoNc; }

inline RunResult run_scheme(Scheme s, const Instance& inst, Rng& rng) {
  switch (s) {
    case Scheme::NoNc: return run_no_nc(inst, rng);
    case Scheme::SiCellular: return run_cellular_nc(inst, rng);
    case Scheme::SiLocal: return run_local_nc(inst, rng);
    case Scheme::NcmiB: return run_ncmi_b(inst, rng);
    case Scheme::NcmiI: return run_ncmi_i(inst, rng);
  }
  throw Error("unknown scheme");
}

}  // namespace ncmi
