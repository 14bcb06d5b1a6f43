#pragma once

#include <cstdio>
#include <string>

#include "ncmi/ncmi.hpp"

namespace ncmi::testing {

// Packet label p_k is dense index k-1 in the fixtures.
inline PacketId P(std::size_t k) { return PacketId{k - 1}; }

inline std::string fixture_path(const std::string& name) {
  return std::string(NCMI_FIXTURE_DIR) + "/" + name + ".inst";
}

inline Instance fixture(const std::string& name, std::uint64_t seed = 1) {
  Rng rng(seed);
  return load_instance(fixture_path(name), kDefaultPayloadLen, rng);
}

inline Instance from_wants(std::size_t n_packets, const std::vector<PacketSet>& wants,
                           std::uint64_t seed = 1) {
  Rng rng(seed);
  return make_instance(wants.size(), wants, n_packets, kDefaultPayloadLen, rng);
}

// Random stage-1 instance in the N in [2,6], m_total in [4,24], fixed p
// in {0.2, 0.4, 0.6} family.
inline Instance random_instance(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 2 + rng() % 5;
  const std::size_t m = 4 + rng() % 21;
  static constexpr double kP[] = {0.2, 0.4, 0.6};
  return stage1(m, n, LossModel::fixed(kP[rng() % 3]), rng);
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
inline CommandResult run_cli(const std::string& args) {
  const std::string cmd = std::string(NCMI_CLI_PATH) + " " + args + " 2>/dev/null";
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace ncmi::testing
