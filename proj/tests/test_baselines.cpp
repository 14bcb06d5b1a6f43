#include <gtest/gtest.h>

#include "support.hpp"

namespace ncmi {
namespace {

using testing::fixture;

std::size_t run(Scheme s, const Instance& inst, std::uint64_t seed = 1) {
  Rng rng(seed);
  return run_scheme(s, inst, rng).completion_time;
}

TEST(NoNc, FourPacketFixture) {
  const Instance inst = fixture("fig2");
  Rng rng(1);
  const RunResult r = run_no_nc(inst, rng);
  EXPECT_EQ(r.completion_time, 2u);
  for (const auto& rec : r.trace) EXPECT_EQ(rec.constituents.size(), 1u);
}

TEST(NoNc, SingleMissingPacket) {
  EXPECT_EQ(run(Scheme::NoNc, testing::from_wants(1, {{PacketId{0}}, {}})), 1u);
}

TEST(NoNc, AllCommonGoesOverCellular) {
  const PacketSet all{PacketId{0}, PacketId{1}, PacketId{2}};
  EXPECT_EQ(run(Scheme::NoNc, testing::from_wants(3, {all, all, all})), 3u);
}

TEST(NoNc, NeverSendsTheSamePacketTwiceInASlot) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = testing::random_instance(seed);
    Rng rng(seed);
    const RunResult r = run_no_nc(inst, rng);
    for (std::size_t i = 0; i + 1 < r.trace.size(); ++i) {
      if (r.trace[i].slot == r.trace[i + 1].slot) {
        ASSERT_NE(r.trace[i].constituents, r.trace[i + 1].constituents);
      }
    }
  }
}

TEST(SiCellular, MatchesLargestWantSet) {
  EXPECT_EQ(run(Scheme::SiCellular, fixture("fig2")), 2u);
  EXPECT_EQ(run(Scheme::SiCellular, fixture("example3")), 3u);
  EXPECT_EQ(run(Scheme::SiCellular, fixture("empty")), 0u);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = testing::random_instance(seed);
    Rng rng(seed);
    const RunResult r = run_cellular_nc(inst, rng);
    ASSERT_EQ(r.completion_time, inst.max_wants());
    for (const auto& rec : r.trace) ASSERT_EQ(rec.link, Link::Cellular);
  }
}

TEST(SiLocal, Fixtures) {
  EXPECT_EQ(run(Scheme::SiLocal, fixture("fig2")), 2u);
  EXPECT_EQ(run(Scheme::SiLocal, fixture("example3")), 4u);
  const PacketSet all{PacketId{0}, PacketId{1}};
  EXPECT_EQ(run(Scheme::SiLocal, testing::from_wants(2, {all, all})), 2u);
}

TEST(SiLocal, CommonPacketsFirstThenLocalOnly) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = testing::random_instance(seed);
    Rng rng(seed);
    const RunResult r = run_local_nc(inst, rng);
    const std::size_t mc = inst.common_missing.size();
    std::size_t cellular = 0;
    for (const auto& rec : r.trace) {
      if (rec.link == Link::Cellular) {
        ASSERT_LE(rec.slot, mc);
        ASSERT_EQ(rec.constituents.size(), 1u);
        ++cellular;
      } else {
        ASSERT_GT(rec.slot, mc);
      }
    }
    ASSERT_EQ(cellular, mc);
  }
}

TEST(Baselines, OrderingAgainstNcmiB) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Instance inst = testing::random_instance(seed);
    const std::size_t tb = run(Scheme::NcmiB, inst, seed);
    ASSERT_LE(tb, run(Scheme::SiCellular, inst, seed));
    ASSERT_LE(tb, run(Scheme::SiLocal, inst, seed));
    ASSERT_LE(tb, run(Scheme::NoNc, inst, seed)) << format_instance(inst);
  }
}

TEST(Schemes, NamesRoundTrip) {
  for (Scheme s : kAllSchemes) EXPECT_EQ(parse_scheme(scheme_name(s)), s);
  EXPECT_FALSE(parse_scheme("ncmi").has_value());
  EXPECT_TRUE(is_coded(Scheme::NcmiB));
  EXPECT_FALSE(is_coded(Scheme::NoNc));
}

}  // namespace
}  // namespace ncmi
