#include <gtest/gtest.h>

#include "support.hpp"

namespace ncmi {
namespace {

using testing::fixture;
using testing::P;

using Slots = std::vector<std::optional<PacketId>>;
constexpr std::nullopt_t kNull = std::nullopt;

// 1-based label list, e.g. {{3,4},{5,6,7}} -> constituent sets.
std::vector<PacketSet> labels(std::initializer_list<std::initializer_list<std::size_t>> groups) {
  std::vector<PacketSet> out;
  for (auto g : groups) {
    PacketSet s;
    for (std::size_t k : g) s.insert(P(k));
    out.push_back(s);
  }
  return out;
}

std::vector<PacketSet> constituents(const std::vector<WantVector>& vs) {
  std::vector<PacketSet> out;
  for (const auto& v : vs) out.push_back(v.constituents());
  return out;
}

TEST(BuildVectors, TenPacketFixture) {
  const auto vs = build_vectors(fixture("example4"));
  const std::vector<WantVector> expect = {
      {Slots{P(1), P(1), P(1)}}, {Slots{P(2), P(2), P(2)}}, {Slots{P(3), P(3), P(4)}},
      {Slots{P(5), P(6), P(7)}}, {Slots{kNull, P(8), P(9)}}, {Slots{kNull, kNull, P(10)}}};
  EXPECT_EQ(vs, expect);
}

TEST(BuildVectors, SingleDeviceNeverMerges) {
  const Instance inst = testing::from_wants(2, {{PacketId{0}, PacketId{1}}});
  const auto vs = build_vectors(inst);
  ASSERT_EQ(vs.size(), 2u);
  EXPECT_EQ(vs[0].slots, Slots{PacketId{0}});
  EXPECT_EQ(vs[1].slots, Slots{PacketId{1}});
}

TEST(BuildVectors, FourPacketFixture) {
  const auto vs = build_vectors(fixture("fig2"));
  const std::vector<WantVector> expect = {{Slots{P(1), P(2), P(3)}}, {Slots{kNull, kNull, P(4)}}};
  EXPECT_EQ(vs, expect);
}

TEST(Classify, TenPacketFixture) {
  const Grouping g = group(fixture("example4"));
  EXPECT_EQ(constituents(g.m_c), labels({{1}, {2}}));
  EXPECT_EQ(constituents(g.m_l), labels({{3, 4}, {5, 6, 7}}));
  EXPECT_EQ(constituents(g.m_d), labels({{8, 9}, {10}}));
  EXPECT_EQ(g.n_star, DeviceId{0});
}

TEST(Classify, CommonHeavyRegime) {
  const Grouping g = group(fixture("appB-1"));
  EXPECT_EQ(constituents(g.m_c), labels({{1}, {2}, {3}, {4}}));
  EXPECT_EQ(constituents(g.m_l), labels({{5, 6}}));
  EXPECT_EQ(constituents(g.m_d), labels({{7, 8}}));
}

TEST(Classify, LocalHeavyRegime) {
  const Grouping g = group(fixture("appB-2"));
  EXPECT_EQ(constituents(g.m_c), labels({{1}}));
  EXPECT_EQ(constituents(g.m_l), labels({{2, 3, 4}, {5, 6, 7}, {8, 9, 10}}));
  EXPECT_EQ(constituents(g.m_d), labels({{11}}));
}

TEST(Classify, DirectHeavyRegimeClassSizes) {
  const Grouping g = group(fixture("appB-3"));
  EXPECT_EQ(g.m_c.size(), 1u);
  EXPECT_EQ(g.m_l.size(), 1u);
  EXPECT_EQ(g.m_d.size(), 4u);
  // First-fit pairing; another tie order would pair p9 with p10 instead.
  EXPECT_EQ(constituents(g.m_d), labels({{5}, {6, 7}, {8, 9}, {10}}));
}

TEST(Classify, NStarFromOriginalSizesLowestIndexOnTies) {
  const Instance inst = testing::from_wants(1, {{PacketId{0}}, {}});
  const Grouping g = group(inst);
  EXPECT_EQ(g.n_star, DeviceId{1});
  ASSERT_EQ(g.m_d.size(), 1u);
  EXPECT_TRUE(g.m_c.empty());
  EXPECT_TRUE(g.m_l.empty());

  const Grouping tie = group(fixture("fig2"));
  EXPECT_EQ(tie.n_star, DeviceId{0});
}

TEST(Group, EmptyAndAllCommon) {
  const Grouping e = group(fixture("empty"));
  EXPECT_TRUE(e.m_c.empty() && e.m_l.empty() && e.m_d.empty());

  const PacketSet all{PacketId{0}, PacketId{1}, PacketId{2}};
  const Grouping c = group(testing::from_wants(3, {all, all}));
  EXPECT_EQ(c.m_c.size(), 3u);
  EXPECT_TRUE(c.m_l.empty());
  EXPECT_TRUE(c.m_d.empty());
}

TEST(Group, FormatsLikeTheCli) {
  EXPECT_EQ(format_grouping(group(fixture("example4"))),
            "MC: p0 p1\nML: p2+p3 | p4+p5+p6\nMD: p7+p8 | p9\nNSTAR: 0\n");
}

// Instant decodability, conservation, M_c recovery and the n_star identity.
TEST(GroupingProperties, HoldOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const Instance inst = testing::random_instance(seed);
    const Grouping g = group(inst);
    std::vector<const WantVector*> all;
    for (const auto* cls : {&g.m_c, &g.m_l, &g.m_d}) {
      for (const auto& v : *cls) all.push_back(&v);
    }

    std::set<std::pair<std::size_t, PacketId>> covered;
    for (const WantVector* v : all) {
      const PacketSet cons = v->constituents();
      for (std::size_t n = 0; n < inst.n_devices; ++n) {
        std::size_t wanted = 0;
        for (PacketId p : cons) wanted += inst.wants[n].contains(p) ? 1 : 0;
        ASSERT_LE(wanted, 1u);
        if (v->slots[n]) {
          ASSERT_TRUE(inst.wants[n].contains(*v->slots[n]));
          ASSERT_TRUE(covered.insert({n, *v->slots[n]}).second);
        } else {
          ASSERT_EQ(wanted, 0u);
        }
      }
    }
    std::size_t total_wants = 0;
    for (const auto& w : inst.wants) total_wants += w.size();
    EXPECT_EQ(covered.size(), total_wants);

    PacketSet mc;
    for (const auto& v : g.m_c) {
      ASSERT_TRUE(v.all_same());
      mc.insert(*v.slots[0]);
    }
    EXPECT_EQ(mc, inst.common_missing);
    for (const auto& v : g.m_d) EXPECT_FALSE(v.slots[g.n_star.index].has_value());
    EXPECT_EQ(inst.wants[g.n_star.index].size(), g.m_c.size() + g.m_l.size());
    EXPECT_EQ(inst.wants[g.n_star.index].size(), inst.min_wants());
  }
}

}  // namespace
}  // namespace ncmi
