#include <gtest/gtest.h>

#include <map>

#include "support.hpp"

namespace ncmi {
namespace {

using testing::fixture;
using testing::P;

PacketSet pkts(std::initializer_list<std::size_t> labels) {
  PacketSet s;
  for (std::size_t k : labels) s.insert(P(k));
  return s;
}

TEST(NextCellular, ClaimsFromTheFrontUntilEmpty) {
  const Instance inst = fixture("appB-1");
  IdncState st = make_idnc_state(inst);
  const std::vector<PacketSet> expect = {pkts({1}), pkts({2}), pkts({3}), pkts({4}),
                                         pkts({5, 6}), pkts({7, 8})};
  for (const auto& e : expect) {
    const auto tx = next_cellular(st);
    ASSERT_TRUE(tx.has_value());
    EXPECT_EQ(tx->link, Link::Cellular);
    EXPECT_FALSE(tx->sender.has_value());
    EXPECT_EQ(tx->constituents, e);
  }
  EXPECT_FALSE(next_cellular(st).has_value());
}

TEST(NextLocal, DirectVectorSentWholeByNStar) {
  const Instance inst = fixture("appB-1");
  IdncState st = make_idnc_state(inst);
  Rng rng(1);
  const auto tx = next_local(st, inst, rng);
  ASSERT_TRUE(tx.has_value());
  EXPECT_EQ(tx->sender, DeviceId{0});
  EXPECT_EQ(tx->constituents, pkts({7, 8}));
}

TEST(NextLocal, PartialThenFollowUp) {
  const Instance inst = fixture("appB-2");
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    IdncState st = make_idnc_state(inst);
    Rng rng(seed);
    ++st.slot;
    deliver(st, inst, *next_cellular(st));
    const auto direct = next_local(st, inst, rng);
    ASSERT_EQ(direct->constituents, pkts({11}));
    deliver(st, inst, *direct);

    ++st.slot;
    deliver(st, inst, *next_cellular(st));
    const auto partial = next_local(st, inst, rng);
    ASSERT_TRUE(partial.has_value());
    ASSERT_EQ(partial->constituents.size(), 2u);
    ASSERT_TRUE(st.in_progress.has_value());
    const PacketId missing = st.in_progress->missing;
    EXPECT_FALSE(partial->constituents.contains(missing));
    EXPECT_TRUE(pkts({8, 9, 10}).contains(missing));
    deliver(st, inst, *partial);

    ++st.slot;
    deliver(st, inst, *next_cellular(st));
    const auto follow = next_local(st, inst, rng);
    ASSERT_TRUE(follow.has_value());
    EXPECT_EQ(follow->constituents, PacketSet{missing});
    // Lowest-indexed holder of the missing packet.
    std::size_t holder = 0;
    while (!inst.has[holder].contains(missing)) ++holder;
    EXPECT_EQ(follow->sender, DeviceId{holder});
    deliver(st, inst, *follow);
    EXPECT_TRUE(st.complete(inst.n_packets));
  }
}

TEST(Deliver, CodedPairDecodesAtEachWanter) {
  const Instance inst = fixture("example4");
  IdncState st = make_idnc_state(inst);
  const TransmissionRecord rec =
      deliver(st, inst, IdncTransmission{Link::Cellular, std::nullopt, pkts({3, 4})});
  const std::map<DeviceId, PacketId> expect = {
      {DeviceId{0}, P(3)}, {DeviceId{1}, P(3)}, {DeviceId{2}, P(4)}};
  EXPECT_EQ(rec.decoded, expect);
  EXPECT_EQ(st.known[2][P(4).index], inst.payloads[P(4).index]);
  EXPECT_EQ(st.known[0][P(3).index], inst.payloads[P(3).index]);
}

TEST(Deliver, UncodedCommonPacketReachesEveryone) {
  const Instance inst = fixture("example4");
  IdncState st = make_idnc_state(inst);
  const TransmissionRecord rec =
      deliver(st, inst, IdncTransmission{Link::Cellular, std::nullopt, pkts({1})});
  EXPECT_EQ(rec.decoded.size(), 3u);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_TRUE(st.decoded[n].contains(P(1)));
}

TEST(Deliver, LocalPartialCombination) {
  const Instance inst = fixture("appB-2");
  IdncState st = make_idnc_state(inst);
  const TransmissionRecord rec =
      deliver(st, inst, IdncTransmission{Link::Local, DeviceId{0}, pkts({6, 7})});
  const std::map<DeviceId, PacketId> expect = {{DeviceId{1}, P(6)}, {DeviceId{2}, P(7)}};
  EXPECT_EQ(rec.decoded, expect);
  EXPECT_EQ(st.known[1][P(6).index], inst.payloads[P(6).index]);
}

TEST(Deliver, RejectsTwoUnknownConstituents) {
  const Instance inst = fixture("appB-2");
  IdncState st = make_idnc_state(inst);
  // Device 0 lacks both p1 and p2.
  EXPECT_THROW(deliver(st, inst, IdncTransmission{Link::Cellular, std::nullopt, pkts({1, 2})}),
               NotInstantlyDecodable);
}

TEST(NcmiI, RegimeFixtureCompletionTimes) {
  const std::pair<const char*, std::size_t> cases[] = {{"appB-1", 4}, {"appB-2", 3}, {"appB-3", 3}};
  for (auto [name, t] : cases) {
    const Instance inst = fixture(name);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Rng rng(seed);
      ASSERT_EQ(run_ncmi_i(inst, rng).completion_time, t) << name << " seed " << seed;
    }
  }
}

TEST(NcmiI, FourPacketAndEmpty) {
  Rng rng(3);
  EXPECT_EQ(run_ncmi_i(fixture("fig2"), rng).completion_time, 1u);
  EXPECT_EQ(run_ncmi_i(fixture("empty"), rng).completion_time, 0u);
}

struct Usage {
  std::size_t cellular = 0;
  std::size_t local = 0;
};

// Replays the run loop, attributing every transmission to the pool entry it
// serves.
std::vector<Usage> transmission_counts(const Instance& inst, Rng& rng, std::size_t& slots) {
  IdncState st = make_idnc_state(inst);
  std::vector<Usage> use(st.pool.size());
  auto newly_claimed = [&](const std::vector<bool>& before) {
    for (std::size_t i = 0; i < st.pool.size(); ++i) {
      if (st.pool[i].claimed && !before[i]) return std::optional<std::size_t>(i);
    }
    return std::optional<std::size_t>();
  };
  auto claims = [&] {
    std::vector<bool> c;
    for (const auto& e : st.pool) c.push_back(e.claimed);
    return c;
  };
  while (!st.complete(inst.n_packets)) {
    ++st.slot;
    const auto before_cell = claims();
    const auto cell = next_cellular(st);
    if (cell) ++use[*newly_claimed(before_cell)].cellular;
    const auto before_local = claims();
    const std::optional<std::size_t> pending =
        st.in_progress ? std::optional<std::size_t>(st.in_progress->pool_index) : std::nullopt;
    const auto local = next_local(st, inst, rng);
    if (local) {
      const auto idx = newly_claimed(before_local);
      ++use[idx ? *idx : *pending].local;
    }
    if (cell) deliver(st, inst, *cell);
    if (local) deliver(st, inst, *local);
    if (st.slot > slot_guard(inst)) throw NonTermination("replay");
  }
  slots = st.slot;
  return use;
}

TEST(NcmiIProperties, TransmissionCountsPerClass) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Instance inst = testing::random_instance(seed);
    const Grouping g = group(inst);
    Rng rng(seed);
    std::size_t slots = 0;
    const auto use = transmission_counts(inst, rng, slots);
    const std::size_t n_c = g.m_c.size(), n_l = g.m_l.size();
    for (std::size_t i = 0; i < use.size(); ++i) {
      const std::size_t total = use[i].cellular + use[i].local;
      if (i < n_c) {
        ASSERT_EQ(use[i].cellular, 1u);
        ASSERT_EQ(use[i].local, 0u);
      } else if (i < n_c + n_l) {
        ASSERT_TRUE((use[i].cellular == 1 && use[i].local == 0) ||
                    (use[i].cellular == 0 && use[i].local >= 1 && use[i].local <= 2));
      } else {
        ASSERT_EQ(total, 1u);
      }
    }
    Rng again(seed);
    const RunResult r = run_ncmi_i(inst, again);
    ASSERT_EQ(r.completion_time, slots);
    ASSERT_GE(r.completion_time, lower_bound(inst));
    ASSERT_LE(r.completion_time, upper_bound_i(inst));
  }
}

TEST(NcmiIProperties, DecodedPayloadsAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Instance inst = testing::random_instance(seed);
    Rng a(seed), b(seed);
    const RunResult ra = run_ncmi_i(inst, a);
    const RunResult rb = run_ncmi_i(inst, b);
    ASSERT_EQ(format_trace(ra, inst.n_packets), format_trace(rb, inst.n_packets));
    for (const auto& rec : ra.trace) {
      for (const auto& [dev, p] : rec.decoded) {
        ASSERT_TRUE(inst.wants[dev.index].contains(p));
      }
    }
  }
}

}  // namespace
}  // namespace ncmi
