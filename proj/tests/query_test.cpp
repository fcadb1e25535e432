#include <random>

#include <gtest/gtest.h>

#include "mw/core/error.hpp"
#include "mw/ingest/ingest.hpp"
#include "mw/query/query.hpp"
#include "mw/query/serialize.hpp"
#include "mw/synth/synth.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace mw;
using namespace mw::query;

namespace {

support::Ranked as_pairs(const RankedResult& r) {
  support::Ranked out;
  for (const auto& row : r.rows) out.emplace_back(row.key, row.value);
  return out;
}

std::map<std::string, std::int64_t> as_map(const DwellTotals& t) {
  std::map<std::string, std::int64_t> out;
  for (DwellBucket b : kAllDwellBuckets) out[std::string(label(b))] = t[b];
  return out;
}

Date random_date(std::mt19937_64& rng) {
  return Date::from_ymd(2020, 2, 20) + static_cast<std::int32_t>(rng() % 520);
}

struct DeskFixture : ::testing::Test {
  static void SetUpTestSuite() {
    records = new std::vector<FlatWeeklyRecord>(synth::generate_data(synth::preset("desk")).weekly);
    warehouse = new Warehouse(ingest::load_warehouse(*records));
  }
  static void TearDownTestSuite() {
    delete warehouse;
    delete records;
  }
  static std::vector<FlatWeeklyRecord>* records;
  static Warehouse* warehouse;
};
std::vector<FlatWeeklyRecord>* DeskFixture::records = nullptr;
Warehouse* DeskFixture::warehouse = nullptr;

const std::vector<std::int32_t> kDeskCodes = {722511, 722513, 722410, 445110, 611110};

}  // namespace

TEST_F(DeskFixture, DwellMatchesOracleForQueryOneRange) {
  const Date start = Date::from_ymd(2020, 3, 1);
  const Date end = Date::from_ymd(2021, 6, 28);
  EXPECT_EQ(as_map(dwell_aggregation(*warehouse, NaicsCode{722410}, {start, end})),
            support::oracle_dwell(*records, 722410, start, end));
}

TEST_F(DeskFixture, AllQueriesMatchOracleOnRandomRanges) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 60; ++trial) {
    Date a = random_date(rng);
    Date b = random_date(rng);
    if (b < a) std::swap(a, b);
    const auto code = kDeskCodes[rng() % kDeskCodes.size()];
    const std::size_t k = 1 + rng() % 6;
    EXPECT_EQ(as_map(dwell_aggregation(*warehouse, NaicsCode{code}, {a, b})),
              support::oracle_dwell(*records, code, a, b));
    EXPECT_EQ(as_pairs(q2_top_categories(*warehouse, {a, b}, k)), support::oracle_q2(*records, a, b, k));
    EXPECT_EQ(as_pairs(q3_top_hangouts(*warehouse, NaicsCode{code}, std::string("27"), {a, b}, k)),
              support::oracle_q3(*records, code, std::string("27"), a, b, k));
    EXPECT_EQ(as_pairs(q3_top_hangouts(*warehouse, NaicsCode{code}, std::nullopt, {a, b}, k)),
              support::oracle_q3(*records, code, std::nullopt, a, b, k));
  }
}

TEST_F(DeskFixture, CbgDistributionMatchesOracle) {
  const DateRange range{Date::from_ymd(2020, 3, 1), Date::from_ymd(2020, 9, 30)};
  for (const auto& [cbg, row] : warehouse->cbgs()) {
    const auto got = q1_pois_and_distribution(*warehouse, cbg, range);
    const auto want = support::oracle_q1(*records, cbg, range.start, range.end);
    EXPECT_EQ(got.total_visits, want.total);
    std::map<std::string, std::int64_t> pois;
    for (const auto& p : got.pois) pois[p.place_id] = p.total_visits;
    EXPECT_EQ(pois, want.poi_visits);
    std::map<std::int32_t, std::int64_t> cats;
    for (const auto& c : got.distribution) {
      cats[c.naics.value] = c.visits;
      EXPECT_EQ(c.share, want.category_share.at(c.naics.value));
    }
    EXPECT_EQ(cats, want.category_visits);
  }
}

TEST_F(DeskFixture, LeastImpactedMatchesOracle) {
  const Date bs = Date::from_ymd(2020, 3, 2), be = Date::from_ymd(2020, 3, 22);
  const Date is = Date::from_ymd(2020, 3, 30), ie = Date::from_ymd(2020, 5, 17);
  const auto got = q4_least_impacted_category(*warehouse, {bs, be}, {is, ie});
  const auto want = support::oracle_q4(*records, bs, be, is, ie, kDefaultMinBaselineVisits);
  ASSERT_EQ(got.rows.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(got.rows[i].naics.value, want[i].naics);
    EXPECT_EQ(got.rows[i].baseline_mean, want[i].baseline_mean);
    EXPECT_EQ(got.rows[i].intervention_mean, want[i].intervention_mean);
    EXPECT_EQ(got.rows[i].ratio, want[i].ratio);
  }
  // Grocery is configured with the mildest stay-at-home multiplier.
  EXPECT_EQ(got.rows.front().naics, NaicsCode{445110});
}

TEST(Query, RandomWarehousesMatchOracle) {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 40; ++trial) {
    support::RecordShape shape;
    shape.n_pois = 1 + static_cast<int>(rng() % 15);
    shape.n_weeks = 1 + static_cast<int>(rng() % 10);
    const auto records = support::random_records(rng, shape);
    const auto w = ingest::load_warehouse(records);
    Date a = Date::from_ymd(2020, 3, 1) + static_cast<std::int32_t>(rng() % 200);
    Date b = a + static_cast<std::int32_t>(rng() % 120);
    for (auto code : kDeskCodes) {
      EXPECT_EQ(as_map(dwell_aggregation(w, NaicsCode{code}, {a, b})), support::oracle_dwell(records, code, a, b));
      EXPECT_EQ(as_pairs(q3_top_hangouts(w, NaicsCode{code}, std::string("55"), {a, b}, 3)),
                support::oracle_q3(records, code, std::string("55"), a, b, 3));
    }
    EXPECT_EQ(as_pairs(q2_top_categories(w, {a, b}, 10)), support::oracle_q2(records, a, b, 10));
  }
}

TEST(Query, TiesBreakByKeyAscending) {
  const auto r = rank({{"b", 5}, {"a", 5}, {"c", 9}, {"d", 1}}, 3);
  ASSERT_EQ(r.rows.size(), 3U);
  EXPECT_EQ(r.rows[0].key, "c");
  EXPECT_EQ(r.rows[1].key, "a");
  EXPECT_EQ(r.rows[2].key, "b");
}

TEST(Query, ArgumentErrors) {
  const Warehouse w;
  const DateRange backwards{Date::from_ymd(2020, 5, 1), Date::from_ymd(2020, 4, 1)};
  const DateRange ok{Date::from_ymd(2020, 4, 1), Date::from_ymd(2020, 5, 1)};
  EXPECT_THROW(dwell_aggregation(w, NaicsCode{722410}, backwards), ArgumentError);
  EXPECT_THROW(q2_top_categories(w, ok, 0), ArgumentError);
  EXPECT_THROW(q3_top_hangouts(w, NaicsCode{722410}, std::nullopt, ok, 0), ArgumentError);
  EXPECT_THROW(q1_pois_and_distribution(w, "27", ok), ArgumentError);
  EXPECT_THROW(q4_least_impacted_category(w, ok, ok), ArgumentError);
  EXPECT_EQ(dwell_aggregation(w, NaicsCode{722410}, ok).total(), 0);
  EXPECT_TRUE(q1_pois_and_distribution(w, "270531048001", ok).pois.empty());
}

TEST(Query, LeastImpactedFollowsConfiguredMultipliers) {
  auto config = synth::preset("desk");
  config.categories = {{NaicsCode{445110}, 20, 200, {0.2, 0.2, 0.2, 0.2, 0.2}},
                       {NaicsCode{722410}, 20, 200, {0.2, 0.2, 0.2, 0.2, 0.2}}};
  config.outbreak.reset();
  config.phases = {{"stay-at-home",
                    {Date::from_ymd(2020, 3, 27), Date::from_ymd(2020, 5, 17)},
                    {{NaicsCode{445110}, 0.9}, {NaicsCode{722410}, 0.2}}}};
  const auto w = ingest::load_warehouse(synth::generate_data(config).weekly);
  const auto result = q4_least_impacted_category(w, {Date::from_ymd(2020, 3, 2), Date::from_ymd(2020, 3, 22)},
                                                 {Date::from_ymd(2020, 3, 30), Date::from_ymd(2020, 5, 17)});
  ASSERT_EQ(result.rows.size(), 2U);
  EXPECT_EQ(result.rows[0].naics, NaicsCode{445110});
  EXPECT_NEAR(result.rows[0].ratio, 0.9, 0.09);
  EXPECT_NEAR(result.rows[1].ratio, 0.2, 0.02);
}

TEST(Query, LeastImpactedEmptyResultCarriesNote) {
  const auto result = q4_least_impacted_category(Warehouse{}, {Date::from_ymd(2020, 3, 2), Date::from_ymd(2020, 3, 22)},
                                                 {Date::from_ymd(2020, 3, 30), Date::from_ymd(2020, 5, 17)});
  EXPECT_TRUE(result.rows.empty());
  EXPECT_FALSE(result.note.empty());
}

TEST(Answerability, MatchesQueryTable) {
  const std::array<bool, 8> answerable = {true, true, true, true, false, false, false, false};
  for (int id = 1; id <= 8; ++id) {
    const auto a = answerability(id);
    EXPECT_EQ(a.status == AnswerStatus::kAnswerable, answerable[static_cast<std::size_t>(id - 1)]) << id;
    EXPECT_EQ(a.missing_data.empty(), a.status == AnswerStatus::kAnswerable);
  }
  EXPECT_EQ(answerability(5).describe(), "RequiresExternalData: mode of transportation");
  EXPECT_EQ(answerability(1).describe(), "Answerable");
  EXPECT_THROW(answerability(0), ArgumentError);
  EXPECT_THROW(answerability(9), ArgumentError);
}

TEST(Serialize, DwellJsonUsesCanonicalOrderAndIntegers) {
  DwellTotals t;
  t[DwellBucket::kOver240] = 3;
  t[DwellBucket::kUnder5] = 1;
  const auto doc = dwell_to_json(NaicsCode{722410}, {Date::from_ymd(2020, 3, 1), Date::from_ymd(2021, 6, 28)}, t);
  EXPECT_EQ(doc.dump(),
            R"({"code":722410,"start":"2020-03-01","end":"2021-06-28","buckets":{"<5":1,"5-20":0,"21-60":0,"61-240":0,">240":3}})");
  EXPECT_EQ(dwell_to_csv(t), "dwell_bucket,visits\n<5,1\n5-20,0\n21-60,0\n61-240,0\n>240,3\n");
}
