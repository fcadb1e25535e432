#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"
#include "mw/core/snapshot.hpp"
#include "mw/core/warehouse.hpp"
#include "support/generators.hpp"
#include "support/temp_dir.hpp"

using namespace mw;

namespace {

Warehouse one_poi_warehouse() {
  Warehouse w;
  w.add_country("US");
  w.add_state({"27", "US"});
  w.add_cbg({"270531048001", "27"});
  w.add_poi({"p1", "Bar", NaicsCode{722410}, "270531048001", 44.97, -93.26});
  const Date start = Date::from_ymd(2020, 3, 2);
  w.add_period({start, start + 7});
  w.add_visit_fact({"p1", start, 15, 9, 40.0, 1200.0});
  std::int64_t v = 1;
  for (DwellBucket b : kAllDwellBuckets) w.add_dwell_fact({"p1", start, b, v++});
  return w;
}

std::size_t data_rows(const std::filesystem::path& file) {
  auto reader = csv::Reader::open(file);
  std::vector<std::string> f;
  std::size_t n = 0;
  while (reader.next(f)) ++n;
  return n;
}

}  // namespace

TEST(Warehouse, ForeignKeysAreEnforced) {
  Warehouse w;
  EXPECT_THROW(w.add_state({"27", "US"}), LoadError);
  w.add_country("US");
  w.add_state({"27", "US"});
  EXPECT_THROW(w.add_poi({"p", "x", NaicsCode{722410}, "270531048001", {}, {}}), LoadError);
  w.add_cbg({"270531048001", "27"});
  w.add_poi({"p", "x", NaicsCode{722410}, "270531048001", {}, {}});
  EXPECT_THROW(w.add_visit_fact({"p", Date::from_ymd(2020, 3, 2), 1, 1, 0, {}}), LoadError);
  try {
    w.add_dwell_fact({"ghost", Date::from_ymd(2020, 3, 2), DwellBucket::kUnder5, 1});
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown poi"), std::string::npos);
  }
}

TEST(Warehouse, PeriodsMustSpanSevenDays) {
  Warehouse w;
  EXPECT_THROW(w.add_period({Date::from_ymd(2020, 3, 2), Date::from_ymd(2020, 3, 16)}), LoadError);
}

TEST(Warehouse, IdenticalEntityIsNoOpConflictingOneIsRejected) {
  auto w = one_poi_warehouse();
  const auto before = w.counts();
  w.add_poi({"p1", "Bar", NaicsCode{722410}, "270531048001", 44.97, -93.26});
  EXPECT_EQ(w.counts(), before);
  EXPECT_THROW(w.add_poi({"p1", "Other", NaicsCode{722410}, "270531048001", 44.97, -93.26}), IngestConflictError);
}

TEST(Warehouse, IndexesFollowInsertion) {
  const auto w = one_poi_warehouse();
  EXPECT_EQ(w.pois_with_naics(NaicsCode{722410}), std::set<std::string>{"p1"});
  EXPECT_TRUE(w.pois_with_naics(NaicsCode{111111}).empty());
  EXPECT_EQ(w.pois_in_cbg("270531048001"), std::set<std::string>{"p1"});
  EXPECT_EQ(w.naics_codes(), std::vector<NaicsCode>{NaicsCode{722410}});
  EXPECT_EQ(std::ranges::distance(w.dwell_facts_of("p1")), 5);
  EXPECT_EQ(std::ranges::distance(w.dwell_facts_of("p0")), 0);
}

TEST(Snapshot, EmptyWarehouseWritesHeaderOnlyFiles) {
  support::TempDir dir;
  save_snapshot(Warehouse{}, dir.path());
  for (auto name : kSnapshotFiles) {
    const auto file = dir.path() / std::string(name);
    ASSERT_TRUE(std::filesystem::exists(file)) << name;
    EXPECT_EQ(data_rows(file), 0U) << name;
  }
  EXPECT_EQ(load_snapshot(dir.path()), Warehouse{});
}

TEST(Snapshot, DwellFactsFileHasOneRowPerFact) {
  support::TempDir dir;
  const auto w = one_poi_warehouse();
  save_snapshot(w, dir.path());
  EXPECT_EQ(data_rows(dir / "dwell_facts.csv"), 5U);
  EXPECT_EQ(load_snapshot(dir.path()), w);
}

TEST(Snapshot, RoundTripRandomWarehouses) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = support::random_warehouse(rng);
    support::TempDir dir;
    save_snapshot(w, dir.path());
    const auto back = load_snapshot(dir.path());
    ASSERT_EQ(back, w) << "trial " << trial;
    ASSERT_EQ(back.counts(), w.counts());
  }
}

TEST(Snapshot, SavedBytesAreDeterministic) {
  std::mt19937_64 rng(77);
  const auto w = support::random_warehouse(rng);
  support::TempDir a;
  support::TempDir b;
  save_snapshot(w, a.path());
  save_snapshot(load_snapshot(a.path()), b.path());
  for (auto name : kSnapshotFiles) {
    std::ifstream fa(a / std::string(name), std::ios::binary);
    std::ifstream fb(b / std::string(name), std::ios::binary);
    const std::string ca((std::istreambuf_iterator<char>(fa)), {});
    const std::string cb((std::istreambuf_iterator<char>(fb)), {});
    EXPECT_EQ(ca, cb) << name;
  }
}

TEST(Snapshot, DanglingPoiNamesTableAndRow) {
  support::TempDir dir;
  save_snapshot(one_poi_warehouse(), dir.path());
  std::ofstream(dir / "dwell_facts.csv", std::ios::app) << "ghost,2020-03-02,<5,3\n";
  try {
    (void)load_snapshot(dir.path());
    FAIL() << "expected a load error";
  } catch (const LoadError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("unknown poi"), std::string::npos) << msg;
    EXPECT_NE(msg.find("dwell_facts.csv"), std::string::npos) << msg;
    EXPECT_NE(msg.find("row 6"), std::string::npos) << msg;
  }
}

TEST(Snapshot, MissingFileIsLoadError) {
  support::TempDir dir;
  save_snapshot(one_poi_warehouse(), dir.path());
  std::filesystem::remove(dir / "periods.csv");
  EXPECT_THROW((void)load_snapshot(dir.path()), LoadError);
}

TEST(Snapshot, UnwritablePathIsPersistenceError) {
  support::TempDir dir;
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(save_snapshot(one_poi_warehouse(), dir / "file"), PersistenceError);
}
