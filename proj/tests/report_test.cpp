#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mw/core/error.hpp"
#include "mw/ingest/ingest.hpp"
#include "mw/query/query.hpp"
#include "mw/query/serialize.hpp"
#include "mw/report/report.hpp"
#include "mw/synth/synth.hpp"
#include "support/temp_dir.hpp"

using namespace mw;
using namespace mw::report;
using nlohmann::json;

namespace {

struct Desk : ::testing::Test {
  static void SetUpTestSuite() {
    dir = new support::TempDir();
    synth::generate(synth::preset("desk"), dir->path());
    data = new synth::SynthData(synth::generate_data(synth::preset("desk")));
    warehouse = new Warehouse(ingest::load_warehouse(data->weekly));
  }
  static void TearDownTestSuite() {
    delete warehouse;
    delete data;
    delete dir;
  }
  static support::TempDir* dir;
  static synth::SynthData* data;
  static Warehouse* warehouse;

  static json full_spec() {
    return json::parse(R"({
      "title": "Desk overview",
      "start": "2020-03-01", "end": "2021-07-04",
      "sections": [
        {"type": "top-categories", "k": 3},
        {"type": "hangouts", "naics": "722511", "state": "27", "k": 5},
        {"type": "category-series", "categories": ["722511", "445110"], "dwell_filter": "long"},
        {"type": "compliance", "metric": "time_at_home"},
        {"type": "compliance", "metric": "distance_from_home", "aggregation": "device_weighted_mean"},
        {"type": "sampling-rate", "level": "state", "population": "population.csv"},
        {"type": "outbreak-compare", "roster": "outbreak_roster.csv",
         "baseline_window": {"start": "2020-03-02", "end": "2020-03-22"},
         "baseline_week": "2020-03-02", "max_distance_meters": 20000, "ratio_low": 0.5, "ratio_high": 2.0}
      ]})");
  }

  static ReportBundle render(const json& doc) {
    return render_report(*warehouse, data->social_distancing, ReportSpec::from_json(doc, dir->path()));
  }
};
support::TempDir* Desk::dir = nullptr;
synth::SynthData* Desk::data = nullptr;
Warehouse* Desk::warehouse = nullptr;

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_F(Desk, TopThreeBundle) {
  const auto bundle = render(json::parse(R"({"title": "t", "start": "2020-03-01", "end": "2021-06-28",
                                             "sections": [{"type": "top-categories", "k": 3}]})"));
  ASSERT_EQ(bundle.size(), 2U);
  ASSERT_TRUE(bundle.contains("summary.md"));
  ASSERT_TRUE(bundle.contains("top_categories.csv"));
  EXPECT_EQ(line_count(bundle.at("top_categories.csv")), 4U);
}

TEST_F(Desk, EverySectionTypeRenders) {
  const auto bundle = render(full_spec());
  for (const char* name : {"summary.md", "top_categories.csv", "hangouts.csv", "category_series.json", "compliance.json",
                           "compliance_2.json", "sampling_rate.csv", "outbreak_compare.json"}) {
    EXPECT_TRUE(bundle.contains(name)) << name;
  }
  EXPECT_EQ(bundle.size(), 8U);
  EXPECT_EQ(bundle.at("sampling_rate.csv"), "region_id,rate,status\n27,0.05,ok\n");
  const auto summary = bundle.at("summary.md");
  EXPECT_NE(summary.find("# Desk overview"), std::string::npos);
  EXPECT_NE(summary.find("MN stay-at-home"), std::string::npos);
  EXPECT_NE(summary.find("Artifact: `outbreak_compare.json`"), std::string::npos);
}

TEST_F(Desk, ArtifactsAreFaithfulToQueries) {
  const auto bundle = render(full_spec());
  const DateRange range{Date::from_ymd(2020, 3, 1), Date::from_ymd(2021, 7, 4)};
  EXPECT_EQ(bundle.at("top_categories.csv"),
            query::ranked_to_csv(query::q2_top_categories(*warehouse, range, 3), "code", "visits"));
  EXPECT_EQ(bundle.at("hangouts.csv"),
            query::ranked_to_csv(query::q3_top_hangouts(*warehouse, NaicsCode{722511}, std::string("27"), range, 5),
                                 "place_id", "long_visits"));

  const auto doc = json::parse(bundle.at("category_series.json"));
  const auto series = analytics::weekly_category_series(*warehouse, {NaicsCode{722511}, NaicsCode{445110}},
                                                        analytics::DwellFilter::kLongOnly, range);
  ASSERT_EQ(doc["series"].size(), series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& js = doc["series"][i];
    EXPECT_EQ(js["label"], series[i].label);
    ASSERT_EQ(js["points"].size(), series[i].points.size());
    for (std::size_t j = 0; j < series[i].points.size(); ++j) {
      EXPECT_EQ(js["points"][j]["week_start"], series[i].points[j].week_start.iso());
      EXPECT_EQ(js["points"][j]["value"].get<double>(), series[i].points[j].value);
    }
    EXPECT_FALSE(js["annotations"].empty());
  }

  const auto outbreak = json::parse(bundle.at("outbreak_compare.json"));
  ASSERT_EQ(outbreak["series"].size(), 2U);
  EXPECT_EQ(outbreak["series"][0]["label"], "outbreak");
  EXPECT_EQ(outbreak["series"][0]["points"][0]["value"], 1.0);
  EXPECT_EQ(outbreak["series"][1]["points"][0]["value"], 1.0);
  EXPECT_EQ(outbreak["pairs"].size(), 1U);
}

TEST_F(Desk, EmptyRangeStillRenders) {
  const auto bundle = render(json::parse(R"({"title": "t", "start": "2019-01-01", "end": "2019-02-01",
    "sections": [{"type": "top-categories"}, {"type": "category-series", "categories": [722511]},
                 {"type": "compliance"}]})"));
  EXPECT_EQ(bundle.at("top_categories.csv"), "rank,code,visits\n");
  EXPECT_TRUE(json::parse(bundle.at("category_series.json"))["series"][0]["points"].empty());
  EXPECT_TRUE(json::parse(bundle.at("compliance.json"))["series"][0]["points"].empty());
}

TEST_F(Desk, RenderingIsDeterministic) {
  EXPECT_EQ(render(full_spec()), render(full_spec()));
  support::TempDir a, b;
  write_bundle(render(full_spec()), a.path());
  write_bundle(render(full_spec()), b.path());
  for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
    std::ifstream fa(entry.path(), std::ios::binary), fb(b / entry.path().filename(), std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_EQ(sa.str(), sb.str()) << entry.path();
  }
}

TEST_F(Desk, FailureNamesTheSection) {
  auto doc = full_spec();
  doc["sections"][5]["population"] = "missing.csv";
  try {
    render(doc);
    FAIL() << "expected an error";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("section 6 (sampling-rate)"), std::string::npos) << e.what();
  }
  doc = full_spec();
  doc["sections"][6]["baseline_week"] = "2019-01-07";
  try {
    render(doc);
    FAIL() << "expected an error";
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("section 7 (outbreak-compare)"), std::string::npos) << e.what();
  }
}

TEST(ReportSpec, RejectsMalformedDocuments) {
  const std::filesystem::path base = "/tmp";
  auto bad = [&](const char* text) { return ReportSpec::from_json(json::parse(text), base); };
  EXPECT_THROW(bad(R"([])"), ConfigError);
  EXPECT_THROW(bad(R"({"title": "t", "start": "2020-03-01", "end": "2020-04-01", "sections": []})"), ConfigError);
  EXPECT_THROW(bad(R"({"title": "t", "start": "2020-05-01", "end": "2020-04-01",
                       "sections": [{"type": "top-categories"}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"title": "t", "start": "2020-03-01", "end": "2020-04-01",
                       "sections": [{"type": "pie-chart"}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"title": "t", "start": "2020-03-01", "end": "2020-04-01",
                       "sections": [{"type": "top-categories", "k": 0}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"title": "t", "start": "2020-03-01", "end": "2020-04-01",
                       "sections": [{"type": "hangouts", "naics": "72251"}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"title": "t", "start": "2020-03-01", "end": "2020-04-01",
                       "sections": [{"type": "compliance", "aggregation": "mean"}]})"), ConfigError);
}

TEST(ReportSpec, DefaultsAndPathResolution) {
  const auto spec = ReportSpec::from_json(json::parse(R"({"title": "t", "start": "2020-03-01", "end": "2020-04-01",
    "calendar": "cal.csv",
    "sections": [{"type": "sampling-rate", "population": "pop.csv"}, {"type": "top-categories"}]})"),
                                          "/data/specs");
  EXPECT_EQ(spec.calendar, std::filesystem::path("/data/specs/cal.csv"));
  EXPECT_EQ(spec.sections[0].level, RegionLevel::kTract);
  EXPECT_EQ(spec.sections[0].population, std::filesystem::path("/data/specs/pop.csv"));
  EXPECT_EQ(spec.sections[1].k, 10U);
}

TEST(ReportSpec, LoadErrors) {
  support::TempDir dir;
  std::ofstream(dir / "broken.json") << "{";
  EXPECT_THROW(ReportSpec::load(dir / "broken.json"), ConfigError);
  EXPECT_THROW(ReportSpec::load(dir / "absent.json"), IoError);
}

TEST(ReportSpec, ShippedSpecLoads) {
  const auto dir = std::filesystem::path(MW_SOURCE_DIR) / "configs";
  const auto spec = ReportSpec::load(dir / "report.json");
  EXPECT_EQ(spec.sections.size(), 7U);
  EXPECT_EQ(spec.sections[5].population, dir / "../data/outbreak/population.csv");
}
