#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "mw/api/api.hpp"
#include "mw/core/error.hpp"
#include "mw/core/snapshot.hpp"
#include "mw/ingest/ingest.hpp"
#include "mw/query/query.hpp"
#include "mw/query/serialize.hpp"
#include "mw/synth/synth.hpp"
#include "support/temp_dir.hpp"

using namespace mw;
using namespace mw::api;
using nlohmann::json;

namespace {

Warehouse desk_warehouse() { return ingest::load_warehouse(synth::generate_data(synth::preset("desk")).weekly); }

struct Handler : ::testing::Test {
  static void SetUpTestSuite() { service = new ApiService(desk_warehouse(), "2020-01-01T00:00:00Z"); }
  static void TearDownTestSuite() { delete service; }
  static ApiService* service;
};
ApiService* Handler::service = nullptr;

json error_of(const ApiResponse& r) { return json::parse(r.body)["error"]; }

}  // namespace

TEST_F(Handler, VisitsMatchesQueryEngine) {
  const auto r = service->handle("/Visits", {{"Code", "722410"}, {"Start_Date", "2020-03-01"}, {"End_Date", "2021-06-28"}});
  EXPECT_EQ(r.status, 200);
  const DateRange range{Date::from_ymd(2020, 3, 1), Date::from_ymd(2021, 6, 28)};
  EXPECT_EQ(r.body, query::dwell_to_json(NaicsCode{722410}, range,
                                         query::dwell_aggregation(service->warehouse(), NaicsCode{722410}, range))
                        .dump());
}

TEST_F(Handler, NonNumericCodeIs400) {
  const auto r = service->handle("/Visits", {{"Code", "ABC"}, {"Start_Date", "2020-03-01"}, {"End_Date", "2020-04-01"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(error_of(r)["field"], "Code");
}

TEST_F(Handler, MissingAndMalformedParameters) {
  auto r = service->handle("/Visits", {{"Code", "722410"}, {"End_Date", "2020-04-01"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(error_of(r)["field"], "Start_Date");
  r = service->handle("/Visits", {{"Code", "722410"}, {"Start_Date", "2020-13-01"}, {"End_Date", "2020-04-01"}});
  EXPECT_EQ(error_of(r)["field"], "Start_Date");
  r = service->handle("/Visits", {{"Code", "722410"}, {"Start_Date", "2020-05-01"}, {"End_Date", "2020-04-01"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(error_of(r)["field"], "End_Date");
  r = service->handle("/Hangouts", {{"Code", "722410"}, {"State", "Minnesota"}, {"Start_Date", "2020-03-01"},
                                    {"End_Date", "2020-04-01"}});
  EXPECT_EQ(error_of(r)["field"], "State");
}

TEST_F(Handler, NoDataGivesZeroBuckets) {
  const auto r = service->handle("/Visits", {{"Code", "111111"}, {"Start_Date", "2020-03-01"}, {"End_Date", "2020-04-01"}});
  EXPECT_EQ(r.status, 200);
  for (const auto& [label, v] : json::parse(r.body)["buckets"].items()) EXPECT_EQ(v, 0) << label;
}

TEST_F(Handler, TopCategories) {
  auto r = service->handle("/Categories/Top", {{"k", "0"}, {"Start_Date", "2020-03-01"}, {"End_Date", "2020-04-01"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(error_of(r)["field"], "k");
  r = service->handle("/Categories/Top", {{"Start_Date", "2020-03-01"}, {"End_Date", "2021-07-04"}});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["rows"].size(), 5U);
  r = service->handle("/Categories/Top", {{"k", "2"}, {"Start_Date", "2020-03-01"}, {"End_Date", "2021-07-04"}});
  EXPECT_EQ(json::parse(r.body)["rows"].size(), 2U);
}

TEST_F(Handler, HangoutsUnknownStateIsEmpty) {
  const auto r = service->handle("/Hangouts", {{"Code", "722511"}, {"State", "06"}, {"Start_Date", "2020-03-01"},
                                               {"End_Date", "2021-07-04"}});
  EXPECT_EQ(r.status, 200);
  EXPECT_TRUE(json::parse(r.body)["rows"].empty());
  const auto mn = service->handle("/Hangouts", {{"Code", "722511"}, {"State", "27"}, {"Start_Date", "2020-03-01"},
                                                {"End_Date", "2021-07-04"}});
  EXPECT_EQ(json::parse(mn.body)["rows"].size(), 4U);
}

TEST_F(Handler, HealthAndUnknownRoute) {
  const auto h = service->handle("/health", {});
  EXPECT_EQ(h.status, 200);
  const auto doc = json::parse(h.body);
  EXPECT_EQ(doc["status"], "ok");
  EXPECT_EQ(doc["snapshot_loaded_at"], "2020-01-01T00:00:00Z");
  EXPECT_EQ(doc["record_counts"].size(), 11U);
  EXPECT_EQ(doc["record_counts"]["pois"], 14);
  EXPECT_EQ(doc["record_counts"]["visit_facts"], 980);
  EXPECT_EQ(service->handle("/Nope", {}).status, 404);
}

TEST(BindAddress, Parsing) {
  EXPECT_EQ(parse_bind_address("127.0.0.1:8080"), (std::pair<std::string, int>{"127.0.0.1", 8080}));
  EXPECT_EQ(parse_bind_address("[::1]:0"), (std::pair<std::string, int>{"::1", 0}));
  EXPECT_THROW(parse_bind_address("localhost"), ArgumentError);
  EXPECT_THROW(parse_bind_address("host:99999"), ArgumentError);
}

TEST(Server, ServesOverSocketAndRejectsBusyPort) {
  support::TempDir dir;
  save_snapshot(desk_warehouse(), dir.path());
  auto service = ApiService::from_snapshot(dir.path());
  const int port = service->bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread runner([&] { service->run(); });
  service->wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/Visits?Code=722410&Start_Date=2020-03-01&End_Date=2021-06-28");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, service->handle("/Visits", {{"Code", "722410"}, {"Start_Date", "2020-03-01"},
                                                   {"End_Date", "2021-06-28"}})
                           .body);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
  res = client.Get("/Visits?Code=ABC&Start_Date=2020-03-01&End_Date=2021-06-28");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = client.Get("/missing");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  const auto health = json::parse(client.Get("/health")->body);
  EXPECT_FALSE(health["snapshot_loaded_at"].get<std::string>().empty());

  ApiService second(Warehouse{}, "x");
  EXPECT_THROW(second.bind("127.0.0.1", port), IoError);

  service->stop();
  runner.join();
}

TEST(Server, MissingSnapshotIsLoadError) {
  support::TempDir dir;
  EXPECT_THROW(ApiService::from_snapshot(dir / "none"), LoadError);
}
