// Exercises the shared library strictly through its C header.
#include <gtest/gtest.h>

#include <string>

#include <json.hpp>

#include "pmcore/pmcore.h"
#include "support/files.hpp"

using json = nlohmann::json;

namespace {

struct Out {
  char* p = nullptr;
  ~Out() { pmcore_string_free(p); }
  char** ptr() {
    pmcore_string_free(p);
    p = nullptr;
    return &p;
  }
  json doc() const { return json::parse(p); }
  std::string str() const { return p ? p : ""; }
};

const std::string kMinimal =
    R"(<log><trace><event><string key="concept:name" value="a"/></event></trace></log>)";

pmcore_log_handle load_bytes(const std::string& bytes) {
  pmcore_log_handle h = 0;
  Out err;
  EXPECT_EQ(pmcore_load_log_bytes(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size(), &h,
                                  err.ptr()),
            PMCORE_OK)
      << err.str();
  return h;
}

}  // namespace

TEST(CApi, VersionAndNames) {
  EXPECT_STREQ(pmcore_version(), "1.0.0");
  EXPECT_STREQ(pmcore_status_name(PMCORE_OK), "Ok");
  EXPECT_STREQ(pmcore_status_name(PMCORE_ERR_PARSE_ERROR), "ParseError");
  EXPECT_STREQ(pmcore_status_name(PMCORE_ERR_DOUBLE_DESTROY), "DoubleDestroy");
  EXPECT_STREQ(pmcore_status_name(static_cast<pmcore_status>(999)), "Unknown");
  pmcore_string_free(nullptr);
}

TEST(CApi, LoadStatsDestroy) {
  const std::size_t before = pmcore_live_log_count();
  const pmcore_log_handle h = load_bytes(kMinimal);
  EXPECT_NE(h, 0u);
  EXPECT_EQ(pmcore_live_log_count(), before + 1);
  Out out;
  ASSERT_EQ(pmcore_log_stats(h, out.ptr()), PMCORE_OK);
  EXPECT_EQ(out.doc(), json::parse(R"({"events":1,"activities":1,"cases":1,"variants":1})"));
  ASSERT_EQ(pmcore_destroy_log(h, out.ptr()), PMCORE_OK);
  EXPECT_EQ(pmcore_destroy_log(h, out.ptr()), PMCORE_ERR_DOUBLE_DESTROY);
  EXPECT_EQ(out.doc()["error"], "DoubleDestroy");
  EXPECT_EQ(pmcore_log_stats(h, out.ptr()), PMCORE_ERR_UNKNOWN_HANDLE);
  EXPECT_EQ(out.doc()["error"], "UnknownHandle");
  EXPECT_EQ(pmcore_live_log_count(), before);
}

TEST(CApi, InputBufferIsCopied) {
  std::string bytes = kMinimal;
  const pmcore_log_handle h = load_bytes(bytes);
  std::fill(bytes.begin(), bytes.end(), ' ');
  Out out;
  ASSERT_EQ(pmcore_log_projection(h, nullptr, out.ptr()), PMCORE_OK);
  EXPECT_EQ(out.str(), R"({"alphabet":["a"],"variants":[[[0],1]]})");
  pmcore_destroy_log(h, nullptr);
}

TEST(CApi, LoadErrors) {
  pmcore_log_handle h = 0;
  Out err;
  EXPECT_EQ(pmcore_load_log("/definitely/missing.xes", &h, err.ptr()), PMCORE_ERR_IO);
  EXPECT_EQ(err.doc()["error"], "Io");
  const std::string bad = "<log><trace></log>";
  EXPECT_EQ(pmcore_load_log_bytes(reinterpret_cast<const uint8_t*>(bad.data()), bad.size(), &h,
                                  err.ptr()),
            PMCORE_ERR_MALFORMED_XML);
  EXPECT_NE(err.doc()["detail"].get<std::string>().find("byte offset"), std::string::npos);
  EXPECT_EQ(pmcore_load_log(nullptr, &h, err.ptr()), PMCORE_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(pmcore_load_log("x", nullptr, nullptr), PMCORE_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ProjectionTableMetadata) {
  const std::string doc = R"(<log><string key="source" value="unit"/>
    <classifier name="A" keys="concept:name"/>
    <trace><string key="concept:name" value="c1"/>
      <event><string key="concept:name" value="a"/><string key="org:resource" value="r"/></event>
    </trace></log>)";
  const pmcore_log_handle h = load_bytes(doc);
  Out out;
  ASSERT_EQ(pmcore_log_projection(h, R"(["concept:name","org:resource"])", out.ptr()), PMCORE_OK);
  EXPECT_EQ(out.doc()["alphabet"], json::parse(R"(["a+r"])"));
  EXPECT_EQ(pmcore_log_projection(h, "[]", out.ptr()), PMCORE_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(pmcore_log_projection(h, "[1]", out.ptr()), PMCORE_ERR_INVALID_ARGUMENT);

  ASSERT_EQ(pmcore_log_event_table(h, "csv", out.ptr()), PMCORE_OK);
  EXPECT_EQ(out.str(), "case:concept:name,concept:name,org:resource\nc1,a,r\n");
  ASSERT_EQ(pmcore_log_event_table(h, "json", out.ptr()), PMCORE_OK);
  EXPECT_EQ(out.doc()["rows"], 1);
  EXPECT_EQ(pmcore_log_event_table(h, "xml", out.ptr()), PMCORE_ERR_INVALID_ARGUMENT);

  ASSERT_EQ(pmcore_log_metadata(h, out.ptr()), PMCORE_OK);
  const json meta = out.doc();
  EXPECT_EQ(meta["attributes"][0]["key"], "source");
  EXPECT_EQ(meta["attributes"][0]["value"], "unit");
  EXPECT_EQ(meta["classifiers"][0]["keys"], json::parse(R"(["concept:name"])"));
  pmcore_destroy_log(h, nullptr);
}

TEST(CApi, DiscoverAndConvert) {
  Out out;
  const char* proj = R"({"alphabet":["a","b"],"variants":[[[0,1],3],[[1,0],1]]})";
  ASSERT_EQ(pmcore_discover(proj, "0.0|b1.0|t0.0|r0.5", 1, out.ptr()), PMCORE_OK);
  const std::string net = out.str();
  EXPECT_EQ(json::parse(net)["schema"], "pmcore-apn/1");
  ASSERT_EQ(pmcore_discover(proj, "0.0|b1.0|t0.0|r0.5", 0, out.ptr()), PMCORE_OK);
  EXPECT_EQ(out.str(), net);

  ASSERT_EQ(pmcore_net_convert(net.c_str(), "pnml", out.ptr()), PMCORE_OK);
  EXPECT_NE(out.str().find("<pnml>"), std::string::npos);
  ASSERT_EQ(pmcore_net_convert(net.c_str(), "json", out.ptr()), PMCORE_OK);
  EXPECT_EQ(out.str(), net);
  EXPECT_EQ(pmcore_net_convert("{}", "json", out.ptr()), PMCORE_ERR_SCHEMA_VIOLATION);

  EXPECT_EQ(pmcore_discover(proj, "bad", 0, out.ptr()), PMCORE_ERR_PARSE_ERROR);
  EXPECT_EQ(out.doc()["error"], "ParseError");
  EXPECT_EQ(pmcore_discover("{", "2.0|b0.5|t0.5|r0.5", 0, out.ptr()), PMCORE_ERR_SCHEMA_VIOLATION);
  EXPECT_EQ(pmcore_discover(R"({"alphabet":[],"variants":[[[1],1]]})", "2.0|b0.5|t0.5|r0.5", 0,
                            out.ptr()),
            PMCORE_ERR_INVARIANT_VIOLATION);

  ASSERT_EQ(pmcore_projection_normalize(R"({"variants":[], "alphabet":["z"]})", out.ptr()), PMCORE_OK);
  EXPECT_EQ(out.str(), R"({"alphabet":["z"],"variants":[]})");
}

TEST(CApi, DiscoverLogMatchesProjectionPath) {
  pmcore_log_handle h = 0;
  Out out;
  const std::string path = (fixture::data_dir() / "sepsis_cases.xes.gz").string();
  ASSERT_EQ(pmcore_load_log(path.c_str(), &h, out.ptr()), PMCORE_OK);
  ASSERT_EQ(pmcore_log_projection(h, nullptr, out.ptr()), PMCORE_OK);
  const std::string proj = out.str();
  Out net, report;
  ASSERT_EQ(pmcore_discover_log(h, "2.0|b0.5|t0.5|r0.5", 1, "json", net.ptr(), report.ptr()),
            PMCORE_OK);
  ASSERT_EQ(pmcore_discover(proj.c_str(), "2.0|b0.5|t0.5|r0.5", 0, out.ptr()), PMCORE_OK);
  EXPECT_EQ(net.str(), out.str());
  const json r = report.doc();
  for (const char* stage : {"dfg", "candidates", "balance", "replay", "assemble"}) {
    EXPECT_GE(r["timings"][stage].get<double>(), 0.0);
  }
  EXPECT_EQ(pmcore_discover_log(h, "2.0|b0.5|t0.5|r0.5", 1, "svg", net.ptr(), nullptr),
            PMCORE_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(pmcore_destroy_log(h, nullptr), PMCORE_OK);
}
