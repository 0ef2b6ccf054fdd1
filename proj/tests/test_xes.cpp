#include <gtest/gtest.h>

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <sstream>

#include "pmcore/error.hpp"
#include "pmcore/xes.hpp"
#include "support/files.hpp"
#include "support/fixtures.hpp"
#include "support/gzip.hpp"

using namespace pmcore;
using pmcore::xes::ImportOptions;

namespace {

constexpr const char* kMinimal =
    R"(<log><trace><event><string key="concept:name" value="a"/></event></trace></log>)";

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no pmcore::Error thrown";
  return ErrorCode::Internal;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Xes, MinimalDocument) {
  const EventLog log = xes::parse_xes(kMinimal);
  ASSERT_EQ(log.traces.size(), 1u);
  ASSERT_EQ(log.traces[0].events.size(), 1u);
  EXPECT_EQ(*log.traces[0].events[0].activity(), "a");
  EXPECT_EQ(log_stats(log), (LogStats{1, 1, 1, 1}));
}

TEST(Xes, TypedAttributesAndEntities) {
  const EventLog log = xes::parse_xes(R"(<?xml version="1.0"?>
<!DOCTYPE log>
<!-- comment with <trace> inside -->
<log xes.version="1.0">
  <?pi ignored?>
  <trace>
    <string key="concept:name" value="c&amp;1"/>
    <event>
      <string key="concept:name" value="A&#66;&#x43;&lt;&gt;&quot;&apos;"/>
      <date key="time:timestamp" value="2020-01-01T00:00:00.000+00:00"/>
      <int key="i" value="-42"/>
      <float key="f" value="2.5E3"/>
      <boolean key="b" value="true"/>
      <id key="u" value="1234-abcd"/>
      <unknown key="x"><nested/></unknown>
      <![CDATA[ <event> ]]>
    </event>
  </trace>
</log>)");
  ASSERT_EQ(log.traces.size(), 1u);
  EXPECT_EQ(*log.traces[0].attributes.value("concept:name")->get_if<std::string>(), "c&1");
  const auto& e = log.traces[0].events.at(0).attributes;
  EXPECT_EQ(*e.value("concept:name")->get_if<std::string>(), "ABC<>\"'");
  EXPECT_EQ(e.value("time:timestamp")->get_if<Timestamp>()->millis_since_epoch, 1577836800000);
  EXPECT_EQ(*e.value("i")->get_if<std::int64_t>(), -42);
  EXPECT_EQ(*e.value("f")->get_if<double>(), 2500.0);
  EXPECT_EQ(*e.value("b")->get_if<bool>(), true);
  EXPECT_EQ(e.value("u")->get_if<Identifier>()->text, "1234-abcd");
  EXPECT_FALSE(e.contains("x"));
}

TEST(Xes, NestedListsContainersAndMeta) {
  const EventLog log = xes::parse_xes(R"(<log><trace><event>
    <list key="l">
      <string key="meta" value="m"/>
      <values><string key="k" value="v"/><int key="k" value="2"/></values>
    </list>
    <container key="c"><string key="x" value="1"/><container key="inner"><int key="y" value="3"/></container></container>
  </event></trace></log>)");
  const auto& attrs = log.traces[0].events[0].attributes;
  const Attribute* l = attrs.find("l");
  ASSERT_TRUE(l);
  const auto* list = l->value.get_if<AttributeList>();
  ASSERT_TRUE(list);
  ASSERT_EQ(list->items.size(), 2u);
  EXPECT_EQ(list->items[0].key, "k");
  EXPECT_EQ(list->items[1].key, "k");
  EXPECT_EQ(*l->children.value("meta")->get_if<std::string>(), "m");
  const auto* map = attrs.value("c")->get_if<AttributeMap>();
  ASSERT_TRUE(map);
  EXPECT_EQ(map->entries.size(), 2u);
  EXPECT_EQ(nesting_depth(*attrs.find("c")), 3u);
}

TEST(Xes, GlobalsExtensionsClassifiersNotMaterialized) {
  const EventLog log = xes::parse_xes(R"(<log>
    <extension name="Concept" prefix="concept" uri="http://www.xes-standard.org/concept.xesext"/>
    <global scope="trace"><string key="concept:name" value="UNKNOWN"/></global>
    <global scope="event"><string key="concept:name" value="__"/><string key="org:resource" value="nobody"/></global>
    <classifier name="Mixed" keys="concept:name 'org resource'"/>
    <string key="source" value="test"/>
    <trace><event><string key="concept:name" value="a"/></event>
           <event><string key="concept:name" value="b"/></event>
           <event/></trace>
  </log>)");
  ASSERT_EQ(log.extensions.size(), 1u);
  EXPECT_EQ(log.extensions[0].prefix, "concept");
  EXPECT_EQ(log.global_trace_attrs.size(), 1u);
  EXPECT_EQ(log.global_event_attrs.size(), 2u);
  ASSERT_EQ(log.classifiers.size(), 1u);
  EXPECT_EQ(log.classifiers[0].keys, (std::vector<std::string>{"concept:name", "org resource"}));
  EXPECT_EQ(*log.attributes.value("source")->get_if<std::string>(), "test");
  const auto& events = log.traces[0].events;
  ASSERT_EQ(events.size(), 3u);
  EXPECT_FALSE(events[0].attributes.contains("org:resource"));
  EXPECT_TRUE(events[2].attributes.empty());
  EXPECT_TRUE(log.traces[0].attributes.empty());
}

TEST(Xes, ClassifierWithoutKeysRejected) {
  EXPECT_EQ(code_of([] { xes::parse_xes(R"(<log><classifier name="x" keys=" "/></log>)"); }),
            ErrorCode::InvalidAttribute);
}

TEST(Xes, FallbackAndStrictMode) {
  const std::string doc =
      R"(<log><trace><event><date key="d" value="yesterday"/><int key="i" value="1x"/></event></trace></log>)";
  const EventLog lenient = xes::parse_xes(doc);
  const auto& attrs = lenient.traces[0].events[0].attributes;
  EXPECT_EQ(*attrs.value("d")->get_if<std::string>(), "yesterday");
  EXPECT_EQ(*attrs.value("i")->get_if<std::string>(), "1x");

  ImportOptions strict;
  strict.date_fallback_to_text = false;
  EXPECT_EQ(code_of([&] { xes::parse_xes(doc, strict); }), ErrorCode::InvalidAttribute);
}

TEST(Xes, DepthLimit) {
  std::string doc = "<log><trace><event>";
  for (int i = 0; i < 5; ++i) doc += "<container key=\"c\">";
  doc += "<int key=\"x\" value=\"1\"/>";
  for (int i = 0; i < 5; ++i) doc += "</container>";
  doc += "</event></trace></log>";
  ImportOptions opts;
  opts.max_nesting_depth = 6;
  EXPECT_NO_THROW(xes::parse_xes(doc, opts));
  opts.max_nesting_depth = 5;
  EXPECT_EQ(code_of([&] { xes::parse_xes(doc, opts); }), ErrorCode::DepthExceeded);
}

TEST(Xes, MalformedInputsReportOffsets) {
  for (const char* bad : {"<log><trace></log>", "<log><trace><event></trace></event></log>",
                          "<log><string key=\"a\" value=\"&bogus;\"/></log>",
                          "<log><trace>", "<log attr=\"unterminated></log>", "", "just text",
                          "<notlog/>"}) {
    const std::string msg = message_of([&] { xes::parse_xes(bad); });
    EXPECT_FALSE(msg.empty()) << bad;
    EXPECT_EQ(code_of([&] { xes::parse_xes(bad); }), ErrorCode::MalformedXml) << bad;
  }
  EXPECT_NE(message_of([] { xes::parse_xes("<log><trace></log>"); }).find("byte offset 12"),
            std::string::npos);
}

TEST(Xes, SortByTimestampOption) {
  const std::string doc = R"(<log><trace>
    <event><string key="concept:name" value="late"/><date key="time:timestamp" value="2020-01-02T00:00:00Z"/></event>
    <event><string key="concept:name" value="none"/></event>
    <event><string key="concept:name" value="early"/><date key="time:timestamp" value="2020-01-01T00:00:00Z"/></event>
  </trace></log>)";
  auto names = [](const EventLog& log) {
    std::vector<std::string> out;
    for (const auto& e : log.traces[0].events) out.emplace_back(*e.activity());
    return out;
  };
  EXPECT_EQ(names(xes::parse_xes(doc)), (std::vector<std::string>{"late", "none", "early"}));
  ImportOptions opts;
  opts.sort_events_by_time = true;
  EXPECT_EQ(names(xes::parse_xes(doc, opts)),
            (std::vector<std::string>{"early", "late", "none"}));
}

TEST(Xes, RandomLogsRoundTrip) {
  fixture::LogGenerator gen(2024);
  for (int i = 0; i < 300; ++i) {
    const EventLog log = gen.log();
    const std::string text = fixture::write_xes(log);
    const EventLog parsed = xes::parse_xes(text);
    ASSERT_EQ(parsed, log) << text;
    std::istringstream stream(text);
    ASSERT_EQ(xes::parse_xes(stream), log);
  }
}

TEST(Xes, RoundTripAcrossChunkBoundaries) {
  fixture::LogGenerator gen(99);
  EventLog big = gen.log(400, 30);
  const std::string text = fixture::write_xes(big);
  ASSERT_GT(text.size(), 512u * 1024u);
  EXPECT_EQ(xes::parse_xes(text), big);
}

TEST(Gzip, EqualsPlainParse) {
  fixture::LogGenerator gen(17);
  for (int i = 0; i < 100; ++i) {
    const std::string text = fixture::write_xes(gen.log());
    for (int level : {0, 1, 9}) {
      ASSERT_EQ(xes::parse_xes_gz(fixture::gzip(text, level)), xes::parse_xes(text));
    }
  }
  EXPECT_EQ(xes::parse_xes_gz(fixture::gzip(kMinimal)), xes::parse_xes(kMinimal));
}

TEST(Gzip, MultiMemberStream) {
  const std::string text = kMinimal;
  const std::string two = fixture::gzip(text.substr(0, 20)) + fixture::gzip(text.substr(20));
  EXPECT_EQ(xes::parse_xes_gz(two), xes::parse_xes(text));
}

TEST(Gzip, Errors) {
  EXPECT_EQ(code_of([] { xes::parse_xes_gz(std::string_view(kMinimal)); }), ErrorCode::NotGzip);
  EXPECT_EQ(code_of([] { xes::parse_xes_gz(std::string_view("\x1f")); }), ErrorCode::NotGzip);
  fixture::LogGenerator gen(1);
  const std::string gz = fixture::gzip(fixture::write_xes(gen.log(20, 10)));
  for (std::size_t cut : {std::size_t{10}, gz.size() / 2, gz.size() - 4}) {
    EXPECT_EQ(code_of([&] { xes::parse_xes_gz(std::string_view(gz).substr(0, cut)); }),
              ErrorCode::CorruptArchive)
        << cut;
  }
  std::string flipped = gz;
  flipped[gz.size() / 2] ^= 0x55;
  flipped[gz.size() / 2 + 1] ^= 0x55;
  const ErrorCode c = code_of([&] { xes::parse_xes_gz(std::string_view(flipped)); });
  EXPECT_TRUE(c == ErrorCode::CorruptArchive || c == ErrorCode::MalformedXml);
}

TEST(Detect, DispatchesOnMagicBytes) {
  fixture::TempDir dir;
  fixture::write_file(dir / "gz_inside.xes", fixture::gzip(kMinimal));
  fixture::write_file(dir / "plain_inside.xes.gz", kMinimal);
  const EventLog expected = xes::parse_xes(kMinimal);
  EXPECT_EQ(xes::detect_and_parse(dir / "gz_inside.xes"), expected);
  EXPECT_EQ(xes::detect_and_parse(dir / "plain_inside.xes.gz"), expected);
  EXPECT_EQ(xes::detect_and_parse_bytes(fixture::gzip(kMinimal)), expected);
  EXPECT_EQ(xes::parse_xes_file(dir / "plain_inside.xes.gz"), expected);
  EXPECT_EQ(xes::parse_xes_gz_file(dir / "gz_inside.xes"), expected);
  EXPECT_EQ(code_of([&] { xes::detect_and_parse(dir / "missing.xes"); }), ErrorCode::Io);
  EXPECT_EQ(code_of([&] { xes::detect_and_parse(dir.path()); }), ErrorCode::Io);
}

TEST(Corpus, SepsisCountsAndGzipEquivalence) {
  const auto path = fixture::data_dir() / "sepsis_cases.xes.gz";
  const EventLog gz = xes::detect_and_parse(path);
  EXPECT_EQ(log_stats(gz), (LogStats{15214, 16, 1050, 846}));
  const EventLog plain = xes::parse_xes(fixture::gunzip(fixture::read_file(path)));
  EXPECT_EQ(gz, plain);
}

// A DOM parser would need memory proportional to the document. Here the
// document is ~48 MB of skipped content around a tiny log, parsed in a
// child process whose peak RSS growth must stay far below the input size.
TEST(Streaming, PeakMemoryIndependentOfDocumentSize) {
  fixture::TempDir dir;
  const auto path = dir / "wide.xes";
  {
    std::ofstream out(path, std::ios::binary);
    const std::string padding(48 * 1024, 'x');
    out << "<log><trace>";
    for (int i = 0; i < 1000; ++i) {
      out << "<event><string key=\"concept:name\" value=\"a\"/><!-- " << padding
          << " --><skip note=\"" << padding.substr(0, 1024) << "\"/></event>";
    }
    out << "</trace></log>";
  }
  const pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    rusage before{};
    getrusage(RUSAGE_SELF, &before);
    const EventLog log = xes::parse_xes_file(path);
    rusage after{};
    getrusage(RUSAGE_SELF, &after);
    const long grown_kb = after.ru_maxrss - before.ru_maxrss;
    _exit(log.event_count() == 1000 && grown_kb < 8 * 1024 ? 0 : 1);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}
