// Runs the pmcore executable as a subprocess.
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>

#include "pmcore/xes.hpp"
#include "support/files.hpp"
#include "support/gzip.hpp"

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

Outcome run(const std::string& args) {
  static fixture::TempDir dir;
  static int n = 0;
  const auto out = dir / ("out" + std::to_string(n));
  const auto err = dir / ("err" + std::to_string(n++));
  const std::string cmd = std::string("'") + PMCORE_CLI + "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Outcome r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = fixture::read_file(out);
  r.err = fixture::read_file(err);
  return r;
}

std::string quoted(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

const std::string kMinimal =
    R"(<log><trace><event><string key="concept:name" value="a"/></event></trace></log>)";

std::filesystem::path sepsis() { return fixture::data_dir() / "sepsis_cases.xes.gz"; }

}  // namespace

TEST(Cli, ImportSepsis) {
  const Outcome r = run("import --stats " + quoted(sepsis()));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "events=15214 activities=16 cases=1050 variants=846\n");
}

TEST(Cli, ImportMinimalAndTable) {
  fixture::TempDir dir;
  fixture::write_file(dir / "min.xes", kMinimal);
  const Outcome r = run("import " + quoted(dir / "min.xes"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "events=1 activities=1 cases=1 variants=1\n");

  const Outcome t = run("import " + quoted(dir / "min.xes") + " --table " + quoted(dir / "t.csv"));
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(t.out, "");
  EXPECT_EQ(fixture::read_file(dir / "t.csv"), "concept:name\na\n");
}

TEST(Cli, ImportStatsEqualLibraryForCorpus) {
  for (const auto& entry : std::filesystem::directory_iterator(fixture::data_dir())) {
    const auto s = pmcore::log_stats(pmcore::xes::detect_and_parse(entry.path()));
    const Outcome r = run("import --stats " + quoted(entry.path()));
    EXPECT_EQ(r.out, "events=" + std::to_string(s.events) + " activities=" +
                         std::to_string(s.activities) + " cases=" + std::to_string(s.cases) +
                         " variants=" + std::to_string(s.variants) + "\n")
        << entry.path();
  }
}

TEST(Cli, CorruptFileNamesByteOffset) {
  fixture::TempDir dir;
  fixture::write_file(dir / "bad.xes", "<log><trace><event></trace></log>");
  const Outcome r = run("import " + quoted(dir / "bad.xes"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("MalformedXml"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("byte offset 19"), std::string::npos) << r.err;

  const std::string gz = fixture::gzip(kMinimal);
  fixture::write_file(dir / "cut.xes.gz", gz.substr(0, gz.size() / 2));
  const Outcome c = run("import " + quoted(dir / "cut.xes.gz"));
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.err.find("CorruptArchive"), std::string::npos) << c.err;

  EXPECT_EQ(run("import " + quoted(dir / "nothing.xes")).code, 1);
}

TEST(Cli, DiscoverDeterministicAndThreadInvariant) {
  fixture::TempDir dir;
  const std::string base = "discover " + quoted(sepsis()) + " --variant '2.0|b0.5|t0.5|r0.5'";
  const Outcome a = run(base + " --threads 1 --out " + quoted(dir / "a.json"));
  const Outcome b = run(base + " --threads 1 --out " + quoted(dir / "b.json"));
  const Outcome c = run(base + " --threads 8 --out " + quoted(dir / "c.json"));
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0);
  ASSERT_EQ(c.code, 0);
  const std::string net = fixture::read_file(dir / "a.json");
  EXPECT_FALSE(net.empty());
  EXPECT_EQ(net, fixture::read_file(dir / "b.json"));
  EXPECT_EQ(net, fixture::read_file(dir / "c.json"));
  for (const char* stage : {"dfg", "candidates", "balance", "replay", "assemble"}) {
    EXPECT_NE(a.out.find(stage), std::string::npos);
  }

  const Outcome p = run(base + " --out " + quoted(dir / "n.pnml"));
  EXPECT_EQ(p.code, 0);
  EXPECT_NE(fixture::read_file(dir / "n.pnml").find("<pnml>"), std::string::npos);

  const Outcome s = run(base);
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(s.out, net + "\n");
}

TEST(Cli, DiscoverBadVariant) {
  const Outcome r = run("discover " + quoted(sepsis()) + " --variant bad");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
}

TEST(Cli, BenchInjectedSamples) {
  const Outcome r = run("bench --samples 1,2,3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "| Label | N | Median | Mean | SD |\n|---|---:|---:|---:|---:|\n"
            "| injected | 3 | 2.0000s | 2.0000s | 1.0000s |\n");
  const Outcome csv = run("bench --samples 1,2,3 --format csv");
  EXPECT_EQ(csv.out, "label,n,median_s,mean_s,sd_s\ninjected,3,2.0000,2.0000,1.0000\n");
}

TEST(Cli, BenchRuns) {
  fixture::TempDir dir;
  fixture::write_file(dir / "min.xes", kMinimal);
  const Outcome one = run("bench " + quoted(dir / "min.xes") + " --n 1 --format csv");
  EXPECT_EQ(one.code, 0) << one.err;
  EXPECT_NE(one.out.find(",1,"), std::string::npos);
  EXPECT_NE(one.out.find(",0.0000\n"), std::string::npos);

  const Outcome def = run("bench " + quoted(dir / "min.xes") + " --what discover --warmup 1");
  EXPECT_EQ(def.code, 0) << def.err;
  EXPECT_NE(def.out.find(" | 10 | "), std::string::npos) << def.out;

  EXPECT_NE(run("bench " + quoted(dir / "min.xes") + " --n 0").code, 0);
  EXPECT_NE(run("bench " + quoted(dir / "min.xes") + " --what nothing").code, 0);
  EXPECT_EQ(run("bench " + quoted(dir / "min.xes") + " --what discover --variant x").code, 1);
}
