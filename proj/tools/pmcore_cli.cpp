// pmcore command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bench_stats.hpp"
#include "pmcore/pmcore.h"

namespace {

using json = nlohmann::json;

struct CString {
  char* p = nullptr;
  ~CString() { pmcore_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Turns a status plus error document into a one-line diagnostic.
void check(pmcore_status status, const CString& error) {
  if (status == PMCORE_OK) return;
  std::string detail = error.str();
  const json doc = json::parse(detail, nullptr, false);
  if (doc.is_object() && doc.contains("detail")) detail = doc["detail"].get<std::string>();
  throw Failure(std::string(pmcore_status_name(status)) + ": " + detail);
}

class Log {
 public:
  explicit Log(const std::string& path) {
    CString err;
    check(pmcore_load_log(path.c_str(), &handle_, err.out()), err);
  }
  Log(const Log&) = delete;
  Log& operator=(const Log&) = delete;
  ~Log() {
    CString err;
    pmcore_destroy_log(handle_, err.out());
  }
  pmcore_log_handle handle() const { return handle_; }

 private:
  pmcore_log_handle handle_ = 0;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure("cannot open " + path + " for writing");
  out << content;
  if (!out) throw Failure("failed writing " + path);
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string stats_line(const Log& log) {
  CString out;
  check(pmcore_log_stats(log.handle(), out.out()), out);
  const json s = json::parse(out.str());
  return "events=" + std::to_string(s["events"].get<std::size_t>()) +
         " activities=" + std::to_string(s["activities"].get<std::size_t>()) +
         " cases=" + std::to_string(s["cases"].get<std::size_t>()) +
         " variants=" + std::to_string(s["variants"].get<std::size_t>());
}

// --- import --------------------------------------------------------------

struct ImportArgs {
  std::string path;
  bool stats = false;
  std::string table;
};

int run_import(const ImportArgs& a) {
  Log log(a.path);
  if (!a.table.empty()) {
    CString out;
    check(pmcore_log_event_table(log.handle(), ends_with(a.table, ".json") ? "json" : "csv",
                                 out.out()),
          out);
    write_file(a.table, out.str());
  }
  if (a.stats || a.table.empty()) std::cout << stats_line(log) << '\n';
  return 0;
}

// --- discover ------------------------------------------------------------

struct DiscoverArgs {
  std::string path;
  std::string variant;
  std::string out;
  unsigned threads = 0;
};

int run_discover(const DiscoverArgs& a) {
  Log log(a.path);
  const char* format = ends_with(a.out, ".pnml") ? "pnml" : "json";
  CString net;
  CString report;
  check(pmcore_discover_log(log.handle(), a.variant.c_str(), a.threads, format, net.out(),
                            report.out()),
        net);

  std::ostream& info = a.out.empty() ? std::cerr : std::cout;
  const json r = json::parse(report.str());
  for (const char* stage : {"dfg", "candidates", "balance", "replay", "assemble"}) {
    char line[96];
    std::snprintf(line, sizeof line, "%-10s %s", stage,
                  pmcore::bench::format_seconds(r["timings"][stage].get<double>()).c_str());
    info << line << '\n';
  }
  const auto& c = r["counts"];
  info << "places=" << c["after_replay"].get<std::size_t>()
       << " candidates=" << c["candidates"].get<std::size_t>()
       << " balanced=" << c["after_balance"].get<std::size_t>() << '\n';

  if (a.out.empty()) {
    std::cout << net.str() << '\n';
  } else {
    write_file(a.out, net.str());
  }
  return 0;
}

// --- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string path;
  std::string what = "import";
  std::string variant = "2.0|b0.5|t0.5|r0.5";
  std::size_t n = pmcore::bench::kDefaultRuns;
  std::size_t warmup = 0;
  unsigned threads = 0;
  std::string format = "md";
  std::vector<double> samples;
};

int run_bench(const BenchArgs& a) {
  const auto format =
      a.format == "csv" ? pmcore::bench::TableFormat::Csv : pmcore::bench::TableFormat::Markdown;
  pmcore::bench::BenchResult result;

  if (!a.samples.empty()) {
    result = pmcore::bench::summarize("injected", a.samples);
  } else if (a.path.empty()) {
    throw Failure("bench needs a log path");
  } else if (a.what == "import") {
    // Full read, parse and event table construction, fresh handle per run.
    result = pmcore::bench::measure("import " + a.path, a.n, a.warmup, [&] {
      Log log(a.path);
      CString table;
      check(pmcore_log_event_table(log.handle(), "json", table.out()), table);
    });
  } else {
    const Log log(a.path);
    result = pmcore::bench::measure("discover " + a.variant + " " + a.path, a.n, a.warmup, [&] {
      CString net;
      check(pmcore_discover_log(log.handle(), a.variant.c_str(), a.threads, "json", net.out(),
                                nullptr),
            net);
    });
  }
  std::cout << pmcore::bench::format_table({result}, format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pmcore: XES import, Alpha+++ discovery and benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pmcore_version()));

  ImportArgs imp;
  auto* import_cmd = app.add_subcommand("import", "Parse an XES log and print statistics");
  import_cmd->add_option("path", imp.path, "XES or XES.GZ file")->required();
  import_cmd->add_flag("--stats", imp.stats, "Print events/activities/cases/variants");
  import_cmd->add_option("--table", imp.table, "Write the event table (.csv or .json)");

  DiscoverArgs disc;
  auto* discover_cmd = app.add_subcommand("discover", "Discover an accepting Petri net");
  discover_cmd->add_option("path", disc.path, "XES or XES.GZ file")->required();
  discover_cmd->add_option("--variant", disc.variant, "Parameter string, e.g. 2.0|b0.5|t0.5|r0.5")
      ->required();
  discover_cmd->add_option("--out", disc.out, "Output file (.json or .pnml); stdout if omitted");
  discover_cmd->add_option("--threads", disc.threads, "Worker threads, 0 = all")
      ->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Repeat an operation and report statistics");
  bench_cmd->add_option("path", bench.path, "XES or XES.GZ file");
  bench_cmd->add_option("--what", bench.what, "import or discover")
      ->check(CLI::IsMember({"import", "discover"}))
      ->capture_default_str();
  bench_cmd->add_option("--variant", bench.variant, "Parameter string for discover")
      ->capture_default_str();
  bench_cmd->add_option("--n", bench.n, "Timed repetitions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--warmup", bench.warmup, "Untimed runs before measuring")
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads for discover, 0 = all")
      ->capture_default_str();
  bench_cmd->add_option("--format", bench.format, "md or csv")
      ->check(CLI::IsMember({"md", "csv"}))
      ->capture_default_str();
  bench_cmd->add_option("--samples", bench.samples, "Summarize these samples instead of timing")
      ->delimiter(',')
      ->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*import_cmd) return run_import(imp);
    if (*discover_cmd) return run_discover(disc);
    return run_bench(bench);
  } catch (const std::exception& e) {
    std::cerr << "pmcore: " << e.what() << '\n';
    return 1;
  }
}
