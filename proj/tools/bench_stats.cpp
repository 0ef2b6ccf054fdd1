#include "bench_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace pmcore::bench {

BenchResult summarize(std::string label, std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("benchmark needs at least one sample");
  BenchResult r;
  r.label = std::move(label);
  r.samples = std::move(samples);

  std::vector<double> sorted = r.samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  r.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  r.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double s : sorted) ss += (s - r.mean) * (s - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return r;
}

BenchResult measure(std::string label, std::size_t runs, std::size_t warmup,
                    const std::function<void()>& body) {
  if (runs == 0) throw std::invalid_argument("benchmark needs at least one run");
  for (std::size_t i = 0; i < warmup; ++i) body();
  std::vector<double> samples;
  samples.reserve(runs);
  for (std::size_t i = 0; i < runs; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return summarize(std::move(label), std::move(samples));
}

std::string format_seconds(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4fs", seconds);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string plain_seconds(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", seconds);
  return buf;
}

}  // namespace

std::string format_table(const std::vector<BenchResult>& results, TableFormat format) {
  std::string out;
  if (format == TableFormat::Csv) {
    out = "label,n,median_s,mean_s,sd_s\n";
    for (const auto& r : results) {
      out += csv_field(r.label) + ',' + std::to_string(r.samples.size()) + ',' +
             plain_seconds(r.median) + ',' + plain_seconds(r.mean) + ',' + plain_seconds(r.sd) +
             '\n';
    }
    return out;
  }
  out = "| Label | N | Median | Mean | SD |\n|---|---:|---:|---:|---:|\n";
  for (const auto& r : results) {
    out += "| " + r.label + " | " + std::to_string(r.samples.size()) + " | " +
           format_seconds(r.median) + " | " + format_seconds(r.mean) + " | " +
           format_seconds(r.sd) + " |\n";
  }
  return out;
}

}  // namespace pmcore::bench
