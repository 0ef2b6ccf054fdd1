#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace pmcore::bench {

inline constexpr std::size_t kDefaultRuns = 10;

struct BenchResult {
  std::string label;
  std::vector<double> samples;  // seconds
  double median = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single sample
};

enum class TableFormat { Markdown, Csv };

/// Throws std::invalid_argument for an empty sample list.
BenchResult summarize(std::string label, std::vector<double> samples);

/// Runs `warmup` untimed calls, then `runs` timed calls on a monotonic clock.
BenchResult measure(std::string label, std::size_t runs, std::size_t warmup,
                    const std::function<void()>& body);

/// Seconds rendered as "0.1234s".
std::string format_seconds(double seconds);

std::string format_table(const std::vector<BenchResult>& results, TableFormat format);

}  // namespace pmcore::bench
