#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmcore/event_log.hpp"

namespace pmcore::xes {

struct ImportOptions {
  /// Stable-sorts the events of each trace by "time:timestamp"; events
  /// without a timestamp keep their relative order after timestamped ones.
  bool sort_events_by_time = false;
  /// Unparseable date/int/float/boolean values become text attributes
  /// instead of failing the import with InvalidAttribute.
  bool date_fallback_to_text = true;
  /// Maximum attribute nesting depth (a top-level scalar has depth 1).
  std::size_t max_nesting_depth = 64;
};

/// Plain XES XML from memory, a stream or a file.
EventLog parse_xes(std::string_view xml, const ImportOptions& opts = {});
EventLog parse_xes(std::istream& in, const ImportOptions& opts = {});
EventLog parse_xes_file(const std::filesystem::path& path, const ImportOptions& opts = {});

/// Gzip-compressed XES. Throws NotGzip when the magic bytes are missing and
/// CorruptArchive for damaged or truncated archives.
EventLog parse_xes_gz(std::string_view bytes, const ImportOptions& opts = {});
EventLog parse_xes_gz(std::istream& in, const ImportOptions& opts = {});
EventLog parse_xes_gz_file(const std::filesystem::path& path, const ImportOptions& opts = {});

/// Dispatches on the gzip magic bytes, never on the file extension.
EventLog detect_and_parse(const std::filesystem::path& path, const ImportOptions& opts = {});
EventLog detect_and_parse_bytes(std::string_view bytes, const ImportOptions& opts = {});

bool has_gzip_magic(std::string_view bytes) noexcept;

// ---------------------------------------------------------------------------
// Columnar event table
// ---------------------------------------------------------------------------

enum class ColumnType { Text, Integer, Float, Boolean, Timestamp };

std::string_view to_string(ColumnType type) noexcept;

using ColumnValues =
    std::variant<std::vector<std::string>, std::vector<std::int64_t>, std::vector<double>,
                 std::vector<std::uint8_t>, std::vector<Timestamp>>;

/// One homogeneous column. `valid[i] == 0` marks a null cell; the slot in
/// `values` then holds a default value.
struct Column {
  std::string name;
  ColumnValues values;
  std::vector<std::uint8_t> valid;

  ColumnType type() const noexcept;
  std::size_t size() const noexcept { return valid.size(); }
  bool is_null(std::size_t row) const { return valid[row] == 0; }
};

struct EventTable {
  std::vector<Column> columns;
  std::size_t rows = 0;

  const Column* column(std::string_view name) const noexcept;
};

inline constexpr std::string_view kCasePrefix = "case:";

/// One row per event. Trace attributes are broadcast as "case:<key>";
/// scalar values keep their native type; containers, lists and attributes
/// with nested children become JSON text.
EventTable to_event_table(const EventLog& log);

/// JSON rendering of a nested attribute, as stored in event-table cells:
/// lists/containers become an array of {"key","value","children"?} objects,
/// a scalar with nested children becomes a single such object.
std::string nested_attribute_json(const Attribute& attr);

/// RFC 4180 CSV with a header row; nulls are empty cells.
std::string to_csv(const EventTable& table);

/// {"rows":N,"columns":[{"name","type","values":[...]}]} with JSON nulls.
std::string to_columnar_json(const EventTable& table);

}  // namespace pmcore::xes
