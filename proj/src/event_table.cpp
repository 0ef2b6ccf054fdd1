#include <charconv>
#include <unordered_map>

#include <json.hpp>

#include "json_dump.hpp"
#include "hash.hpp"
#include "pmcore/xes.hpp"

namespace pmcore::xes {

namespace {

using json = nlohmann::json;

json render_attribute(const Attribute& attr);

json render_items(const std::vector<Attribute>& items) {
  json arr = json::array();
  for (const auto& a : items) arr.push_back(render_attribute(a));
  return arr;
}

json render_items(const Attributes& items) {
  json arr = json::array();
  for (const auto& a : items) arr.push_back(render_attribute(a));
  return arr;
}

json render_value(const AttributeValue& value) {
  struct Visitor {
    json operator()(const std::string& s) const { return s; }
    json operator()(std::int64_t i) const { return i; }
    json operator()(double d) const { return d; }
    json operator()(bool b) const { return b; }
    json operator()(Timestamp t) const { return format_timestamp(t); }
    json operator()(const Identifier& id) const { return id.text; }
    json operator()(const AttributeList& l) const { return render_items(l.items); }
    json operator()(const AttributeMap& m) const { return render_items(m.entries); }
  };
  return std::visit(Visitor{}, value.data);
}

json render_attribute(const Attribute& attr) {
  json obj = json::object();
  obj["key"] = attr.key;
  obj["value"] = render_value(attr.value);
  if (!attr.children.empty()) obj["children"] = render_items(attr.children);
  return obj;
}

bool is_nested(const Attribute& attr) noexcept {
  return attr.value.is_container() || !attr.children.empty();
}

ColumnType scalar_type(const AttributeValue& v) noexcept {
  switch (v.data.index()) {
    case 1: return ColumnType::Integer;
    case 2: return ColumnType::Float;
    case 3: return ColumnType::Boolean;
    case 4: return ColumnType::Timestamp;
    default: return ColumnType::Text;
  }
}

ColumnType cell_type(const Attribute& attr) noexcept {
  return is_nested(attr) ? ColumnType::Text : scalar_type(attr.value);
}

ColumnValues make_values(ColumnType type, std::size_t rows) {
  switch (type) {
    case ColumnType::Text: return std::vector<std::string>(rows);
    case ColumnType::Integer: return std::vector<std::int64_t>(rows);
    case ColumnType::Float: return std::vector<double>(rows);
    case ColumnType::Boolean: return std::vector<std::uint8_t>(rows);
    case ColumnType::Timestamp: return std::vector<Timestamp>(rows);
  }
  return std::vector<std::string>(rows);
}

void store(Column& col, std::size_t row, const Attribute& attr) {
  col.valid[row] = 1;
  if (auto* text = std::get_if<std::vector<std::string>>(&col.values)) {
    if (is_nested(attr)) {
      (*text)[row] = nested_attribute_json(attr);
    } else if (const auto* s = attr.value.get_if<std::string>()) {
      (*text)[row] = *s;
    } else {
      (*text)[row] = to_text(attr.value);
    }
    return;
  }
  std::visit(
      [&](auto& vec) {
        using Vec = std::decay_t<decltype(vec)>;
        using Elem = typename Vec::value_type;
        if constexpr (std::is_same_v<Elem, std::int64_t>) {
          vec[row] = *attr.value.get_if<std::int64_t>();
        } else if constexpr (std::is_same_v<Elem, double>) {
          vec[row] = *attr.value.get_if<double>();
        } else if constexpr (std::is_same_v<Elem, std::uint8_t>) {
          vec[row] = *attr.value.get_if<bool>() ? 1 : 0;
        } else if constexpr (std::is_same_v<Elem, Timestamp>) {
          vec[row] = *attr.value.get_if<Timestamp>();
        }
      },
      col.values);
}

struct ColumnSpec {
  std::string name;
  ColumnType type;
  bool mixed = false;
};

using KeyIndex =
    std::unordered_map<std::string, std::size_t, detail::StringHash, std::equal_to<>>;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void append_csv_field(std::string& out, std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    out += s;
    return;
  }
  out += '"';
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

std::string_view to_string(ColumnType type) noexcept {
  switch (type) {
    case ColumnType::Text: return "text";
    case ColumnType::Integer: return "integer";
    case ColumnType::Float: return "float";
    case ColumnType::Boolean: return "boolean";
    case ColumnType::Timestamp: return "timestamp";
  }
  return "text";
}

ColumnType Column::type() const noexcept {
  switch (values.index()) {
    case 1: return ColumnType::Integer;
    case 2: return ColumnType::Float;
    case 3: return ColumnType::Boolean;
    case 4: return ColumnType::Timestamp;
    default: return ColumnType::Text;
  }
}

const Column* EventTable::column(std::string_view name) const noexcept {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string nested_attribute_json(const Attribute& attr) {
  if (attr.children.empty()) {
    if (const auto* l = attr.value.get_if<AttributeList>()) return detail::dump_json(render_items(l->items));
    if (const auto* m = attr.value.get_if<AttributeMap>()) return detail::dump_json(render_items(m->entries));
  }
  return detail::dump_json(render_attribute(attr));
}

EventTable to_event_table(const EventLog& log) {
  // Pass 1: column set and types, in first-appearance order.
  std::vector<ColumnSpec> case_specs;
  std::vector<ColumnSpec> event_specs;
  KeyIndex case_index;
  KeyIndex event_index;
  auto observe = [](std::vector<ColumnSpec>& specs, KeyIndex& index, const Attribute& attr,
                    std::string_view prefix) {
    const ColumnType t = cell_type(attr);
    auto it = index.find(std::string_view(attr.key));
    if (it == index.end()) {
      index.emplace(attr.key, specs.size());
      specs.push_back(ColumnSpec{std::string(prefix) + attr.key, t});
    } else if (specs[it->second].type != t) {
      specs[it->second].mixed = true;
    }
  };

  std::size_t rows = 0;
  for (const auto& trace : log.traces) {
    if (!trace.events.empty()) {
      for (const auto& a : trace.attributes) observe(case_specs, case_index, a, kCasePrefix);
    }
    for (const auto& event : trace.events) {
      for (const auto& a : event.attributes) observe(event_specs, event_index, a, "");
    }
    rows += trace.events.size();
  }

  // Final column order: mandatory columns first, then case, then event.
  struct Slot {
    bool is_case;
    std::size_t spec;
  };
  std::vector<Slot> order;
  auto take = [&](KeyIndex& index, bool is_case, std::string_view key) {
    if (auto it = index.find(key); it != index.end()) order.push_back(Slot{is_case, it->second});
  };
  take(case_index, true, kActivityKey);
  take(event_index, false, kActivityKey);
  take(event_index, false, kTimestampKey);
  const std::size_t mandatory = order.size();
  auto already = [&](bool is_case, std::size_t spec) {
    for (std::size_t i = 0; i < mandatory; ++i) {
      if (order[i].is_case == is_case && order[i].spec == spec) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < case_specs.size(); ++i) {
    if (!already(true, i)) order.push_back(Slot{true, i});
  }
  for (std::size_t i = 0; i < event_specs.size(); ++i) {
    if (!already(false, i)) order.push_back(Slot{false, i});
  }

  EventTable table;
  table.rows = rows;
  table.columns.reserve(order.size());
  std::vector<std::size_t> case_col(case_specs.size());
  std::vector<std::size_t> event_col(event_specs.size());
  for (const Slot& s : order) {
    const ColumnSpec& spec = s.is_case ? case_specs[s.spec] : event_specs[s.spec];
    const ColumnType type = spec.mixed ? ColumnType::Text : spec.type;
    (s.is_case ? case_col : event_col)[s.spec] = table.columns.size();
    table.columns.push_back(Column{spec.name, make_values(type, rows),
                                   std::vector<std::uint8_t>(rows, 0)});
  }

  // Pass 2: fill.
  std::size_t row = 0;
  for (const auto& trace : log.traces) {
    for (const auto& event : trace.events) {
      for (const auto& a : trace.attributes) {
        store(table.columns[case_col[case_index.find(std::string_view(a.key))->second]], row, a);
      }
      for (const auto& a : event.attributes) {
        store(table.columns[event_col[event_index.find(std::string_view(a.key))->second]], row,
              a);
      }
      ++row;
    }
  }
  return table;
}

std::string to_csv(const EventTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    append_csv_field(out, table.columns[c].name);
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      const Column& col = table.columns[c];
      if (col.is_null(r)) continue;
      std::visit(
          [&](const auto& vec) {
            using Elem = typename std::decay_t<decltype(vec)>::value_type;
            if constexpr (std::is_same_v<Elem, std::string>) {
              append_csv_field(out, vec[r]);
            } else if constexpr (std::is_same_v<Elem, std::int64_t>) {
              out += std::to_string(vec[r]);
            } else if constexpr (std::is_same_v<Elem, double>) {
              out += format_double(vec[r]);
            } else if constexpr (std::is_same_v<Elem, std::uint8_t>) {
              out += vec[r] ? "true" : "false";
            } else {
              out += format_timestamp(vec[r]);
            }
          },
          col.values);
    }
    out += '\n';
  }
  return out;
}

std::string to_columnar_json(const EventTable& table) {
  json cols = json::array();
  for (const auto& col : table.columns) {
    json values = json::array();
    std::visit(
        [&](const auto& vec) {
          using Elem = typename std::decay_t<decltype(vec)>::value_type;
          for (std::size_t r = 0; r < vec.size(); ++r) {
            if (col.is_null(r)) {
              values.push_back(nullptr);
            } else if constexpr (std::is_same_v<Elem, std::uint8_t>) {
              values.push_back(vec[r] != 0);
            } else if constexpr (std::is_same_v<Elem, Timestamp>) {
              values.push_back(format_timestamp(vec[r]));
            } else {
              values.push_back(vec[r]);
            }
          }
        },
        col.values);
    cols.push_back(json{{"name", col.name},
                        {"type", std::string(to_string(col.type()))},
                        {"values", std::move(values)}});
  }
  return detail::dump_json(json{{"rows", table.rows}, {"columns", std::move(cols)}});
}

}  // namespace pmcore::xes
