#include "pmcore/petri.hpp"

#include "json_dump.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

#include "pmcore/error.hpp"

namespace pmcore {

// ---------------------------------------------------------------------------
// PetriNet
// ---------------------------------------------------------------------------

const NodeId& PetriNet::add_place(std::optional<NodeId> id) {
  if (!id) {
    std::size_t n = places_.size();
    do {
      id = "p" + std::to_string(n++);
    } while (nodes_.contains(*id));
  } else if (nodes_.contains(*id)) {
    throw Error(ErrorCode::InvalidArgument, "node id '" + *id + "' already in use");
  }
  nodes_.emplace(*id, NodeKind::Place);
  places_.push_back(Place{std::move(*id)});
  return places_.back().id;
}

const NodeId& PetriNet::add_transition(std::optional<std::string> label,
                                       std::optional<NodeId> id) {
  if (!id) {
    std::size_t n = transitions_.size();
    do {
      id = "t" + std::to_string(n++);
    } while (nodes_.contains(*id));
  } else if (nodes_.contains(*id)) {
    throw Error(ErrorCode::InvalidArgument, "node id '" + *id + "' already in use");
  }
  nodes_.emplace(*id, NodeKind::Transition);
  transitions_.push_back(Transition{std::move(*id), std::move(label)});
  return transitions_.back().id;
}

void PetriNet::add_arc(const NodeId& source, const NodeId& target, std::uint32_t weight) {
  if (weight == 0) throw Error(ErrorCode::InvalidArgument, "arc weight must be positive");
  const auto s = nodes_.find(source);
  const auto t = nodes_.find(target);
  if (s == nodes_.end() || t == nodes_.end()) {
    throw Error(ErrorCode::InvalidArgument,
                "arc " + source + " -> " + target + " has an unknown endpoint");
  }
  if (s->second == t->second) {
    throw Error(ErrorCode::InvalidArgument,
                "arc " + source + " -> " + target + " is not bipartite");
  }
  auto key = std::make_pair(source, target);
  if (auto it = arc_index_.find(key); it != arc_index_.end()) {
    arcs_[it->second].weight += weight;
    return;
  }
  arc_index_.emplace(std::move(key), arcs_.size());
  arcs_.push_back(Arc{source, target, weight});
}

PetriNet PetriNet::unchecked(std::vector<Place> places, std::vector<Transition> transitions,
                             std::vector<Arc> arcs) {
  PetriNet net;
  net.places_ = std::move(places);
  net.transitions_ = std::move(transitions);
  net.arcs_ = std::move(arcs);
  for (const auto& p : net.places_) net.nodes_.emplace(p.id, NodeKind::Place);
  for (const auto& t : net.transitions_) net.nodes_.emplace(t.id, NodeKind::Transition);
  for (std::size_t i = 0; i < net.arcs_.size(); ++i) {
    net.arc_index_.emplace(std::make_pair(net.arcs_[i].source, net.arcs_[i].target), i);
  }
  return net;
}

bool PetriNet::has_place(std::string_view id) const noexcept {
  const auto it = nodes_.find(NodeId(id));
  return it != nodes_.end() && it->second == NodeKind::Place;
}

bool PetriNet::has_transition(std::string_view id) const noexcept {
  const auto it = nodes_.find(NodeId(id));
  return it != nodes_.end() && it->second == NodeKind::Transition;
}

const Transition* PetriNet::transition(std::string_view id) const noexcept {
  for (const auto& t : transitions_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::vector<std::pair<NodeId, std::uint32_t>> PetriNet::preset(std::string_view transition) const {
  std::vector<std::pair<NodeId, std::uint32_t>> out;
  for (const auto& a : arcs_) {
    if (a.target == transition) out.emplace_back(a.source, a.weight);
  }
  return out;
}

std::vector<std::pair<NodeId, std::uint32_t>> PetriNet::postset(std::string_view transition) const {
  std::vector<std::pair<NodeId, std::uint32_t>> out;
  for (const auto& a : arcs_) {
    if (a.source == transition) out.emplace_back(a.target, a.weight);
  }
  return out;
}

bool PetriNet::operator==(const PetriNet& other) const {
  return places_ == other.places_ && transitions_ == other.transitions_ && arcs_ == other.arcs_;
}

// ---------------------------------------------------------------------------
// Marking
// ---------------------------------------------------------------------------

Marking::Marking(std::initializer_list<std::pair<const NodeId, std::uint64_t>> init) {
  for (const auto& [place, n] : init) add(place, n);
}

std::uint64_t Marking::operator[](std::string_view place) const noexcept {
  const auto it = tokens_.find(place);
  return it == tokens_.end() ? 0 : it->second;
}

void Marking::set(const NodeId& place, std::uint64_t tokens) {
  if (tokens == 0) {
    tokens_.erase(place);
  } else {
    tokens_[place] = tokens;
  }
}

void Marking::add(const NodeId& place, std::uint64_t tokens) {
  if (tokens == 0) return;
  tokens_[place] += tokens;
}

void Marking::remove(const NodeId& place, std::uint64_t tokens) {
  const std::uint64_t have = (*this)[place];
  if (have < tokens) {
    throw Error(ErrorCode::InvariantViolation,
                "place " + place + " holds " + std::to_string(have) + " tokens, cannot remove " +
                    std::to_string(tokens));
  }
  set(place, have - tokens);
}

// ---------------------------------------------------------------------------
// Semantics
// ---------------------------------------------------------------------------

namespace {

void check_marking(const PetriNet& net, const Marking& marking) {
  for (const auto& [place, n] : marking.tokens()) {
    if (!net.has_place(place)) {
      throw Error(ErrorCode::UnknownPlace, "marking references unknown place '" + place + "'");
    }
  }
}

}  // namespace

std::set<NodeId> enabled_transitions(const PetriNet& net, const Marking& marking) {
  check_marking(net, marking);
  std::map<NodeId, std::vector<std::pair<NodeId, std::uint32_t>>> inputs;
  for (const auto& t : net.transitions()) inputs[t.id];
  for (const auto& a : net.arcs()) {
    if (auto it = inputs.find(a.target); it != inputs.end()) it->second.emplace_back(a.source, a.weight);
  }
  std::set<NodeId> enabled;
  for (const auto& [t, pre] : inputs) {
    const bool ok = std::all_of(pre.begin(), pre.end(), [&](const auto& pw) {
      return marking[pw.first] >= pw.second;
    });
    if (ok) enabled.insert(t);
  }
  return enabled;
}

Marking fire(const PetriNet& net, const Marking& marking, std::string_view transition) {
  check_marking(net, marking);
  if (!net.has_transition(transition)) {
    throw Error(ErrorCode::UnknownTransition,
                "unknown transition '" + std::string(transition) + "'");
  }
  const auto pre = net.preset(transition);
  for (const auto& [place, w] : pre) {
    if (marking[place] < w) {
      throw Error(ErrorCode::NotEnabled, "transition '" + std::string(transition) +
                                             "' is not enabled: place " + place + " holds " +
                                             std::to_string(marking[place]) + " < " +
                                             std::to_string(w));
    }
  }
  Marking next = marking;
  for (const auto& [place, w] : pre) next.remove(place, w);
  for (const auto& [place, w] : net.postset(transition)) next.add(place, w);
  return next;
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::NonBipartiteArc: return "non-bipartite arc";
    case ViolationKind::DanglingEndpoint: return "dangling endpoint";
    case ViolationKind::NonPositiveWeight: return "non-positive weight";
    case ViolationKind::DuplicateNode: return "duplicate node id";
  }
  return "unknown";
}

std::vector<Violation> validate(const PetriNet& net) {
  std::vector<Violation> out;
  std::map<std::string_view, bool> is_place;  // id -> place?
  for (const auto& p : net.places()) {
    if (!is_place.emplace(p.id, true).second) {
      out.push_back({ViolationKind::DuplicateNode, "duplicate node id '" + p.id + "'"});
    }
  }
  for (const auto& t : net.transitions()) {
    if (!is_place.emplace(t.id, false).second) {
      out.push_back({ViolationKind::DuplicateNode, "duplicate node id '" + t.id + "'"});
    }
  }
  for (const auto& a : net.arcs()) {
    const std::string arc = a.source + " -> " + a.target;
    const auto s = is_place.find(a.source);
    const auto t = is_place.find(a.target);
    if (s == is_place.end() || t == is_place.end()) {
      out.push_back({ViolationKind::DanglingEndpoint, "dangling endpoint in arc " + arc});
    } else if (s->second == t->second) {
      out.push_back({ViolationKind::NonBipartiteArc, "non-bipartite arc " + arc});
    }
    if (a.weight == 0) {
      out.push_back({ViolationKind::NonPositiveWeight, "non-positive weight on arc " + arc});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool structurally_equal(const PetriNet& a, const PetriNet& b) {
  auto sorted = [](auto v, auto key) {
    std::sort(v.begin(), v.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
    return v;
  };
  auto place_key = [](const Place& p) { return p.id; };
  auto trans_key = [](const Transition& t) { return std::tie(t.id, t.label); };
  auto arc_key = [](const Arc& x) { return std::tie(x.source, x.target, x.weight); };
  return sorted(a.places(), place_key) == sorted(b.places(), place_key) &&
         sorted(a.transitions(), trans_key) == sorted(b.transitions(), trans_key) &&
         sorted(a.arcs(), arc_key) == sorted(b.arcs(), arc_key);
}

bool structurally_equal(const AcceptingPetriNet& a, const AcceptingPetriNet& b) {
  if (!structurally_equal(a.net, b.net) || !(a.initial_marking == b.initial_marking)) return false;
  auto fa = a.final_markings;
  auto fb = b.final_markings;
  auto by_tokens = [](const Marking& x, const Marking& y) { return x.tokens() < y.tokens(); };
  std::sort(fa.begin(), fa.end(), by_tokens);
  std::sort(fb.begin(), fb.end(), by_tokens);
  return fa == fb;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

using json = nlohmann::json;

json marking_json(const Marking& m) {
  json obj = json::object();
  for (const auto& [place, n] : m.tokens()) obj[place] = n;
  return obj;
}

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, what);
}

const json& require(const json& obj, const char* key, json::value_t type) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(std::string("missing field '") + key + "'");
  if (it->type() != type) schema_error(std::string("field '") + key + "' has the wrong type");
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  return require(obj, key, json::value_t::string).get<std::string>();
}

Marking parse_marking(const json& obj, const PetriNet& net, const std::string& where) {
  if (!obj.is_object()) schema_error(where + " must be an object");
  Marking m;
  for (const auto& [place, n] : obj.items()) {
    if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<std::int64_t>() >= 0)) {
      schema_error(where + ": token count for '" + place + "' must be a non-negative integer");
    }
    if (!net.has_place(place)) {
      schema_error(where + " references unknown place '" + place + "'");
    }
    m.set(place, n.get<std::uint64_t>());
  }
  return m;
}

}  // namespace

std::string to_json(const AcceptingPetriNet& apn, int indent) {
  json places = json::array();
  for (const auto& p : apn.net.places()) places.push_back(json{{"id", p.id}});
  json transitions = json::array();
  for (const auto& t : apn.net.transitions()) {
    transitions.push_back(json{{"id", t.id}, {"label", t.label ? json(*t.label) : json(nullptr)}});
  }
  json arcs = json::array();
  for (const auto& a : apn.net.arcs()) {
    arcs.push_back(json{{"source", a.source}, {"target", a.target}, {"weight", a.weight}});
  }
  json finals = json::array();
  for (const auto& m : apn.final_markings) finals.push_back(marking_json(m));
  const json doc{{"schema", std::string(kNetSchema)},
                 {"places", std::move(places)},
                 {"transitions", std::move(transitions)},
                 {"arcs", std::move(arcs)},
                 {"initial_marking", marking_json(apn.initial_marking)},
                 {"final_markings", std::move(finals)}};
  return detail::dump_json(doc, indent);
}

AcceptingPetriNet from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("net JSON does not parse: ") + e.what());
  }
  if (!doc.is_object()) schema_error("net JSON must be an object");
  if (require_string(doc, "schema") != kNetSchema) {
    schema_error("unsupported net schema, expected " + std::string(kNetSchema));
  }

  AcceptingPetriNet apn;
  try {
    for (const auto& p : require(doc, "places", json::value_t::array)) {
      if (!p.is_object()) schema_error("place entries must be objects");
      apn.net.add_place(require_string(p, "id"));
    }
    for (const auto& t : require(doc, "transitions", json::value_t::array)) {
      if (!t.is_object()) schema_error("transition entries must be objects");
      std::optional<std::string> label;
      if (const auto it = t.find("label"); it != t.end() && !it->is_null()) {
        if (!it->is_string()) schema_error("transition label must be a string or null");
        label = it->get<std::string>();
      }
      apn.net.add_transition(std::move(label), require_string(t, "id"));
    }
    for (const auto& a : require(doc, "arcs", json::value_t::array)) {
      if (!a.is_object()) schema_error("arc entries must be objects");
      std::uint32_t weight = 1;
      if (const auto it = a.find("weight"); it != a.end()) {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 1 ||
            it->get<std::int64_t>() > UINT32_MAX) {
          schema_error("arc weight must be a positive integer");
        }
        weight = it->get<std::uint32_t>();
      }
      apn.net.add_arc(require_string(a, "source"), require_string(a, "target"), weight);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaViolation) throw;
    schema_error(std::string(e.what()));
  }

  const auto im = doc.find("initial_marking");
  if (im == doc.end()) schema_error("missing field 'initial_marking'");
  apn.initial_marking = parse_marking(*im, apn.net, "initial_marking");
  const json& finals = require(doc, "final_markings", json::value_t::array);
  if (finals.empty()) schema_error("final_markings must not be empty");
  apn.final_markings.clear();
  for (std::size_t i = 0; i < finals.size(); ++i) {
    apn.final_markings.push_back(
        parse_marking(finals[i], apn.net, "final_markings[" + std::to_string(i) + "]"));
  }
  return apn;
}

// ---------------------------------------------------------------------------
// PNML
// ---------------------------------------------------------------------------

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_pnml(const AcceptingPetriNet& apn, std::string_view name) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<pnml>\n";
  out += "  <net id=\"net1\" type=\"http://www.pnml.org/version-2009/grammar/pnmlcoremodel\">\n";
  out += "    <name>\n      <text>" + xml_escape(name) + "</text>\n    </name>\n";
  out += "    <page id=\"n0\">\n";
  for (const auto& p : apn.net.places()) {
    const std::string id = xml_escape(p.id);
    out += "      <place id=\"" + id + "\">\n";
    out += "        <name>\n          <text>" + id + "</text>\n        </name>\n";
    if (const auto n = apn.initial_marking[p.id]; n > 0) {
      out += "        <initialMarking>\n          <text>" + std::to_string(n) +
             "</text>\n        </initialMarking>\n";
    }
    out += "      </place>\n";
  }
  for (const auto& t : apn.net.transitions()) {
    const std::string id = xml_escape(t.id);
    out += "      <transition id=\"" + id + "\">\n";
    out += "        <name>\n          <text>" + xml_escape(t.label ? *t.label : t.id) +
           "</text>\n        </name>\n";
    if (!t.label) {
      out += "        <toolspecific tool=\"ProM\" version=\"6.4\" activity=\"$invisible$\" "
             "localNodeID=\"" + id + "\"/>\n";
    }
    out += "      </transition>\n";
  }
  std::size_t arc_no = 0;
  for (const auto& a : apn.net.arcs()) {
    out += "      <arc id=\"a" + std::to_string(arc_no++) + "\" source=\"" + xml_escape(a.source) +
           "\" target=\"" + xml_escape(a.target) + "\">\n";
    out += "        <inscription>\n          <text>" + std::to_string(a.weight) +
           "</text>\n        </inscription>\n";
    out += "      </arc>\n";
  }
  out += "    </page>\n";
  out += "    <toolspecific tool=\"pmcore\" version=\"1\">\n";
  out += "      <finalmarkings>\n";
  for (const auto& m : apn.final_markings) {
    out += "        <marking>\n";
    for (const auto& [place, n] : m.tokens()) {
      out += "          <place idref=\"" + xml_escape(place) + "\">\n            <text>" +
             std::to_string(n) + "</text>\n          </place>\n";
    }
    out += "        </marking>\n";
  }
  out += "      </finalmarkings>\n";
  out += "    </toolspecific>\n";
  out += "  </net>\n";
  out += "</pnml>\n";
  return out;
}

}  // namespace pmcore
