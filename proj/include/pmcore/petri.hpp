#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pmcore {

using NodeId = std::string;

struct Place {
  NodeId id;
  bool operator==(const Place&) const = default;
};

/// A transition without a label is silent.
struct Transition {
  NodeId id;
  std::optional<std::string> label;
  bool operator==(const Transition&) const = default;
};

struct Arc {
  NodeId source;
  NodeId target;
  std::uint32_t weight = 1;
  bool operator==(const Arc&) const = default;
};

/// Place/transition net. Mutators keep arcs bipartite and free of duplicate
/// (source, target) pairs; `PetriNet::unchecked` exists so that validate()
/// can be exercised on arbitrary structures.
class PetriNet {
 public:
  PetriNet() = default;

  /// Adds a place with the next free sequential id "p<N>" unless an id is
  /// given. Throws InvalidArgument for an id that is already in use.
  const NodeId& add_place(std::optional<NodeId> id = std::nullopt);
  /// Same for transitions, with ids "t<N>".
  const NodeId& add_transition(std::optional<std::string> label,
                               std::optional<NodeId> id = std::nullopt);
  /// Adds weight to an existing (source, target) arc or creates it. Throws
  /// InvalidArgument for unknown endpoints, non-bipartite arcs or weight 0.
  void add_arc(const NodeId& source, const NodeId& target, std::uint32_t weight = 1);

  /// Builds a net without any structural checks.
  static PetriNet unchecked(std::vector<Place> places, std::vector<Transition> transitions,
                            std::vector<Arc> arcs);

  const std::vector<Place>& places() const noexcept { return places_; }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }

  bool has_place(std::string_view id) const noexcept;
  bool has_transition(std::string_view id) const noexcept;
  const Transition* transition(std::string_view id) const noexcept;

  /// (place, weight) pairs feeding / fed by a transition.
  std::vector<std::pair<NodeId, std::uint32_t>> preset(std::string_view transition) const;
  std::vector<std::pair<NodeId, std::uint32_t>> postset(std::string_view transition) const;

  bool operator==(const PetriNet& other) const;

 private:
  enum class NodeKind { Place, Transition };

  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::vector<Arc> arcs_;
  // Lookup indexes derived from the vectors above.
  std::unordered_map<NodeId, NodeKind> nodes_;
  std::map<std::pair<NodeId, NodeId>, std::size_t> arc_index_;
};

/// Multiset of tokens over place ids. Zero counts are never stored, so two
/// markings compare equal iff they agree on every place.
class Marking {
 public:
  Marking() = default;
  Marking(std::initializer_list<std::pair<const NodeId, std::uint64_t>> init);

  std::uint64_t operator[](std::string_view place) const noexcept;
  void set(const NodeId& place, std::uint64_t tokens);
  void add(const NodeId& place, std::uint64_t tokens);
  /// Throws InvariantViolation if fewer than `tokens` are present.
  void remove(const NodeId& place, std::uint64_t tokens);

  const std::map<NodeId, std::uint64_t, std::less<>>& tokens() const noexcept { return tokens_; }
  bool empty() const noexcept { return tokens_.empty(); }

  bool operator==(const Marking&) const = default;

 private:
  std::map<NodeId, std::uint64_t, std::less<>> tokens_;
};

struct AcceptingPetriNet {
  PetriNet net;
  Marking initial_marking;
  std::vector<Marking> final_markings{Marking{}};

  bool operator==(const AcceptingPetriNet&) const = default;
};

/// Equality ignoring the order of places, transitions and arcs.
bool structurally_equal(const PetriNet& a, const PetriNet& b);
bool structurally_equal(const AcceptingPetriNet& a, const AcceptingPetriNet& b);

/// Transitions whose every input place holds at least the arc weight.
/// Throws UnknownPlace if the marking names a place outside the net.
std::set<NodeId> enabled_transitions(const PetriNet& net, const Marking& marking);

/// Throws NotEnabled if the transition cannot fire, UnknownTransition if it
/// does not exist.
Marking fire(const PetriNet& net, const Marking& marking, std::string_view transition);

enum class ViolationKind { NonBipartiteArc, DanglingEndpoint, NonPositiveWeight, DuplicateNode };

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::string_view to_string(ViolationKind kind) noexcept;

/// Empty result means the net is well formed.
std::vector<Violation> validate(const PetriNet& net);

inline constexpr std::string_view kNetSchema = "pmcore-apn/1";

/// "pmcore-apn/1" JSON. Output is byte-stable for equal inputs.
std::string to_json(const AcceptingPetriNet& apn, int indent = -1);
/// Throws SchemaViolation.
AcceptingPetriNet from_json(std::string_view text);

/// PNML 2009 core model, one page; final markings are written as a
/// tool-specific annotation.
std::string to_pnml(const AcceptingPetriNet& apn, std::string_view name = "net");

}  // namespace pmcore
