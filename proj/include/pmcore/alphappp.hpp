#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmcore/event_log.hpp"
#include "pmcore/petri.hpp"

namespace pmcore::alphappp {

using ActivityPair = std::pair<ActivityIndex, ActivityIndex>;

/// Directly-follows graph of a projection, weighted by variant counts.
struct Dfg {
  std::size_t activity_count = 0;  // alphabet size
  std::map<ActivityPair, std::uint64_t> df_counts;
  std::map<ActivityIndex, std::uint64_t> activity_counts;
  std::map<ActivityIndex, std::uint64_t> start_counts;
  std::map<ActivityIndex, std::uint64_t> end_counts;
  std::uint64_t total_traces = 0;

  bool has_edge(ActivityIndex a, ActivityIndex b) const noexcept {
    return df_counts.contains({a, b});
  }
  bool operator==(const Dfg&) const = default;
};

struct Config {
  double df_significance = 2.0;
  double balance_thresh = 0.5;
  double fitness_thresh = 0.5;
  double replay_thresh = 0.5;
  std::size_t max_candidate_set_size = 3;
  /// Worker threads for the replay stage; 0 means all hardware threads.
  unsigned threads = 0;

  bool operator==(const Config&) const = default;
};

/// Throws InvalidConfig when a threshold is out of range.
void validate(const Config& cfg);

/// Parses "<float>|b<float>|t<float>|r<float>", e.g. "2.0|b0.5|t0.5|r0.5".
/// Thread count and candidate set size keep their defaults. Throws
/// ParseError naming the offending segment.
Config parse_variant(std::string_view text);

/// Inverse of parse_variant for the four thresholds.
std::string format_variant(const Config& cfg);

/// A place candidate: inputs A feed the place, outputs B consume from it.
/// Both sets are sorted, duplicate-free and non-empty.
struct CandidatePlace {
  std::vector<ActivityIndex> in_set;
  std::vector<ActivityIndex> out_set;

  auto operator<=>(const CandidatePlace&) const = default;
};

Dfg build_dfg(const ActivityProjection& proj);

/// Keeps relation (a,b) iff its count >= df_significance * mean count of all
/// relations. Activity, start and end counts are untouched.
Dfg filter_dfg(const Dfg& dfg, double df_significance);

/// All (A,B) with 1 <= |A|,|B| <= max_size where A x B consists of DF
/// relations and neither A x A nor B x B contains one. Sorted ascending.
std::vector<CandidatePlace> generate_candidates(const Dfg& dfg, std::size_t max_size);

/// |sum_A count - sum_B count| / max(sum_A, sum_B), from activity counts only.
double imbalance(const CandidatePlace& cand, const Dfg& dfg);

std::vector<CandidatePlace> balance_filter(const std::vector<CandidatePlace>& cands,
                                           const Dfg& dfg, double b);

/// True iff replaying `trace` on the place never underflows and ends empty.
bool variant_fits(const CandidatePlace& cand, const std::vector<ActivityIndex>& trace,
                  std::size_t alphabet_size);

/// Keeps candidates whose count-weighted fraction of fitting variants is at
/// least r. Variants rarer than t * (most frequent variant count) are not
/// replayed. Output order follows input order for any thread count.
std::vector<CandidatePlace> replay_filter(const std::vector<CandidatePlace>& cands,
                                          const ActivityProjection& proj, double t, double r,
                                          unsigned threads = 1);

/// Builds the accepting net: one labeled transition per non-artificial
/// activity (ids t0.. in alphabet order), one place per distinct candidate
/// (ids p0.. in candidate order). A place whose input set holds the start
/// label is marked initially; one whose output set holds the end label is
/// marked in the final marking. Throws InvalidLabel if either label is not
/// in the alphabet.
AcceptingPetriNet assemble_net(const std::vector<CandidatePlace>& surviving,
                               const std::vector<std::string>& alphabet,
                               const std::string& start_label, const std::string& end_label);

inline constexpr std::string_view kStartLabel = "__START";
inline constexpr std::string_view kEndLabel = "__END";

struct StageTimings {
  std::chrono::duration<double> dfg{};
  std::chrono::duration<double> candidates{};
  std::chrono::duration<double> balance{};
  std::chrono::duration<double> replay{};
  std::chrono::duration<double> assemble{};
};

struct StageCounts {
  std::size_t df_relations = 0;
  std::size_t df_relations_kept = 0;
  std::size_t candidates = 0;
  std::size_t after_balance = 0;
  std::size_t after_replay = 0;
};

struct DiscoveryResult {
  AcceptingPetriNet net;
  StageTimings timings;
  StageCounts counts;
};

/// Full pipeline: artificial start/end, DFG, DF filter, candidates, balance
/// filter, replay filter, net assembly.
DiscoveryResult discover_detailed(const ActivityProjection& proj, const Config& cfg);

AcceptingPetriNet discover(const ActivityProjection& proj, const Config& cfg);

}  // namespace pmcore::alphappp
