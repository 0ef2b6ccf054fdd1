#include "pmcore/alphappp.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "pmcore/error.hpp"

namespace pmcore::alphappp {

namespace {

using Clock = std::chrono::steady_clock;

bool in_unit_interval(double v) noexcept { return v >= 0.0 && v <= 1.0; }

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void validate(const Config& cfg) {
  if (!(cfg.df_significance >= 0.0) || !std::isfinite(cfg.df_significance)) {
    throw Error(ErrorCode::InvalidConfig, "df_significance must be a finite value >= 0");
  }
  if (!in_unit_interval(cfg.balance_thresh)) {
    throw Error(ErrorCode::InvalidConfig, "balance threshold must lie in [0,1]");
  }
  if (!in_unit_interval(cfg.fitness_thresh)) {
    throw Error(ErrorCode::InvalidConfig, "fitness threshold must lie in [0,1]");
  }
  if (!in_unit_interval(cfg.replay_thresh)) {
    throw Error(ErrorCode::InvalidConfig, "replay threshold must lie in [0,1]");
  }
  if (cfg.max_candidate_set_size < 1) {
    throw Error(ErrorCode::InvalidConfig, "max_candidate_set_size must be at least 1");
  }
}

Config parse_variant(std::string_view text) {
  auto fail = [&](std::string_view segment, std::string_view why) -> Error {
    return Error(ErrorCode::ParseError, "invalid segment '" + std::string(segment) +
                                            "' in variant '" + std::string(text) + "': " +
                                            std::string(why));
  };
  std::vector<std::string_view> segments;
  std::size_t start = 0;
  for (;;) {
    const auto bar = text.find('|', start);
    segments.push_back(text.substr(start, bar == std::string_view::npos ? bar : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (segments.size() != 4) {
    throw Error(ErrorCode::ParseError,
                "variant '" + std::string(text) +
                    "' must have the form <float>|b<float>|t<float>|r<float>");
  }
  auto number = [&](std::string_view segment, std::string_view digits) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() ||
        !std::isfinite(v)) {
      throw fail(segment, "not a number");
    }
    return v;
  };
  auto prefixed = [&](std::string_view segment, char prefix) {
    if (segment.empty() || segment.front() != prefix) {
      throw fail(segment, std::string("expected prefix '") + prefix + "'");
    }
    const double v = number(segment, segment.substr(1));
    if (!in_unit_interval(v)) throw fail(segment, "threshold must lie in [0,1]");
    return v;
  };

  Config cfg;
  cfg.df_significance = number(segments[0], segments[0]);
  if (cfg.df_significance < 0) throw fail(segments[0], "significance must be >= 0");
  cfg.balance_thresh = prefixed(segments[1], 'b');
  cfg.fitness_thresh = prefixed(segments[2], 't');
  cfg.replay_thresh = prefixed(segments[3], 'r');
  return cfg;
}

std::string format_variant(const Config& cfg) {
  return format_number(cfg.df_significance) + "|b" + format_number(cfg.balance_thresh) + "|t" +
         format_number(cfg.fitness_thresh) + "|r" + format_number(cfg.replay_thresh);
}

// ---------------------------------------------------------------------------
// Directly-follows graph
// ---------------------------------------------------------------------------

Dfg build_dfg(const ActivityProjection& proj) {
  Dfg dfg;
  dfg.activity_count = proj.alphabet.size();
  for (const auto& v : proj.variants) {
    const auto& seq = v.activities;
    if (seq.empty()) continue;
    dfg.total_traces += v.count;
    dfg.start_counts[seq.front()] += v.count;
    dfg.end_counts[seq.back()] += v.count;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      dfg.activity_counts[seq[i]] += v.count;
      if (i + 1 < seq.size()) dfg.df_counts[{seq[i], seq[i + 1]}] += v.count;
    }
  }
  return dfg;
}

Dfg filter_dfg(const Dfg& dfg, double df_significance) {
  Dfg out = dfg;
  if (dfg.df_counts.empty()) return out;
  double sum = 0;
  for (const auto& [pair, n] : dfg.df_counts) sum += static_cast<double>(n);
  const auto relations = static_cast<double>(dfg.df_counts.size());
  // count >= sig * (sum / relations), kept free of the division.
  const double threshold = df_significance * sum;
  std::erase_if(out.df_counts, [&](const auto& kv) {
    return static_cast<double>(kv.second) * relations < threshold;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Candidate generation
// ---------------------------------------------------------------------------

namespace {

class CandidateEnumerator {
 public:
  CandidateEnumerator(const Dfg& dfg, std::size_t max_size)
      : n_(dfg.activity_count), max_size_(max_size), edge_(n_ * n_, 0) {
    for (const auto& [pair, count] : dfg.df_counts) {
      if (pair.first < n_ && pair.second < n_) edge_[pair.first * n_ + pair.second] = 1;
    }
  }

  std::vector<CandidatePlace> run() {
    std::vector<ActivityIndex> all(n_);
    for (std::size_t i = 0; i < n_; ++i) all[i] = static_cast<ActivityIndex>(i);
    std::vector<ActivityIndex> in_set;
    extend_inputs(0, in_set, all);
    return std::move(out_);
  }

 private:
  bool edge(ActivityIndex a, ActivityIndex b) const noexcept { return edge_[a * n_ + b] != 0; }

  bool independent_of(ActivityIndex x, const std::vector<ActivityIndex>& set) const noexcept {
    if (edge(x, x)) return false;
    return std::none_of(set.begin(), set.end(),
                        [&](ActivityIndex s) { return edge(x, s) || edge(s, x); });
  }

  // Pre-order DFS over sorted index sets; `pool` holds the DF successors
  // shared by every member of in_set (all activities while in_set is empty).
  void extend_inputs(std::size_t from, std::vector<ActivityIndex>& in_set,
                     const std::vector<ActivityIndex>& pool) {
    for (std::size_t x = from; x < n_; ++x) {
      const auto a = static_cast<ActivityIndex>(x);
      if (!independent_of(a, in_set)) continue;
      std::vector<ActivityIndex> shared;
      for (ActivityIndex b : pool) {
        if (edge(a, b)) shared.push_back(b);
      }
      if (shared.empty()) continue;
      in_set.push_back(a);
      std::vector<ActivityIndex> out_set;
      extend_outputs(0, in_set, out_set, shared);
      if (in_set.size() < max_size_) extend_inputs(x + 1, in_set, shared);
      in_set.pop_back();
    }
  }

  void extend_outputs(std::size_t from, const std::vector<ActivityIndex>& in_set,
                      std::vector<ActivityIndex>& out_set,
                      const std::vector<ActivityIndex>& pool) {
    for (std::size_t i = from; i < pool.size(); ++i) {
      const ActivityIndex b = pool[i];
      if (!independent_of(b, out_set)) continue;
      out_set.push_back(b);
      out_.push_back(CandidatePlace{in_set, out_set});
      if (out_set.size() < max_size_) extend_outputs(i + 1, in_set, out_set, pool);
      out_set.pop_back();
    }
  }

  std::size_t n_;
  std::size_t max_size_;
  std::vector<std::uint8_t> edge_;
  std::vector<CandidatePlace> out_;
};

}  // namespace

std::vector<CandidatePlace> generate_candidates(const Dfg& dfg, std::size_t max_size) {
  if (max_size < 1) throw Error(ErrorCode::InvalidConfig, "max candidate set size must be >= 1");
  return CandidateEnumerator(dfg, max_size).run();
}

// ---------------------------------------------------------------------------
// Balance filter
// ---------------------------------------------------------------------------

double imbalance(const CandidatePlace& cand, const Dfg& dfg) {
  auto mass = [&](const std::vector<ActivityIndex>& set) {
    std::uint64_t sum = 0;
    for (ActivityIndex a : set) {
      if (const auto it = dfg.activity_counts.find(a); it != dfg.activity_counts.end()) {
        sum += it->second;
      }
    }
    return sum;
  };
  const std::uint64_t in = mass(cand.in_set);
  const std::uint64_t out = mass(cand.out_set);
  const std::uint64_t hi = std::max(in, out);
  if (hi == 0) return 0.0;
  const std::uint64_t diff = in > out ? in - out : out - in;
  return static_cast<double>(diff) / static_cast<double>(hi);
}

std::vector<CandidatePlace> balance_filter(const std::vector<CandidatePlace>& cands,
                                           const Dfg& dfg, double b) {
  std::vector<CandidatePlace> out;
  for (const auto& c : cands) {
    if (imbalance(c, dfg) <= b) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Replay filter
// ---------------------------------------------------------------------------

namespace {

enum Role : std::uint8_t { kNone = 0, kProduce = 1, kConsume = 2 };

bool fits_with_roles(const std::vector<std::uint8_t>& roles,
                     const std::vector<ActivityIndex>& trace) noexcept {
  std::int64_t tokens = 0;
  for (ActivityIndex a : trace) {
    const std::uint8_t role = a < roles.size() ? roles[a] : kNone;
    if (role & kConsume) {
      if (--tokens < 0) return false;
    }
    if (role & kProduce) ++tokens;
  }
  return tokens == 0;
}

void assign_roles(std::vector<std::uint8_t>& roles, const CandidatePlace& cand, bool on) {
  for (ActivityIndex a : cand.in_set) {
    if (a < roles.size()) roles[a] = on ? (roles[a] | kProduce) : kNone;
  }
  for (ActivityIndex b : cand.out_set) {
    if (b < roles.size()) roles[b] = on ? (roles[b] | kConsume) : kNone;
  }
}

std::size_t max_index(const CandidatePlace& cand) {
  std::size_t m = 0;
  for (ActivityIndex a : cand.in_set) m = std::max<std::size_t>(m, a + 1);
  for (ActivityIndex b : cand.out_set) m = std::max<std::size_t>(m, b + 1);
  return m;
}

}  // namespace

bool variant_fits(const CandidatePlace& cand, const std::vector<ActivityIndex>& trace,
                  std::size_t alphabet_size) {
  std::vector<std::uint8_t> roles(std::max(alphabet_size, max_index(cand)), kNone);
  assign_roles(roles, cand, true);
  return fits_with_roles(roles, trace);
}

std::vector<CandidatePlace> replay_filter(const std::vector<CandidatePlace>& cands,
                                          const ActivityProjection& proj, double t, double r,
                                          unsigned threads) {
  std::uint64_t max_count = 0;
  for (const auto& v : proj.variants) max_count = std::max(max_count, v.count);
  const double min_count = t * static_cast<double>(max_count);

  std::vector<const Variant*> replayed;
  double total_weight = 0;
  for (const auto& v : proj.variants) {
    if (static_cast<double>(v.count) >= min_count) {
      replayed.push_back(&v);
      total_weight += static_cast<double>(v.count);
    }
  }

  std::size_t role_size = proj.alphabet.size();
  for (const auto& c : cands) role_size = std::max(role_size, max_index(c));

  std::vector<std::uint8_t> keep(cands.size(), 0);
  auto evaluate = [&](std::size_t i, std::vector<std::uint8_t>& roles) {
    const CandidatePlace& cand = cands[i];
    assign_roles(roles, cand, true);
    double fitting = 0;
    for (const Variant* v : replayed) {
      if (fits_with_roles(roles, v->activities)) fitting += static_cast<double>(v->count);
    }
    assign_roles(roles, cand, false);
    // With nothing to replay every candidate fits vacuously.
    keep[i] = (total_weight == 0 || fitting >= r * total_weight) ? 1 : 0;
  };

  const unsigned workers =
      std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(1, cands.size()));
  if (workers <= 1) {
    std::vector<std::uint8_t> roles(role_size, kNone);
    for (std::size_t i = 0; i < cands.size(); ++i) evaluate(i, roles);
  } else {
    constexpr std::size_t kChunk = 64;
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        std::vector<std::uint8_t> roles(role_size, kNone);
        for (;;) {
          const std::size_t begin = next.fetch_add(kChunk);
          if (begin >= cands.size()) return;
          const std::size_t end = std::min(begin + kChunk, cands.size());
          for (std::size_t i = begin; i < end; ++i) evaluate(i, roles);
        }
      });
    }
  }

  std::vector<CandidatePlace> out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (keep[i]) out.push_back(cands[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Net assembly
// ---------------------------------------------------------------------------

AcceptingPetriNet assemble_net(const std::vector<CandidatePlace>& surviving,
                               const std::vector<std::string>& alphabet,
                               const std::string& start_label, const std::string& end_label) {
  auto find = [&](const std::string& label) -> ActivityIndex {
    const auto it = std::find(alphabet.begin(), alphabet.end(), label);
    if (it == alphabet.end()) {
      throw Error(ErrorCode::InvalidLabel, "label '" + label + "' is not in the alphabet");
    }
    return static_cast<ActivityIndex>(it - alphabet.begin());
  };
  const ActivityIndex start = find(start_label);
  const ActivityIndex end = find(end_label);

  AcceptingPetriNet apn;
  std::vector<NodeId> transition_of(alphabet.size());
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (i == start || i == end) continue;
    transition_of[i] = apn.net.add_transition(alphabet[i]);
  }

  std::vector<CandidatePlace> places = surviving;
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());

  Marking final_marking;
  for (const auto& cand : places) {
    for (ActivityIndex a : cand.in_set) {
      if (a >= alphabet.size()) throw Error(ErrorCode::InvalidArgument, "candidate index out of range");
    }
    for (ActivityIndex b : cand.out_set) {
      if (b >= alphabet.size()) throw Error(ErrorCode::InvalidArgument, "candidate index out of range");
    }
    const NodeId place = apn.net.add_place();
    for (ActivityIndex a : cand.in_set) {
      if (a == start) {
        apn.initial_marking.add(place, 1);
      } else if (a != end) {
        apn.net.add_arc(transition_of[a], place);
      }
    }
    for (ActivityIndex b : cand.out_set) {
      if (b == end) {
        final_marking.add(place, 1);
      } else if (b != start) {
        apn.net.add_arc(place, transition_of[b]);
      }
    }
  }
  apn.final_markings = {std::move(final_marking)};
  return apn;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

DiscoveryResult discover_detailed(const ActivityProjection& proj, const Config& cfg) {
  validate(cfg);
  proj.check_invariants();
  const std::string start_label(kStartLabel);
  const std::string end_label(kEndLabel);

  DiscoveryResult result;
  auto t0 = Clock::now();
  const ActivityProjection wrapped = add_artificial_acts(proj, start_label, end_label);
  const Dfg full = build_dfg(wrapped);
  const Dfg dfg = filter_dfg(full, cfg.df_significance);
  auto t1 = Clock::now();
  result.timings.dfg = t1 - t0;
  result.counts.df_relations = full.df_counts.size();
  result.counts.df_relations_kept = dfg.df_counts.size();

  const auto candidates = generate_candidates(dfg, cfg.max_candidate_set_size);
  auto t2 = Clock::now();
  result.timings.candidates = t2 - t1;
  result.counts.candidates = candidates.size();

  const auto balanced = balance_filter(candidates, dfg, cfg.balance_thresh);
  auto t3 = Clock::now();
  result.timings.balance = t3 - t2;
  result.counts.after_balance = balanced.size();

  const auto replayed =
      replay_filter(balanced, wrapped, cfg.fitness_thresh, cfg.replay_thresh, cfg.threads);
  auto t4 = Clock::now();
  result.timings.replay = t4 - t3;
  result.counts.after_replay = replayed.size();

  result.net = assemble_net(replayed, wrapped.alphabet, start_label, end_label);
  result.timings.assemble = Clock::now() - t4;
  return result;
}

AcceptingPetriNet discover(const ActivityProjection& proj, const Config& cfg) {
  return discover_detailed(proj, cfg).net;
}

}  // namespace pmcore::alphappp
