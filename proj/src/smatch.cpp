#include "amrex/smatch.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "amrex/errors.hpp"

namespace amrex {

namespace {

constexpr int kUnmapped = -1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Interner {
 public:
  std::uint32_t id(const std::string& s) {
    auto [it, inserted] = ids_.emplace(s, static_cast<std::uint32_t>(ids_.size()));
    return it->second;
  }
  std::size_t size() const { return ids_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Both graphs reduced to integer ids. Hypothesis triples are grouped into
// distinct triples with a multiplicity so that each group scores
// independently under an injective mapping.
class AlignmentProblem {
 public:
  struct HypTriple {
    TripleKind kind;
    int var1 = kUnmapped;
    int var2 = kUnmapped;
    std::uint32_t role = 0;
    std::uint32_t value = 0;  // concept id (instance) or constant id (attribute)
    std::size_t multiplicity = 1;
    std::size_t ceiling = 0;  // best score this triple can reach under any mapping
  };

  AlignmentProblem(const AmrGraph& premise, const AmrGraph& hypothesis,
                   const AlignmentConfig& cfg)
      : premise_(premise), hypothesis_(hypothesis), cfg_(cfg) {
    if (premise.nodes().size() > 0xffff || hypothesis.nodes().size() > 0xffff) {
      throw AlignmentError("graph too large to align");
    }
    for (const auto& node : premise.nodes()) prem_concept_.push_back(strings_.id(node.concept_name));
    for (const auto& node : hypothesis.nodes()) hyp_concept_.push_back(strings_.id(node.concept_name));
    prem_root_ = static_cast<int>(*premise.index_of(premise.root()));
    hyp_root_ = static_cast<int>(*hypothesis.index_of(hypothesis.root()));

    for (const auto& edge : premise.edges()) {
      auto src = *premise.index_of(edge.source);
      auto dst = *premise.index_of(edge.target);
      auto role = roles_.id(edge.role);
      ++relations_[relation_key(src, dst, role)];
      prem_edges_.push_back({static_cast<int>(src), static_cast<int>(dst), role});
    }
    for (const auto& attr : premise.attributes()) {
      auto src = *premise.index_of(attr.source);
      ++attributes_[attribute_key(src, roles_.id(attr.role), strings_.id(attr.value))];
    }
    std::unordered_set<std::uint32_t> prem_concepts(prem_concept_.begin(), prem_concept_.end());

    prem_total_ = premise.nodes().size() + premise.edges().size() + premise.attributes().size() +
                  (cfg.include_top ? 1 : 0);
    hyp_total_ = hypothesis.nodes().size() + hypothesis.edges().size() +
                 hypothesis.attributes().size() + (cfg.include_top ? 1 : 0);

    if (cfg.include_top) {
      HypTriple top{TripleKind::kTop, hyp_root_};
      top.value = hyp_concept_[static_cast<std::size_t>(hyp_root_)];
      top.ceiling = cfg.top_match == TopMatch::kRoot ||
                            top.value == prem_concept_[static_cast<std::size_t>(prem_root_)]
                        ? 1
                        : 0;
      triples_.push_back(top);
    }
    for (std::size_t i = 0; i < hyp_concept_.size(); ++i) {
      HypTriple t{TripleKind::kInstance, static_cast<int>(i)};
      t.value = hyp_concept_[i];
      t.ceiling = prem_concepts.count(t.value) ? 1 : 0;
      triples_.push_back(t);
    }

    // Group duplicate relations and attributes.
    std::unordered_map<std::uint64_t, std::size_t> seen_relation;
    for (const auto& edge : hypothesis.edges()) {
      auto src = *hypothesis.index_of(edge.source);
      auto dst = *hypothesis.index_of(edge.target);
      auto role = roles_.id(edge.role);
      auto key = relation_key(src, dst, role);
      if (auto it = seen_relation.find(key); it != seen_relation.end()) {
        ++triples_[it->second].multiplicity;
        continue;
      }
      seen_relation.emplace(key, triples_.size());
      HypTriple t{TripleKind::kRelation, static_cast<int>(src), static_cast<int>(dst), role};
      hyp_edges_.push_back({static_cast<int>(src), static_cast<int>(dst), role});
      triples_.push_back(t);
    }
    std::unordered_map<std::uint64_t, std::size_t> seen_attribute;
    for (const auto& attr : hypothesis.attributes()) {
      auto src = *hypothesis.index_of(attr.source);
      auto role = roles_.id(attr.role);
      auto value = strings_.id(attr.value);
      auto key = attribute_key(src, role, value);
      if (auto it = seen_attribute.find(key); it != seen_attribute.end()) {
        ++triples_[it->second].multiplicity;
        continue;
      }
      seen_attribute.emplace(key, triples_.size());
      HypTriple t{TripleKind::kAttribute, static_cast<int>(src), kUnmapped, role, value};
      triples_.push_back(t);
    }
    for (auto& t : triples_) {
      if (t.kind == TripleKind::kRelation) {
        std::size_t best = 0;
        for (const auto& [key, count] : relations_) {
          if ((key & 0xffffffffULL) == t.role) best = std::max<std::size_t>(best, count);
        }
        t.ceiling = std::min(t.multiplicity, best);
      } else if (t.kind == TripleKind::kAttribute) {
        std::size_t best = 0;
        for (const auto& [key, count] : attributes_) {
          if (((key >> 32) & 0xffffULL) == t.role && (key & 0xffffffffULL) == t.value) {
            best = std::max<std::size_t>(best, count);
          }
        }
        t.ceiling = std::min(t.multiplicity, best);
      }
    }

    by_var_.assign(hyp_concept_.size(), {});
    for (std::size_t i = 0; i < triples_.size(); ++i) {
      by_var_[static_cast<std::size_t>(triples_[i].var1)].push_back(i);
      if (triples_[i].var2 != kUnmapped && triples_[i].var2 != triples_[i].var1) {
        by_var_[static_cast<std::size_t>(triples_[i].var2)].push_back(i);
      }
    }
    if (roles_.size() > 0xffff) throw AlignmentError("too many distinct roles to align");
    stamp_.assign(triples_.size(), 0);
  }

  struct IdEdge {
    int source;
    int target;
    std::uint32_t role;
  };

  std::size_t hyp_size() const { return hyp_concept_.size(); }
  std::size_t prem_size() const { return prem_concept_.size(); }
  std::size_t hyp_total() const { return hyp_total_; }
  std::size_t prem_total() const { return prem_total_; }
  const std::vector<HypTriple>& triples() const { return triples_; }
  const std::vector<IdEdge>& hyp_edges() const { return hyp_edges_; }
  const std::vector<IdEdge>& prem_edges() const { return prem_edges_; }

  std::size_t score(const HypTriple& t, const std::vector<int>& map) const {
    int p1 = map[static_cast<std::size_t>(t.var1)];
    if (p1 == kUnmapped) return 0;
    auto up1 = static_cast<std::size_t>(p1);
    switch (t.kind) {
      case TripleKind::kTop:
        if (p1 != prem_root_) return 0;
        return cfg_.top_match == TopMatch::kRoot || prem_concept_[up1] == t.value ? 1 : 0;
      case TripleKind::kInstance:
        return prem_concept_[up1] == t.value ? 1 : 0;
      case TripleKind::kRelation: {
        int p2 = map[static_cast<std::size_t>(t.var2)];
        if (p2 == kUnmapped) return 0;
        auto it = relations_.find(relation_key(up1, static_cast<std::size_t>(p2), t.role));
        return it == relations_.end() ? 0 : std::min(t.multiplicity, it->second);
      }
      case TripleKind::kAttribute: {
        auto it = attributes_.find(attribute_key(up1, t.role, t.value));
        return it == attributes_.end() ? 0 : std::min(t.multiplicity, it->second);
      }
    }
    return 0;
  }

  std::size_t total_score(const std::vector<int>& map) const {
    std::size_t total = 0;
    for (const auto& t : triples_) total += score(t, map);
    return total;
  }

  // Score change from remapping h to p; if `other` >= 0 it currently owns p and
  // receives h's old image (a swap). `map` is restored before returning.
  long delta(std::vector<int>& map, std::size_t h, int p, int other) {
    ++epoch_;
    affected_.clear();
    auto collect = [&](std::size_t var) {
      for (std::size_t t : by_var_[var]) {
        if (stamp_[t] != epoch_) {
          stamp_[t] = epoch_;
          affected_.push_back(t);
        }
      }
    };
    collect(h);
    if (other >= 0) collect(static_cast<std::size_t>(other));
    long before = 0;
    for (std::size_t t : affected_) before += static_cast<long>(score(triples_[t], map));
    int old = map[h];
    map[h] = p;
    if (other >= 0) map[static_cast<std::size_t>(other)] = old;
    long after = 0;
    for (std::size_t t : affected_) after += static_cast<long>(score(triples_[t], map));
    map[h] = old;
    if (other >= 0) map[static_cast<std::size_t>(other)] = p;
    return after - before;
  }

  std::vector<int> greedy_start() const {
    const std::size_t hn = hyp_size();
    const std::size_t pn = prem_size();
    std::vector<int> map(hn, kUnmapped);
    std::vector<bool> used(pn, false);
    auto assign = [&](std::size_t h, std::size_t p) {
      map[h] = static_cast<int>(p);
      used[p] = true;
    };
    for (std::size_t h = 0; h < hn; ++h) {
      for (std::size_t p = 0; p < pn; ++p) {
        if (!used[p] && prem_concept_[p] == hyp_concept_[h]) {
          assign(h, p);
          break;
        }
      }
    }
    for (const auto& he : hyp_edges_) {
      auto h1 = static_cast<std::size_t>(he.source);
      auto h2 = static_cast<std::size_t>(he.target);
      if (h1 == h2 || map[h1] != kUnmapped || map[h2] != kUnmapped) continue;
      for (const auto& pe : prem_edges_) {
        auto p1 = static_cast<std::size_t>(pe.source);
        auto p2 = static_cast<std::size_t>(pe.target);
        if (pe.role == he.role && p1 != p2 && !used[p1] && !used[p2]) {
          assign(h1, p1);
          assign(h2, p2);
          break;
        }
      }
    }
    std::size_t next = 0;
    for (std::size_t h = 0; h < hn; ++h) {
      if (map[h] != kUnmapped) continue;
      while (next < pn && used[next]) ++next;
      if (next == pn) break;
      assign(h, next);
    }
    return map;
  }

  std::vector<int> random_start(std::mt19937_64& rng) const {
    const std::size_t hn = hyp_size();
    const std::size_t pn = prem_size();
    std::vector<int> slots(std::max(hn, pn), kUnmapped);
    for (std::size_t p = 0; p < pn; ++p) slots[p] = static_cast<int>(p);
    for (std::size_t i = slots.size(); i > 1; --i) {
      std::swap(slots[i - 1], slots[rng() % i]);
    }
    slots.resize(hn);
    return slots;
  }

  VariableMapping to_mapping(const std::vector<int>& map) const {
    VariableMapping mapping;
    for (std::size_t h = 0; h < map.size(); ++h) {
      if (map[h] == kUnmapped) continue;
      mapping.pairs.emplace_back(hypothesis_.nodes()[h].variable,
                                 premise_.nodes()[static_cast<std::size_t>(map[h])].variable);
    }
    return mapping;
  }

  SmatchResult result(const std::vector<int>& map, std::size_t matched) const {
    SmatchResult r;
    r.mapping = to_mapping(map);
    r.matched = matched;
    r.hyp_total = hyp_total_;
    r.prem_total = prem_total_;
    r.precision = hyp_total_ == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(hyp_total_);
    r.recall = prem_total_ == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(prem_total_);
    r.f1 = r.precision + r.recall == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
  }

 private:

  static std::uint64_t relation_key(std::size_t src, std::size_t dst, std::uint32_t role) {
    return (static_cast<std::uint64_t>(src) << 48) | (static_cast<std::uint64_t>(dst) << 32) | role;
  }
  static std::uint64_t attribute_key(std::size_t src, std::uint32_t role, std::uint32_t value) {
    return (static_cast<std::uint64_t>(src) << 48) |
           (static_cast<std::uint64_t>(role) << 32) | value;
  }

  const AmrGraph& premise_;
  const AmrGraph& hypothesis_;
  AlignmentConfig cfg_;
  Interner strings_;
  Interner roles_;
  std::vector<std::uint32_t> prem_concept_;
  std::vector<std::uint32_t> hyp_concept_;
  int prem_root_ = 0;
  int hyp_root_ = 0;
  std::unordered_map<std::uint64_t, std::size_t> relations_;
  std::unordered_map<std::uint64_t, std::size_t> attributes_;
  std::vector<IdEdge> prem_edges_;
  std::vector<IdEdge> hyp_edges_;
  std::vector<HypTriple> triples_;
  std::vector<std::vector<std::size_t>> by_var_;
  std::vector<std::size_t> stamp_;
  std::vector<std::size_t> affected_;
  std::size_t epoch_ = 0;
  std::size_t prem_total_ = 0;
  std::size_t hyp_total_ = 0;
};

// Remaps h to p; whoever owned p takes h's old image.
void apply_move(std::vector<int>& map, std::vector<int>& owner, std::size_t h, int p) {
  auto up = static_cast<std::size_t>(p);
  int other = owner[up];
  int old = map[h];
  map[h] = p;
  owner[up] = static_cast<int>(h);
  if (other >= 0) {
    map[static_cast<std::size_t>(other)] = old;
    if (old != kUnmapped) owner[static_cast<std::size_t>(old)] = other;
  } else if (old != kUnmapped) {
    owner[static_cast<std::size_t>(old)] = kUnmapped;
  }
}

// Steepest ascent over single moves and swaps. When those stall, both ends of
// a hypothesis relation are moved onto a premise edge with the same role at
// once; a relation is often worth nothing until both ends agree.
std::size_t climb(AlignmentProblem& problem, std::vector<int>& map) {
  const std::size_t hn = problem.hyp_size();
  const std::size_t pn = problem.prem_size();
  std::vector<int> owner(pn, kUnmapped);
  for (std::size_t h = 0; h < hn; ++h) {
    if (map[h] != kUnmapped) owner[static_cast<std::size_t>(map[h])] = static_cast<int>(h);
  }
  std::size_t current = problem.total_score(map);
  for (;;) {
    long best_gain = 0;
    std::size_t best_h = 0;
    int best_p = kUnmapped;
    for (std::size_t h = 0; h < hn; ++h) {
      for (std::size_t p = 0; p < pn; ++p) {
        if (map[h] == static_cast<int>(p)) continue;
        long gain = problem.delta(map, h, static_cast<int>(p), owner[p]);
        if (gain > best_gain) {
          best_gain = gain;
          best_h = h;
          best_p = static_cast<int>(p);
        }
      }
    }
    if (best_gain > 0) {
      apply_move(map, owner, best_h, best_p);
      current += static_cast<std::size_t>(best_gain);
      continue;
    }

    std::size_t best_score = current;
    std::vector<int> best_map, best_owner;
    for (const auto& he : problem.hyp_edges()) {
      if (he.source == he.target) continue;
      auto h1 = static_cast<std::size_t>(he.source);
      auto h2 = static_cast<std::size_t>(he.target);
      for (const auto& pe : problem.prem_edges()) {
        if (pe.role != he.role || pe.source == pe.target) continue;
        if (map[h1] == pe.source && map[h2] == pe.target) continue;
        std::vector<int> m = map, o = owner;
        apply_move(m, o, h1, pe.source);
        apply_move(m, o, h2, pe.target);
        std::size_t s = problem.total_score(m);
        if (s > best_score) {
          best_score = s;
          best_map = std::move(m);
          best_owner = std::move(o);
        }
      }
    }
    if (best_score <= current) break;
    map = std::move(best_map);
    owner = std::move(best_owner);
    current = best_score;
  }
  return current;
}

}  // namespace

std::size_t matched_triples(const AmrGraph& premise, const AmrGraph& hypothesis,
                            const VariableMapping& mapping, const AlignmentConfig& cfg) {
  AlignmentProblem problem(premise, hypothesis, cfg);
  std::vector<int> map(hypothesis.nodes().size(), kUnmapped);
  std::vector<bool> used(premise.nodes().size(), false);
  for (const auto& [hyp_var, prem_var] : mapping.pairs) {
    auto h = hypothesis.index_of(hyp_var);
    auto p = premise.index_of(prem_var);
    if (!h) throw AlignmentError("mapping names unknown hypothesis variable '" + hyp_var + "'");
    if (!p) throw AlignmentError("mapping names unknown premise variable '" + prem_var + "'");
    if (map[*h] != kUnmapped) {
      throw AlignmentError("hypothesis variable '" + hyp_var + "' is mapped twice");
    }
    if (used[*p]) throw AlignmentError("premise variable '" + prem_var + "' is mapped twice");
    map[*h] = static_cast<int>(*p);
    used[*p] = true;
  }
  return problem.total_score(map);
}

SmatchResult align_hill_climb(const AmrGraph& premise, const AmrGraph& hypothesis,
                              const AlignmentConfig& cfg) {
  if (cfg.restarts < 1) throw AlignmentError("restarts must be at least 1");
  AlignmentProblem problem(premise, hypothesis, cfg);
  std::vector<int> best_map;
  std::size_t best = 0;
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<int> map;
    if (restart == 0) {
      map = problem.greedy_start();
    } else {
      std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(restart))));
      map = problem.random_start(rng);
    }
    std::size_t score = climb(problem, map);
    if (best_map.empty() || score > best) {
      best = score;
      best_map = std::move(map);
    }
    if (best == problem.hyp_total()) break;
  }
  return problem.result(best_map, best);
}

SmatchResult align_exhaustive(const AmrGraph& premise, const AmrGraph& hypothesis,
                              const AlignmentConfig& cfg) {
  if (hypothesis.nodes().size() > kExhaustiveMaxHypothesisNodes ||
      premise.nodes().size() > kExhaustiveMaxPremiseNodes) {
    throw AlignmentError("exhaustive alignment limited to " +
                         std::to_string(kExhaustiveMaxHypothesisNodes) + " hypothesis and " +
                         std::to_string(kExhaustiveMaxPremiseNodes) + " premise nodes");
  }
  AlignmentProblem problem(premise, hypothesis, cfg);
  const std::size_t hn = problem.hyp_size();
  const std::size_t pn = problem.prem_size();
  const auto& triples = problem.triples();

  // A triple is decided once its highest-index variable is assigned.
  std::vector<std::vector<std::size_t>> decided_at(hn);
  std::vector<std::size_t> ceiling_from(hn + 1, 0);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    auto last = static_cast<std::size_t>(std::max(triples[i].var1, triples[i].var2));
    decided_at[last].push_back(i);
    ceiling_from[last] += triples[i].ceiling;
  }
  for (std::size_t h = hn; h-- > 0;) ceiling_from[h] += ceiling_from[h + 1];

  std::vector<int> map(hn, kUnmapped);
  std::vector<bool> used(pn, false);
  std::vector<int> best_map = map;
  std::size_t best = 0;
  bool have_best = false;

  auto search = [&](auto&& self, std::size_t h, std::size_t score) -> void {
    if (h == hn) {
      if (!have_best || score > best) {
        best = score;
        best_map = map;
        have_best = true;
      }
      return;
    }
    if (have_best && score + ceiling_from[h] <= best) return;
    auto place = [&](int p) {
      map[h] = p;
      std::size_t gained = 0;
      for (std::size_t t : decided_at[h]) gained += problem.score(triples[t], map);
      self(self, h + 1, score + gained);
      map[h] = kUnmapped;
    };
    for (std::size_t p = 0; p < pn; ++p) {
      if (used[p]) continue;
      used[p] = true;
      place(static_cast<int>(p));
      used[p] = false;
    }
    place(kUnmapped);
  };
  search(search, 0, 0);
  return problem.result(best_map, best);
}

SmatchResult smatch_precision(const AmrGraph& premise, const AmrGraph& hypothesis,
                              const AlignmentConfig& cfg) {
  return align_hill_climb(premise, hypothesis, cfg);
}

std::vector<std::string> mapping_lines(const AmrGraph& premise, const AmrGraph& hypothesis,
                                       const VariableMapping& mapping) {
  std::vector<std::string> lines;
  lines.reserve(mapping.pairs.size());
  for (const auto& [hyp_var, prem_var] : mapping.pairs) {
    lines.push_back(hyp_var + "(" + hypothesis.concept_of(hyp_var) + ") --> " + prem_var + "(" +
                    premise.concept_of(prem_var) + ")");
  }
  return lines;
}

}  // namespace amrex
