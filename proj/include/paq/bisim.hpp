#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "paq/automaton.hpp"
#include "paq/semantics.hpp"

namespace paq {

enum class BisimKind { strong, weak };

inline const char* kind_name(BisimKind kind) {
    return kind == BisimKind::strong ? "strong" : "weak";
}

struct SplitEvent {
    StateId block; // block representative at the time of the split
    StateId x, y;  // x holds a transition y cannot match
    ActionId action;
};

struct BisimReport {
    Partition partition;
    size_t iterations = 0;
    std::vector<SplitEvent> splitter_log;
};

namespace detail {

/// States reachable through tau-transition supports, including the state
/// itself.
inline std::set<StateId> tau_closure(const Automaton& p, StateId s) {
    std::set<StateId> seen{s};
    std::vector<StateId> todo{s};
    while (!todo.empty()) {
        StateId u = todo.back();
        todo.pop_back();
        for (const auto& t : p.transitions()) {
            if (t.source != u || t.action != kTau) continue;
            for (const auto& [v, w] : t.target.weights())
                if (seen.insert(v).second) todo.push_back(v);
        }
    }
    return seen;
}

/// First split: a cheap necessary condition for bisimilarity. Strongly
/// bisimilar states enable the same actions; weakly bisimilar states can fire
/// the same external actions somewhere in their tau closure.
inline Partition initial_split(const Automaton& p, BisimKind kind) {
    std::map<std::set<ActionId>, std::vector<StateId>> groups;
    for (StateId s : p.states()) {
        std::set<ActionId> sig;
        if (kind == BisimKind::strong) {
            sig = p.enabled(s);
        } else {
            for (StateId u : tau_closure(p, s))
                for (const auto& a : p.enabled(u))
                    if (a != kTau) sig.insert(a);
        }
        groups[sig].push_back(s);
    }
    std::vector<std::vector<StateId>> blocks;
    for (auto& [sig, members] : groups) blocks.push_back(std::move(members));
    return Partition::from_blocks(std::move(blocks));
}

/// Can y answer a transition with label a and class-level target nu, judged
/// against the current candidate partition?
class MatchCache {
public:
    MatchCache(const Automaton& p, BisimKind kind) : p_(p), kind_(kind) {}

    void reset() { cache_.clear(); }

    bool matches(StateId y, const ActionId& a, const ClassDist& nu, const Partition& part) {
        auto key = std::make_tuple(y, a, nu.str());
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        bool ok;
        if (kind_ == BisimKind::strong) {
            ok = strong_match({p_, y, a, part, nu}).has_value();
        } else {
            std::optional<ActionId> label;
            if (a != kTau) label = a;
            ok = weak_match({p_, y, label, part, nu}).has_value();
        }
        cache_.emplace(std::move(key), ok);
        return ok;
    }

private:
    const Automaton& p_;
    BisimKind kind_;
    std::map<std::tuple<StateId, ActionId, std::string>, bool> cache_;
};

} // namespace detail

/// Coarsest strong or weak probabilistic bisimulation by partition
/// refinement. Starts from the enabled-action split and repeatedly splits a
/// block when one member owns a transition another member cannot match at
/// class level against the current partition. Deterministic iteration order,
/// so splitter logs are reproducible.
inline BisimReport coarsest_partition(const Automaton& p, BisimKind kind) {
    BisimReport report;
    Partition part = detail::initial_split(p, kind);
    detail::MatchCache cache(p, kind);

    bool changed = true;
    while (changed) {
        changed = false;
        ++report.iterations;
        cache.reset();
        for (size_t bi = 0; bi < part.block_count() && !changed; ++bi) {
            const auto& block = part.blocks()[bi];
            if (block.size() < 2) continue;
            for (StateId x : block) {
                for (StateId y : block) {
                    if (x == y) continue;
                    for (const auto& t : p.from(x)) {
                        ClassDist nu = class_project(t.target, part);
                        if (cache.matches(y, t.action, nu, part)) continue;
                        report.splitter_log.push_back({block.front(), x, y, t.action});
                        part = part.split_block(bi, [&](StateId z) {
                            return cache.matches(z, t.action, nu, part);
                        });
                        changed = true;
                        break;
                    }
                    if (changed) break;
                }
                if (changed) break;
            }
        }
    }
    report.partition = part;
    return report;
}

struct BisimDecision {
    bool related = false;
    Partition partition; // coarsest bisimulation on the disjoint union
    DisjointUnion du;
};

/// Two automata are bisimilar iff their initial states share a block of the
/// coarsest bisimulation on their disjoint union.
inline BisimDecision bisimilar(const Automaton& p1, const Automaton& p2, BisimKind kind) {
    BisimDecision out;
    out.du = disjoint_union(p1, p2);
    out.partition = coarsest_partition(out.du.automaton, kind).partition;
    out.related = out.partition.same_block(out.du.inj1.at(p1.initial()),
                                           out.du.inj2.at(p2.initial()));
    return out;
}

/// An automaton is a quotient iff it is isomorphic to its own quotient under
/// the coarsest bisimulation, i.e. no two distinct states are bisimilar.
inline bool is_quotient(const Automaton& p, BisimKind kind) {
    return coarsest_partition(p, kind).partition.is_discrete();
}

} // namespace paq
