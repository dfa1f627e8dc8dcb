#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "paq/errors.hpp"
#include "paq/partition.hpp"
#include "paq/subdist.hpp"

namespace paq {

using ActionId = std::string;

/// The single hidden action. Every automaton's action set contains it.
inline const ActionId kTau = "tau";

struct Transition {
    StateId source;
    ActionId action;
    SubDist target; // full distribution, mass exactly 1

    bool operator==(const Transition& o) const {
        return source == o.source && action == o.action && target == o.target;
    }
    bool operator!=(const Transition& o) const { return !(*this == o); }
    /// Canonical order: source, then action (tau first, others by name), then
    /// lexicographic distribution.
    bool operator<(const Transition& o) const {
        if (source != o.source) return source < o.source;
        if (action != o.action) {
            bool at = action == kTau, bt = o.action == kTau;
            if (at != bt) return at;
            return action < o.action;
        }
        return target < o.target;
    }
};

/// A finite probabilistic automaton: finite state set, finite action set with
/// the distinguished hidden action tau, a finite transition set carrying full
/// distributions, and an initial state. Immutable value; every transformation
/// returns a fresh automaton.
class Automaton {
public:
    Automaton() = default;

    Automaton(std::set<StateId> states, std::set<ActionId> actions,
              std::vector<Transition> transitions, StateId initial)
        : states_(std::move(states)),
          actions_(std::move(actions)),
          transitions_(std::move(transitions)),
          initial_(initial) {
        normalize_();
        validate_();
    }

    const std::set<StateId>& states() const { return states_; }
    const std::set<ActionId>& actions() const { return actions_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    StateId initial() const { return initial_; }

    size_t state_count() const { return states_.size(); }
    size_t transition_count() const { return transitions_.size(); }

    /// Transitions emanating from s, optionally restricted to one action.
    std::vector<Transition> from(StateId s) const {
        std::vector<Transition> out;
        for (const auto& t : transitions_)
            if (t.source == s) out.push_back(t);
        return out;
    }

    std::vector<Transition> from(StateId s, const ActionId& a) const {
        std::vector<Transition> out;
        for (const auto& t : transitions_)
            if (t.source == s && t.action == a) out.push_back(t);
        return out;
    }

    std::set<ActionId> enabled(StateId s) const {
        std::set<ActionId> out;
        for (const auto& t : transitions_)
            if (t.source == s) out.insert(t.action);
        return out;
    }

    bool has_transition(const Transition& t) const {
        return std::binary_search(transitions_.begin(), transitions_.end(), t);
    }

    bool operator==(const Automaton& o) const {
        return states_ == o.states_ && actions_ == o.actions_ &&
               transitions_ == o.transitions_ && initial_ == o.initial_;
    }
    bool operator!=(const Automaton& o) const { return !(*this == o); }

private:
    void normalize_() {
        actions_.insert(kTau);
        std::sort(transitions_.begin(), transitions_.end());
        transitions_.erase(std::unique(transitions_.begin(), transitions_.end()),
                           transitions_.end());
    }

    void validate_() const {
        if (!states_.count(initial_))
            throw Error("initial state " + std::to_string(initial_) + " not in state set");
        for (const auto& t : transitions_) {
            if (!states_.count(t.source))
                throw Error("transition source " + std::to_string(t.source) + " not in state set");
            if (!actions_.count(t.action))
                throw Error("transition action '" + t.action + "' not in action set");
            if (!t.target.is_distribution())
                throw Error("transition target from " + std::to_string(t.source) +
                            " has mass " + rat_str(t.target.mass()) + ", expected 1");
            for (const auto& [s, p] : t.target.weights())
                if (!states_.count(s))
                    throw Error("target state " + std::to_string(s) + " not in state set");
        }
    }

    std::set<StateId> states_;
    std::set<ActionId> actions_;
    std::vector<Transition> transitions_;
    StateId initial_ = 0;
};

/// Result of a disjoint union: the combined automaton plus the two canonical
/// embeddings of the operands' state spaces.
struct DisjointUnion {
    Automaton automaton;
    std::map<StateId, StateId> inj1;
    std::map<StateId, StateId> inj2;
};

namespace detail {

inline SubDist rename(const SubDist& d, const std::map<StateId, StateId>& f) {
    std::vector<std::pair<StateId, Rat>> entries;
    for (const auto& [s, p] : d.weights()) entries.emplace_back(f.at(s), p);
    return SubDist::make(entries);
}

} // namespace detail

/// Tagged union of two automata over the same action set. States of p1 keep
/// ids 1..n in sorted order, states of p2 follow as n+1..n+m; the initial
/// state is p1's image.
inline DisjointUnion disjoint_union(const Automaton& p1, const Automaton& p2) {
    if (p1.actions() != p2.actions())
        throw ActionMismatch("disjoint union requires the same action set");
    DisjointUnion out;
    StateId next = 1;
    for (StateId s : p1.states()) out.inj1.emplace(s, next++);
    for (StateId s : p2.states()) out.inj2.emplace(s, next++);

    std::set<StateId> states;
    for (const auto& [s, t] : out.inj1) states.insert(t);
    for (const auto& [s, t] : out.inj2) states.insert(t);

    std::vector<Transition> trans;
    for (const auto& t : p1.transitions())
        trans.push_back({out.inj1.at(t.source), t.action, detail::rename(t.target, out.inj1)});
    for (const auto& t : p2.transitions())
        trans.push_back({out.inj2.at(t.source), t.action, detail::rename(t.target, out.inj2)});

    out.automaton = Automaton(std::move(states), p1.actions(), std::move(trans),
                              out.inj1.at(p1.initial()));
    return out;
}

/// States reachable with positive probability from the initial state, as the
/// fixpoint of support closure.
inline std::set<StateId> reachable_states(const Automaton& p) {
    std::set<StateId> seen{p.initial()};
    std::deque<StateId> todo{p.initial()};
    while (!todo.empty()) {
        StateId s = todo.front();
        todo.pop_front();
        for (const auto& t : p.transitions()) {
            if (t.source != s) continue;
            for (const auto& [u, w] : t.target.weights())
                if (seen.insert(u).second) todo.push_back(u);
        }
    }
    return seen;
}

/// Restriction of the automaton to its reachable states and the transitions
/// among them. Idempotent.
inline Automaton reachable_fraction(const Automaton& p) {
    std::set<StateId> keep = reachable_states(p);
    std::vector<Transition> trans;
    for (const auto& t : p.transitions())
        if (keep.count(t.source)) trans.push_back(t);
    return Automaton(std::move(keep), p.actions(), std::move(trans), p.initial());
}

/// Quotient automaton: states are block representatives, each transition is
/// replaced by its block projection, duplicates collapsing at class level.
inline Automaton quotient(const Automaton& p, const Partition& r) {
    if (r.covered() != p.states())
        throw CoverMismatch("partition covers a different state set");
    std::set<StateId> states;
    for (const auto& b : r.blocks()) states.insert(b.front());
    std::vector<Transition> trans;
    for (const auto& t : p.transitions())
        trans.push_back({r.rep(t.source), t.action, class_project(t.target, r)});
    return Automaton(std::move(states), p.actions(), std::move(trans), r.rep(p.initial()));
}

/// A rescaled automaton never lets a tau transition return to its own source
/// with fractional probability: the self-mass is either 0 or 1.
inline bool is_rescaled(const Automaton& p) {
    for (const auto& t : p.transitions()) {
        if (t.action != kTau) continue;
        Rat self = t.target.at(t.source);
        if (self != 0 && self != 1) return false;
    }
    return true;
}

/// Redistributes fractional tau self-loop mass: a transition (s,tau,mu) with
/// 0 < mu(s) < 1 becomes (s,tau, (mu - s) / (1 - mu(s))). Non-tau transitions
/// and tau Dirac self-loops stay as they are. Idempotent.
inline Automaton rescale(const Automaton& p) {
    std::vector<Transition> trans;
    for (const auto& t : p.transitions()) {
        if (t.action != kTau) {
            trans.push_back(t);
            continue;
        }
        Rat self = t.target.at(t.source);
        if (self == 0 || self == 1) {
            trans.push_back(t);
            continue;
        }
        Rat factor = Rat(1) / (Rat(1) - self);
        trans.push_back({t.source, kTau, t.target.minus(t.source).scaled(factor)});
    }
    return Automaton(p.states(), p.actions(), std::move(trans), p.initial());
}

} // namespace paq
