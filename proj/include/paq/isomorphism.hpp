#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "paq/automaton.hpp"

namespace paq {

namespace detail {

/// Iterated structural colouring (initial flag, then out- and in-signatures to
/// a fixpoint). Colours are invariant under isomorphism: they are derived only
/// from the transition structure, never from state ids.
inline std::map<StateId, std::string> refine_colors(const Automaton& p) {
    std::map<StateId, std::string> color;
    for (StateId s : p.states()) color[s] = s == p.initial() ? "i" : "s";
    size_t classes = 1;
    for (;;) {
        std::map<StateId, std::string> sig;
        for (StateId s : p.states()) {
            std::vector<std::string> outs, ins;
            for (const auto& t : p.transitions()) {
                if (t.source == s) {
                    std::vector<std::string> parts;
                    for (const auto& [u, w] : t.target.weights())
                        parts.push_back(color.at(u) + "*" + rat_str(w));
                    std::sort(parts.begin(), parts.end());
                    std::string acc = t.action + "(";
                    for (const auto& q : parts) acc += q + ";";
                    outs.push_back(acc + ")");
                }
                if (t.target.in_support(s))
                    ins.push_back(t.action + "<" + color.at(t.source) + "*" + rat_str(t.target.at(s)));
            }
            std::sort(outs.begin(), outs.end());
            std::sort(ins.begin(), ins.end());
            std::ostringstream acc;
            acc << color.at(s) << "|";
            for (const auto& o : outs) acc << o;
            acc << "|";
            for (const auto& i : ins) acc << i;
            sig[s] = acc.str();
        }
        // Re-index signatures to short stable names to keep strings bounded.
        std::map<std::string, size_t> index;
        for (const auto& [s, g] : sig) index.emplace(g, 0);
        size_t next = 0;
        for (auto& [g, idx] : index) idx = next++;
        std::map<StateId, std::string> fresh;
        for (const auto& [s, g] : sig) fresh[s] = "c" + std::to_string(index.at(g));
        if (index.size() == classes) {
            // Stable; expose the full signature so distinct classes keep
            // distinct, iso-invariant keys.
            return sig;
        }
        classes = index.size();
        color = std::move(fresh);
    }
}

inline std::vector<std::tuple<StateId, ActionId, std::vector<std::pair<StateId, Rat>>>>
relabeled_transitions(const Automaton& p, const std::map<StateId, StateId>& label) {
    std::vector<std::tuple<StateId, ActionId, std::vector<std::pair<StateId, Rat>>>> out;
    for (const auto& t : p.transitions()) {
        std::vector<std::pair<StateId, Rat>> dist;
        for (const auto& [u, w] : t.target.weights()) dist.emplace_back(label.at(u), w);
        std::sort(dist.begin(), dist.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        out.emplace_back(label.at(t.source), t.action, std::move(dist));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        const auto& aa = std::get<1>(a);
        const auto& ba = std::get<1>(b);
        if (aa != ba) {
            bool at = aa == kTau, bt = ba == kTau;
            if (at != bt) return at;
            return aa < ba;
        }
        const auto& ad = std::get<2>(a);
        const auto& bd = std::get<2>(b);
        size_t i = 0;
        for (; i < ad.size() && i < bd.size(); ++i) {
            if (ad[i].first != bd[i].first) return ad[i].first < bd[i].first;
            if (ad[i].second != bd[i].second) return ad[i].second < bd[i].second;
        }
        return ad.size() < bd.size();
    });
    return out;
}

} // namespace detail

/// Canonical relabeling: states become 1..n with 1 the initial state, chosen
/// so that isomorphic automata produce byte-identical results. The labeling
/// fixes colour-class order (iso-invariant) and exhaustively minimises the
/// relabeled transition list over the remaining within-class freedom.
struct CanonicalForm {
    Automaton automaton;
    std::map<StateId, StateId> label; // original state -> canonical label
};

inline CanonicalForm canonical_relabel(const Automaton& p) {
    auto colors = detail::refine_colors(p);
    // Colour classes in signature order, initial state pulled out in front.
    std::map<std::string, std::vector<StateId>> classes;
    for (const auto& [s, c] : colors)
        if (s != p.initial()) classes[c].push_back(s);

    size_t combinations = 1;
    for (const auto& [c, members] : classes) {
        size_t f = 1;
        for (size_t k = 2; k <= members.size(); ++k) f *= k;
        combinations *= f;
        if (combinations > 100000)
            throw Error("state symmetry too large for canonical labeling");
    }

    std::vector<std::vector<StateId>> slots;
    for (auto& [c, members] : classes) slots.push_back(members);

    std::optional<decltype(detail::relabeled_transitions(p, {}))> best;
    std::map<StateId, StateId> best_label;
    std::map<StateId, StateId> label;

    auto evaluate = [&]() {
        auto cand = detail::relabeled_transitions(p, label);
        if (!best || cand < *best) {
            best = cand;
            best_label = label;
        }
    };

    std::function<void(size_t)> walk = [&](size_t slot) {
        if (slot == slots.size()) {
            evaluate();
            return;
        }
        std::vector<StateId>& members = slots[slot];
        std::sort(members.begin(), members.end());
        do {
            StateId next = 0;
            for (const auto& [s, l] : label) next = std::max(next, l);
            for (StateId s : members) label[s] = ++next;
            walk(slot + 1);
            for (StateId s : members) label.erase(s);
        } while (std::next_permutation(members.begin(), members.end()));
    };

    label[p.initial()] = 1;
    walk(0);

    std::set<StateId> states;
    for (const auto& [s, l] : best_label) states.insert(l);
    std::vector<Transition> trans;
    for (const auto& t : p.transitions())
        trans.push_back({best_label.at(t.source), t.action, detail::rename(t.target, best_label)});
    return {Automaton(std::move(states), p.actions(), std::move(trans), 1), best_label};
}

/// A witness bijection mapping p1 onto p2 exactly (initial to initial, the
/// transition set onto the transition set), or nullopt. Deterministic: both
/// sides are canonicalised and the canonical labelings composed.
inline std::optional<std::map<StateId, StateId>> find_isomorphism(const Automaton& p1,
                                                                  const Automaton& p2) {
    if (p1.actions() != p2.actions()) return std::nullopt;
    if (p1.state_count() != p2.state_count()) return std::nullopt;
    if (p1.transition_count() != p2.transition_count()) return std::nullopt;
    auto c1 = canonical_relabel(p1);
    auto c2 = canonical_relabel(p2);
    if (c1.automaton != c2.automaton) return std::nullopt;
    std::map<StateId, StateId> inverse2;
    for (const auto& [s, l] : c2.label) inverse2[l] = s;
    std::map<StateId, StateId> out;
    for (const auto& [s, l] : c1.label) out[s] = inverse2.at(l);
    return out;
}

inline bool iso_equal(const Automaton& p1, const Automaton& p2) {
    return find_isomorphism(p1, p2).has_value();
}

/// Pushes p through a state bijection.
inline Automaton apply_isomorphism(const Automaton& p, const std::map<StateId, StateId>& iota) {
    std::set<StateId> states;
    for (StateId s : p.states()) states.insert(iota.at(s));
    std::vector<Transition> trans;
    for (const auto& t : p.transitions())
        trans.push_back({iota.at(t.source), t.action, detail::rename(t.target, iota)});
    return Automaton(std::move(states), p.actions(), std::move(trans), iota.at(p.initial()));
}

} // namespace paq
