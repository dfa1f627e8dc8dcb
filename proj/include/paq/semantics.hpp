#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "paq/automaton.hpp"
#include "paq/lp.hpp"
#include "paq/partition.hpp"

namespace paq {

/// A reachability question at class level: can `source` reach the block
/// distribution `target` by a combined (strong) or weak combined transition
/// labelled `label`? An empty label means the internal trace (any number of
/// tau steps, no external action).
struct TransitionQuery {
    Automaton automaton;
    StateId source = 0;
    std::optional<ActionId> label; // nullopt = internal trace
    Partition partition;
    ClassDist target; // mass 1, keyed by block representatives

    void validate() const {
        if (!automaton.states().count(source))
            throw Error("query source " + std::to_string(source) + " not a state");
        if (partition.covered() != automaton.states())
            throw CoverMismatch("query partition does not cover the automaton");
        if (target.mass() != 1)
            throw Error("query target has mass " + rat_str(target.mass()) + ", expected 1");
        for (const auto& [b, p] : target.weights())
            if (partition.rep(b) != b)
                throw Error("target key " + std::to_string(b) + " is not a block representative");
    }
};

struct StrongWitness {
    /// Convex coefficients over the enabled (source, label) transitions, in
    /// canonical transition order. Nonnegative, summing to one.
    std::vector<std::pair<Transition, Rat>> weights;
};

struct WeakWitness {
    /// Expected transition frequencies. Phase 0 precedes the external label
    /// (and is the only phase for internal queries), phase 1 follows it.
    std::vector<std::tuple<Transition, int, Rat>> frequencies;
    /// Stopping mass per state; class sums equal the target exactly.
    std::map<StateId, Rat> stop;
};

namespace detail {

inline std::vector<StateId> block_reps(const Partition& r) {
    std::vector<StateId> reps;
    for (const auto& b : r.blocks()) reps.push_back(b.front());
    return reps;
}

inline std::vector<Rat> class_dist_vector(const ClassDist& d, const std::vector<StateId>& reps) {
    std::vector<Rat> v;
    v.reserve(reps.size());
    for (StateId r : reps) v.push_back(d.at(r));
    return v;
}

/// Flow system for weak combined transitions, shared between the solver and
/// witness re-verification. One nonnegative frequency variable per
/// (tau transition, phase), one per transition carrying the external label,
/// and one stop variable per state. Balance per state and phase:
/// inflow + initial = outflow + stop, with stopping allowed only after the
/// label (always, for internal queries). Per block, stop mass must equal the
/// target exactly.
class WeakFlowSystem {
public:
    WeakFlowSystem(const TransitionQuery& q) : q_(q) {
        internal_ = !q.label || *q.label == kTau;
        const auto& trans = q.automaton.transitions();
        for (size_t i = 0; i < trans.size(); ++i) {
            if (trans[i].action == kTau) tau_idx_.push_back(i);
            else if (!internal_ && trans[i].action == *q.label) label_idx_.push_back(i);
        }
        for (StateId s : q.automaton.states()) states_.push_back(s);

        size_t n = 0;
        tau0_base_ = n; n += tau_idx_.size();
        if (!internal_) {
            label_base_ = n; n += label_idx_.size();
            tau1_base_ = n; n += tau_idx_.size();
        }
        stop_base_ = n; n += states_.size();
        sys_ = LinearSystem(n);
        build_();
    }

    const LinearSystem& system() const { return *sys_; }

    std::optional<WeakWitness> solve() const {
        auto result = feasible(*sys_);
        if (!result.feasible) return std::nullopt;
        return decode(result.witness);
    }

    WeakWitness decode(const std::vector<Rat>& x) const {
        WeakWitness w;
        const auto& trans = q_.automaton.transitions();
        for (size_t k = 0; k < tau_idx_.size(); ++k)
            if (x[tau0_base_ + k] != 0)
                w.frequencies.emplace_back(trans[tau_idx_[k]], 0, x[tau0_base_ + k]);
        if (!internal_) {
            for (size_t k = 0; k < label_idx_.size(); ++k)
                if (x[label_base_ + k] != 0)
                    w.frequencies.emplace_back(trans[label_idx_[k]], 0, x[label_base_ + k]);
            for (size_t k = 0; k < tau_idx_.size(); ++k)
                if (x[tau1_base_ + k] != 0)
                    w.frequencies.emplace_back(trans[tau_idx_[k]], 1, x[tau1_base_ + k]);
        }
        for (size_t i = 0; i < states_.size(); ++i)
            if (x[stop_base_ + i] != 0) w.stop.emplace(states_[i], x[stop_base_ + i]);
        return w;
    }

    /// Re-encodes a witness as a variable assignment; entries the witness does
    /// not mention stay zero. Frequencies for an external-label transition are
    /// accepted in phase 0 regardless of the stored phase tag.
    std::vector<Rat> encode(const WeakWitness& w) const {
        std::vector<Rat> x(sys_->variable_count(), Rat(0));
        const auto& trans = q_.automaton.transitions();
        for (const auto& [t, phase, f] : w.frequencies) {
            bool placed = false;
            for (size_t k = 0; k < tau_idx_.size() && !placed; ++k) {
                if (trans[tau_idx_[k]] != t) continue;
                size_t base = (phase == 0 || internal_) ? tau0_base_ : tau1_base_;
                x[base + k] += f;
                placed = true;
            }
            for (size_t k = 0; k < label_idx_.size() && !placed; ++k) {
                if (trans[label_idx_[k]] != t) continue;
                x[label_base_ + k] += f;
                placed = true;
            }
            if (!placed) throw Error("witness frequency refers to a transition outside the system");
        }
        for (const auto& [s, m] : w.stop) {
            bool placed = false;
            for (size_t i = 0; i < states_.size() && !placed; ++i) {
                if (states_[i] != s) continue;
                x[stop_base_ + i] += m;
                placed = true;
            }
            if (!placed) throw Error("witness stop refers to an unknown state");
        }
        return x;
    }

private:
    void build_() {
        const auto& trans = q_.automaton.transitions();
        for (size_t i = 0; i < states_.size(); ++i) {
            StateId u = states_[i];
            // Phase-0 balance at u.
            std::vector<std::pair<size_t, Rat>> row;
            for (size_t k = 0; k < tau_idx_.size(); ++k) {
                const auto& t = trans[tau_idx_[k]];
                Rat coeff = t.target.at(u) - (t.source == u ? Rat(1) : Rat(0));
                if (coeff != 0) row.emplace_back(tau0_base_ + k, coeff);
            }
            if (internal_) {
                row.emplace_back(stop_base_ + i, Rat(-1));
            } else {
                for (size_t k = 0; k < label_idx_.size(); ++k)
                    if (trans[label_idx_[k]].source == u)
                        row.emplace_back(label_base_ + k, Rat(-1));
            }
            sys_->add_equality(row, u == q_.source ? Rat(-1) : Rat(0));

            if (!internal_) {
                // Phase-1 balance at u; inflow includes the label step.
                std::vector<std::pair<size_t, Rat>> row1;
                for (size_t k = 0; k < label_idx_.size(); ++k) {
                    Rat coeff = trans[label_idx_[k]].target.at(u);
                    if (coeff != 0) row1.emplace_back(label_base_ + k, coeff);
                }
                for (size_t k = 0; k < tau_idx_.size(); ++k) {
                    const auto& t = trans[tau_idx_[k]];
                    Rat coeff = t.target.at(u) - (t.source == u ? Rat(1) : Rat(0));
                    if (coeff != 0) row1.emplace_back(tau1_base_ + k, coeff);
                }
                row1.emplace_back(stop_base_ + i, Rat(-1));
                sys_->add_equality(row1, Rat(0));
            }
        }
        // Per block: stop mass equals the target.
        for (const auto& block : q_.partition.blocks()) {
            std::vector<std::pair<size_t, Rat>> row;
            for (size_t i = 0; i < states_.size(); ++i)
                if (q_.partition.same_block(states_[i], block.front()))
                    row.emplace_back(stop_base_ + i, Rat(1));
            sys_->add_equality(row, q_.target.at(block.front()));
        }
    }

    const TransitionQuery& q_;
    bool internal_ = true;
    std::vector<size_t> tau_idx_, label_idx_;
    std::vector<StateId> states_;
    size_t tau0_base_ = 0, label_base_ = 0, tau1_base_ = 0, stop_base_ = 0;
    std::optional<LinearSystem> sys_;
};

} // namespace detail

/// One-step combined transition: the target must lie in the convex hull of
/// the class projections of the (source, label) transitions. The witness
/// carries the convex coefficients. An empty transition set yields no match.
inline std::optional<StrongWitness> strong_match(const TransitionQuery& q) {
    q.validate();
    if (!q.label) throw Error("strong queries need a concrete action label");
    auto enabled = q.automaton.from(q.source, *q.label);
    if (enabled.empty()) return std::nullopt;
    auto reps = detail::block_reps(q.partition);
    std::vector<std::vector<Rat>> generators;
    for (const auto& t : enabled)
        generators.push_back(detail::class_dist_vector(class_project(t.target, q.partition), reps));
    auto coeffs = in_convex_hull(detail::class_dist_vector(q.target, reps), generators);
    if (!coeffs) return std::nullopt;
    StrongWitness w;
    for (size_t i = 0; i < enabled.size(); ++i) w.weights.emplace_back(enabled[i], (*coeffs)[i]);
    return w;
}

/// Weak combined transition reachability, decided by exact feasibility of the
/// expected-frequency flow system. A tau label is read as the internal trace.
inline std::optional<WeakWitness> weak_match(const TransitionQuery& q) {
    q.validate();
    detail::WeakFlowSystem flow(q);
    return flow.solve();
}

/// Exact re-verification of a weak witness against the query's flow system.
inline bool weak_witness_valid(const TransitionQuery& q, const WeakWitness& w) {
    q.validate();
    detail::WeakFlowSystem flow(q);
    return satisfies(flow.system(), flow.encode(w));
}

} // namespace paq
