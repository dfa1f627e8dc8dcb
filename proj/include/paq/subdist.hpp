#pragma once

#include <initializer_list>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "paq/errors.hpp"
#include "paq/rational.hpp"

namespace paq {

using StateId = unsigned;

/// Finitely supported subdistribution over states: a map state -> weight with
/// exact rational weights and total mass <= 1. Only strictly positive entries
/// are stored, so the stored key set is exactly the support. Immutable value
/// type; all operations return fresh values.
class SubDist {
public:
    SubDist() = default;

    /// Builds a subdistribution from (state, weight) entries. Zero entries are
    /// dropped; a repeated state raises DuplicateState, total mass above one
    /// raises MassExceedsOne, negative weights are rejected.
    static SubDist make(const std::vector<std::pair<StateId, Rat>>& entries) {
        SubDist d;
        Rat mass(0);
        for (const auto& [s, p] : entries) {
            if (p < 0) throw Error("negative probability for state " + std::to_string(s));
            if (p == 0) continue;
            if (d.w_.count(s))
                throw DuplicateState("state " + std::to_string(s) + " occurs twice");
            d.w_.emplace(s, p);
            mass += p;
        }
        if (mass > 1)
            throw MassExceedsOne("total mass " + rat_str(mass) + " exceeds 1");
        d.mass_ = mass;
        return d;
    }

    static SubDist dirac(StateId s) { return make({{s, Rat(1)}}); }

    static SubDist empty() { return SubDist(); }

    const Rat& mass() const { return mass_; }

    bool is_distribution() const { return mass_ == 1; }

    bool is_empty() const { return w_.empty(); }

    /// Weight of s, zero when s is outside the support.
    Rat at(StateId s) const {
        auto it = w_.find(s);
        return it == w_.end() ? Rat(0) : it->second;
    }

    bool in_support(StateId s) const { return w_.count(s) > 0; }

    std::set<StateId> support() const {
        std::set<StateId> out;
        for (const auto& [s, p] : w_) out.insert(s);
        return out;
    }

    size_t support_size() const { return w_.size(); }

    const std::map<StateId, Rat>& weights() const { return w_; }

    /// Pointwise sum; defined only while the combined mass stays within 1.
    SubDist oplus(const SubDist& other) const {
        if (mass_ + other.mass_ > 1)
            throw MassExceedsOne("mass " + rat_str(mass_ + other.mass_) + " exceeds 1");
        SubDist out(*this);
        for (const auto& [s, p] : other.w_) {
            auto [it, fresh] = out.w_.emplace(s, p);
            if (!fresh) it->second += p;
        }
        out.mass_ = mass_ + other.mass_;
        return out;
    }

    /// Every weight multiplied by c >= 0, exact.
    SubDist scaled(const Rat& c) const {
        if (c < 0) throw Error("negative scale factor");
        if (c * mass_ > 1)
            throw MassExceedsOne("scaled mass " + rat_str(c * mass_) + " exceeds 1");
        SubDist out;
        if (c == 0) return out;
        for (const auto& [s, p] : w_) out.w_.emplace(s, c * p);
        out.mass_ = c * mass_;
        return out;
    }

    /// Weight of s zeroed out; defined only for s in the support.
    SubDist minus(StateId s) const {
        auto it = w_.find(s);
        if (it == w_.end())
            throw NotInSupport("state " + std::to_string(s) + " not in support");
        SubDist out(*this);
        out.mass_ -= it->second;
        out.w_.erase(s);
        return out;
    }

    bool operator==(const SubDist& other) const { return w_ == other.w_; }
    bool operator!=(const SubDist& other) const { return !(*this == other); }

    /// Lexicographic order over the sorted (state, weight) sequence; used for
    /// canonical transition ordering.
    bool operator<(const SubDist& other) const {
        auto a = w_.begin();
        auto b = other.w_.begin();
        for (; a != w_.end() && b != other.w_.end(); ++a, ++b) {
            if (a->first != b->first) return a->first < b->first;
            if (a->second != b->second) return a->second < b->second;
        }
        return a == w_.end() && b != other.w_.end();
    }

    std::string str() const {
        std::ostringstream out;
        out << "{";
        bool first = true;
        for (const auto& [s, p] : w_) {
            if (!first) out << ", ";
            first = false;
            out << s << ": " << rat_str(p);
        }
        out << "}";
        return out.str();
    }

private:
    std::map<StateId, Rat> w_;
    Rat mass_ = 0;
};

inline SubDist oplus(const SubDist& a, const SubDist& b) { return a.oplus(b); }
inline SubDist scale(const Rat& c, const SubDist& m) { return m.scaled(c); }
inline SubDist minus(const SubDist& m, StateId s) { return m.minus(s); }

/// Total variation distance, sup_A |a(A) - b(A)| computed as the larger of the
/// two one-sided positive-part sums. Equal to the subset supremum for finitely
/// supported measures; the subset enumeration survives only as a test oracle.
inline Rat tv_distance(const SubDist& a, const SubDist& b) {
    Rat plus(0), minus_part(0);
    std::set<StateId> states;
    for (const auto& [s, p] : a.weights()) states.insert(s);
    for (const auto& [s, p] : b.weights()) states.insert(s);
    for (StateId s : states) {
        Rat diff = a.at(s) - b.at(s);
        if (diff > 0)
            plus += diff;
        else
            minus_part -= diff;
    }
    return plus > minus_part ? plus : minus_part;
}

} // namespace paq
