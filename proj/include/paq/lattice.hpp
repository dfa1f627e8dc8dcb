#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "paq/bisim.hpp"
#include "paq/isomorphism.hpp"
#include "paq/lp.hpp"

namespace paq {

/// Explicit finite collection of mutually bisimilar quotient automata. For
/// the weak kind every member must additionally be rescaled.
struct QuotientSet {
    std::vector<Automaton> members;
    BisimKind kind = BisimKind::strong;
};

/// Two bisimilar quotients glued along the coarsest bisimulation on their
/// disjoint union. Each block holds at most one state per side, so the blocks
/// induce a partial bijection between the state spaces.
struct AlignedPair {
    Automaton a1, a2;
    DisjointUnion du;
    Partition partition;
    /// Matched states, one pair per block containing states of both automata.
    std::vector<std::pair<StateId, StateId>> correspondence;
};

namespace detail {

inline void check_alignable(const Automaton& p, BisimKind kind, const char* which) {
    if (!is_quotient(p, kind))
        throw NotQuotient(std::string(which) + " operand is not a " + kind_name(kind) + " quotient");
    if (kind == BisimKind::weak && !is_rescaled(p))
        throw NotRescaled(std::string(which) + " operand is not rescaled");
}

/// Class-level transition set of one side, in the disjoint union's block
/// coordinates.
inline std::vector<Transition> side_class_transitions(const Automaton& side,
                                                      const std::map<StateId, StateId>& inj,
                                                      const Partition& part) {
    std::vector<Transition> out;
    for (const auto& t : side.transitions()) {
        SubDist renamed = rename(t.target, inj);
        out.push_back({part.rep(inj.at(t.source)), t.action, class_project(renamed, part)});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail

/// Aligns two bisimilar quotients via the canonical mappings into the block
/// space of their disjoint union.
inline AlignedPair align(const Automaton& p1, const Automaton& p2, BisimKind kind) {
    detail::check_alignable(p1, kind, "left");
    detail::check_alignable(p2, kind, "right");
    auto decision = bisimilar(p1, p2, kind);
    if (!decision.related)
        throw NotBisimilar("operands are not " + std::string(kind_name(kind)) + "ly bisimilar");
    AlignedPair out{p1, p2, std::move(decision.du), std::move(decision.partition), {}};
    std::map<StateId, StateId> back1, back2;
    for (const auto& [s, u] : out.du.inj1) back1[u] = s;
    for (const auto& [s, u] : out.du.inj2) back2[u] = s;
    for (const auto& block : out.partition.blocks()) {
        std::optional<StateId> s1, s2;
        for (StateId u : block) {
            if (back1.count(u)) s1 = back1.at(u);
            if (back2.count(u)) s2 = back2.at(u);
        }
        if (s1 && s2) out.correspondence.emplace_back(*s1, *s2);
    }
    return out;
}

namespace detail {

struct ClassLevelView {
    AlignedPair aligned;
    std::vector<Transition> t1, t2;       // class-level transition sets
    std::set<StateId> s1, s2;             // block reps touched by each side
    StateId initial;                      // block rep of both initial states
};

inline ClassLevelView class_level_view(const Automaton& p1, const Automaton& p2, BisimKind kind) {
    ClassLevelView v{align(p1, p2, kind), {}, {}, {}, {}, 0};
    v.t1 = side_class_transitions(p1, v.aligned.du.inj1, v.aligned.partition);
    v.t2 = side_class_transitions(p2, v.aligned.du.inj2, v.aligned.partition);
    for (const auto& [s, u] : v.aligned.du.inj1) v.s1.insert(v.aligned.partition.rep(u));
    for (const auto& [s, u] : v.aligned.du.inj2) v.s2.insert(v.aligned.partition.rep(u));
    v.initial = v.aligned.partition.rep(v.aligned.du.inj1.at(p1.initial()));
    return v;
}

inline Automaton checked_lattice_result(const Automaton& result, const Automaton& p1,
                                        const Automaton& p2, BisimKind kind, const char* op) {
    if (!bisimilar(result, p1, kind).related || !bisimilar(result, p2, kind).related)
        throw MeetNotBisimilar(std::string(op) + " is not bisimilar to its operands");
    return result;
}

} // namespace detail

/// Intersection quotient: blocks populated from both sides, class-level
/// transitions present in both. Bisimilar to either operand; verified, with a
/// hard error if the verification fails.
inline Automaton meet(const Automaton& p1, const Automaton& p2, BisimKind kind) {
    auto v = detail::class_level_view(p1, p2, kind);
    std::set<StateId> states;
    for (StateId s : v.s1)
        if (v.s2.count(s)) states.insert(s);
    std::vector<Transition> trans;
    std::set_intersection(v.t1.begin(), v.t1.end(), v.t2.begin(), v.t2.end(),
                          std::back_inserter(trans));
    Automaton result(std::move(states), p1.actions(), std::move(trans), v.initial);
    return detail::checked_lattice_result(result, p1, p2, kind, "meet");
}

/// Union quotient: all blocks, class-level transitions of either side.
inline Automaton join(const Automaton& p1, const Automaton& p2, BisimKind kind) {
    auto v = detail::class_level_view(p1, p2, kind);
    std::set<StateId> states;
    for (StateId s : v.s1) states.insert(s);
    for (StateId s : v.s2) states.insert(s);
    std::vector<Transition> trans;
    std::set_union(v.t1.begin(), v.t1.end(), v.t2.begin(), v.t2.end(),
                   std::back_inserter(trans));
    Automaton result(std::move(states), p1.actions(), std::move(trans), v.initial);
    return detail::checked_lattice_result(result, p1, p2, kind, "join");
}

/// Subset order on aligned quotients: p1's blocks and class-level transitions
/// embed into p2's.
inline bool leq(const Automaton& p1, const Automaton& p2, BisimKind kind) {
    auto v = detail::class_level_view(p1, p2, kind);
    for (StateId s : v.s1)
        if (!v.s2.count(s)) return false;
    return std::includes(v.t2.begin(), v.t2.end(), v.t1.begin(), v.t1.end());
}

/// The vertex set of the one-step reachable polytope of a (state, action)
/// pair: extreme points of the convex hull of the class-projected transition
/// targets. Combined transitions reach exactly the hull of these vertices.
struct ReachablePolytopeVertices {
    StateId source;
    ActionId action;
    std::vector<ClassDist> vertices;
};

inline std::vector<ClassDist> extreme_points(const std::vector<ClassDist>& points);

inline ReachablePolytopeVertices reachable_polytope_vertices(const Automaton& p, StateId source,
                                                             const ActionId& action,
                                                             const Partition& r) {
    ReachablePolytopeVertices out{source, action, {}};
    std::vector<ClassDist> projected;
    for (const auto& t : p.from(source, action))
        projected.push_back(class_project(t.target, r));
    if (!projected.empty()) out.vertices = extreme_points(projected);
    return out;
}

/// Extreme points of a finite set of class distributions: the points that are
/// not convex combinations of the other points. One exact LP per point.
inline std::vector<ClassDist> extreme_points(const std::vector<ClassDist>& points) {
    if (points.empty()) throw Error("extreme points of an empty set");
    std::vector<ClassDist> unique(points);
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    std::set<StateId> keys;
    for (const auto& d : unique)
        for (const auto& [s, w] : d.weights()) keys.insert(s);
    std::vector<StateId> dims(keys.begin(), keys.end());
    auto vec = [&](const ClassDist& d) {
        std::vector<Rat> v;
        v.reserve(dims.size());
        for (StateId s : dims) v.push_back(d.at(s));
        return v;
    };

    std::vector<ClassDist> out;
    for (size_t i = 0; i < unique.size(); ++i) {
        std::vector<std::vector<Rat>> others;
        for (size_t j = 0; j < unique.size(); ++j)
            if (j != i) others.push_back(vec(unique[j]));
        if (others.empty() || !in_convex_hull(vec(unique[i]), others))
            out.push_back(unique[i]);
    }
    return out;
}

/// Strong normal form: quotient by the coarsest strong bisimulation, restrict
/// to the reachable fraction, keep only transitions to extreme points of each
/// (state, action) target set, then relabel canonically. The result is the
/// least element of every set of bisimilar strong quotients containing it.
inline Automaton strong_normal_form(const Automaton& p) {
    Automaton q = quotient(p, coarsest_partition(p, BisimKind::strong).partition);
    q = reachable_fraction(q);
    // The quotient has no two bisimilar states, so the identity partition is
    // its class structure and targets are already class distributions.
    Partition discrete = Partition::identity(q.states());
    std::vector<Transition> keep;
    for (StateId s : q.states()) {
        for (const auto& a : q.actions()) {
            auto polytope = reachable_polytope_vertices(q, s, a, discrete);
            std::set<std::string> kept;
            for (const auto& v : polytope.vertices) kept.insert(v.str());
            for (const auto& t : q.from(s, a))
                if (kept.count(t.target.str())) keep.push_back(t);
        }
    }
    Automaton pruned(q.states(), q.actions(), std::move(keep), q.initial());
    return canonical_relabel(pruned).automaton;
}

/// Weak normal form: quotient by the coarsest weak bisimulation, rescale,
/// restrict to the reachable fraction, then delete redundant transitions to a
/// fixpoint. A transition is redundant when the remaining set still reaches
/// its class projection by a weak combined transition with the same label
/// (the internal trace for tau). Tau Dirac self-loops are always redundant.
/// Deletion order is canonical; the fixpoint is order-independent.
inline Automaton weak_normal_form(const Automaton& p) {
    Automaton q = quotient(p, coarsest_partition(p, BisimKind::weak).partition);
    q = rescale(q);
    q = reachable_fraction(q);

    bool deleted = true;
    while (deleted) {
        deleted = false;
        Partition discrete = Partition::identity(q.states());
        const auto& trans = q.transitions(); // canonical order
        for (size_t i = 0; i < trans.size(); ++i) {
            std::vector<Transition> rest;
            for (size_t j = 0; j < trans.size(); ++j)
                if (j != i) rest.push_back(trans[j]);
            Automaton without(q.states(), q.actions(), rest, q.initial());
            std::optional<ActionId> label;
            if (trans[i].action != kTau) label = trans[i].action;
            ClassDist target = class_project(trans[i].target, discrete);
            if (weak_match({without, trans[i].source, label, discrete, target})) {
                q = std::move(without);
                deleted = true;
                break;
            }
        }
    }
    return canonical_relabel(q).automaton;
}

/// Normal form dispatch; output states are consecutive naturals with 1 the
/// initial state.
inline Automaton normal_form(const Automaton& p, BisimKind kind) {
    return kind == BisimKind::strong ? strong_normal_form(p) : weak_normal_form(p);
}

/// Outcome of checking the lattice laws over an explicit finite set of
/// bisimilar quotients.
struct LatticeReport {
    bool meet_closed = true;
    bool join_closed = true;
    /// Canonical serializations of meets/joins missing from the member list,
    /// with the pair that produced them.
    std::vector<std::string> missing;
    bool commutative = true;
    bool associative = true;
    bool absorptive = true;
    bool bound_laws = true;      // meet below both operands, join above
    bool unique_minimal = false; // exactly one iso-class of minimal members
    bool dcc = true;             // every nonempty subset has a minimal element
    std::optional<size_t> bottom; // index of a member below every member
    std::optional<size_t> top;    // index of a member above every member (join-closed sets)
    size_t members = 0;

    bool all_laws_hold() const {
        return meet_closed && join_closed && commutative && associative && absorptive &&
               bound_laws && unique_minimal && dcc;
    }

    std::string str() const {
        std::ostringstream out;
        out << "members: " << members << "\n";
        out << "meet-closed: " << (meet_closed ? "yes" : "no") << "\n";
        out << "join-closed: " << (join_closed ? "yes" : "no") << "\n";
        for (const auto& m : missing) out << "missing: " << m << "\n";
        out << "commutative: " << (commutative ? "yes" : "no") << "\n";
        out << "associative: " << (associative ? "yes" : "no") << "\n";
        out << "absorptive: " << (absorptive ? "yes" : "no") << "\n";
        out << "bound-laws: " << (bound_laws ? "yes" : "no") << "\n";
        out << "unique-minimal: " << (unique_minimal ? "yes" : "no") << "\n";
        out << "descending-chain-condition: " << (dcc ? "yes" : "no") << "\n";
        out << "bottom: " << (bottom ? "member " + std::to_string(*bottom + 1) : "none") << "\n";
        out << "top: " << (top ? "member " + std::to_string(*top + 1) : "none") << "\n";
        return out.str();
    }
};

namespace detail {

/// Summary line used when a meet or join is absent from the member list.
inline std::string describe_missing(const char* op, size_t i, size_t j, const Automaton& result) {
    Automaton canon = canonical_relabel(result).automaton;
    std::ostringstream out;
    out << op << " of members " << (i + 1) << " and " << (j + 1) << ": states 1.."
        << canon.state_count() << ", transitions";
    for (const auto& t : canon.transitions())
        out << " (" << t.source << "," << t.action << "," << t.target.str() << ")";
    return out.str();
}

} // namespace detail

/// Checks the member-list invariants and the lattice laws on an explicit
/// QuotientSet: closure of meet/join up to isomorphism, commutativity,
/// associativity, absorption, the bound laws, unique minimal element, the
/// finite descending chain condition, and identification of bottom/top.
inline LatticeReport verify_lattice(const QuotientSet& qs) {
    const auto& ms = qs.members;
    if (ms.empty()) throw InvalidQuotientSet("member list is empty");
    for (size_t i = 0; i < ms.size(); ++i) {
        if (!is_quotient(ms[i], qs.kind))
            throw InvalidQuotientSet("member " + std::to_string(i + 1) + " is not a " +
                                     kind_name(qs.kind) + " quotient");
        if (qs.kind == BisimKind::weak && !is_rescaled(ms[i]))
            throw InvalidQuotientSet("member " + std::to_string(i + 1) + " is not rescaled");
    }
    for (size_t i = 0; i + 1 < ms.size(); ++i)
        if (!bisimilar(ms[i], ms[i + 1], qs.kind).related)
            throw InvalidQuotientSet("members " + std::to_string(i + 1) + " and " +
                                     std::to_string(i + 2) + " are not bisimilar");

    LatticeReport report;
    report.members = ms.size();
    size_t n = ms.size();

    std::map<std::pair<size_t, size_t>, Automaton> meets, joins;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            meets.emplace(std::make_pair(i, j), meet(ms[i], ms[j], qs.kind));
            joins.emplace(std::make_pair(i, j), join(ms[i], ms[j], qs.kind));
        }
    }

    auto member_index = [&](const Automaton& a) -> std::optional<size_t> {
        for (size_t k = 0; k < n; ++k)
            if (iso_equal(a, ms[k])) return k;
        return std::nullopt;
    };

    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            const Automaton& m = meets.at({i, j});
            const Automaton& u = joins.at({i, j});
            if (!member_index(m)) {
                report.meet_closed = false;
                report.missing.push_back(detail::describe_missing("meet", i, j, m));
            }
            if (!member_index(u)) {
                report.join_closed = false;
                report.missing.push_back(detail::describe_missing("join", i, j, u));
            }
            if (!iso_equal(m, meets.at({j, i})) || !iso_equal(u, joins.at({j, i})))
                report.commutative = false;
            if (!leq(m, ms[i], qs.kind) || !leq(m, ms[j], qs.kind) ||
                !leq(ms[i], u, qs.kind) || !leq(ms[j], u, qs.kind))
                report.bound_laws = false;
            if (!iso_equal(meet(ms[i], u, qs.kind), ms[i]) ||
                !iso_equal(join(ms[i], m, qs.kind), ms[i]))
                report.absorptive = false;
        }
    }

    for (size_t i = 0; i < n && report.associative; ++i)
        for (size_t j = 0; j < n && report.associative; ++j)
            for (size_t k = 0; k < n && report.associative; ++k) {
                if (!iso_equal(meet(ms[i], meets.at({j, k}), qs.kind),
                               meet(meets.at({i, j}), ms[k], qs.kind)))
                    report.associative = false;
                if (!iso_equal(join(ms[i], joins.at({j, k}), qs.kind),
                               join(joins.at({i, j}), ms[k], qs.kind)))
                    report.associative = false;
            }

    std::vector<std::vector<bool>> below(n, std::vector<bool>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) below[i][j] = leq(ms[i], ms[j], qs.kind);

    auto strictly_below = [&](size_t i, size_t j) { return below[i][j] && !below[j][i]; };

    std::vector<size_t> minimal;
    for (size_t i = 0; i < n; ++i) {
        bool is_min = true;
        for (size_t j = 0; j < n && is_min; ++j)
            if (strictly_below(j, i)) is_min = false;
        if (is_min) minimal.push_back(i);
    }
    report.unique_minimal = !minimal.empty();
    for (size_t a = 0; a + 1 < minimal.size(); ++a)
        if (!iso_equal(ms[minimal[a]], ms[minimal[a + 1]])) report.unique_minimal = false;

    // Finite DCC: every nonempty subset holds an element minimal in it.
    if (n <= 12) {
        for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
            bool found = false;
            for (size_t i = 0; i < n && !found; ++i) {
                if (!(mask & (size_t(1) << i))) continue;
                bool min_in_subset = true;
                for (size_t j = 0; j < n && min_in_subset; ++j)
                    if ((mask & (size_t(1) << j)) && strictly_below(j, i)) min_in_subset = false;
                found = min_in_subset;
            }
            if (!found) report.dcc = false;
        }
    }

    for (size_t i = 0; i < n; ++i) {
        bool bottom = true, top = true;
        for (size_t j = 0; j < n; ++j) {
            if (!below[i][j]) bottom = false;
            if (!below[j][i]) top = false;
        }
        if (bottom && !report.bottom) report.bottom = i;
        if (top && report.join_closed && !report.top) report.top = i;
    }
    return report;
}

} // namespace paq
