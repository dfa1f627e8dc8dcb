#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "paq/errors.hpp"
#include "paq/subdist.hpp"

namespace paq {

/// Distribution over equivalence classes. Blocks are identified by their least
/// member, so a class-level distribution is a subdistribution keyed by block
/// representatives.
using ClassDist = SubDist;

/// An equivalence relation on a finite state set, stored as disjoint blocks.
/// Blocks are ordered by least member and named by it; that keeps block ids
/// stable across refinement rounds.
class Partition {
public:
    Partition() = default;

    /// Validates that the blocks are nonempty and pairwise disjoint.
    static Partition from_blocks(std::vector<std::vector<StateId>> blocks) {
        Partition p;
        std::set<StateId> seen;
        for (auto& b : blocks) {
            if (b.empty()) throw Error("empty block");
            std::sort(b.begin(), b.end());
            for (StateId s : b) {
                if (!seen.insert(s).second)
                    throw Error("state " + std::to_string(s) + " occurs in two blocks");
            }
        }
        std::sort(blocks.begin(), blocks.end());
        p.blocks_ = std::move(blocks);
        p.index_();
        return p;
    }

    static Partition identity(const std::set<StateId>& states) {
        std::vector<std::vector<StateId>> blocks;
        for (StateId s : states) blocks.push_back({s});
        return from_blocks(std::move(blocks));
    }

    /// One block holding every state.
    static Partition universal(const std::set<StateId>& states) {
        if (states.empty()) return Partition();
        return from_blocks({std::vector<StateId>(states.begin(), states.end())});
    }

    size_t block_count() const { return blocks_.size(); }

    const std::vector<std::vector<StateId>>& blocks() const { return blocks_; }

    bool covers(StateId s) const { return block_of_.count(s) > 0; }

    std::set<StateId> covered() const {
        std::set<StateId> out;
        for (const auto& [s, i] : block_of_) out.insert(s);
        return out;
    }

    size_t block_index(StateId s) const {
        auto it = block_of_.find(s);
        if (it == block_of_.end())
            throw UncoveredState("state " + std::to_string(s) + " is in no block");
        return it->second;
    }

    /// Block representative: least member of the block containing s.
    StateId rep(StateId s) const { return blocks_[block_index(s)].front(); }

    bool same_block(StateId a, StateId b) const { return block_index(a) == block_index(b); }

    bool is_discrete() const {
        for (const auto& b : blocks_)
            if (b.size() > 1) return false;
        return true;
    }

    /// Refines this partition by splitting one block into two along `keep`:
    /// members of `block` satisfying the predicate stay together, the rest
    /// form a new block. Both parts must be nonempty.
    template <typename Pred>
    Partition split_block(size_t block, Pred keep) const {
        std::vector<std::vector<StateId>> blocks = blocks_;
        std::vector<StateId> in, out;
        for (StateId s : blocks[block])
            (keep(s) ? in : out).push_back(s);
        if (in.empty() || out.empty()) throw Error("split produced an empty part");
        blocks[block] = std::move(in);
        blocks.push_back(std::move(out));
        return from_blocks(std::move(blocks));
    }

    bool operator==(const Partition& other) const { return blocks_ == other.blocks_; }
    bool operator!=(const Partition& other) const { return !(*this == other); }

    std::string str() const {
        std::ostringstream out;
        for (const auto& b : blocks_) {
            out << "{";
            for (size_t i = 0; i < b.size(); ++i) out << (i ? "," : "") << b[i];
            out << "}";
        }
        return out.str();
    }

private:
    void index_() {
        block_of_.clear();
        for (size_t i = 0; i < blocks_.size(); ++i)
            for (StateId s : blocks_[i]) block_of_.emplace(s, i);
    }

    std::vector<std::vector<StateId>> blocks_;
    std::map<StateId, size_t> block_of_;
};

/// Projects a subdistribution to block level: each block gets the sum of its
/// members' weights, keyed by the block representative. Mass is preserved.
inline ClassDist class_project(const SubDist& m, const Partition& r) {
    std::map<StateId, Rat> acc;
    for (const auto& [s, p] : m.weights()) {
        acc[r.rep(s)] += p; // throws UncoveredState if s is in no block
    }
    std::vector<std::pair<StateId, Rat>> entries(acc.begin(), acc.end());
    return SubDist::make(entries);
}

/// The lifting of a state equivalence to distributions: a and b are related
/// iff every block carries equal exact mass under both.
inline bool lift_holds(const Partition& r, const SubDist& a, const SubDist& b) {
    return class_project(a, r) == class_project(b, r);
}

} // namespace paq
