#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paq/errors.hpp"
#include "paq/rational.hpp"

namespace paq {

/// A system of exact linear equalities A x = b over nonnegative variables.
/// Feasibility only; there is no objective.
class LinearSystem {
public:
    explicit LinearSystem(size_t variables) : n_(variables) {}

    size_t variable_count() const { return n_; }
    size_t equality_count() const { return rows_.size(); }

    /// Adds one equality; `row` pairs (variable index, coefficient).
    void add_equality(const std::vector<std::pair<size_t, Rat>>& row, const Rat& rhs) {
        std::vector<Rat> dense(n_, Rat(0));
        for (const auto& [j, c] : row) {
            if (j >= n_) throw Error("coefficient references undeclared variable");
            dense[j] += c;
        }
        rows_.push_back(std::move(dense));
        rhs_.push_back(rhs);
    }

    const std::vector<std::vector<Rat>>& rows() const { return rows_; }
    const std::vector<Rat>& rhs() const { return rhs_; }

private:
    size_t n_;
    std::vector<std::vector<Rat>> rows_;
    std::vector<Rat> rhs_;
};

struct FeasibilityResult {
    bool feasible = false;
    /// Basic feasible solution; satisfies every constraint exactly.
    std::vector<Rat> witness;
};

namespace detail {

/// Dense phase-one simplex tableau. Variables 0..n-1 are the originals,
/// n..n+m-1 the artificials. Bland's rule throughout, so termination does not
/// depend on nondegeneracy. Everything stays in reduced rational form.
class PhaseOneTableau {
public:
    PhaseOneTableau(const LinearSystem& sys) : n_(sys.variable_count()), m_(sys.equality_count()) {
        size_t cols = n_ + m_ + 1;
        rows_.assign(m_, std::vector<Rat>(cols, Rat(0)));
        basis_.resize(m_);
        for (size_t i = 0; i < m_; ++i) {
            Rat sign = sys.rhs()[i] < 0 ? Rat(-1) : Rat(1);
            for (size_t j = 0; j < n_; ++j) rows_[i][j] = sign * sys.rows()[i][j];
            rows_[i][n_ + i] = 1;
            rows_[i][cols - 1] = sign * sys.rhs()[i];
            basis_[i] = n_ + i;
        }
        // Cost row for min(sum of artificials), expressed in the current basis.
        cost_.assign(cols, Rat(0));
        for (size_t i = 0; i < m_; ++i)
            for (size_t j = 0; j < cols; ++j)
                if (j < n_ || j == cols - 1) cost_[j] -= rows_[i][j];
    }

    /// Runs to optimality; returns the phase-one objective value (zero iff the
    /// original system is feasible).
    Rat solve() {
        size_t cols = n_ + m_ + 1;
        for (;;) {
            size_t enter = cols;
            for (size_t j = 0; j < cols - 1; ++j) {
                if (cost_[j] < 0) {
                    enter = j;
                    break; // Bland: smallest index with negative reduced cost
                }
            }
            if (enter == cols) break;
            size_t leave = m_;
            Rat best;
            for (size_t i = 0; i < m_; ++i) {
                if (rows_[i][enter] <= 0) continue;
                Rat ratio = rows_[i][cols - 1] / rows_[i][enter];
                if (leave == m_ || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m_)
                throw Error("phase-one objective unbounded"); // cannot happen: bounded below by 0
            pivot_(leave, enter);
        }
        return -cost_[cols - 1];
    }

    std::vector<Rat> extract_witness() const {
        std::vector<Rat> x(n_, Rat(0));
        for (size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = rows_[i][n_ + m_];
        return x;
    }

private:
    void pivot_(size_t row, size_t col) {
        size_t cols = n_ + m_ + 1;
        Rat p = rows_[row][col];
        for (size_t j = 0; j < cols; ++j) rows_[row][j] /= p;
        for (size_t i = 0; i < m_; ++i) {
            if (i == row || rows_[i][col] == 0) continue;
            Rat f = rows_[i][col];
            for (size_t j = 0; j < cols; ++j) rows_[i][j] -= f * rows_[row][j];
        }
        if (cost_[col] != 0) {
            Rat f = cost_[col];
            for (size_t j = 0; j < cols; ++j) cost_[j] -= f * rows_[row][j];
        }
        basis_[row] = col;
    }

    size_t n_, m_;
    std::vector<std::vector<Rat>> rows_;
    std::vector<Rat> cost_;
    std::vector<size_t> basis_;
};

} // namespace detail

/// Decides feasibility of A x = b, x >= 0 by exact phase-one simplex.
/// Deterministic: identical inputs take identical pivot paths and produce the
/// same basic feasible witness.
inline FeasibilityResult feasible(const LinearSystem& sys) {
    detail::PhaseOneTableau tableau(sys);
    FeasibilityResult out;
    if (tableau.solve() != 0) return out;
    out.feasible = true;
    out.witness = tableau.extract_witness();
    return out;
}

/// Verifies a witness by exact substitution into every constraint.
inline bool satisfies(const LinearSystem& sys, const std::vector<Rat>& x) {
    if (x.size() != sys.variable_count()) return false;
    for (const Rat& v : x)
        if (v < 0) return false;
    for (size_t i = 0; i < sys.equality_count(); ++i) {
        Rat acc(0);
        for (size_t j = 0; j < x.size(); ++j) acc += sys.rows()[i][j] * x[j];
        if (acc != sys.rhs()[i]) return false;
    }
    return true;
}

/// Convex-hull membership: coefficients lambda >= 0 with sum 1 recombining the
/// generators into `point` exactly, or nullopt when the point lies outside.
inline std::optional<std::vector<Rat>> in_convex_hull(const std::vector<Rat>& point,
                                                      const std::vector<std::vector<Rat>>& generators) {
    for (const auto& g : generators)
        if (g.size() != point.size())
            throw DimensionMismatch("generator dimension " + std::to_string(g.size()) +
                                    " differs from point dimension " + std::to_string(point.size()));
    if (generators.empty()) return std::nullopt;
    LinearSystem sys(generators.size());
    for (size_t d = 0; d < point.size(); ++d) {
        std::vector<std::pair<size_t, Rat>> row;
        for (size_t i = 0; i < generators.size(); ++i) row.emplace_back(i, generators[i][d]);
        sys.add_equality(row, point[d]);
    }
    std::vector<std::pair<size_t, Rat>> ones;
    for (size_t i = 0; i < generators.size(); ++i) ones.emplace_back(i, Rat(1));
    sys.add_equality(ones, Rat(1));
    auto result = feasible(sys);
    if (!result.feasible) return std::nullopt;
    return result.witness;
}

} // namespace paq
