#pragma once

// Discrete flat torus bundle: point-group-valued transitions on a base
// complex, affine holonomy maps, and the fixed-point computation behind
// equilibrium-section existence.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "crysphon/base_complex.hpp"
#include "crysphon/smith.hpp"
#include "crysphon/space_group.hpp"

namespace crysphon {

/// Affine self-map of the torus: [v] -> [A v + a].
class AffineTorusMap {
public:
    AffineTorusMap(IntMatrix linear, RatVec shift)
        : linear_(std::move(linear)), shift_(mod1(std::move(shift))) {
        if (linear_.rows() != linear_.cols() || linear_.rows() != shift_.size())
            throw std::invalid_argument("affine torus map: shape mismatch");
    }

    static AffineTorusMap identity(std::size_t d) {
        return AffineTorusMap(IntMatrix::identity(d), rat_zero(d));
    }

    const IntMatrix& linear() const { return linear_; }
    const RatVec& shift() const { return shift_; }
    std::size_t dim() const { return shift_.size(); }

    TorusPoint apply(const TorusPoint& v) const {
        return TorusPoint(linear_ * v.coords + shift_);
    }

    /// this after other:  (this o other)(v) = this(other(v)).
    AffineTorusMap compose(const AffineTorusMap& other) const {
        return AffineTorusMap(linear_ * other.linear_, linear_ * other.shift_ + shift_);
    }

    AffineTorusMap inverse() const {
        IntMatrix inv = int_inverse(linear_);
        RatVec s(shift_.size());
        RatVec t = inv * shift_;
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = -t[i];
        return AffineTorusMap(inv, std::move(s));
    }

    bool operator==(const AffineTorusMap& o) const {
        return linear_ == o.linear_ && shift_ == o.shift_;
    }

    bool is_identity() const {
        return *this == identity(dim());
    }

private:
    IntMatrix linear_;
    RatVec shift_;
};

struct BundleValidationReport {
    // ordered edge pairs (e, reverse-of-e) whose transitions are not inverse
    std::vector<std::pair<std::size_t, std::size_t>> inverse_violations;
    // triangle indices where g_ab * g_bc != g_ac
    std::vector<std::size_t> triangle_violations;

    bool ok() const { return inverse_violations.empty() && triangle_violations.empty(); }
};

/// Common fixed set of the holonomy generators on the torus.
struct FixedPointSet {
    bool empty = true;
    std::size_t dimension = 0;                // 0 = isolated points
    std::vector<TorusPoint> representatives;  // coset reps mod subtorus directions
    std::vector<RatVec> directions;           // integer directions spanning the subtorus

    bool is_finite() const { return !empty && dimension == 0; }
};

class FlatBundle {
public:
    FlatBundle(BaseComplex base, SpaceGroup group, std::vector<std::size_t> transitions)
        : base_(std::move(base)), group_(std::move(group)), transition_(std::move(transitions)) {
        if (transition_.size() != base_.edges().size())
            throw validation_error("flat bundle: one transition per edge required");
        for (std::size_t g : transition_)
            if (g >= group_.order())
                throw validation_error("flat bundle: transition element index out of range");
    }

    const BaseComplex& base() const { return base_; }
    const SpaceGroup& space_group() const { return group_; }
    std::size_t transition(std::size_t edge) const { return transition_.at(edge); }
    std::size_t dim() const { return group_.dim(); }

    /// rho(p) as an explicit affine torus map.
    AffineTorusMap rho(std::size_t p) const {
        return AffineTorusMap(group_.point_group().element(p), group_.translation(p));
    }

    /// Fiber map of one traversal step.  Forward across edge a->b carrying g
    /// sends tau_a to rho(g^-1) tau_a; backward applies the inverse, rho(g).
    std::size_t step_element(const EdgeStep& s) const {
        std::size_t g = transition_.at(s.edge);
        return s.forward ? group_.point_group().inverse(g) : g;
    }

    BundleValidationReport validate() const {
        BundleValidationReport report;
        const auto& pg = group_.point_group();
        for (std::size_t e = 0; e < base_.edges().size(); ++e) {
            const Edge& ed = base_.edges()[e];
            auto rev = base_.edge_index(ed.to, ed.from);
            if (!rev) continue;
            if (transition_[*rev] != pg.inverse(transition_[e]))
                if (e < *rev)  // report each unordered pair once
                    report.inverse_violations.emplace_back(e, *rev);
        }
        for (std::size_t t = 0; t < base_.triangles().size(); ++t) {
            const Triangle& tri = base_.triangles()[t];
            std::size_t gab = transition_[*base_.edge_index(tri.a, tri.b)];
            std::size_t gbc = transition_[*base_.edge_index(tri.b, tri.c)];
            std::size_t gac = transition_[*base_.edge_index(tri.a, tri.c)];
            if (pg.multiply(gab, gbc) != gac) report.triangle_violations.push_back(t);
        }
        return report;
    }

    /// Group element h with loop holonomy = rho(h); fiber maps compose in
    /// traversal order with the latest edge applied last.
    std::size_t holonomy_element(const Loop& loop) const {
        check_loop(loop);
        const auto& pg = group_.point_group();
        std::size_t h = pg.identity_index();
        for (const auto& s : loop.steps()) h = pg.multiply(step_element(s), h);
        return h;
    }

    AffineTorusMap holonomy(const Loop& loop) const { return rho(holonomy_element(loop)); }

    /// Deterministic loop basis: BFS spanning tree rooted at `basepoint`
    /// expanding lowest chart index first; one loop per non-tree edge.
    std::vector<Loop> loop_basis(std::size_t basepoint) const {
        if (basepoint >= base_.chart_count())
            throw std::invalid_argument("loop basis: basepoint out of range");
        const std::size_t n = base_.chart_count();
        // undirected adjacency: (neighbor, edge, forward)
        struct Arc {
            std::size_t to, edge;
            bool forward;
        };
        std::vector<std::vector<Arc>> adj(n);
        for (std::size_t e = 0; e < base_.edges().size(); ++e) {
            const Edge& ed = base_.edges()[e];
            adj[ed.from].push_back({ed.to, e, true});
            adj[ed.to].push_back({ed.from, e, false});
        }
        for (auto& arcs : adj)
            std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
                return a.to != b.to ? a.to < b.to : a.edge < b.edge;
            });

        std::vector<std::optional<EdgeStep>> parent_step(n);
        std::vector<std::optional<std::size_t>> parent(n);
        std::vector<bool> seen(n, false);
        std::vector<bool> tree_edge(base_.edges().size(), false);
        std::vector<std::size_t> queue{basepoint};
        seen[basepoint] = true;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            std::size_t u = queue[qi];
            for (const Arc& a : adj[u]) {
                if (seen[a.to]) continue;
                seen[a.to] = true;
                parent[a.to] = u;
                parent_step[a.to] = EdgeStep{a.edge, a.forward};
                tree_edge[a.edge] = true;
                queue.push_back(a.to);
            }
        }

        auto path_from_base = [&](std::size_t chart) {
            std::vector<EdgeStep> steps;
            while (chart != basepoint) {
                if (!parent[chart])
                    throw validation_error("loop basis: base complex is disconnected");
                steps.push_back(*parent_step[chart]);
                chart = *parent[chart];
            }
            std::reverse(steps.begin(), steps.end());
            return steps;
        };

        std::vector<Loop> basis;
        for (std::size_t e = 0; e < base_.edges().size(); ++e) {
            if (tree_edge[e]) continue;
            const Edge& ed = base_.edges()[e];
            if (!seen[ed.from] || !seen[ed.to]) continue;  // unreachable component
            std::vector<EdgeStep> steps = path_from_base(ed.from);
            steps.push_back({e, true});
            std::vector<EdgeStep> back = path_from_base(ed.to);
            std::reverse(back.begin(), back.end());
            for (auto& s : back) s.forward = !s.forward;
            steps.insert(steps.end(), back.begin(), back.end());
            basis.push_back(Loop::from_steps(base_, std::move(steps)));
        }
        return basis;
    }

    /// Fixed points of the holonomy action: solve (A_h - I) v = -a_h mod Z^d
    /// simultaneously over the loop-basis generators.
    FixedPointSet equilibrium_sections(std::size_t basepoint) const {
        const std::size_t d = dim();
        std::vector<Loop> basis = loop_basis(basepoint);
        std::vector<std::size_t> gens;
        for (const auto& loop : basis) gens.push_back(holonomy_element(loop));

        FixedPointSet out;
        if (gens.empty()) {
            out.empty = false;
            out.dimension = d;
            out.representatives = {TorusPoint(rat_zero(d))};
            for (std::size_t j = 0; j < d; ++j) {
                RatVec dir = rat_zero(d);
                dir[j] = 1;
                out.directions.push_back(std::move(dir));
            }
            return out;
        }

        IntMatrix stacked(gens.size() * d, d);
        RatVec rhs;
        rhs.reserve(gens.size() * d);
        IntMatrix id = IntMatrix::identity(d);
        std::size_t row = 0;
        for (std::size_t h : gens) {
            IntMatrix block = group_.point_group().element(h) - id;
            for (std::size_t i = 0; i < d; ++i, ++row)
                for (std::size_t j = 0; j < d; ++j) stacked(row, j) = block(i, j);
            for (const auto& q : group_.translation(h)) rhs.push_back(-q);
        }
        ModLatticeSolution sol = solve_mod_lattice(stacked, rhs);
        if (!sol.solvable) return out;
        out.empty = false;
        out.dimension = sol.free_directions.size();
        out.directions = sol.free_directions;
        out.representatives.reserve(sol.discrete_offsets.size());
        for (const auto& offset : sol.discrete_offsets)
            out.representatives.emplace_back(offset);
        return out;
    }

private:
    void check_loop(const Loop& loop) const {
        for (const auto& s : loop.steps())
            if (s.edge >= base_.edges().size())
                throw std::invalid_argument("holonomy: loop references missing edge");
        // chain validity is enforced by Loop's named constructors against a
        // complex; re-check endpoints here so loops from a different complex
        // cannot slip through
        auto start = [&](const EdgeStep& s) {
            const Edge& e = base_.edges()[s.edge];
            return s.forward ? e.from : e.to;
        };
        auto end = [&](const EdgeStep& s) {
            const Edge& e = base_.edges()[s.edge];
            return s.forward ? e.to : e.from;
        };
        const auto& steps = loop.steps();
        for (std::size_t i = 0; i + 1 < steps.size(); ++i)
            if (end(steps[i]) != start(steps[i + 1]))
                throw std::invalid_argument("holonomy: broken chain");
        if (!steps.empty() && end(steps.back()) != start(steps.front()))
            throw std::invalid_argument("holonomy: loop not closed");
    }

    BaseComplex base_;
    SpaceGroup group_;
    std::vector<std::size_t> transition_;
};

} // namespace crysphon
