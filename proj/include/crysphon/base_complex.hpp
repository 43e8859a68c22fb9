#pragma once

// Combinatorial stand-in for the open cover of the base: charts, oriented
// overlap edges, oriented triangles.  Geometry enters only through the 1-d
// sample grids attached later by section fields.

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "crysphon/errors.hpp"

namespace crysphon {

struct Edge {
    std::size_t from = 0, to = 0;
};

/// Oriented triangle (a,b,c): edges (a->b), (b->c), (a->c) must all exist.
struct Triangle {
    std::size_t a = 0, b = 0, c = 0;
};

class BaseComplex {
public:
    BaseComplex(std::size_t chart_count, std::vector<Edge> edges,
                std::vector<Triangle> triangles = {})
        : charts_(chart_count), edges_(std::move(edges)), triangles_(std::move(triangles)) {
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const Edge& ed = edges_[e];
            if (ed.from >= charts_ || ed.to >= charts_)
                throw validation_error("base complex: edge references missing chart");
            if (!index_.try_emplace({ed.from, ed.to}, e).second)
                throw validation_error("base complex: duplicate oriented edge");
        }
        for (const auto& t : triangles_) {
            if (!edge_index(t.a, t.b) || !edge_index(t.b, t.c) || !edge_index(t.a, t.c))
                throw validation_error("base complex: triangle edge missing");
        }
    }

    std::size_t chart_count() const { return charts_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }

    std::optional<std::size_t> edge_index(std::size_t from, std::size_t to) const {
        auto it = index_.find({from, to});
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::size_t charts_ = 0;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index_;
};

/// One traversal step: an edge walked forward (from -> to) or backward.
struct EdgeStep {
    std::size_t edge = 0;
    bool forward = true;
};

class Loop {
public:
    static Loop from_steps(const BaseComplex& base, std::vector<EdgeStep> steps) {
        if (steps.empty()) throw std::invalid_argument("loop: empty");
        for (const auto& s : steps)
            if (s.edge >= base.edges().size())
                throw std::invalid_argument("loop: edge index out of range");
        auto start = [&](const EdgeStep& s) {
            const Edge& e = base.edges()[s.edge];
            return s.forward ? e.from : e.to;
        };
        auto end = [&](const EdgeStep& s) {
            const Edge& e = base.edges()[s.edge];
            return s.forward ? e.to : e.from;
        };
        for (std::size_t i = 0; i + 1 < steps.size(); ++i)
            if (end(steps[i]) != start(steps[i + 1]))
                throw std::invalid_argument("loop: steps do not chain head-to-tail");
        if (end(steps.back()) != start(steps.front()))
            throw std::invalid_argument("loop: not closed");
        Loop l;
        l.steps_ = std::move(steps);
        l.base_chart_ = start(l.steps_.front());
        return l;
    }

    /// Ordered list of edges, each traversed forward.
    static Loop from_edges(const BaseComplex& base, const std::vector<std::size_t>& edges) {
        std::vector<EdgeStep> steps;
        steps.reserve(edges.size());
        for (std::size_t e : edges) steps.push_back({e, true});
        return from_steps(base, std::move(steps));
    }

    const std::vector<EdgeStep>& steps() const { return steps_; }
    std::size_t base_chart() const { return base_chart_; }

    Loop reversed() const {
        Loop l;
        l.steps_.reserve(steps_.size());
        for (auto it = steps_.rbegin(); it != steps_.rend(); ++it)
            l.steps_.push_back({it->edge, !it->forward});
        l.base_chart_ = base_chart_;  // reversal of a closed loop keeps its basepoint set
        return l;
    }

private:
    std::vector<EdgeStep> steps_;
    std::size_t base_chart_ = 0;
};

} // namespace crysphon
