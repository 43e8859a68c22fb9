#pragma once

// Sampled local lifts of torus-valued sections, their finite-difference
// covariant differentials, and the overlap gluing checks: lifts glue by
// A^-1 u + a(g^-1) + lattice vector, derivatives by A^-1 alone.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "crysphon/flat_bundle.hpp"

namespace crysphon {

struct ChartGrid {
    double x0 = 0.0;   // first sample's chart parameter
    double h = 1.0;    // uniform spacing
    std::size_t n = 0; // sample count
};

/// Index correspondence across one edge: sample (from_begin + i) of the
/// source chart meets sample (to_begin + i) of the target chart, i < count.
/// Corresponding samples carry the same base point and the same spacing.
struct OverlapSamples {
    std::size_t from_begin = 0, to_begin = 0, count = 0;
};

namespace detail {

inline void check_field_shape(const std::vector<ChartGrid>& grids,
                              const std::vector<Eigen::MatrixXd>& values) {
    if (grids.size() != values.size())
        throw std::invalid_argument("section field: one grid per chart required");
    for (std::size_t c = 0; c < grids.size(); ++c) {
        if (values[c].cols() != static_cast<Eigen::Index>(grids[c].n))
            throw std::invalid_argument("section field: sample count mismatch");
        if (grids[c].n > 0 && grids[c].h <= 0.0)
            throw std::invalid_argument("section field: nonpositive grid spacing");
    }
}

} // namespace detail

/// Per-chart sampled lifts u_alpha of the torus-valued field, in lattice
/// coordinates, plus the per-edge overlap sample correspondences.
class SectionField {
public:
    SectionField(std::vector<ChartGrid> grids, std::vector<Eigen::MatrixXd> values,
                 std::vector<OverlapSamples> overlaps)
        : grids_(std::move(grids)), values_(std::move(values)), overlaps_(std::move(overlaps)) {
        detail::check_field_shape(grids_, values_);
    }

    std::size_t chart_count() const { return grids_.size(); }
    const ChartGrid& grid(std::size_t c) const { return grids_.at(c); }
    const Eigen::MatrixXd& values(std::size_t c) const { return values_.at(c); }
    Eigen::MatrixXd& values(std::size_t c) { return values_.at(c); }
    const std::vector<OverlapSamples>& overlaps() const { return overlaps_; }

private:
    std::vector<ChartGrid> grids_;
    std::vector<Eigen::MatrixXd> values_;
    std::vector<OverlapSamples> overlaps_;
};

/// Finite-difference derivative samples of a section field, same grids.
class CovariantDifferentialField {
public:
    CovariantDifferentialField(std::vector<ChartGrid> grids, std::vector<Eigen::MatrixXd> values,
                               std::vector<OverlapSamples> overlaps)
        : grids_(std::move(grids)), values_(std::move(values)), overlaps_(std::move(overlaps)) {
        detail::check_field_shape(grids_, values_);
    }

    std::size_t chart_count() const { return grids_.size(); }
    const ChartGrid& grid(std::size_t c) const { return grids_.at(c); }
    const Eigen::MatrixXd& values(std::size_t c) const { return values_.at(c); }
    const std::vector<OverlapSamples>& overlaps() const { return overlaps_; }

private:
    std::vector<ChartGrid> grids_;
    std::vector<Eigen::MatrixXd> values_;
    std::vector<OverlapSamples> overlaps_;
};

/// d/dx with respect to the chart parameter: central differences in the
/// interior, 3-point one-sided stencils at chart ends (both second order).
inline CovariantDifferentialField covariant_differential(const SectionField& s) {
    std::vector<ChartGrid> grids;
    std::vector<Eigen::MatrixXd> derivs;
    for (std::size_t c = 0; c < s.chart_count(); ++c) {
        const ChartGrid& g = s.grid(c);
        if (g.n < 3)
            throw std::invalid_argument("covariant_differential: need at least 3 samples per chart");
        const Eigen::MatrixXd& u = s.values(c);
        Eigen::MatrixXd du(u.rows(), u.cols());
        const double inv2h = 1.0 / (2.0 * g.h);
        du.col(0) = (-3.0 * u.col(0) + 4.0 * u.col(1) - u.col(2)) * inv2h;
        for (std::size_t i = 1; i + 1 < g.n; ++i)
            du.col(static_cast<Eigen::Index>(i)) =
                (u.col(static_cast<Eigen::Index>(i + 1)) - u.col(static_cast<Eigen::Index>(i - 1))) *
                inv2h;
        auto last = static_cast<Eigen::Index>(g.n - 1);
        du.col(last) = (3.0 * u.col(last) - 4.0 * u.col(last - 1) + u.col(last - 2)) * inv2h;
        grids.push_back(g);
        derivs.push_back(std::move(du));
    }
    return CovariantDifferentialField(std::move(grids), std::move(derivs), s.overlaps());
}

struct EdgeGluingResult {
    std::size_t edge = 0;
    double residual = 0.0;                 // max |r - nearest integer vector|
    std::vector<long long> lambda;         // recovered lattice vector (first sample)
    RatVec shift;                          // fractional shift a(g^-1) consumed by this edge
    bool lambda_constant = true;           // same lambda across the whole overlap
    bool ambiguous = false;                // some residual coordinate in the rejection band
};

struct SectionGluingReport {
    std::vector<EdgeGluingResult> edges;
    double max_residual = 0.0;
    bool pass = false;
};

namespace detail {

inline void check_overlaps(const FlatBundle& bundle, const std::vector<ChartGrid>& grids,
                           const std::vector<OverlapSamples>& overlaps) {
    const auto& edges = bundle.base().edges();
    if (overlaps.size() != edges.size())
        throw std::invalid_argument("gluing: one overlap record per bundle edge required");
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const OverlapSamples& ov = overlaps[e];
        if (ov.count == 0) continue;
        if (ov.from_begin + ov.count > grids[edges[e].from].n ||
            ov.to_begin + ov.count > grids[edges[e].to].n)
            throw std::invalid_argument("gluing: overlap exceeds chart sample range");
    }
}

inline Eigen::MatrixXd linear_part_double(const FlatBundle& bundle, std::size_t element) {
    const IntMatrix& a = bundle.space_group().point_group().element(element);
    const auto d = static_cast<Eigen::Index>(a.rows());
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            out(i, j) = static_cast<double>(a(static_cast<std::size_t>(i),
                                              static_cast<std::size_t>(j)).convert_to<long long>());
    return out;
}

inline Eigen::VectorXd shift_double(const FlatBundle& bundle, std::size_t element) {
    const RatVec& a = bundle.space_group().translation(element);
    Eigen::VectorXd out(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = to_double(a[i]);
    return out;
}

} // namespace detail

/// Per-edge check of  u_beta = A^-1 u_alpha + a(g^-1) + lambda,  lambda
/// recovered by nearest-integer rounding with a rejection band: any
/// coordinate residual in [0.4, 0.5] is reported as ambiguous winding.
inline SectionGluingReport check_section_gluing(const FlatBundle& bundle, const SectionField& s,
                                                double tol) {
    std::vector<ChartGrid> grids;
    for (std::size_t c = 0; c < s.chart_count(); ++c) grids.push_back(s.grid(c));
    detail::check_overlaps(bundle, grids, s.overlaps());

    SectionGluingReport report;
    report.pass = true;
    const auto& edges = bundle.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const OverlapSamples& ov = s.overlaps()[e];
        if (ov.count == 0) continue;
        std::size_t ginv = bundle.space_group().point_group().inverse(bundle.transition(e));
        Eigen::MatrixXd a_inv = detail::linear_part_double(bundle, ginv);
        Eigen::VectorXd shift = detail::shift_double(bundle, ginv);

        EdgeGluingResult res;
        res.edge = e;
        res.shift = bundle.space_group().translation(ginv);
        std::vector<long long> lambda0;
        for (std::size_t i = 0; i < ov.count; ++i) {
            Eigen::VectorXd ua = s.values(edges[e].from).col(static_cast<Eigen::Index>(ov.from_begin + i));
            Eigen::VectorXd ub = s.values(edges[e].to).col(static_cast<Eigen::Index>(ov.to_begin + i));
            Eigen::VectorXd r = ub - (a_inv * ua + shift);
            std::vector<long long> lambda(static_cast<std::size_t>(r.size()));
            double frac = 0.0;
            for (Eigen::Index c = 0; c < r.size(); ++c) {
                double rounded = std::nearbyint(r(c));
                lambda[static_cast<std::size_t>(c)] = static_cast<long long>(rounded);
                double dist = std::abs(r(c) - rounded);
                frac = std::max(frac, dist);
                if (dist >= 0.4) res.ambiguous = true;
            }
            res.residual = std::max(res.residual, frac);
            if (i == 0)
                lambda0 = lambda;
            else if (lambda != lambda0)
                res.lambda_constant = false;
        }
        res.lambda = std::move(lambda0);
        report.max_residual = std::max(report.max_residual, res.residual);
        if (res.residual >= tol || !res.lambda_constant || res.ambiguous) report.pass = false;
        report.edges.push_back(std::move(res));
    }
    return report;
}

struct EdgeDerivativeResult {
    std::size_t edge = 0;
    double residual_central = 0.0;   // pairs where both stencils are central
    double residual_onesided = 0.0;  // pairs involving a chart-end stencil
};

struct DerivativeGluingReport {
    std::vector<EdgeDerivativeResult> edges;
    double max_residual_central = 0.0;
    double max_residual_onesided = 0.0;  // finite-difference truncation allowance
    bool pass = false;

    double max_residual() const { return std::max(max_residual_central, max_residual_onesided); }
};

/// Per-edge check of  du_beta = A^-1 du_alpha  -- no affine shift.  Pairs
/// involving a chart-end one-sided stencil are tallied separately: their
/// mismatch is pure finite-difference truncation, not a gluing defect.
inline DerivativeGluingReport check_derivative_gluing(const FlatBundle& bundle,
                                                      const CovariantDifferentialField& df,
                                                      double tol) {
    std::vector<ChartGrid> grids;
    for (std::size_t c = 0; c < df.chart_count(); ++c) grids.push_back(df.grid(c));
    detail::check_overlaps(bundle, grids, df.overlaps());

    DerivativeGluingReport report;
    report.pass = true;
    const auto& edges = bundle.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const OverlapSamples& ov = df.overlaps()[e];
        if (ov.count == 0) continue;
        std::size_t ginv = bundle.space_group().point_group().inverse(bundle.transition(e));
        Eigen::MatrixXd a_inv = detail::linear_part_double(bundle, ginv);

        EdgeDerivativeResult res;
        res.edge = e;
        const std::size_t na = df.grid(edges[e].from).n;
        const std::size_t nb = df.grid(edges[e].to).n;
        for (std::size_t i = 0; i < ov.count; ++i) {
            std::size_t ia = ov.from_begin + i, ib = ov.to_begin + i;
            Eigen::VectorXd da = df.values(edges[e].from).col(static_cast<Eigen::Index>(ia));
            Eigen::VectorXd db = df.values(edges[e].to).col(static_cast<Eigen::Index>(ib));
            double r = (db - a_inv * da).cwiseAbs().maxCoeff();
            bool onesided = ia == 0 || ia + 1 == na || ib == 0 || ib + 1 == nb;
            if (onesided)
                res.residual_onesided = std::max(res.residual_onesided, r);
            else
                res.residual_central = std::max(res.residual_central, r);
        }
        report.max_residual_central = std::max(report.max_residual_central, res.residual_central);
        report.max_residual_onesided = std::max(report.max_residual_onesided, res.residual_onesided);
        if (res.residual_central >= tol) report.pass = false;
        report.edges.push_back(res);
    }
    return report;
}

/// Builds a section compatible with the bundle gluing on a cycle base
/// (charts 0 -> 1 -> ... -> m-1 -> 0): the lift is a holonomy fixed point
/// plus a small equivariant perturbation, so section gluing is exact up to
/// roundoff and derivative gluing is exact up to stencil truncation.
inline SectionField build_compatible_section(const FlatBundle& bundle,
                                             const TorusPoint& fixed_point,
                                             std::size_t samples_per_chart,
                                             std::size_t overlap_samples, double amplitude) {
    const std::size_t m = bundle.base().chart_count();
    const std::size_t d = bundle.dim();
    if (m < 2) throw std::invalid_argument("compatible section: need at least 2 charts");
    if (samples_per_chart < 3 || overlap_samples == 0 ||
        overlap_samples + 1 > samples_per_chart)
        throw std::invalid_argument("compatible section: bad sample counts");
    if (fixed_point.dim() != d)
        throw std::invalid_argument("compatible section: fixed point dimension mismatch");

    // the base must be the m-cycle, edges i -> i+1 mod m
    std::vector<std::size_t> cycle_edges(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto e = bundle.base().edge_index(i, (i + 1) % m);
        if (!e || bundle.base().edges().size() != m)
            throw std::invalid_argument("compatible section: base complex is not a cycle");
        cycle_edges[i] = *e;
    }

    // the fixed point must actually be fixed by the cycle holonomy (exact)
    Loop cycle = Loop::from_edges(bundle.base(), cycle_edges);
    std::size_t h = bundle.holonomy_element(cycle);
    if (!(bundle.space_group().torus_act(h, fixed_point) == fixed_point))
        throw std::invalid_argument("compatible section: point is not fixed by the holonomy");

    // chart frames as affine maps on R^d (representatives, no reduction)
    std::vector<Eigen::MatrixXd> frame_a(m);
    std::vector<Eigen::VectorXd> frame_b(m);
    frame_a[0] = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                           static_cast<Eigen::Index>(d));
    frame_b[0] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i + 1 < m; ++i) {
        std::size_t ginv =
            bundle.space_group().point_group().inverse(bundle.transition(cycle_edges[i]));
        Eigen::MatrixXd a = detail::linear_part_double(bundle, ginv);
        Eigen::VectorXd s = detail::shift_double(bundle, ginv);
        frame_a[i + 1] = a * frame_a[i];
        frame_b[i + 1] = a * frame_b[i] + s;
    }

    // equivariant profile: g(x + 1) = B g(x) with B the inverse holonomy
    // linear part; built from one eigenpair of B, frequency offset by 2*pi
    // so the trivial eigenvalue still yields a nonconstant profile
    Eigen::MatrixXd b_mat =
        detail::linear_part_double(bundle,
                                   bundle.space_group().point_group().inverse(h));
    Eigen::EigenSolver<Eigen::MatrixXd> es(b_mat);
    Eigen::VectorXcd w = es.eigenvectors().col(0);
    w /= w.norm();
    const double phase = std::arg(es.eigenvalues()(0));
    const double freq = phase + 2.0 * M_PI;
    auto profile = [&](double x) -> Eigen::VectorXd {
        std::complex<double> ph(std::cos(freq * x), std::sin(freq * x));
        return (ph * w).real();
    };

    Eigen::VectorXd v0(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
        v0(static_cast<Eigen::Index>(i)) = to_double(fixed_point.coords[i]);

    const std::size_t stride = samples_per_chart - overlap_samples;
    const double h_grid = 1.0 / (static_cast<double>(m) * static_cast<double>(stride));

    std::vector<ChartGrid> grids(m);
    std::vector<Eigen::MatrixXd> values(m);
    for (std::size_t c = 0; c < m; ++c) {
        grids[c] = ChartGrid{static_cast<double>(c * stride) * h_grid, h_grid, samples_per_chart};
        Eigen::MatrixXd u(static_cast<Eigen::Index>(d),
                          static_cast<Eigen::Index>(samples_per_chart));
        for (std::size_t i = 0; i < samples_per_chart; ++i) {
            double x = grids[c].x0 + static_cast<double>(i) * h_grid;
            u.col(static_cast<Eigen::Index>(i)) =
                frame_a[c] * (v0 + amplitude * profile(x)) + frame_b[c];
        }
        values[c] = std::move(u);
    }

    std::vector<OverlapSamples> overlaps(m);
    for (std::size_t i = 0; i < m; ++i)
        overlaps[cycle_edges[i]] = OverlapSamples{stride, 0, overlap_samples};

    return SectionField(std::move(grids), std::move(values), std::move(overlaps));
}

} // namespace crysphon
