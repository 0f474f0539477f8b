#pragma once

// Knot-refinement recipes: uniform midpoint insertion, equally spaced insertion
// in given intervals, clustering around a parametric point, and double knots.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "spline.hpp"

namespace igahelm {

struct KnotInsertion {
    double value;
    int count;  // number of copies to insert (1 or 2)
    friend bool operator==(const KnotInsertion&, const KnotInsertion&) = default;
};

struct RefinementPlan {
    std::vector<KnotInsertion> xi;
    std::vector<KnotInsertion> eta;
    std::string description;

    bool empty() const noexcept { return xi.empty() && eta.empty(); }
    std::size_t inserted_xi() const {
        std::size_t c = 0;
        for (const auto& k : xi) c += static_cast<std::size_t>(k.count);
        return c;
    }
    std::size_t inserted_eta() const {
        std::size_t c = 0;
        for (const auto& k : eta) c += static_cast<std::size_t>(k.count);
        return c;
    }
};

/// Open interval (a, b) of a knot vector with b > a.
struct KnotInterval {
    double a;
    double b;
};

/// Inserted knots closer than this to an existing knot are snapped onto it.
inline constexpr double kKnotSnap = 1e-12;

namespace detail {

inline double snap_to_knot(const KnotVector& kv, double t) {
    const auto& k = kv.knots();
    const auto it = std::lower_bound(k.begin(), k.end(), t);
    if (it != k.end() && std::abs(*it - t) <= kKnotSnap) return *it;
    if (it != k.begin() && std::abs(*(it - 1) - t) <= kKnotSnap) return *(it - 1);
    return t;
}

// Sort by value and merge repeated values by summing counts.
inline std::vector<KnotInsertion> normalize(std::vector<KnotInsertion> v) {
    std::stable_sort(v.begin(), v.end(), [](const auto& l, const auto& r) { return l.value < r.value; });
    std::vector<KnotInsertion> out;
    for (const auto& k : v) {
        if (k.count <= 0) continue;
        if (!out.empty() && out.back().value == k.value)
            out.back().count += k.count;
        else
            out.push_back(k);
    }
    return out;
}

inline std::vector<KnotInsertion> equally_spaced(const KnotVector& kv, const std::vector<KnotInterval>& intervals,
                                                 int count) {
    std::vector<KnotInsertion> out;
    for (const auto& iv : intervals) {
        if (!(iv.a < iv.b)) throw RefinementError("interval insertion needs a < b");
        for (int k = 1; k <= count; ++k)
            out.push_back({snap_to_knot(kv, iv.a + (iv.b - iv.a) * k / (count + 1)), 1});
    }
    return out;
}

inline std::vector<double> distinct_knots(const KnotVector& kv) {
    std::vector<double> d(kv.knots());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
}

inline std::vector<double> expand(const std::vector<KnotInsertion>& ins) {
    std::vector<double> out;
    for (const auto& k : ins)
        for (int c = 0; c < k.count; ++c) out.push_back(k.value);
    return out;
}

inline void check_insertions(const KnotVector& kv, const std::vector<KnotInsertion>& ins, const char* dir) {
    for (const auto& k : ins) {
        if (!(k.value > 0.0 && k.value < 1.0))
            throw DomainError(std::string("refinement plan: ") + dir + " knot outside (0,1): " + std::to_string(k.value));
        if (kv.multiplicity(k.value) + k.count > 2)
            throw RefinementError(std::string("refinement plan: ") + dir + " knot " + std::to_string(k.value) +
                                  " would exceed multiplicity 2");
    }
}

} // namespace detail

/// One new knot at the midpoint of every nonzero-width element, both directions.
inline RefinementPlan uniform_midpoint_plan(const TensorSpace& space) {
    RefinementPlan plan;
    for (const auto& e : elements(space.kv_xi())) plan.xi.push_back({0.5 * (e.a + e.b), 1});
    for (const auto& e : elements(space.kv_eta())) plan.eta.push_back({0.5 * (e.a + e.b), 1});
    plan.description = "uniform midpoint";
    return plan;
}

/// `count` equally spaced knots inside each listed interval.
inline RefinementPlan interval_plan(const TensorSpace& space, const std::vector<KnotInterval>& xi_intervals,
                                    const std::vector<KnotInterval>& eta_intervals, int count) {
    RefinementPlan plan;
    plan.xi = detail::normalize(detail::equally_spaced(space.kv_xi(), xi_intervals, count));
    plan.eta = detail::normalize(detail::equally_spaced(space.kv_eta(), eta_intervals, count));
    plan.description = "intervals x" + std::to_string(count);
    return plan;
}

/// Per-interval counts (a, b, count) in each direction.
struct IntervalCount {
    double a;
    double b;
    int count;
};

inline RefinementPlan interval_plan(const TensorSpace& space, const std::vector<IntervalCount>& xi,
                                    const std::vector<IntervalCount>& eta) {
    RefinementPlan plan;
    for (const auto& ic : xi) {
        auto v = detail::equally_spaced(space.kv_xi(), {{ic.a, ic.b}}, ic.count);
        plan.xi.insert(plan.xi.end(), v.begin(), v.end());
    }
    for (const auto& ic : eta) {
        auto v = detail::equally_spaced(space.kv_eta(), {{ic.a, ic.b}}, ic.count);
        plan.eta.insert(plan.eta.end(), v.begin(), v.end());
    }
    plan.xi = detail::normalize(std::move(plan.xi));
    plan.eta = detail::normalize(std::move(plan.eta));
    plan.description = "intervals";
    return plan;
}

/// Knot intervals clustered around t: if t is a knot, the two intervals adjacent
/// to it; otherwise the interval containing t and its two neighbours.
inline std::vector<KnotInterval> cluster_intervals(const KnotVector& kv, double t) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("cluster center must lie in (0,1)");
    const auto d = detail::distinct_knots(kv);
    const auto it = std::lower_bound(d.begin(), d.end(), t);
    const auto pos = static_cast<std::size_t>(it - d.begin());
    std::vector<KnotInterval> out;
    if (*it == t) {
        out.push_back({d[pos - 1], d[pos]});
        out.push_back({d[pos], d[pos + 1]});
    } else {
        const std::size_t lo = pos - 1;  // d[lo] < t < d[pos]
        if (lo >= 1) out.push_back({d[lo - 1], d[lo]});
        out.push_back({d[lo], d[pos]});
        if (pos + 1 < d.size()) out.push_back({d[pos], d[pos + 1]});
    }
    return out;
}

/// Equally spaced knots (`knots_per_interval` in each interval) around the
/// parametric point `center`; optionally the center coordinates become double knots.
inline RefinementPlan cluster_plan(const TensorSpace& space, Point2 center, int knots_per_interval,
                                   bool double_center = false) {
    if (knots_per_interval < 1) throw ValidationError("cluster_plan: knots_per_interval must be positive");
    RefinementPlan plan;
    plan.xi = detail::equally_spaced(space.kv_xi(), cluster_intervals(space.kv_xi(), center.x), knots_per_interval);
    plan.eta = detail::equally_spaced(space.kv_eta(), cluster_intervals(space.kv_eta(), center.y), knots_per_interval);
    if (double_center) {
        if (int c = 2 - space.kv_xi().multiplicity(center.x); c > 0) plan.xi.push_back({center.x, c});
        if (int c = 2 - space.kv_eta().multiplicity(center.y); c > 0) plan.eta.push_back({center.y, c});
    }
    plan.xi = detail::normalize(std::move(plan.xi));
    plan.eta = detail::normalize(std::move(plan.eta));
    plan.description = "cluster x" + std::to_string(knots_per_interval) + (double_center ? " + double center" : "");
    return plan;
}

/// Raise each listed parameter to multiplicity 2.
inline RefinementPlan double_knot_plan(const TensorSpace& space, const std::vector<double>& params_xi,
                                       const std::vector<double>& params_eta) {
    RefinementPlan plan;
    auto build = [](const KnotVector& kv, const std::vector<double>& ps) {
        std::vector<KnotInsertion> out;
        for (double t : ps) {
            if (!(t > 0.0 && t < 1.0)) throw DomainError("double_knot_plan: parameter outside (0,1)");
            out.push_back({t, std::max(0, 2 - kv.multiplicity(t))});
        }
        // duplicates in the request collapse to one target
        std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.value < r.value; });
        out.erase(std::unique(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.value == r.value; }),
                  out.end());
        std::erase_if(out, [](const auto& k) { return k.count == 0; });
        return out;
    };
    plan.xi = build(space.kv_xi(), params_xi);
    plan.eta = build(space.kv_eta(), params_eta);
    plan.description = "double knots";
    return plan;
}

/// Union of two plans computed against the same space.
inline RefinementPlan merge(const RefinementPlan& a, const RefinementPlan& b) {
    RefinementPlan out;
    out.xi = a.xi;
    out.xi.insert(out.xi.end(), b.xi.begin(), b.xi.end());
    out.eta = a.eta;
    out.eta.insert(out.eta.end(), b.eta.begin(), b.eta.end());
    out.xi = detail::normalize(std::move(out.xi));
    out.eta = detail::normalize(std::move(out.eta));
    out.description = a.description.empty() ? b.description
                      : b.description.empty() ? a.description
                                              : a.description + " + " + b.description;
    return out;
}

/// Transport the geometry exactly to the refined space. The lift is not
/// transported; rebuild it on the returned net's space.
inline ControlNet apply_plan(const RefinementPlan& plan, const ControlNet& net) {
    detail::check_insertions(net.kv_xi(), plan.xi, "xi");
    detail::check_insertions(net.kv_eta(), plan.eta, "eta");
    const auto kx = detail::expand(plan.xi);
    const auto ky = detail::expand(plan.eta);
    return refine_geometry(net, kx, ky);
}

} // namespace igahelm
