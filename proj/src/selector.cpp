#include "rshape/selector.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rshape/errors.h"
#include "rshape/hull.h"

namespace rshape {

void validate(const SelectorConfig& cfg) {
    std::vector<std::string> bad;
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) bad.push_back("alpha must lie in (0, 1)");
    if (cfg.max_iterations < 1) bad.push_back("max_iterations must be >= 1");
    if (cfg.max_cycles < 1) bad.push_back("max_cycles must be >= 1");
    if (!(cfg.nu > 0.0 && cfg.nu < 1.0)) bad.push_back("nu must lie in (0, 1)");
    if (!(cfg.angular_step > 0.0) || !std::isfinite(cfg.angular_step)) bad.push_back("angular_step must be positive");
    if (!std::isfinite(cfg.r_min) || !std::isfinite(cfg.r_max)) bad.push_back("r_min and r_max must be finite");
    if (cfg.r_min > 0.0 && cfg.r_max > 0.0 && cfg.r_min >= cfg.r_max) bad.push_back("r_min must be below r_max");
    if (bad.empty()) return;
    std::string msg = "invalid selector configuration:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw Error(ErrorKind::InvalidConfig, msg);
}

std::string outcome_name(SelectorOutcome o) {
    switch (o) {
        case SelectorOutcome::Bisection: return "bisection";
        case SelectorOutcome::ConvexHullFallback: return "convex_hull_fallback";
        case SelectorOutcome::CycleCapFallback: return "cycle_cap_fallback";
    }
    return "unknown";
}

SelectorTrace run_selector(const Probe& probe, const CycleCounter& cycles, double r_min, double r_max,
                           const SelectorConfig& cfg) {
    SelectorTrace tr;
    tr.r_max = r_max;
    auto record = [&](double r, const ProbeResult& p, double lo, double hi) {
        tr.iterations.push_back({r, p, lo, hi});
    };

    // accepted even at the largest scale: the convex hull is the estimate
    const ProbeResult top = probe(r_max);
    record(r_max, top, r_min, r_max);
    if (!top.reject) {
        tr.outcome = SelectorOutcome::ConvexHullFallback;
        tr.r_min = r_min;
        tr.r_hat = r_max;
        return tr;
    }

    // too split at r_min: grow it geometrically until the cycle cap holds
    const auto cap = static_cast<std::size_t>(cfg.max_cycles);
    std::size_t c = cycles(r_min);
    tr.r_min_growth.emplace_back(r_min, c);
    while (c > cap) {
        r_min *= 2.0;
        if (r_min >= r_max) {
            tr.outcome = SelectorOutcome::CycleCapFallback;
            tr.r_min = r_max;
            tr.r_hat = r_max;
            return tr;
        }
        c = cycles(r_min);
        tr.r_min_growth.emplace_back(r_min, c);
    }
    tr.r_min = r_min;

    const ProbeResult bottom = probe(r_min);
    record(r_min, bottom, r_min, r_max);
    if (bottom.reject) {
        tr.outcome = SelectorOutcome::CycleCapFallback;
        tr.r_hat = r_min;
        return tr;
    }

    double lo = r_min;
    double hi = r_max;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        const double r = 0.5 * (lo + hi);
        const ProbeResult p = probe(r);
        if (p.reject) {
            hi = r;
        } else {
            lo = r;
        }
        record(r, p, lo, hi);
    }
    tr.outcome = SelectorOutcome::Bisection;
    tr.r_hat = lo;
    return tr;
}

double default_r_min(const SampleGeometry& geo) {
    const auto pts = geo.points();
    std::vector<double> nn(pts.size(), std::numeric_limits<double>::infinity());
    for (const DelaunayEdge& e : geo.edges()) {
        const double d = dist(pts[e.u], pts[e.v]);
        nn[e.u] = std::min(nn[e.u], d);
        nn[e.v] = std::min(nn[e.v], d);
    }
    const auto mid = nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2);
    std::nth_element(nn.begin(), mid, nn.end());
    double med = *mid;
    if (nn.size() % 2 == 0 && nn.size() >= 2) {
        med = 0.5 * (med + *std::max_element(nn.begin(), mid));
    }
    return 0.5 * med;
}

SelectorTrace select_rs(std::shared_ptr<const SampleGeometry> geo, const SelectorConfig& cfg) {
    validate(cfg);
    if (geo->size() < 3) throw Error(ErrorKind::TooFewPoints, "selector needs at least 3 points");
    if (!geo->proper()) throw Error(ErrorKind::AllCollinear, "all points are collinear");
    const double r_max = cfg.r_max > 0.0 ? cfg.r_max : geo->diameter();
    double r_min = cfg.r_min > 0.0 ? cfg.r_min : default_r_min(*geo);
    if (r_min >= r_max) {
        throw Error(ErrorKind::InvalidConfig, "r_min must be below r_max");
    }
    const TestOptions opt{cfg.angular_step, true};
    auto probe = [&](double r) {
        ProbeResult p;
        const RConvexHull h = build_rconvex_hull(geo, r);
        p.cycle_count = h.cycle_count();
        try {
            p.verdict = test_uniformity(h, cfg.alpha, opt);
            p.reject = p.verdict.reject;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DegenerateSampleSize) throw;
            p.degenerate = true;
            p.reject = true;
        }
        return p;
    };
    auto cycles = [&](double r) { return build_rconvex_hull(geo, r).cycle_count(); };
    return run_selector(probe, cycles, r_min, r_max, cfg);
}

SelectorTrace select_rs(const PointCloud& cloud, const SelectorConfig& cfg) {
    return select_rs(std::make_shared<const SampleGeometry>(cloud), cfg);
}

double select_mm(const PointCloud& cloud) {
    double best = 0.0;
    for (const WeightedEdge& e : euclidean_mst(cloud)) best = std::max(best, e.weight);
    return best;
}

SupportEstimate estimate_support(std::shared_ptr<const SampleGeometry> geo, const SelectorConfig& cfg) {
    SelectorTrace tr = select_rs(geo, cfg);
    const double r = tr.outcome == SelectorOutcome::ConvexHullFallback ? std::max(geo->diameter(), tr.r_hat)
                                                                        : cfg.nu * tr.r_hat;
    RConvexHull h = build_rconvex_hull(geo, r);
    return {std::move(tr), std::move(h)};
}

RConvexHull estimate_support(const PointCloud& cloud, const SelectorConfig& cfg) {
    return estimate_support(std::make_shared<const SampleGeometry>(cloud), cfg).hull;
}

}  // namespace rshape
