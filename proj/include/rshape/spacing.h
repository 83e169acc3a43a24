#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rshape/rconvex.h"

namespace rshape {

/// u with exp(-exp(-u)) = 1 - alpha. Throws AlphaOutOfRange.
double gumbel_quantile(double alpha);

struct CriticalValue {
    double alpha = 0.0;
    std::size_t n = 0;
    std::size_t v_n = 0;
    double a_n = 0.0;
    double u_alpha = 0.0;
    double c_star_volume = 0.0;
    double c_star_radius = 0.0;
    int d = 2;
    double beta = 1.0;
};

/// Vertex-corrected critical volume for the maximal empty ball, d = 2,
/// beta = 1, with n replaced by n - v_n. Throws DegenerateSampleSize when
/// n - v_n < 3 or a_n <= 0, AlphaOutOfRange.
CriticalValue critical_value(std::size_t n, std::size_t v_n, double a_n, double alpha);

inline constexpr double kDefaultAngularStep = kTwoPi / 256.0;

/// Points of the dilation boundary (radius rho) sampled at multiples of
/// `angular_step` plus arc endpoints, restricted to the hull.
std::vector<Point2> candidate_set(const RConvexHull& hull, double rho, double angular_step = kDefaultAngularStep);

struct ClearanceMax {
    double value = 0.0;
    std::optional<Point2> argmax;
    std::size_t index = 0;
};

/// Largest distance to the hull boundary over the candidates lying inside the
/// hull; ties keep the first candidate.
ClearanceMax max_clearance(const RConvexHull& hull, std::span<const Point2> candidates);

struct UniformityVerdict {
    bool reject = false;
    double M_r = 0.0;
    double critical_radius = 0.0;
    std::size_t candidate_count = 0;
    std::optional<Point2> witness;
    CriticalValue critical;
};

struct TestOptions {
    double angular_step = kDefaultAngularStep;
    bool refine = true;  // one extra pass at step / 4 around the maximiser
};

UniformityVerdict test_uniformity(const RConvexHull& hull, double alpha, const TestOptions& opt = {});
UniformityVerdict test_uniformity(const PointCloud& cloud, double r, double alpha, const TestOptions& opt = {});

struct SpacingReport {
    double delta_hat = 0.0;
    Point2 center;
    double volume = 0.0;
};

/// Largest empty closed ball inside the hull. Throws DegenerateRegion when
/// the hull has zero area.
SpacingReport maximal_spacing(const RConvexHull& hull);
SpacingReport maximal_spacing(const PointCloud& cloud, const RConvexHull& hull);

}  // namespace rshape
