#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rshape/rconvex.h"
#include "rshape/spacing.h"

namespace rshape {

struct SelectorConfig {
    double alpha = 0.01;
    int max_iterations = 20;  // I
    int max_cycles = 4;       // C
    double r_min = 0.0;       // <= 0: half the median nearest-neighbour distance
    double r_max = 0.0;       // <= 0: sample diameter
    double nu = 0.95;
    double angular_step = kDefaultAngularStep;
    std::uint64_t seed = 0;
};

/// Throws InvalidConfig naming every offending field.
void validate(const SelectorConfig& cfg);

enum class SelectorOutcome { Bisection, ConvexHullFallback, CycleCapFallback };
std::string outcome_name(SelectorOutcome o);

struct ProbeResult {
    bool reject = false;
    bool degenerate = false;  // test not computable (zero area or n - v_n < 3); counted as reject
    std::size_t cycle_count = 0;
    UniformityVerdict verdict;
};

struct SelectorStep {
    double r = 0.0;
    ProbeResult probe;
    double r_lo = 0.0;  // bracket after this step
    double r_hi = 0.0;
};

struct SelectorTrace {
    std::vector<SelectorStep> iterations;
    /// (r, cycle_count) visited while growing r_min to satisfy the cycle cap.
    std::vector<std::pair<double, std::size_t>> r_min_growth;
    SelectorOutcome outcome = SelectorOutcome::Bisection;
    double r_hat = 0.0;
    double r_min = 0.0;  // effective bracket
    double r_max = 0.0;
};

using Probe = std::function<ProbeResult(double r)>;
using CycleCounter = std::function<std::size_t(double r)>;

/// The bracket validation + bisection driver over an arbitrary probe.
SelectorTrace run_selector(const Probe& probe, const CycleCounter& cycles, double r_min, double r_max,
                           const SelectorConfig& cfg);

double default_r_min(const SampleGeometry& geo);

SelectorTrace select_rs(std::shared_ptr<const SampleGeometry> geo, const SelectorConfig& cfg);
SelectorTrace select_rs(const PointCloud& cloud, const SelectorConfig& cfg);

/// Longest edge of the Euclidean minimum spanning tree. Throws TooFewPoints.
double select_mm(const PointCloud& cloud);

struct SupportEstimate {
    SelectorTrace trace;
    RConvexHull hull;
};

/// C_{nu * r_hat}, or the convex hull after the convex-hull fallback.
SupportEstimate estimate_support(std::shared_ptr<const SampleGeometry> geo, const SelectorConfig& cfg);
RConvexHull estimate_support(const PointCloud& cloud, const SelectorConfig& cfg);

}  // namespace rshape
