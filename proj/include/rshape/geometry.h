#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace rshape {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double dist2(Point2 a, Point2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}
inline Point2 polar(Point2 center, double radius, double angle) {
    return {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
}

/// Angle in [0, 2pi).
inline double normalize_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

inline double angle_of(Point2 v) { return normalize_angle(std::atan2(v.y, v.x)); }

/// True when `a` lies on the counterclockwise sweep from `start` of length `span`.
inline bool angle_in_sweep(double a, double start, double span) {
    return normalize_angle(a - start) <= span;
}

struct Box {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 1.0;
    double ymax = 1.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool contains(Point2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    static Box unit() { return {0.0, 0.0, 1.0, 1.0}; }

    friend bool operator==(const Box&, const Box&) = default;
};

Box bounding_box(std::span<const Point2> pts);

/// The sample X_n. Coordinates are finite; exact duplicates are dropped on
/// construction (first occurrence kept, order otherwise preserved).
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::vector<Point2> points, std::string label = {});

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Point2& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Point2> points() const { return points_; }
    const std::string& label() const { return label_; }
    std::size_t duplicates_removed() const { return duplicates_removed_; }
    Box bounds() const { return bounding_box(points_); }

private:
    std::vector<Point2> points_;
    std::string label_;
    std::size_t duplicates_removed_ = 0;
};

/// Minimum Euclidean distance from `x` to the cloud (linear scan).
double nearest_sample_distance(Point2 x, const PointCloud& cloud);

}  // namespace rshape
