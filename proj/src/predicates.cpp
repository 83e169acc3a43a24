#include "rshape/predicates.h"

#include <cmath>
#include <limits>

#include <gmpxx.h>

namespace rshape {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

int sign_of(const mpq_class& v) { return sgn(v); }

int orient_exact(Point2 a, Point2 b, Point2 c) {
    const mpq_class ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    const mpq_class det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    return sign_of(det);
}

int incircle_exact(Point2 a, Point2 b, Point2 c, Point2 d) {
    const mpq_class dx(d.x), dy(d.y);
    const mpq_class adx = mpq_class(a.x) - dx, ady = mpq_class(a.y) - dy;
    const mpq_class bdx = mpq_class(b.x) - dx, bdy = mpq_class(b.y) - dy;
    const mpq_class cdx = mpq_class(c.x) - dx, cdy = mpq_class(c.y) - dy;
    const mpq_class alift = adx * adx + ady * ady;
    const mpq_class blift = bdx * bdx + bdy * bdy;
    const mpq_class clift = cdx * cdx + cdy * cdy;
    const mpq_class det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                          clift * (adx * bdy - bdx * ady);
    return sign_of(det);
}

}  // namespace

int orient2d(Point2 a, Point2 b, Point2 c) {
    const double detleft = (b.x - a.x) * (c.y - a.y);
    const double detright = (b.y - a.y) * (c.x - a.x);
    const double det = detleft - detright;
    const double detsum = std::abs(detleft) + std::abs(detright);
    if (detsum > 1e-200 && std::abs(det) > kOrientBound * detsum) return det > 0 ? 1 : -1;
    return orient_exact(a, b, c);
}

int incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                       clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    // The differences above are rounded, so the static bound is widened.
    if (permanent > 1e-200 && std::abs(det) > 4.0 * kIncircleBound * permanent) {
        return det > 0 ? 1 : -1;
    }
    return incircle_exact(a, b, c, d);
}

}  // namespace rshape
