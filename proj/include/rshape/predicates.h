#pragma once

#include "rshape/geometry.h"

namespace rshape {

/// Sign of the orientation determinant: +1 when a, b, c turn counterclockwise,
/// -1 clockwise, 0 collinear. Exact for all finite double inputs.
int orient2d(Point2 a, Point2 b, Point2 c);

/// +1 when d lies strictly inside the circle through a, b, c (given
/// counterclockwise), -1 outside, 0 cocircular. Exact.
int incircle(Point2 a, Point2 b, Point2 c, Point2 d);

}  // namespace rshape
