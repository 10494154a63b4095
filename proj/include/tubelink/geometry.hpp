// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace tubelink {

// Axis-aligned box in continuous pixel coordinates, corner-encoded.
// Valid boxes have x2 > x1 and y2 > y1.
struct BoundingBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
    bool valid() const;
};

// Intersection-over-union of two valid boxes. Throws std::domain_error on a
// degenerate (zero-area or non-finite) box.
double spatial_iou(const BoundingBox& a, const BoundingBox& b);

}  // namespace tubelink
