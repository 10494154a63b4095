// SPDX-License-Identifier: Apache-2.0
#include "tubelink/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tubelink {

bool BoundingBox::valid() const {
    return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
           std::isfinite(y2) && x2 > x1 && y2 > y1;
}

double spatial_iou(const BoundingBox& a, const BoundingBox& b) {
    if (!a.valid() || !b.valid()) {
        throw std::domain_error("spatial_iou: degenerate bounding box");
    }
    const double ix = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double iy = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

}  // namespace tubelink
