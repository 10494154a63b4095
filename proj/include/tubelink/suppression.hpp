// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tubelink/types.hpp"

namespace tubelink {

// A detection projected onto one class.
struct ClassDetection {
    BoundingBox box;
    std::size_t class_id = 0;
    double score = 0.0;
};

// Per-class NMS followed by top-n truncation. Survivors come back in
// descending score order; any two of them overlap by at most nms_iou.
// Score ties keep input order. min_score (default 0) drops boxes below the
// floor before suppression.
std::vector<ClassDetection> nms_top_n(const std::vector<Detection>& frame,
                                      std::size_t class_id, double nms_iou,
                                      int n, double min_score = 0.0);

// Convenience: nms_top_n for every class under one Config.
std::vector<std::vector<ClassDetection>> suppress_all_classes(
    const std::vector<Detection>& frame, const Config& config);

}  // namespace tubelink
