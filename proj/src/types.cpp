// SPDX-License-Identifier: Apache-2.0
#include "tubelink/types.hpp"

#include <cmath>
#include <stdexcept>

namespace tubelink {

bool scores_valid(const ClassScores& scores, std::size_t class_count) {
    if (scores.size() != class_count) return false;
    for (double s : scores) {
        if (!std::isfinite(s) || s < 0.0 || s > 1.0) return false;
    }
    return true;
}

void Config::validate() const {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::domain_error("Config: lambda must be in [0,1]");
    if (top_n < 1) throw std::domain_error("Config: top_n must be positive");
    if (max_misses < 1)
        throw std::domain_error("Config: max_misses must be positive");
    if (alpha < 0.0) throw std::domain_error("Config: alpha must be >= 0");
    if (nms_iou < 0.0 || nms_iou > 1.0)
        throw std::domain_error("Config: nms_iou must be in [0,1]");
    if (min_score < 0.0 || min_score > 1.0)
        throw std::domain_error("Config: min_score must be in [0,1]");
    if (class_count == 0)
        throw std::domain_error("Config: class_count must be positive");
}

}  // namespace tubelink
