// SPDX-License-Identifier: Apache-2.0
#include "tubelink/suppression.hpp"

#include <algorithm>
#include <stdexcept>

namespace tubelink {

std::vector<ClassDetection> nms_top_n(const std::vector<Detection>& frame,
                                      std::size_t class_id, double nms_iou,
                                      int n, double min_score) {
    if (n < 1) throw std::domain_error("nms_top_n: n must be >= 1");
    if (nms_iou < 0.0 || nms_iou > 1.0)
        throw std::domain_error("nms_top_n: nms_iou must be in [0,1]");

    std::vector<ClassDetection> candidates;
    candidates.reserve(frame.size());
    for (const auto& det : frame) {
        if (class_id >= det.scores.size())
            throw std::domain_error("nms_top_n: class_id out of range");
        const double s = det.scores[class_id];
        if (s < min_score) continue;
        candidates.push_back({det.box, class_id, s});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const ClassDetection& a, const ClassDetection& b) {
                         return a.score > b.score;
                     });

    std::vector<ClassDetection> kept;
    for (const auto& cand : candidates) {
        if (static_cast<int>(kept.size()) >= n) break;
        bool suppressed = false;
        for (const auto& k : kept) {
            if (spatial_iou(cand.box, k.box) > nms_iou) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(cand);
    }
    return kept;
}

std::vector<std::vector<ClassDetection>> suppress_all_classes(
    const std::vector<Detection>& frame, const Config& config) {
    std::vector<std::vector<ClassDetection>> out(config.class_count);
    for (std::size_t c = 0; c < config.class_count; ++c) {
        out[c] = nms_top_n(frame, c, config.nms_iou, config.top_n,
                           config.min_score);
    }
    return out;
}

}  // namespace tubelink
