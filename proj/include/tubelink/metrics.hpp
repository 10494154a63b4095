// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tubelink/linker.hpp"

namespace tubelink {

// An annotated action instance: one box per frame over a contiguous
// interval.
struct GroundTruthTube {
    std::string video_id;
    std::size_t class_id = 0;
    std::int64_t start_frame = 0;
    std::vector<BoundingBox> boxes;  // boxes[i] belongs to frame start_frame + i

    std::int64_t end_frame() const {
        return start_frame + static_cast<std::int64_t>(boxes.size()) - 1;
    }
};

// Spatio-temporal IoU: temporal Jaccard of the two frame sets times the mean
// per-frame spatial IoU over the shared frames. Zero when the tubes never
// coexist. Throws if the tubes belong to different videos.
double st_iou(const TubeSegment& pred, const GroundTruthTube& gt);

// Per-prediction match outcome at threshold delta, shared by AP and AUC.
struct MatchedPrediction {
    double score = 0.0;
    bool true_positive = false;
};

// Greedy score-ordered matching of predictions to ground truth; one GT per
// prediction at most.
std::vector<MatchedPrediction> match_predictions(
    const std::vector<TubeSegment>& preds,
    const std::vector<GroundTruthTube>& gts, double delta);

// Average precision of one class at ST-IoU threshold delta, using the
// monotone precision-envelope interpolation. Returns nullopt when the class
// has no ground truth (excluded from means, not zeroed).
std::optional<double> average_precision(const std::vector<TubeSegment>& preds,
                                        const std::vector<GroundTruthTube>& gts,
                                        double delta);

struct MapResult {
    double map = 0.0;
    std::map<std::size_t, std::optional<double>> per_class_ap;
};

// Mean AP over classes with ground truth, at one threshold.
MapResult map_at(const std::vector<TubeSegment>& preds,
                 const std::vector<GroundTruthTube>& gts, double delta);

// mAP averaged over delta in {0.50, 0.55, ..., 0.95}.
double map_avg_range(const std::vector<TubeSegment>& preds,
                     const std::vector<GroundTruthTube>& gts);

// Area under the ROC curve of TP rate (vs all ground truth) against FP rate
// (vs total false positives), sweeping a score threshold over all
// predictions pooled across classes. No false positives at all -> the final
// TP rate; no predictions -> 0.
double auc_at(const std::vector<TubeSegment>& preds,
              const std::vector<GroundTruthTube>& gts, double delta);

enum class MetricKind { kAuc, kMap, kAccuracy };

// Metric values indexed by video-observation fraction.
struct MetricCurve {
    MetricKind kind = MetricKind::kMap;
    double delta = 0.5;  // unused for accuracy
    std::vector<double> fractions;
    std::vector<double> values;
};

// Ground truth truncated to the first max_frame frames (inclusive); tubes
// that have not started yet disappear.
std::vector<GroundTruthTube> truncate_gts(
    const std::vector<GroundTruthTube>& gts, std::int64_t max_frame);

}  // namespace tubelink
