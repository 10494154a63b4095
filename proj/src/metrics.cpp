// SPDX-License-Identifier: Apache-2.0
#include "tubelink/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace tubelink {

double st_iou(const TubeSegment& pred, const GroundTruthTube& gt) {
    if (pred.video_id != gt.video_id)
        throw std::domain_error("st_iou: tubes from different videos");

    std::unordered_map<std::int64_t, const BoundingBox*> pred_frames;
    for (const auto& b : pred.boxes) pred_frames.emplace(b.frame_index, &b.box);

    std::size_t inter = 0;
    double spatial_sum = 0.0;
    for (std::size_t i = 0; i < gt.boxes.size(); ++i) {
        const std::int64_t f = gt.start_frame + static_cast<std::int64_t>(i);
        auto it = pred_frames.find(f);
        if (it == pred_frames.end()) continue;
        ++inter;
        spatial_sum += spatial_iou(*it->second, gt.boxes[i]);
    }
    if (inter == 0) return 0.0;
    const std::size_t uni = pred_frames.size() + gt.boxes.size() - inter;
    const double temporal = static_cast<double>(inter) / static_cast<double>(uni);
    return temporal * (spatial_sum / static_cast<double>(inter));
}

std::vector<MatchedPrediction> match_predictions(
    const std::vector<TubeSegment>& preds,
    const std::vector<GroundTruthTube>& gts, double delta) {
    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return preds[a].score > preds[b].score;
                     });

    std::vector<bool> gt_matched(gts.size(), false);
    std::vector<MatchedPrediction> out;
    out.reserve(preds.size());
    for (std::size_t pi : order) {
        const TubeSegment& p = preds[pi];
        double best_iou = 0.0;
        std::size_t best_gt = gts.size();
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            if (gt_matched[gi]) continue;
            if (gts[gi].video_id != p.video_id || gts[gi].class_id != p.class_id)
                continue;
            const double iou = st_iou(p, gts[gi]);
            if (iou > best_iou) {
                best_iou = iou;
                best_gt = gi;
            }
        }
        const bool tp = best_gt < gts.size() && best_iou >= delta;
        if (tp) gt_matched[best_gt] = true;
        out.push_back({p.score, tp});
    }
    return out;
}

std::optional<double> average_precision(const std::vector<TubeSegment>& preds,
                                        const std::vector<GroundTruthTube>& gts,
                                        double delta) {
    if (gts.empty()) return std::nullopt;
    if (preds.empty()) return 0.0;

    const auto matched = match_predictions(preds, gts, delta);
    const double num_gt = static_cast<double>(gts.size());

    std::vector<double> recall, precision;
    double tp = 0.0, fp = 0.0;
    for (const auto& m : matched) {
        (m.true_positive ? tp : fp) += 1.0;
        recall.push_back(tp / num_gt);
        precision.push_back(tp / (tp + fp));
    }

    // Monotone precision envelope, then area over the recall steps.
    for (std::size_t i = precision.size() - 1; i > 0; --i) {
        precision[i - 1] = std::max(precision[i - 1], precision[i]);
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < recall.size(); ++i) {
        ap += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return ap;
}

MapResult map_at(const std::vector<TubeSegment>& preds,
                 const std::vector<GroundTruthTube>& gts, double delta) {
    std::set<std::size_t> classes;
    for (const auto& g : gts) classes.insert(g.class_id);
    for (const auto& p : preds) classes.insert(p.class_id);

    MapResult result;
    double sum = 0.0;
    std::size_t defined = 0;
    for (std::size_t c : classes) {
        std::vector<TubeSegment> cp;
        std::vector<GroundTruthTube> cg;
        for (const auto& p : preds)
            if (p.class_id == c) cp.push_back(p);
        for (const auto& g : gts)
            if (g.class_id == c) cg.push_back(g);
        auto ap = average_precision(cp, cg, delta);
        result.per_class_ap[c] = ap;
        if (ap) {
            sum += *ap;
            ++defined;
        }
    }
    result.map = defined > 0 ? sum / static_cast<double>(defined) : 0.0;
    return result;
}

double map_avg_range(const std::vector<TubeSegment>& preds,
                     const std::vector<GroundTruthTube>& gts) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < 10; ++i) {
        const double delta = (50 + 5 * i) / 100.0;
        sum += map_at(preds, gts, delta).map;
        ++count;
    }
    return sum / count;
}

double auc_at(const std::vector<TubeSegment>& preds,
              const std::vector<GroundTruthTube>& gts, double delta) {
    if (preds.empty() || gts.empty()) return 0.0;

    const auto matched = match_predictions(preds, gts, delta);
    double total_fp = 0.0;
    for (const auto& m : matched)
        if (!m.true_positive) total_fp += 1.0;
    const double num_gt = static_cast<double>(gts.size());

    double tp = 0.0, fp = 0.0;
    if (total_fp == 0.0) {
        for (const auto& m : matched)
            if (m.true_positive) tp += 1.0;
        return tp / num_gt;  // vertical ROC: area equals the final TP rate
    }

    // Sweep the score threshold downward; trapezoid over (FPR, TPR) steps.
    double auc = 0.0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    for (const auto& m : matched) {
        (m.true_positive ? tp : fp) += 1.0;
        const double fpr = fp / total_fp;
        const double tpr = tp / num_gt;
        auc += (fpr - prev_fpr) * 0.5 * (tpr + prev_tpr);
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    return auc;
}

std::vector<GroundTruthTube> truncate_gts(
    const std::vector<GroundTruthTube>& gts, std::int64_t max_frame) {
    std::vector<GroundTruthTube> out;
    for (const auto& g : gts) {
        if (g.start_frame > max_frame) continue;
        GroundTruthTube t = g;
        const std::int64_t keep = max_frame - g.start_frame + 1;
        if (keep < static_cast<std::int64_t>(t.boxes.size()))
            t.boxes.resize(static_cast<std::size_t>(keep));
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace tubelink
