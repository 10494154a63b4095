// SPDX-License-Identifier: Apache-2.0
#include "tubelink/fusion.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tubelink {

namespace {

void check_class_count(const std::vector<Detection>& dets,
                       std::size_t class_count, const char* what) {
    for (const auto& d : dets) {
        if (d.scores.size() != class_count) {
            throw std::domain_error(std::string(what) +
                                    ": class count mismatch");
        }
    }
}

double top_score(const Detection& d) {
    return d.scores.empty() ? 0.0
                            : *std::max_element(d.scores.begin(), d.scores.end());
}

void l1_normalise(ClassScores& s) {
    const double sum = std::accumulate(s.begin(), s.end(), 0.0);
    if (sum <= 0.0) return;
    for (double& v : s) v /= sum;
}

}  // namespace

std::vector<Detection> union_fuse(const std::vector<Detection>& appearance,
                                  const std::vector<Detection>& flow,
                                  std::size_t class_count) {
    check_class_count(appearance, class_count, "union_fuse");
    check_class_count(flow, class_count, "union_fuse");
    std::vector<Detection> out;
    out.reserve(appearance.size() + flow.size());
    out.insert(out.end(), appearance.begin(), appearance.end());
    out.insert(out.end(), flow.begin(), flow.end());
    return out;
}

std::vector<Detection> boost_fuse(const std::vector<Detection>& appearance,
                                  const std::vector<Detection>& flow,
                                  double tau, std::size_t class_count) {
    check_class_count(appearance, class_count, "boost_fuse");
    check_class_count(flow, class_count, "boost_fuse");

    std::vector<Detection> fused = appearance;
    std::vector<bool> flow_used(flow.size(), false);

    // Strong appearance boxes claim their flow match first.
    std::vector<std::size_t> order(appearance.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return top_score(appearance[a]) > top_score(appearance[b]);
                     });

    for (std::size_t ai : order) {
        const Detection& a = appearance[ai];
        double best_iou = 0.0;
        std::size_t best_fi = flow.size();
        for (std::size_t fi = 0; fi < flow.size(); ++fi) {
            if (flow_used[fi]) continue;
            const double iou = spatial_iou(a.box, flow[fi].box);
            const bool better =
                iou > best_iou ||
                (iou == best_iou && best_fi < flow.size() &&
                 top_score(flow[fi]) > top_score(flow[best_fi]));
            if (better) {
                best_iou = iou;
                best_fi = fi;
            }
        }
        if (best_fi < flow.size() && best_iou > tau) {
            flow_used[best_fi] = true;
            for (std::size_t c = 0; c < class_count; ++c) {
                fused[ai].scores[c] += best_iou * flow[best_fi].scores[c];
            }
        }
        l1_normalise(fused[ai].scores);
    }

    // Keep flow boxes that found no appearance counterpart.
    for (std::size_t fi = 0; fi < flow.size(); ++fi) {
        if (!flow_used[fi]) fused.push_back(flow[fi]);
    }
    return fused;
}

std::vector<Detection> fuse(const std::vector<Detection>& appearance,
                            const std::vector<Detection>& flow,
                            const FusionStrategy& strategy,
                            std::size_t class_count) {
    switch (strategy.variant) {
        case FusionVariant::kNone:
            check_class_count(appearance, class_count, "fuse");
            return appearance;
        case FusionVariant::kUnionSet:
            return union_fuse(appearance, flow, class_count);
        case FusionVariant::kBoost:
            return boost_fuse(appearance, flow, strategy.boost_iou_threshold,
                              class_count);
    }
    throw std::logic_error("fuse: unknown fusion variant");
}

}  // namespace tubelink
