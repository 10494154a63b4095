// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tubelink/types.hpp"

namespace tubelink {

enum class FusionVariant { kNone, kUnionSet, kBoost };

struct FusionStrategy {
    FusionVariant variant = FusionVariant::kUnionSet;
    double boost_iou_threshold = 0.3;  // used by boost only
};

// Union-set fusion: concatenation, appearance boxes first, scores untouched.
std::vector<Detection> union_fuse(const std::vector<Detection>& appearance,
                                  const std::vector<Detection>& flow,
                                  std::size_t class_count);

// Boost fusion: each appearance box may be boosted by the flow box with the
// highest spatial IoU, provided that IoU exceeds tau. Boosted scores become
// s_a + IoU * s_f per class; every appearance score vector is then
// L1-normalised. Flow boxes never matched to any appearance box are appended
// unmodified. Matching is one-to-one and greedy by descending appearance
// top-score.
std::vector<Detection> boost_fuse(const std::vector<Detection>& appearance,
                                  const std::vector<Detection>& flow,
                                  double tau, std::size_t class_count);

std::vector<Detection> fuse(const std::vector<Detection>& appearance,
                            const std::vector<Detection>& flow,
                            const FusionStrategy& strategy,
                            std::size_t class_count);

}  // namespace tubelink
