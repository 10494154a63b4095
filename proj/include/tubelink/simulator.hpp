// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "tubelink/metrics.hpp"
#include "tubelink/types.hpp"

namespace tubelink {

// Synthetic scenario layout: one video per class, each holding
// instances_per_class co-occurring instances of that class. Instances are
// confined to disjoint grid cells of the frame so same-class boxes never
// overlap, and follow a bounded random walk that reflects at cell edges.
struct ScenarioSpec {
    std::uint64_t seed = 0;
    std::int64_t frame_count = 200;
    double frame_width = 640.0;
    double frame_height = 480.0;
    std::size_t class_count = 3;
    std::size_t instances_per_class = 2;
    double max_drift = 3.0;        // per-frame box drift bound (pixels)
    double size_jitter = 0.5;      // per-frame width/height jitter bound
    double extent_mean = 0.7;      // mean fraction of the video covered
    double true_score_mean = 0.8;  // clean score of the instance's class
    double off_score_mean = 0.1;   // clean score of every other class

    void validate() const;
};

struct NoiseSpec {
    double drop_probability = 0.0;
    double box_jitter = 0.0;          // uniform corner perturbation bound
    double false_positive_rate = 0.0; // expected injected boxes per frame
    double score_noise_std = 0.0;

    void validate() const;
};

struct Scenario {
    std::vector<GroundTruthTube> ground_truth;
    std::vector<FrameDetections> stream;  // frame-ordered per video
};

// Deterministic given spec.seed.
Scenario generate_scenario(const ScenarioSpec& spec);

// Drop/jitter/perturb detections and inject false positives; deterministic
// given seed. frame_width/height bound the injected boxes.
std::vector<FrameDetections> corrupt(const std::vector<FrameDetections>& clean,
                                     const NoiseSpec& noise,
                                     std::uint64_t seed,
                                     double frame_width = 640.0,
                                     double frame_height = 480.0);

}  // namespace tubelink
