// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tubelink/geometry.hpp"

namespace tubelink {

// Per-class confidence vector; one entry per action class, each in [0,1].
using ClassScores = std::vector<double>;

bool scores_valid(const ClassScores& scores, std::size_t class_count);

// One frame-level detection: a box plus its class confidences.
struct Detection {
    BoundingBox box;
    ClassScores scores;
};

// All detections of one frame of one video stream.
struct FrameDetections {
    std::string video_id;
    std::int64_t frame_index = 0;
    std::vector<Detection> detections;
};

// Pipeline parameters. Defaults follow the tube-generation settings
// lambda = 0.1, n = 10, k = 5; alpha and nms_iou are conventional values
// exposed for tuning.
struct Config {
    double lambda = 0.1;      // min IoU to keep a box attached to a tube
    int top_n = 10;           // top detections per class after NMS
    int max_misses = 5;       // consecutive missed frames before termination
    double alpha = 3.0;       // label-switch penalty in temporal labelling
    double nms_iou = 0.45;    // per-class suppression threshold
    double min_score = 0.0;   // optional confidence floor before NMS
    std::size_t class_count = 1;

    void validate() const;
};

}  // namespace tubelink
