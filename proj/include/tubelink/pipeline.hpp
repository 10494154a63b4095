// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "tubelink/fusion.hpp"
#include "tubelink/linker.hpp"
#include "tubelink/metrics.hpp"
#include "tubelink/predictor.hpp"

namespace tubelink {

// Frame indices went backwards or repeated within one video.
class SequenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PipelineOptions {
    Config config;
    FusionStrategy fusion;
};

struct CheckpointPrediction {
    double fraction = 1.0;
    std::int64_t frame_index = 0;  // last frame processed at this checkpoint
    std::optional<VideoPrediction> prediction;
};

struct VideoResult {
    std::string video_id;
    std::vector<TubeSegment> segments;
    std::vector<CheckpointPrediction> checkpoints;
};

// Default observation checkpoints 0.1, 0.2, ..., 1.0.
std::vector<double> default_checkpoints();

// Frames of one video, appearance and (optionally empty) flow, in stream
// order. Flow frames are aligned by frame index; a missing flow frame acts
// as an empty flow detection set.
VideoResult run_video(const std::string& video_id,
                      const std::vector<FrameDetections>& appearance,
                      const std::vector<FrameDetections>& flow,
                      const PipelineOptions& options,
                      const std::vector<double>& checkpoints);

// Group a mixed stream by video id, preserving frame order within each
// video. Throws on non-increasing frame indices inside one video.
std::map<std::string, std::vector<FrameDetections>> group_by_video(
    const std::vector<FrameDetections>& stream);

// Replay-based online evaluation: one curve per (metric, delta) plus one
// prediction-accuracy curve. Ground truth is truncated to the observed
// prefix of each video.
std::vector<MetricCurve> online_curves(
    const std::vector<FrameDetections>& stream,
    const std::vector<GroundTruthTube>& gts,
    const std::vector<double>& deltas, const std::vector<double>& checkpoints,
    const PipelineOptions& options);

}  // namespace tubelink
