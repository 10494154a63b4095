// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tubelink/suppression.hpp"
#include "tubelink/types.hpp"
#include "tubelink/viterbi.hpp"

namespace tubelink {

// One matched box inside a tube.
struct TubeBox {
    std::int64_t frame_index = 0;
    BoundingBox box;
    double score = 0.0;  // class score of the matched detection
};

// A growing (or finished) per-class tracklet. Boxes are only the matched
// frames; missed frames leave temporal gaps and the Viterbi chain covers
// matched boxes only.
struct ActionTube {
    std::uint64_t tube_id = 0;
    std::size_t class_id = 0;
    std::vector<TubeBox> boxes;
    int miss_count = 0;
    ViterbiState viterbi;
    bool terminated = false;
};

// Mean of the member boxes' class scores; the tube-ordering and prediction
// score.
double tube_mean_score(const ActionTube& tube);

// A maximal action-labelled run of a tube after temporal trimming.
struct TubeSegment {
    std::string video_id;
    std::size_t class_id = 0;
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;
    std::vector<TubeBox> boxes;
    double score = 0.0;  // mean of member box scores
};

// Trim one tube to its action segments via the incrementally maintained
// Viterbi labelling. Background boxes are dropped; an all-background tube
// yields no segments.
std::vector<TubeSegment> trim_to_segments(const ActionTube& tube,
                                          const std::string& video_id);

// Frame-by-frame greedy tube builder for one video stream. Classes are
// fully independent; a detection box is consumed by at most one tube per
// class per frame.
class LinkerState {
public:
    explicit LinkerState(Config config);

    // Advance one frame given the per-class NMS survivors for that frame.
    // Frame indices must be strictly increasing.
    void advance_frame(std::int64_t frame_index,
                       const std::vector<std::vector<ClassDetection>>& per_class);

    // Convenience: run suppression internally.
    void advance_frame(const FrameDetections& frame);

    const Config& config() const { return config_; }
    std::int64_t current_frame() const { return current_frame_; }
    bool started() const { return started_; }

    const std::vector<ActionTube>& active_tubes(std::size_t class_id) const;
    const std::vector<ActionTube>& terminated_tubes(std::size_t class_id) const;

    // All tubes of every class, terminated first, then active.
    std::vector<const ActionTube*> all_tubes() const;

    // Trim every tube and collect the resulting segments.
    std::vector<TubeSegment> segments(const std::string& video_id) const;

private:
    void advance_class(std::size_t class_id,
                       const std::vector<ClassDetection>& candidates);

    Config config_;
    bool started_ = false;
    std::int64_t current_frame_ = 0;
    std::uint64_t next_tube_id_ = 0;
    std::vector<std::vector<ActionTube>> active_;
    std::vector<std::vector<ActionTube>> terminated_;
};

}  // namespace tubelink
