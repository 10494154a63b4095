// SPDX-License-Identifier: Apache-2.0
#include "tubelink/linker.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tubelink {

double tube_mean_score(const ActionTube& tube) {
    if (tube.boxes.empty())
        throw std::domain_error("tube_mean_score: empty tube");
    double sum = 0.0;
    for (const auto& b : tube.boxes) sum += b.score;
    return sum / static_cast<double>(tube.boxes.size());
}

std::vector<TubeSegment> trim_to_segments(const ActionTube& tube,
                                          const std::string& video_id) {
    if (tube.boxes.empty())
        throw std::domain_error("trim_to_segments: empty tube");
    const Labeling labels = tube.viterbi.extract_labeling();

    std::vector<TubeSegment> segments;
    std::size_t r = 0;
    while (r < labels.size()) {
        if (labels[r] != TubeLabel::kAction) {
            ++r;
            continue;
        }
        TubeSegment seg;
        seg.video_id = video_id;
        seg.class_id = tube.class_id;
        double sum = 0.0;
        while (r < labels.size() && labels[r] == TubeLabel::kAction) {
            seg.boxes.push_back(tube.boxes[r]);
            sum += tube.boxes[r].score;
            ++r;
        }
        seg.start_frame = seg.boxes.front().frame_index;
        seg.end_frame = seg.boxes.back().frame_index;
        seg.score = sum / static_cast<double>(seg.boxes.size());
        segments.push_back(std::move(seg));
    }
    return segments;
}

LinkerState::LinkerState(Config config) : config_(std::move(config)) {
    config_.validate();
    active_.resize(config_.class_count);
    terminated_.resize(config_.class_count);
}

const std::vector<ActionTube>& LinkerState::active_tubes(
    std::size_t class_id) const {
    return active_.at(class_id);
}

const std::vector<ActionTube>& LinkerState::terminated_tubes(
    std::size_t class_id) const {
    return terminated_.at(class_id);
}

void LinkerState::advance_frame(
    std::int64_t frame_index,
    const std::vector<std::vector<ClassDetection>>& per_class) {
    if (started_ && frame_index <= current_frame_)
        throw std::runtime_error("advance_frame: out-of-order frame index");
    if (per_class.size() != config_.class_count)
        throw std::domain_error("advance_frame: per-class list size mismatch");

    current_frame_ = frame_index;
    started_ = true;
    for (std::size_t c = 0; c < config_.class_count; ++c) {
        advance_class(c, per_class[c]);
    }
}

void LinkerState::advance_frame(const FrameDetections& frame) {
    advance_frame(frame.frame_index, suppress_all_classes(frame.detections, config_));
}

void LinkerState::advance_class(std::size_t class_id,
                                const std::vector<ClassDetection>& candidates) {
    auto& tubes = active_[class_id];
    std::vector<bool> consumed(candidates.size(), false);

    // Best tubes pick first; ties keep the older tube ahead.
    std::vector<std::size_t> order(tubes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = tube_mean_score(tubes[a]);
        const double mb = tube_mean_score(tubes[b]);
        if (ma != mb) return ma > mb;
        return tubes[a].tube_id < tubes[b].tube_id;
    });

    for (std::size_t ti : order) {
        ActionTube& tube = tubes[ti];
        const BoundingBox& last = tube.boxes.back().box;

        // Potential matches: unconsumed candidates overlapping above lambda.
        std::size_t best = candidates.size();
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            if (consumed[j]) continue;
            if (spatial_iou(last, candidates[j].box) <= config_.lambda) continue;
            if (best == candidates.size() ||
                candidates[j].score > candidates[best].score) {
                best = j;
            }
        }

        if (best < candidates.size()) {
            consumed[best] = true;
            tube.boxes.push_back(
                {current_frame_, candidates[best].box, candidates[best].score});
            tube.miss_count = 0;
            tube.viterbi.append(candidates[best].score, config_.alpha);
        } else {
            ++tube.miss_count;
            if (tube.miss_count >= config_.max_misses) tube.terminated = true;
        }
    }

    // Move tubes that died on this frame to the terminated set.
    for (auto it = tubes.begin(); it != tubes.end();) {
        if (it->terminated) {
            terminated_[class_id].push_back(std::move(*it));
            it = tubes.erase(it);
        } else {
            ++it;
        }
    }

    // Every leftover candidate seeds a new tube.
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (consumed[j]) continue;
        ActionTube tube;
        tube.tube_id = next_tube_id_++;
        tube.class_id = class_id;
        tube.boxes.push_back({current_frame_, candidates[j].box, candidates[j].score});
        tube.viterbi.append(candidates[j].score, config_.alpha);
        tubes.push_back(std::move(tube));
    }
}

std::vector<const ActionTube*> LinkerState::all_tubes() const {
    std::vector<const ActionTube*> out;
    for (std::size_t c = 0; c < config_.class_count; ++c) {
        for (const auto& t : terminated_[c]) out.push_back(&t);
        for (const auto& t : active_[c]) out.push_back(&t);
    }
    return out;
}

std::vector<TubeSegment> LinkerState::segments(
    const std::string& video_id) const {
    std::vector<TubeSegment> out;
    for (const ActionTube* tube : all_tubes()) {
        if (tube->boxes.empty()) continue;
        auto segs = trim_to_segments(*tube, video_id);
        out.insert(out.end(), std::make_move_iterator(segs.begin()),
                   std::make_move_iterator(segs.end()));
    }
    return out;
}

}  // namespace tubelink
