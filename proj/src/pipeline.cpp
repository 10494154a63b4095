// SPDX-License-Identifier: Apache-2.0
#include "tubelink/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "tubelink/suppression.hpp"

namespace tubelink {

std::vector<double> default_checkpoints() {
    std::vector<double> cps;
    for (int i = 1; i <= 10; ++i) cps.push_back(0.1 * i);
    return cps;
}

std::map<std::string, std::vector<FrameDetections>> group_by_video(
    const std::vector<FrameDetections>& stream) {
    std::map<std::string, std::vector<FrameDetections>> out;
    for (const auto& frame : stream) {
        auto& frames = out[frame.video_id];
        if (!frames.empty() && frame.frame_index <= frames.back().frame_index)
            throw SequenceError("non-increasing frame index in video " +
                                frame.video_id);
        frames.push_back(frame);
    }
    return out;
}

VideoResult run_video(const std::string& video_id,
                      const std::vector<FrameDetections>& appearance,
                      const std::vector<FrameDetections>& flow,
                      const PipelineOptions& options,
                      const std::vector<double>& checkpoints) {
    std::unordered_map<std::int64_t, const std::vector<Detection>*> flow_by_frame;
    for (const auto& f : flow) flow_by_frame.emplace(f.frame_index, &f.detections);

    const bool needs_flow = options.fusion.variant != FusionVariant::kNone;
    static const std::vector<Detection> kNoDetections;

    // Map each checkpoint fraction to the 1-based frame position it covers.
    const std::size_t total = appearance.size();
    std::vector<std::size_t> checkpoint_pos;
    for (double p : checkpoints) {
        checkpoint_pos.push_back(std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(p * total))));
    }

    VideoResult result;
    result.video_id = video_id;
    LinkerState linker(options.config);
    bool warned_missing_flow = false;

    for (std::size_t i = 0; i < appearance.size(); ++i) {
        const auto& frame = appearance[i];
        const std::vector<Detection>* flow_dets = &kNoDetections;
        if (needs_flow) {
            auto it = flow_by_frame.find(frame.frame_index);
            if (it != flow_by_frame.end()) {
                flow_dets = it->second;
            } else if (!flow.empty() && !warned_missing_flow) {
                std::cerr << "warning: video " << video_id
                          << ": missing flow frame " << frame.frame_index
                          << ", treating as empty\n";
                warned_missing_flow = true;
            }
        }
        const auto fused = fuse(frame.detections, *flow_dets, options.fusion,
                                options.config.class_count);
        linker.advance_frame(frame.frame_index,
                             suppress_all_classes(fused, options.config));

        for (std::size_t ci = 0; ci < checkpoint_pos.size(); ++ci) {
            if (checkpoint_pos[ci] == i + 1) {
                CheckpointPrediction cp;
                cp.fraction = checkpoints[ci];
                cp.frame_index = frame.frame_index;
                cp.prediction = predict_label(linker, checkpoints[ci]);
                result.checkpoints.push_back(cp);
            }
        }
    }
    result.segments = linker.segments(video_id);
    return result;
}

std::vector<MetricCurve> online_curves(
    const std::vector<FrameDetections>& stream,
    const std::vector<GroundTruthTube>& gts,
    const std::vector<double>& deltas, const std::vector<double>& checkpoints,
    const PipelineOptions& options) {
    const auto videos = group_by_video(stream);
    if (videos.empty()) throw std::domain_error("online_curves: empty stream");

    // One incremental linker per video; snapshot at each checkpoint.
    struct VideoRun {
        const std::vector<FrameDetections>* frames;
        LinkerState linker;
        std::size_t next = 0;  // frames consumed so far
    };
    std::map<std::string, VideoRun> runs;
    for (const auto& [vid, frames] : videos)
        runs.emplace(vid, VideoRun{&frames, LinkerState(options.config), 0});

    std::map<std::string, std::set<std::size_t>> gt_labels;
    for (const auto& g : gts) gt_labels[g.video_id].insert(g.class_id);

    std::vector<MetricCurve> curves;
    for (double d : deltas) {
        curves.push_back({MetricKind::kAuc, d, {}, {}});
        curves.push_back({MetricKind::kMap, d, {}, {}});
    }
    curves.push_back({MetricKind::kAccuracy, 0.0, {}, {}});

    for (double p : checkpoints) {
        std::vector<TubeSegment> all_segments;
        std::vector<GroundTruthTube> all_gts;
        std::size_t correct = 0, labelled = 0;

        for (auto& [vid, run] : runs) {
            const auto& frames = *run.frames;
            const std::size_t target = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil(p * frames.size())));
            while (run.next < target && run.next < frames.size()) {
                run.linker.advance_frame(frames[run.next]);
                ++run.next;
            }
            const std::int64_t observed_until =
                frames[run.next - 1].frame_index;

            auto segs = run.linker.segments(vid);
            all_segments.insert(all_segments.end(),
                                std::make_move_iterator(segs.begin()),
                                std::make_move_iterator(segs.end()));
            std::vector<GroundTruthTube> vid_gts;
            for (const auto& g : gts)
                if (g.video_id == vid) vid_gts.push_back(g);
            auto truncated = truncate_gts(vid_gts, observed_until);
            all_gts.insert(all_gts.end(), truncated.begin(), truncated.end());

            auto label_it = gt_labels.find(vid);
            if (label_it != gt_labels.end()) {
                ++labelled;
                auto pred = predict_label(run.linker, p);
                if (pred && label_it->second.count(pred->class_id)) ++correct;
            }
        }

        std::size_t ci = 0;
        for (double d : deltas) {
            curves[ci].fractions.push_back(p);
            curves[ci].values.push_back(auc_at(all_segments, all_gts, d));
            ++ci;
            curves[ci].fractions.push_back(p);
            curves[ci].values.push_back(map_at(all_segments, all_gts, d).map);
            ++ci;
        }
        curves[ci].fractions.push_back(p);
        curves[ci].values.push_back(
            labelled > 0 ? static_cast<double>(correct) / labelled : 0.0);
    }
    return curves;
}

}  // namespace tubelink
