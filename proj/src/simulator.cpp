// SPDX-License-Identifier: Apache-2.0
#include "tubelink/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace tubelink {

namespace {

// Reflect v into [lo, hi].
double reflect(double v, double lo, double hi) {
    if (hi <= lo) return lo;
    while (v < lo || v > hi) {
        v = v < lo ? 2.0 * lo - v : 2.0 * hi - v;
    }
    return v;
}

std::string video_name(std::size_t class_id) {
    return "sim_video_" + std::to_string(class_id);
}

}  // namespace

void ScenarioSpec::validate() const {
    if (frame_count < 1) throw std::domain_error("ScenarioSpec: frame_count");
    if (frame_width <= 0 || frame_height <= 0)
        throw std::domain_error("ScenarioSpec: frame dimensions");
    if (class_count == 0 || instances_per_class == 0)
        throw std::domain_error("ScenarioSpec: counts must be positive");
    if (extent_mean <= 0.0 || extent_mean > 1.0)
        throw std::domain_error("ScenarioSpec: extent_mean in (0,1]");
    if (max_drift < 0 || size_jitter < 0)
        throw std::domain_error("ScenarioSpec: negative motion bound");
}

void NoiseSpec::validate() const {
    if (drop_probability < 0.0 || drop_probability > 1.0)
        throw std::domain_error("NoiseSpec: drop_probability in [0,1]");
    if (box_jitter < 0 || false_positive_rate < 0 || score_noise_std < 0)
        throw std::domain_error("NoiseSpec: negative magnitude");
}

Scenario generate_scenario(const ScenarioSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Grid partition keeping same-class instances spatially disjoint.
    const std::size_t cols = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(spec.instances_per_class))));
    const std::size_t rows = (spec.instances_per_class + cols - 1) / cols;
    const double margin = 4.0;
    const double cell_w = spec.frame_width / static_cast<double>(cols);
    const double cell_h = spec.frame_height / static_cast<double>(rows);

    Scenario scenario;
    for (std::size_t c = 0; c < spec.class_count; ++c) {
        const std::string vid = video_name(c);
        // Per-frame detections of this video, keyed by frame index.
        std::map<std::int64_t, std::vector<Detection>> frames;

        for (std::size_t inst = 0; inst < spec.instances_per_class; ++inst) {
            const std::size_t col = inst % cols;
            const std::size_t row = inst / cols;
            const double cx_lo = col * cell_w + margin;
            const double cx_hi = (col + 1) * cell_w - margin;
            const double cy_lo = row * cell_h + margin;
            const double cy_hi = (row + 1) * cell_h - margin;

            // Temporal extent around the configured mean coverage.
            double frac = spec.extent_mean + 0.2 * (unit(rng) - 0.5);
            frac = std::clamp(frac, 0.05, 1.0);
            std::int64_t len = std::max<std::int64_t>(
                1, static_cast<std::int64_t>(std::llround(frac * spec.frame_count)));
            len = std::min(len, spec.frame_count);
            const std::int64_t max_start = spec.frame_count - len;
            // The first instance anchors the video start so every video has
            // detections from frame 0 on; the rest are placed freely.
            const std::int64_t start =
                inst == 0 || max_start <= 0
                    ? 0
                    : static_cast<std::int64_t>(unit(rng) * (max_start + 1));

            // Box sized to ~40% of its cell, walked with bounded drift.
            double w = 0.4 * (cx_hi - cx_lo);
            double h = 0.4 * (cy_hi - cy_lo);
            double x = cx_lo + unit(rng) * (cx_hi - cx_lo - w);
            double y = cy_lo + unit(rng) * (cy_hi - cy_lo - h);

            GroundTruthTube gt;
            gt.video_id = vid;
            gt.class_id = c;
            gt.start_frame = start;
            for (std::int64_t f = start; f < start + len; ++f) {
                BoundingBox box{x, y, x + w, y + h};
                gt.boxes.push_back(box);

                Detection det;
                det.box = box;
                det.scores.assign(spec.class_count, 0.0);
                for (std::size_t cc = 0; cc < spec.class_count; ++cc) {
                    const double mean =
                        cc == c ? spec.true_score_mean : spec.off_score_mean;
                    det.scores[cc] =
                        std::clamp(mean + 0.1 * (unit(rng) - 0.5), 0.0, 1.0);
                }
                frames[f].push_back(std::move(det));

                // Next position.
                x = reflect(x + spec.max_drift * (2.0 * unit(rng) - 1.0), cx_lo,
                            cx_hi - w);
                y = reflect(y + spec.max_drift * (2.0 * unit(rng) - 1.0), cy_lo,
                            cy_hi - h);
                w = std::clamp(w + spec.size_jitter * (2.0 * unit(rng) - 1.0),
                               8.0, cx_hi - cx_lo);
                h = std::clamp(h + spec.size_jitter * (2.0 * unit(rng) - 1.0),
                               8.0, cy_hi - cy_lo);
            }
            scenario.ground_truth.push_back(std::move(gt));
        }

        for (std::int64_t f = 0; f < spec.frame_count; ++f) {
            FrameDetections fd;
            fd.video_id = vid;
            fd.frame_index = f;
            auto it = frames.find(f);
            if (it != frames.end()) fd.detections = std::move(it->second);
            scenario.stream.push_back(std::move(fd));
        }
    }
    return scenario;
}

std::vector<FrameDetections> corrupt(const std::vector<FrameDetections>& clean,
                                     const NoiseSpec& noise,
                                     std::uint64_t seed, double frame_width,
                                     double frame_height) {
    noise.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<FrameDetections> out;
    out.reserve(clean.size());
    for (const auto& frame : clean) {
        FrameDetections noisy;
        noisy.video_id = frame.video_id;
        noisy.frame_index = frame.frame_index;

        const std::size_t class_count =
            frame.detections.empty() ? 0 : frame.detections.front().scores.size();

        for (const auto& det : frame.detections) {
            if (noise.drop_probability > 0.0 && unit(rng) < noise.drop_probability)
                continue;
            Detection d = det;
            if (noise.box_jitter > 0.0) {
                const double j = noise.box_jitter;
                d.box.x1 += j * (2.0 * unit(rng) - 1.0);
                d.box.y1 += j * (2.0 * unit(rng) - 1.0);
                d.box.x2 += j * (2.0 * unit(rng) - 1.0);
                d.box.y2 += j * (2.0 * unit(rng) - 1.0);
                if (d.box.x2 <= d.box.x1) d.box.x2 = d.box.x1 + 1.0;
                if (d.box.y2 <= d.box.y1) d.box.y2 = d.box.y1 + 1.0;
            }
            if (noise.score_noise_std > 0.0) {
                for (double& s : d.scores)
                    s = std::clamp(s + noise.score_noise_std * gauss(rng), 0.0, 1.0);
            }
            noisy.detections.push_back(std::move(d));
        }

        if (noise.false_positive_rate > 0.0 && class_count > 0) {
            std::size_t count = static_cast<std::size_t>(noise.false_positive_rate);
            const double frac = noise.false_positive_rate - count;
            if (frac > 0.0 && unit(rng) < frac) ++count;
            for (std::size_t i = 0; i < count; ++i) {
                Detection fpd;
                const double w = 10.0 + unit(rng) * 0.2 * frame_width;
                const double h = 10.0 + unit(rng) * 0.2 * frame_height;
                const double x = unit(rng) * (frame_width - w);
                const double y = unit(rng) * (frame_height - h);
                fpd.box = {x, y, x + w, y + h};
                fpd.scores.resize(class_count);
                for (double& s : fpd.scores) s = 0.3 * unit(rng);
                noisy.detections.push_back(std::move(fpd));
            }
        }
        out.push_back(std::move(noisy));
    }
    return out;
}

}  // namespace tubelink
