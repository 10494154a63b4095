// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "tubelink/io.hpp"
#include "tubelink/pipeline.hpp"
#include "tubelink/simulator.hpp"
#include "tubelink/suppression.hpp"

using namespace tubelink;

TEST_CASE("group_by_video enforces strictly increasing frames") {
    FrameDetections f0{"v", 0, {}};
    FrameDetections f1{"v", 1, {}};
    FrameDetections g5{"w", 5, {}};
    CHECK(group_by_video({f0, f1, g5}).size() == 2);
    CHECK_THROWS_AS(group_by_video({f1, f0}), SequenceError);
    CHECK_THROWS_AS(group_by_video({f0, f0}), SequenceError);
}

TEST_CASE("run_video matches a manual frame loop") {
    ScenarioSpec spec;
    spec.seed = 42;
    spec.class_count = 2;
    const auto scenario = generate_scenario(spec);
    const auto videos = group_by_video(scenario.stream);

    PipelineOptions options;
    options.config.class_count = spec.class_count;
    options.fusion.variant = FusionVariant::kNone;

    for (const auto& [vid, frames] : videos) {
        const auto result =
            run_video(vid, frames, {}, options, default_checkpoints());

        LinkerState manual(options.config);
        for (const auto& frame : frames) manual.advance_frame(frame);
        const auto expected = manual.segments(vid);

        std::ostringstream a, b;
        write_tubes_json(a, result.segments);
        write_tubes_json(b, expected);
        CHECK(a.str() == b.str());
        CHECK(result.checkpoints.size() == 10);
    }
}

TEST_CASE("union fusion sees boxes from both streams") {
    // Appearance covers class 0 strongly, flow covers class 1 elsewhere.
    std::vector<FrameDetections> appearance, flow;
    for (int f = 0; f < 6; ++f) {
        FrameDetections af{"v", f, {{{10, 10, 30, 30}, {0.9, 0.1}}}};
        FrameDetections ff{"v", f, {{{200, 200, 230, 230}, {0.1, 0.9}}}};
        appearance.push_back(af);
        flow.push_back(ff);
    }
    PipelineOptions options;
    options.config.class_count = 2;
    options.fusion.variant = FusionVariant::kUnionSet;
    const auto result = run_video("v", appearance, flow, options, {1.0});
    bool has_class0 = false, has_class1 = false;
    for (const auto& s : result.segments) {
        if (s.class_id == 0) has_class0 = true;
        if (s.class_id == 1) has_class1 = true;
    }
    CHECK(has_class0);
    CHECK(has_class1);

    // Appearance-only run misses the flow-stream instance.
    options.fusion.variant = FusionVariant::kNone;
    const auto solo = run_video("v", appearance, {}, options, {1.0});
    for (const auto& s : solo.segments) CHECK(s.class_id == 0);
}

TEST_CASE("missing flow frames degrade to empty sets") {
    std::vector<FrameDetections> appearance, flow;
    for (int f = 0; f < 4; ++f)
        appearance.push_back({"v", f, {{{10, 10, 30, 30}, {0.9}}}});
    flow.push_back({"v", 0, {{{10, 10, 30, 30}, {0.8}}}});
    PipelineOptions options;
    options.config.class_count = 1;
    options.fusion.variant = FusionVariant::kUnionSet;
    const auto result = run_video("v", appearance, flow, options, {1.0});
    REQUIRE(result.segments.size() == 1);
    CHECK(result.segments[0].boxes.size() == 4);
}

TEST_CASE("checkpoint 1.0 curves equal offline metrics") {
    ScenarioSpec spec;
    spec.seed = 11;
    const auto scenario = generate_scenario(spec);

    PipelineOptions options;
    options.config.class_count = spec.class_count;

    const auto curves = online_curves(scenario.stream, scenario.ground_truth,
                                      {0.5}, default_checkpoints(), options);
    REQUIRE(curves.size() == 3);  // auc@0.5, map@0.5, accuracy

    // Offline reference: full pipeline per video, full ground truth.
    std::vector<TubeSegment> segments;
    for (const auto& [vid, frames] : group_by_video(scenario.stream)) {
        auto res = run_video(vid, frames, {}, options, {1.0});
        segments.insert(segments.end(), res.segments.begin(),
                        res.segments.end());
    }
    const double offline_map =
        map_at(segments, scenario.ground_truth, 0.5).map;
    const double offline_auc = auc_at(segments, scenario.ground_truth, 0.5);

    CHECK(curves[0].kind == MetricKind::kAuc);
    CHECK(curves[0].values.back() == doctest::Approx(offline_auc));
    CHECK(curves[1].kind == MetricKind::kMap);
    CHECK(curves[1].values.back() == doctest::Approx(offline_map));
    CHECK(curves[2].kind == MetricKind::kAccuracy);
    for (double v : curves[2].values) CHECK(v == doctest::Approx(1.0));
}
