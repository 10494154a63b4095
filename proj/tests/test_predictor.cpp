// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "tubelink/predictor.hpp"

using namespace tubelink;

namespace {

ClassDetection cd(double x1, double y1, double x2, double y2, double score,
                  std::size_t cls) {
    return {{x1, y1, x2, y2}, cls, score};
}

}  // namespace

TEST_CASE("no tubes yet means no prediction") {
    Config config;
    config.class_count = 2;
    LinkerState state(config);
    CHECK_FALSE(predict_label(state).has_value());
    state.advance_frame(0, {{}, {}});
    CHECK_FALSE(predict_label(state).has_value());
}

TEST_CASE("single tube predicts its own class") {
    Config config;
    config.class_count = 4;
    LinkerState state(config);
    std::vector<std::vector<ClassDetection>> per_class(4);
    per_class[3].push_back(cd(0, 0, 10, 10, 0.7, 3));
    state.advance_frame(0, per_class);
    const auto pred = predict_label(state);
    REQUIRE(pred.has_value());
    CHECK(pred->class_id == 3);
    CHECK(pred->tube_mean == doctest::Approx(0.7));
}

TEST_CASE("argmax over class means") {
    Config config;
    config.class_count = 2;
    LinkerState state(config);
    std::vector<std::vector<ClassDetection>> per_class(2);
    per_class[0].push_back(cd(0, 0, 10, 10, 0.7, 0));
    per_class[1].push_back(cd(50, 0, 60, 10, 0.6, 1));
    state.advance_frame(0, per_class);
    CHECK(predict_label(state)->class_id == 0);
}

TEST_CASE("prediction flips at the crossover frame") {
    // Class 0 scores stay at 0.6; class 1 strengthens: 0.2, 0.9, 0.9, ...
    // Running means: class 1 passes class 0 once (0.2+0.9+0.9)/3 > 0.6.
    Config config;
    config.class_count = 2;
    LinkerState state(config);
    const double class1_scores[] = {0.2, 0.9, 0.9, 0.9};
    std::size_t flip_frame = 99;
    for (int f = 0; f < 4; ++f) {
        std::vector<std::vector<ClassDetection>> per_class(2);
        per_class[0].push_back(cd(0, 0, 10, 10, 0.6, 0));
        per_class[1].push_back(cd(50, 0, 60, 10, class1_scores[f], 1));
        state.advance_frame(f, per_class);
        if (predict_label(state)->class_id == 1 && flip_frame == 99)
            flip_frame = f;
    }
    // Means: f0 0.2<0.6, f1 0.55<0.6, f2 0.666>0.6.
    CHECK(flip_frame == 2);
}

TEST_CASE("terminated tubes stay eligible") {
    Config config;
    config.class_count = 2;
    config.max_misses = 1;
    LinkerState state(config);
    std::vector<std::vector<ClassDetection>> per_class(2);
    per_class[1].push_back(cd(0, 0, 10, 10, 0.9, 1));
    state.advance_frame(0, per_class);
    // Two empty frames kill the tube.
    state.advance_frame(1, {{}, {}});
    CHECK(state.active_tubes(1).empty());
    const auto pred = predict_label(state);
    REQUIRE(pred.has_value());
    CHECK(pred->class_id == 1);
}

TEST_CASE("causality: prefix replay agrees") {
    Config config;
    config.class_count = 2;
    auto build = [&](int frames) {
        LinkerState state(config);
        for (int f = 0; f < frames; ++f) {
            std::vector<std::vector<ClassDetection>> per_class(2);
            per_class[0].push_back(cd(0, 0, 10, 10, 0.3 + 0.1 * (f % 3), 0));
            per_class[1].push_back(cd(50, 0, 60, 10, 0.8 - 0.1 * (f % 4), 1));
            state.advance_frame(f, per_class);
        }
        return predict_label(state);
    };
    LinkerState incremental(config);
    for (int f = 0; f < 12; ++f) {
        std::vector<std::vector<ClassDetection>> per_class(2);
        per_class[0].push_back(cd(0, 0, 10, 10, 0.3 + 0.1 * (f % 3), 0));
        per_class[1].push_back(cd(50, 0, 60, 10, 0.8 - 0.1 * (f % 4), 1));
        incremental.advance_frame(f, per_class);
        const auto a = predict_label(incremental);
        const auto b = build(f + 1);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(a->class_id == b->class_id);
        CHECK(a->tube_mean == b->tube_mean);
    }
}
