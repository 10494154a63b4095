// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "tubelink/suppression.hpp"

using namespace tubelink;

namespace {

Detection det(double x1, double y1, double x2, double y2, ClassScores scores) {
    return {{x1, y1, x2, y2}, std::move(scores)};
}

}  // namespace

TEST_CASE("heavy overlap keeps only the stronger box") {
    std::vector<Detection> frame{det(0, 0, 10, 10, {0.6}),
                                 det(0.5, 0, 10.5, 10, {0.8})};
    auto out = nms_top_n(frame, 0, 0.45, 10);
    REQUIRE(out.size() == 1);
    CHECK(out[0].score == 0.8);
}

TEST_CASE("fewer candidates than n are all returned") {
    std::vector<Detection> frame{det(0, 0, 5, 5, {0.4}),
                                 det(20, 20, 25, 25, {0.3}),
                                 det(40, 40, 45, 45, {0.2}),
                                 det(60, 60, 65, 65, {0.1})};
    auto out = nms_top_n(frame, 0, 0.45, 10);
    CHECK(out.size() == 4);
}

TEST_CASE("disjoint boxes both survive") {
    std::vector<Detection> frame{det(0, 0, 5, 5, {0.9}),
                                 det(50, 50, 55, 55, {0.05})};
    auto out = nms_top_n(frame, 0, 0.45, 10);
    CHECK(out.size() == 2);
}

TEST_CASE("class_id out of range") {
    std::vector<Detection> frame{det(0, 0, 5, 5, {0.9})};
    CHECK_THROWS_AS(nms_top_n(frame, 3, 0.45, 10), std::domain_error);
}

TEST_CASE("min_score floor drops weak boxes before suppression") {
    std::vector<Detection> frame{det(0, 0, 5, 5, {0.9}),
                                 det(50, 50, 55, 55, {0.05})};
    auto out = nms_top_n(frame, 0, 0.45, 10, 0.1);
    REQUIRE(out.size() == 1);
    CHECK(out[0].score == 0.9);
}

TEST_CASE("randomized invariants: size, ordering, pairwise IoU") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(0.0, 80.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Detection> frame;
        const std::size_t count = rng() % 15;
        for (std::size_t i = 0; i < count; ++i) {
            Detection d;
            d.box.x1 = coord(rng);
            d.box.y1 = coord(rng);
            d.box.x2 = d.box.x1 + 2.0 + 20.0 * unit(rng);
            d.box.y2 = d.box.y1 + 2.0 + 20.0 * unit(rng);
            d.scores = {unit(rng), unit(rng)};
            frame.push_back(d);
        }
        const int n = 1 + static_cast<int>(rng() % 8);
        const double thr = unit(rng);
        auto out = nms_top_n(frame, trial % 2, thr, n);
        CHECK(out.size() <= std::min<std::size_t>(n, frame.size()));
        for (std::size_t i = 1; i < out.size(); ++i)
            CHECK(out[i - 1].score >= out[i].score);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                CHECK(spatial_iou(out[i].box, out[j].box) <= thr);
    }
}
