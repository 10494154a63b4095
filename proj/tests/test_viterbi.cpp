// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>

#include "tubelink/viterbi.hpp"

using namespace tubelink;

namespace {

// Exhaustive oracle: best energy over all 2^T labellings.
double exhaustive_best_energy(const std::vector<double>& scores, double alpha) {
    const std::size_t T = scores.size();
    double best = -1e300;
    for (std::uint32_t mask = 0; mask < (1u << T); ++mask) {
        Labeling labels(T);
        for (std::size_t r = 0; r < T; ++r)
            labels[r] = (mask >> r) & 1 ? TubeLabel::kAction
                                        : TubeLabel::kBackground;
        best = std::max(best, labeling_energy(labels, scores, alpha));
    }
    return best;
}

// Independent batch Viterbi used as the online-vs-offline reference.
std::pair<double, Labeling> batch_viterbi(const std::vector<double>& scores,
                                          double alpha) {
    const std::size_t T = scores.size();
    REQUIRE(T >= 1);
    std::vector<std::array<double, 2>> v(T);       // [background, action]
    std::vector<std::array<int, 2>> back(T);
    v[0] = {1.0 - scores[0], scores[0]};
    for (std::size_t r = 1; r < T; ++r) {
        for (int lab = 0; lab < 2; ++lab) {
            const double from_action = v[r - 1][1] - (lab == 1 ? 0.0 : alpha);
            const double from_background =
                v[r - 1][0] - (lab == 0 ? 0.0 : alpha);
            if (from_action >= from_background) {
                v[r][lab] = from_action;
                back[r][lab] = 1;
            } else {
                v[r][lab] = from_background;
                back[r][lab] = 0;
            }
            v[r][lab] += lab == 1 ? scores[r] : 1.0 - scores[r];
        }
    }
    Labeling labels(T);
    int lab = v[T - 1][1] >= v[T - 1][0] ? 1 : 0;
    const double best = v[T - 1][lab];
    for (std::size_t r = T; r-- > 0;) {
        labels[r] = lab == 1 ? TubeLabel::kAction : TubeLabel::kBackground;
        if (r > 0) lab = back[r][lab];
    }
    return {best, labels};
}

std::size_t run_count(const Labeling& labels) {
    std::size_t runs = 0;
    for (std::size_t r = 0; r < labels.size(); ++r) {
        if (labels[r] == TubeLabel::kAction &&
            (r == 0 || labels[r - 1] != TubeLabel::kAction))
            ++runs;
    }
    return runs;
}

}  // namespace

TEST_CASE("unary terms follow the two-label definition") {
    CHECK(unary_score(TubeLabel::kAction, 0.9) == 0.9);
    CHECK(unary_score(TubeLabel::kBackground, 0.9) == doctest::Approx(0.1));
    CHECK(unary_score(TubeLabel::kAction, 0.5) ==
          unary_score(TubeLabel::kBackground, 0.5));
}

TEST_CASE("labeling_energy fixtures") {
    using L = TubeLabel;
    CHECK(labeling_energy({L::kAction, L::kAction}, {0.9, 0.8}, 3.0) ==
          doctest::Approx(1.7));
    CHECK(labeling_energy({L::kAction, L::kBackground}, {0.9, 0.8}, 3.0) ==
          doctest::Approx(-1.9));
    CHECK(labeling_energy({L::kBackground, L::kBackground}, {0.0, 0.0}, 17.0) ==
          doctest::Approx(2.0));
    CHECK_THROWS_AS(labeling_energy({L::kAction}, {0.5, 0.5}, 1.0),
                    std::domain_error);
}

TEST_CASE("append base case") {
    ViterbiState state;
    state.append(0.9, 3.0);
    CHECK(state.length() == 1);
    CHECK(state.best_action_energy() == doctest::Approx(0.9));
    CHECK(state.best_background_energy() == doctest::Approx(0.1));
}

TEST_CASE("one-step recursion by hand") {
    ViterbiState state;
    state.append(0.9, 3.0);
    state.append(0.9, 3.0);
    CHECK(state.best_action_energy() == doctest::Approx(1.8));
    CHECK(state.best_background_energy() == doctest::Approx(0.2));
}

TEST_CASE("dominant unary terms give constant labellings") {
    ViterbiState high, low;
    for (int i = 0; i < 8; ++i) {
        high.append(0.9, 1.0);
        low.append(0.1, 1.0);
    }
    for (TubeLabel l : high.extract_labeling()) CHECK(l == TubeLabel::kAction);
    for (TubeLabel l : low.extract_labeling()) CHECK(l == TubeLabel::kBackground);
}

TEST_CASE("extract on empty chain throws") {
    ViterbiState state;
    CHECK_THROWS_AS(state.extract_labeling(), std::domain_error);
}

TEST_CASE("fixture chain matches the exhaustive argmax") {
    const std::vector<double> scores{0.9, 0.9, 0.1, 0.1, 0.9, 0.9};
    const double alpha = 0.3;
    ViterbiState state;
    for (double s : scores) state.append(s, alpha);
    const auto labels = state.extract_labeling();
    CHECK(labeling_energy(labels, scores, alpha) ==
          exhaustive_best_energy(scores, alpha));
    // With a small switch penalty the low-score middle is trimmed out.
    CHECK(labels[0] == TubeLabel::kAction);
    CHECK(labels[2] == TubeLabel::kBackground);
    CHECK(labels[3] == TubeLabel::kBackground);
    CHECK(labels[5] == TubeLabel::kAction);
}

TEST_CASE("optimality against the exhaustive oracle") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double alphas[] = {0.0, 0.3, 1.0, 3.0};
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t T = 1 + rng() % 12;
        const double alpha = alphas[trial % 4];
        std::vector<double> scores(T);
        for (double& s : scores) s = unit(rng);
        ViterbiState state;
        for (double s : scores) state.append(s, alpha);
        const auto labels = state.extract_labeling();
        CHECK(labeling_energy(labels, scores, alpha) ==
              exhaustive_best_energy(scores, alpha));
    }
}

TEST_CASE("online equals offline at every prefix") {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t T = 1 + rng() % 40;
        const double alpha = (trial % 5) * 0.75;
        std::vector<double> scores(T);
        for (double& s : scores) s = unit(rng);

        ViterbiState state;
        for (std::size_t t = 1; t <= T; ++t) {
            state.append(scores[t - 1], alpha);
            const std::vector<double> prefix(scores.begin(),
                                             scores.begin() + t);
            const auto [batch_energy, batch_labels] =
                batch_viterbi(prefix, alpha);
            const auto online_labels = state.extract_labeling();
            CHECK(std::max(state.best_action_energy(),
                           state.best_background_energy()) == batch_energy);
            CHECK(online_labels == batch_labels);
        }
    }
}

TEST_CASE("raising alpha never increases the number of action runs") {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t T = 2 + rng() % 20;
        std::vector<double> scores(T);
        for (double& s : scores) s = unit(rng);
        std::size_t prev_runs = SIZE_MAX;
        for (double alpha : {0.0, 0.2, 0.5, 1.0, 2.0, 4.0}) {
            ViterbiState state;
            for (double s : scores) state.append(s, alpha);
            const std::size_t runs = run_count(state.extract_labeling());
            CHECK(runs <= prev_runs);
            prev_runs = runs;
        }
    }
}
