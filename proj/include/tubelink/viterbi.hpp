// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace tubelink {

// Binary label of one tube position: the tube's action class or background.
enum class TubeLabel : std::uint8_t { kBackground = 0, kAction = 1 };

using Labeling = std::vector<TubeLabel>;

// Unary energy term: the class score for an action label, its complement for
// background.
double unary_score(TubeLabel label, double class_score);

// Total energy of a labelling: sum of unary terms minus alpha per label
// switch. Throws on length mismatch.
double labeling_energy(const Labeling& labels,
                       const std::vector<double>& scores, double alpha);

// Incrementally maintained two-label Viterbi chain over a tube's box scores.
// append() is O(1); extract_labeling() is a single O(T) backward pass that
// can run at any time without mutating the state. Energy ties prefer the
// action label.
class ViterbiState {
public:
    void append(double class_score, double alpha);

    Labeling extract_labeling() const;

    std::size_t length() const { return length_; }
    bool empty() const { return length_ == 0; }
    double best_action_energy() const { return v_action_; }
    double best_background_energy() const { return v_background_; }

private:
    struct Backpointer {
        TubeLabel to_action;      // predecessor when position r is action
        TubeLabel to_background;  // predecessor when position r is background
    };

    std::size_t length_ = 0;
    double v_action_ = 0.0;
    double v_background_ = 0.0;
    std::vector<Backpointer> backpointers_;  // one entry per position r >= 2
};

}  // namespace tubelink
