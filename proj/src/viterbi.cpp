// SPDX-License-Identifier: Apache-2.0
#include "tubelink/viterbi.hpp"

#include <algorithm>
#include <stdexcept>

namespace tubelink {

double unary_score(TubeLabel label, double class_score) {
    return label == TubeLabel::kAction ? class_score : 1.0 - class_score;
}

double labeling_energy(const Labeling& labels,
                       const std::vector<double>& scores, double alpha) {
    if (labels.size() != scores.size())
        throw std::domain_error("labeling_energy: length mismatch");
    double energy = 0.0;
    for (std::size_t r = 0; r < labels.size(); ++r) {
        energy += unary_score(labels[r], scores[r]);
        if (r > 0 && labels[r] != labels[r - 1]) energy -= alpha;
    }
    return energy;
}

void ViterbiState::append(double class_score, double alpha) {
    if (length_ == 0) {
        v_action_ = unary_score(TubeLabel::kAction, class_score);
        v_background_ = unary_score(TubeLabel::kBackground, class_score);
        length_ = 1;
        return;
    }
    // Stay vs switch for each new label; ties prefer an action predecessor.
    const double to_action_stay = v_action_;
    const double to_action_switch = v_background_ - alpha;
    const double to_background_stay = v_background_;
    const double to_background_switch = v_action_ - alpha;

    Backpointer bp;
    double new_action;
    if (to_action_stay >= to_action_switch) {
        new_action = to_action_stay;
        bp.to_action = TubeLabel::kAction;
    } else {
        new_action = to_action_switch;
        bp.to_action = TubeLabel::kBackground;
    }
    double new_background;
    if (to_background_switch >= to_background_stay) {
        new_background = to_background_switch;
        bp.to_background = TubeLabel::kAction;
    } else {
        new_background = to_background_stay;
        bp.to_background = TubeLabel::kBackground;
    }
    v_action_ = new_action + unary_score(TubeLabel::kAction, class_score);
    v_background_ =
        new_background + unary_score(TubeLabel::kBackground, class_score);
    backpointers_.push_back(bp);
    ++length_;
}

Labeling ViterbiState::extract_labeling() const {
    if (length_ == 0)
        throw std::domain_error("extract_labeling: empty chain");
    Labeling labels(length_);
    labels.back() = v_action_ >= v_background_ ? TubeLabel::kAction
                                               : TubeLabel::kBackground;
    for (std::size_t r = length_ - 1; r > 0; --r) {
        const Backpointer& bp = backpointers_[r - 1];
        labels[r - 1] = labels[r] == TubeLabel::kAction ? bp.to_action
                                                        : bp.to_background;
    }
    return labels;
}

}  // namespace tubelink
