// SPDX-License-Identifier: Apache-2.0
#include "tubelink/predictor.hpp"

namespace tubelink {

std::optional<VideoPrediction> predict_label(const LinkerState& state,
                                             double observed_fraction) {
    std::optional<VideoPrediction> best;
    for (std::size_t c = 0; c < state.config().class_count; ++c) {
        auto consider = [&](const ActionTube& tube) {
            if (tube.boxes.empty()) return;
            const double mean = tube_mean_score(tube);
            const bool wins =
                !best || mean > best->tube_mean ||
                (mean == best->tube_mean &&
                 (c < best->class_id ||
                  (c == best->class_id && tube.tube_id < best->tube_id)));
            if (wins) best = {c, tube.tube_id, mean, observed_fraction};
        };
        for (const auto& t : state.terminated_tubes(c)) consider(t);
        for (const auto& t : state.active_tubes(c)) consider(t);
    }
    return best;
}

}  // namespace tubelink
