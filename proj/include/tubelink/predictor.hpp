// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "tubelink/linker.hpp"

namespace tubelink {

// Video-level early prediction: the class of the current highest mean-scored
// tube.
struct VideoPrediction {
    std::size_t class_id = 0;
    std::uint64_t tube_id = 0;
    double tube_mean = 0.0;
    double observed_fraction = 1.0;
};

// Argmax over all tubes (active and terminated) of tube_mean_score. Ties go
// to the lower class id, then the older tube. Returns nullopt while no tube
// exists yet.
std::optional<VideoPrediction> predict_label(const LinkerState& state,
                                             double observed_fraction = 1.0);

}  // namespace tubelink
