// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tubelink/metrics.hpp"
#include "tubelink/types.hpp"

namespace tubelink {

// Malformed input record; line is 1-based, 0 when not line-oriented.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line)
        : std::runtime_error(line > 0 ? message + " (line " +
                                            std::to_string(line) + ")"
                                      : message),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

// Fixed 6-decimal formatting used by every emitted file.
std::string format_number(double v);

// Detection streams: one JSON object per line,
// {"video": str, "frame": int, "boxes": [{"box":[x1,y1,x2,y2],
//  "scores":[...C floats]}]}.
std::vector<FrameDetections> read_detections_jsonl(std::istream& in,
                                                   std::size_t class_count);
std::vector<FrameDetections> read_detections_file(const std::string& path,
                                                  std::size_t class_count);
void write_detections_jsonl(std::ostream& out,
                            const std::vector<FrameDetections>& stream);

// Tube segments: JSON array of {"video","class","segment":{"start","end"},
// "score","boxes":[{"frame","box","score"}]}.
void write_tubes_json(std::ostream& out,
                      const std::vector<TubeSegment>& segments);
std::vector<TubeSegment> read_tubes_json(std::istream& in);
std::vector<TubeSegment> read_tubes_file(const std::string& path);

// Ground truth uses the tube format too ("score" optional); frames must be
// contiguous.
void write_ground_truth_json(std::ostream& out,
                             const std::vector<GroundTruthTube>& gts);
std::vector<GroundTruthTube> read_ground_truth_json(std::istream& in);
std::vector<GroundTruthTube> read_ground_truth_file(const std::string& path);

}  // namespace tubelink
