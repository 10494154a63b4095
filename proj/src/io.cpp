// SPDX-License-Identifier: Apache-2.0
#include "tubelink/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tubelink {

using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

namespace {

std::string format_box(const BoundingBox& b) {
    return "[" + format_number(b.x1) + "," + format_number(b.y1) + "," +
           format_number(b.x2) + "," + format_number(b.y2) + "]";
}

BoundingBox parse_box(const json& j, std::size_t line) {
    if (!j.is_array() || j.size() != 4)
        throw ParseError("box must be [x1,y1,x2,y2]", line);
    BoundingBox box{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                    j[3].get<double>()};
    if (!box.valid()) throw ParseError("degenerate box", line);
    return box;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

}  // namespace

std::vector<FrameDetections> read_detections_jsonl(std::istream& in,
                                                   std::size_t class_count) {
    std::vector<FrameDetections> out;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (text.empty()) continue;
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!j.is_object() || !j.contains("video") || !j.contains("frame") ||
            !j.contains("boxes"))
            throw ParseError("record needs video/frame/boxes", line_no);

        FrameDetections frame;
        frame.video_id = j["video"].get<std::string>();
        frame.frame_index = j["frame"].get<std::int64_t>();
        if (frame.frame_index < 0)
            throw ParseError("negative frame index", line_no);
        for (const auto& jb : j["boxes"]) {
            Detection det;
            det.box = parse_box(jb.at("box"), line_no);
            det.scores = jb.at("scores").get<std::vector<double>>();
            if (!scores_valid(det.scores, class_count))
                throw ParseError("scores must be " + std::to_string(class_count) +
                                     " values in [0,1]",
                                 line_no);
            frame.detections.push_back(std::move(det));
        }
        out.push_back(std::move(frame));
    }
    return out;
}

std::vector<FrameDetections> read_detections_file(const std::string& path,
                                                  std::size_t class_count) {
    auto in = open_or_throw(path);
    return read_detections_jsonl(in, class_count);
}

void write_detections_jsonl(std::ostream& out,
                            const std::vector<FrameDetections>& stream) {
    for (const auto& frame : stream) {
        out << "{\"video\":" << json(frame.video_id).dump()
            << ",\"frame\":" << frame.frame_index << ",\"boxes\":[";
        for (std::size_t i = 0; i < frame.detections.size(); ++i) {
            const auto& d = frame.detections[i];
            if (i) out << ",";
            out << "{\"box\":" << format_box(d.box) << ",\"scores\":[";
            for (std::size_t c = 0; c < d.scores.size(); ++c) {
                if (c) out << ",";
                out << format_number(d.scores[c]);
            }
            out << "]}";
        }
        out << "]}\n";
    }
}

void write_tubes_json(std::ostream& out,
                      const std::vector<TubeSegment>& segments) {
    out << "[\n";
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        out << "  {\"video\":" << json(s.video_id).dump()
            << ",\"class\":" << s.class_id << ",\"segment\":{\"start\":"
            << s.start_frame << ",\"end\":" << s.end_frame
            << "},\"score\":" << format_number(s.score) << ",\"boxes\":[";
        for (std::size_t b = 0; b < s.boxes.size(); ++b) {
            if (b) out << ",";
            out << "{\"frame\":" << s.boxes[b].frame_index
                << ",\"box\":" << format_box(s.boxes[b].box)
                << ",\"score\":" << format_number(s.boxes[b].score) << "}";
        }
        out << "]}" << (i + 1 < segments.size() ? "," : "") << "\n";
    }
    out << "]\n";
}

std::vector<TubeSegment> read_tubes_json(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid tube JSON: ") + e.what(), 0);
    }
    if (!j.is_array()) throw ParseError("tube file must be a JSON array", 0);

    std::vector<TubeSegment> out;
    for (const auto& jt : j) {
        TubeSegment seg;
        seg.video_id = jt.at("video").get<std::string>();
        seg.class_id = jt.at("class").get<std::size_t>();
        seg.start_frame = jt.at("segment").at("start").get<std::int64_t>();
        seg.end_frame = jt.at("segment").at("end").get<std::int64_t>();
        seg.score = jt.value("score", 0.0);
        for (const auto& jb : jt.at("boxes")) {
            TubeBox box;
            box.frame_index = jb.at("frame").get<std::int64_t>();
            box.box = parse_box(jb.at("box"), 0);
            box.score = jb.value("score", 0.0);
            seg.boxes.push_back(box);
        }
        out.push_back(std::move(seg));
    }
    return out;
}

std::vector<TubeSegment> read_tubes_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_tubes_json(in);
}

void write_ground_truth_json(std::ostream& out,
                             const std::vector<GroundTruthTube>& gts) {
    std::vector<TubeSegment> segs;
    segs.reserve(gts.size());
    for (const auto& g : gts) {
        TubeSegment s;
        s.video_id = g.video_id;
        s.class_id = g.class_id;
        s.start_frame = g.start_frame;
        s.end_frame = g.end_frame();
        s.score = 1.0;
        for (std::size_t i = 0; i < g.boxes.size(); ++i) {
            s.boxes.push_back({g.start_frame + static_cast<std::int64_t>(i),
                               g.boxes[i], 1.0});
        }
        segs.push_back(std::move(s));
    }
    write_tubes_json(out, segs);
}

std::vector<GroundTruthTube> read_ground_truth_json(std::istream& in) {
    auto segs = read_tubes_json(in);
    std::vector<GroundTruthTube> out;
    for (const auto& s : segs) {
        GroundTruthTube g;
        g.video_id = s.video_id;
        g.class_id = s.class_id;
        g.start_frame = s.start_frame;
        std::int64_t expect = s.start_frame;
        for (const auto& b : s.boxes) {
            if (b.frame_index != expect)
                throw ParseError("ground truth frames must be contiguous", 0);
            g.boxes.push_back(b.box);
            ++expect;
        }
        if (g.boxes.empty()) throw ParseError("empty ground truth tube", 0);
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<GroundTruthTube> read_ground_truth_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_ground_truth_json(in);
}

}  // namespace tubelink
