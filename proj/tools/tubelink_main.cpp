// SPDX-License-Identifier: Apache-2.0
//
// tubelink CLI: build action tubes from detection streams, evaluate them
// against ground truth, benchmark the linker, and generate synthetic
// scenarios.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "tubelink/io.hpp"
#include "tubelink/pipeline.hpp"
#include "tubelink/simulator.hpp"

namespace fs = std::filesystem;
using namespace tubelink;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitSequence = 3;

std::size_t thread_cap() {
    if (const char* env = std::getenv("TUBELINK_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

FusionStrategy parse_fusion(const std::string& name, double tau) {
    FusionStrategy s;
    s.boost_iou_threshold = tau;
    if (name == "none") s.variant = FusionVariant::kNone;
    else if (name == "union-set") s.variant = FusionVariant::kUnionSet;
    else if (name == "boost") s.variant = FusionVariant::kBoost;
    else throw CLI::ValidationError("--fusion", "unknown fusion strategy");
    return s;
}

std::string metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::kAuc: return "auc";
        case MetricKind::kMap: return "map";
        case MetricKind::kAccuracy: return "accuracy";
    }
    return "?";
}

void write_curves_csv(std::ostream& out, const std::vector<MetricCurve>& curves) {
    out << "checkpoint";
    for (const auto& c : curves) {
        out << "," << metric_name(c.kind);
        if (c.kind != MetricKind::kAccuracy)
            out << "@" << format_number(c.delta);
    }
    out << "\n";
    if (curves.empty()) return;
    for (std::size_t i = 0; i < curves.front().fractions.size(); ++i) {
        out << format_number(curves.front().fractions[i]);
        for (const auto& c : curves) out << "," << format_number(c.values[i]);
        out << "\n";
    }
}

struct BuildArgs {
    std::string appearance;
    std::string flow;
    std::string fusion = "none";
    double boost_tau = 0.3;
    std::string out_dir = "out";
    Config config;
};

int run_build(const BuildArgs& args) {
    const auto fusion = parse_fusion(args.fusion, args.boost_tau);
    if (fusion.variant != FusionVariant::kNone && args.flow.empty()) {
        std::cerr << "error: --fusion " << args.fusion << " requires --flow\n";
        return 1;
    }

    PipelineOptions options{args.config, fusion};
    options.config.validate();

    const auto appearance = group_by_video(
        read_detections_file(args.appearance, options.config.class_count));
    std::map<std::string, std::vector<FrameDetections>> flow;
    if (!args.flow.empty())
        flow = group_by_video(
            read_detections_file(args.flow, options.config.class_count));

    std::vector<std::string> video_ids;
    for (const auto& [vid, _] : appearance) video_ids.push_back(vid);

    const auto checkpoints = default_checkpoints();
    std::map<std::string, VideoResult> results;

    // Videos are independent; process them in parallel, write in order.
    const std::size_t workers = std::min(thread_cap(), video_ids.size());
    if (workers > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> futures;
        std::mutex mtx;
        for (std::size_t w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= video_ids.size()) break;
                    const auto& vid = video_ids[i];
                    static const std::vector<FrameDetections> kEmpty;
                    auto fit = flow.find(vid);
                    auto res = run_video(vid, appearance.at(vid),
                                         fit != flow.end() ? fit->second : kEmpty,
                                         options, checkpoints);
                    std::lock_guard<std::mutex> lock(mtx);
                    results.emplace(vid, std::move(res));
                }
            }));
        }
        for (auto& f : futures) f.get();
    } else {
        for (const auto& vid : video_ids) {
            static const std::vector<FrameDetections> kEmpty;
            auto fit = flow.find(vid);
            results.emplace(vid, run_video(vid, appearance.at(vid),
                                           fit != flow.end() ? fit->second : kEmpty,
                                           options, checkpoints));
        }
    }

    fs::create_directories(args.out_dir);
    std::vector<TubeSegment> all_segments;
    for (const auto& vid : video_ids) {
        const auto& segs = results.at(vid).segments;
        all_segments.insert(all_segments.end(), segs.begin(), segs.end());
    }
    {
        std::ofstream out(fs::path(args.out_dir) / "tubes.json");
        write_tubes_json(out, all_segments);
    }
    {
        std::ofstream out(fs::path(args.out_dir) / "predictions.csv");
        out << "video,checkpoint,frame,class,score\n";
        for (const auto& vid : video_ids) {
            for (const auto& cp : results.at(vid).checkpoints) {
                out << vid << "," << format_number(cp.fraction) << ","
                    << cp.frame_index << ",";
                if (cp.prediction) {
                    out << cp.prediction->class_id << ","
                        << format_number(cp.prediction->tube_mean);
                } else {
                    out << "none,0.000000";
                }
                out << "\n";
            }
        }
    }
    std::cout << "built " << all_segments.size() << " tube segments from "
              << video_ids.size() << " videos -> " << args.out_dir << "\n";
    return 0;
}

struct EvalArgs {
    std::string tubes;
    std::string gt;
    std::vector<double> deltas;
    int checkpoints = 10;
    std::string out_dir = "out";
};

// Truncate stored segments to the observed prefix of their video.
std::vector<TubeSegment> truncate_segments(const std::vector<TubeSegment>& segs,
                                           std::int64_t max_frame) {
    std::vector<TubeSegment> out;
    for (const auto& s : segs) {
        if (s.start_frame > max_frame) continue;
        TubeSegment t;
        t.video_id = s.video_id;
        t.class_id = s.class_id;
        double sum = 0.0;
        for (const auto& b : s.boxes) {
            if (b.frame_index > max_frame) break;
            t.boxes.push_back(b);
            sum += b.score;
        }
        if (t.boxes.empty()) continue;
        t.start_frame = t.boxes.front().frame_index;
        t.end_frame = t.boxes.back().frame_index;
        t.score = sum / static_cast<double>(t.boxes.size());
        out.push_back(std::move(t));
    }
    return out;
}

int run_eval(const EvalArgs& args) {
    const auto segments = read_tubes_file(args.tubes);
    std::vector<GroundTruthTube> gts;
    try {
        gts = read_ground_truth_file(args.gt);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: ground truth: " << e.what() << "\n";
        return kExitParse;
    }
    if (gts.empty()) {
        std::cerr << "error: ground truth file has no tubes\n";
        return kExitParse;
    }

    std::vector<double> deltas = args.deltas;
    if (deltas.empty()) deltas = {0.2, 0.5, 0.75};

    fs::create_directories(args.out_dir);

    // Offline metrics.
    std::ofstream mout(fs::path(args.out_dir) / "metrics.json");
    mout << "{\n";
    mout << "  \"map\": {\n";
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const auto res = map_at(segments, gts, deltas[i]);
        mout << "    \"" << format_number(deltas[i])
             << "\": " << format_number(res.map)
             << (i + 1 < deltas.size() ? ",\n" : "\n");
    }
    mout << "  },\n";
    mout << "  \"map_0.50:0.95\": " << format_number(map_avg_range(segments, gts))
         << ",\n";
    mout << "  \"auc\": {\n";
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        mout << "    \"" << format_number(deltas[i])
             << "\": " << format_number(auc_at(segments, gts, deltas[i]))
             << (i + 1 < deltas.size() ? ",\n" : "\n");
    }
    mout << "  },\n";
    mout << "  \"per_class_ap\": {\n";
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const auto res = map_at(segments, gts, deltas[i]);
        mout << "    \"" << format_number(deltas[i]) << "\": {";
        bool first = true;
        for (const auto& [cls, ap] : res.per_class_ap) {
            if (!first) mout << ", ";
            first = false;
            mout << "\"" << cls << "\": ";
            if (ap) mout << format_number(*ap);
            else mout << "null";
        }
        mout << "}" << (i + 1 < deltas.size() ? ",\n" : "\n");
    }
    mout << "  }\n}\n";

    // Observation-percentage curves from truncated tubes and ground truth.
    std::map<std::string, std::int64_t> video_end;
    for (const auto& g : gts)
        video_end[g.video_id] = std::max(video_end[g.video_id], g.end_frame());
    for (const auto& s : segments)
        video_end[s.video_id] = std::max(video_end[s.video_id], s.end_frame);
    std::map<std::string, std::set<std::size_t>> gt_labels;
    for (const auto& g : gts) gt_labels[g.video_id].insert(g.class_id);

    std::vector<MetricCurve> curves;
    for (double d : deltas) {
        curves.push_back({MetricKind::kAuc, d, {}, {}});
        curves.push_back({MetricKind::kMap, d, {}, {}});
    }
    curves.push_back({MetricKind::kAccuracy, 0.0, {}, {}});

    for (int s = 1; s <= args.checkpoints; ++s) {
        const double p = static_cast<double>(s) / args.checkpoints;
        std::vector<TubeSegment> trunc_segs;
        std::vector<GroundTruthTube> trunc_gts;
        std::size_t correct = 0, labelled = 0;
        for (const auto& [vid, end] : video_end) {
            const std::int64_t cutoff = static_cast<std::int64_t>(
                std::ceil(p * static_cast<double>(end + 1))) - 1;
            std::vector<TubeSegment> vsegs;
            std::vector<GroundTruthTube> vgts;
            for (const auto& seg : segments)
                if (seg.video_id == vid) vsegs.push_back(seg);
            for (const auto& g : gts)
                if (g.video_id == vid) vgts.push_back(g);
            auto ts = truncate_segments(vsegs, cutoff);
            auto tg = truncate_gts(vgts, cutoff);

            auto label_it = gt_labels.find(vid);
            if (label_it != gt_labels.end()) {
                ++labelled;
                const TubeSegment* top = nullptr;
                for (const auto& seg : ts)
                    if (!top || seg.score > top->score) top = &seg;
                if (top && label_it->second.count(top->class_id)) ++correct;
            }
            trunc_segs.insert(trunc_segs.end(), ts.begin(), ts.end());
            trunc_gts.insert(trunc_gts.end(), tg.begin(), tg.end());
        }
        std::size_t ci = 0;
        for (double d : deltas) {
            curves[ci].fractions.push_back(p);
            curves[ci].values.push_back(auc_at(trunc_segs, trunc_gts, d));
            ++ci;
            curves[ci].fractions.push_back(p);
            curves[ci].values.push_back(map_at(trunc_segs, trunc_gts, d).map);
            ++ci;
        }
        curves[ci].fractions.push_back(p);
        curves[ci].values.push_back(
            labelled > 0 ? static_cast<double>(correct) / labelled : 0.0);
    }
    {
        std::ofstream cout_file(fs::path(args.out_dir) / "curves.csv");
        write_curves_csv(cout_file, curves);
    }
    std::cout << "wrote metrics.json and curves.csv -> " << args.out_dir << "\n";
    return 0;
}

struct BenchArgs {
    int classes = 24;
    int top_n = 10;
    std::int64_t frames = 500;
    int instances = 2;
    int repetitions = 3;
    std::uint64_t seed = 7;
};

int run_bench(const BenchArgs& args) {
    ScenarioSpec spec;
    spec.seed = args.seed;
    spec.frame_count = args.frames;
    spec.class_count = static_cast<std::size_t>(args.classes);
    spec.instances_per_class = static_cast<std::size_t>(args.instances);
    const auto scenario = generate_scenario(spec);
    const auto videos = group_by_video(scenario.stream);

    Config config;
    config.class_count = spec.class_count;
    config.top_n = args.top_n;

    std::vector<double> per_frame_ms;
    for (int rep = 0; rep < args.repetitions; ++rep) {
        for (const auto& [vid, frames] : videos) {
            LinkerState linker(config);
            for (const auto& frame : frames) {
                const auto t0 = std::chrono::steady_clock::now();
                linker.advance_frame(frame);
                const auto t1 = std::chrono::steady_clock::now();
                per_frame_ms.push_back(
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
            }
        }
    }
    std::sort(per_frame_ms.begin(), per_frame_ms.end());
    double sum = 0.0;
    for (double v : per_frame_ms) sum += v;
    const double mean = sum / per_frame_ms.size();
    const double p95 = per_frame_ms[static_cast<std::size_t>(
        0.95 * (per_frame_ms.size() - 1))];
    std::cout << "frames measured: " << per_frame_ms.size() << "\n"
              << "classes: " << args.classes << ", top-n: " << args.top_n << "\n"
              << "mean ms/frame: " << format_number(mean) << "\n"
              << "p95 ms/frame: " << format_number(p95) << "\n"
              << "frames/sec: " << format_number(1000.0 / mean) << "\n";
    return 0;
}

struct SimArgs {
    std::uint64_t seed = 1;
    std::int64_t frames = 200;
    int classes = 3;
    int instances = 2;
    double drop = 0.0;
    double jitter = 0.0;
    double fp_rate = 0.0;
    double score_noise = 0.0;
    std::string out_dir = "out";
};

int run_simulate(const SimArgs& args) {
    ScenarioSpec spec;
    spec.seed = args.seed;
    spec.frame_count = args.frames;
    spec.class_count = static_cast<std::size_t>(args.classes);
    spec.instances_per_class = static_cast<std::size_t>(args.instances);
    auto scenario = generate_scenario(spec);

    NoiseSpec noise{args.drop, args.jitter, args.fp_rate, args.score_noise};
    auto stream = scenario.stream;
    if (args.drop > 0 || args.jitter > 0 || args.fp_rate > 0 ||
        args.score_noise > 0) {
        stream = corrupt(stream, noise, args.seed + 1, spec.frame_width,
                         spec.frame_height);
    }

    fs::create_directories(args.out_dir);
    {
        std::ofstream out(fs::path(args.out_dir) / "detections.jsonl");
        write_detections_jsonl(out, stream);
    }
    {
        std::ofstream out(fs::path(args.out_dir) / "gt.json");
        write_ground_truth_json(out, scenario.ground_truth);
    }
    std::cout << "wrote detections.jsonl (" << stream.size() << " frames) and gt.json ("
              << scenario.ground_truth.size() << " tubes) -> " << args.out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tubelink: online action tube building and evaluation"};
    app.require_subcommand(1);

    BuildArgs build_args;
    auto* build = app.add_subcommand("build", "Build tubes from detection streams");
    build->add_option("--appearance", build_args.appearance,
                      "Appearance detections (JSONL)")->required();
    build->add_option("--flow", build_args.flow, "Flow detections (JSONL)");
    build->add_option("--fusion", build_args.fusion,
                      "Fusion strategy: union-set|boost|none");
    build->add_option("--boost-tau", build_args.boost_tau,
                      "Boost-fusion association IoU threshold");
    build->add_option("--lambda", build_args.config.lambda, "Tube overlap threshold");
    build->add_option("--n", build_args.config.top_n, "Top detections per class");
    build->add_option("--k", build_args.config.max_misses, "Max consecutive misses");
    build->add_option("--alpha", build_args.config.alpha, "Label-switch penalty");
    build->add_option("--nms-iou", build_args.config.nms_iou, "NMS IoU threshold");
    build->add_option("--classes", build_args.config.class_count, "Class count")
        ->required();
    build->add_option("--out", build_args.out_dir, "Output directory");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate tubes against ground truth");
    eval->add_option("--tubes", eval_args.tubes, "Tube segments (JSON)")->required();
    eval->add_option("--gt", eval_args.gt, "Ground truth tubes (JSON)")->required();
    eval->add_option("--delta", eval_args.deltas,
                     "ST-IoU threshold (repeatable; default 0.2 0.5 0.75)");
    eval->add_option("--checkpoints", eval_args.checkpoints,
                     "Number of observation checkpoints");
    eval->add_option("--out", eval_args.out_dir, "Output directory");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Benchmark linker + labeler latency");
    bench->add_option("--classes", bench_args.classes, "Class count");
    bench->add_option("--n", bench_args.top_n, "Top detections per class");
    bench->add_option("--frames", bench_args.frames, "Frames per video");
    bench->add_option("--instances", bench_args.instances, "Instances per class");
    bench->add_option("--repetitions", bench_args.repetitions, "Repetitions");
    bench->add_option("--seed", bench_args.seed, "Scenario seed");

    SimArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic scenario");
    sim->add_option("--seed", sim_args.seed, "RNG seed");
    sim->add_option("--frames", sim_args.frames, "Frames per video");
    sim->add_option("--classes", sim_args.classes, "Class count");
    sim->add_option("--instances", sim_args.instances, "Instances per class");
    sim->add_option("--drop", sim_args.drop, "Detection drop probability");
    sim->add_option("--jitter", sim_args.jitter, "Box jitter magnitude");
    sim->add_option("--fp-rate", sim_args.fp_rate, "False positives per frame");
    sim->add_option("--score-noise", sim_args.score_noise, "Score noise stddev");
    sim->add_option("--out", sim_args.out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return run_build(build_args);
        if (eval->parsed()) return run_eval(eval_args);
        if (bench->parsed()) return run_bench(bench_args);
        if (sim->parsed()) return run_simulate(sim_args);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const SequenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSequence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
