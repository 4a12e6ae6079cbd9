#pragma once

#include "export.hpp"
#include "io.hpp"
#include "search.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace pushworld {

// Bumped whenever the CSV columns change.
inline constexpr int kBenchFormatVersion = 1;

enum class ExportFormat { Pddl, Sas };

inline const char *export_format_name(ExportFormat f) { return f == ExportFormat::Pddl ? "pddl" : "sas"; }

inline std::optional<ExportFormat> export_format_from_name(std::string_view s) {
    if (s == "pddl")
        return ExportFormat::Pddl;
    if (s == "sas")
        return ExportFormat::Sas;
    return std::nullopt;
}

struct BenchmarkRecord {
    std::string puzzle;
    std::string planner;
    std::string status;  // a search status, or "error"
    std::size_t plan_length = 0;
    double wall_time_s = 0.0;
    // Time to build the exported model, when an export format was requested.
    std::optional<double> translation_time_s;
    std::size_t generated = 0;
    std::size_t expanded = 0;
    std::size_t heuristic_evaluations = 0;
    std::size_t peak_open = 0;
    std::size_t memory_estimate_bytes = 0;
    std::string plan;

    bool solved() const { return status == status_name(SearchStatus::Solved); }
};

struct NamedPuzzle {
    std::string id;
    PuzzleInstance instance;
};

struct LoadReport {
    std::vector<NamedPuzzle> puzzles;
    std::vector<std::string> warnings;
};

// Every *.pwp below `dir`, keyed by path relative to `dir` without the
// extension and sorted by that key. Unreadable files become warnings.
inline LoadReport load_puzzle_dir(const std::filesystem::path &dir) {
    namespace fs = std::filesystem;
    LoadReport report;
    if (!fs::is_directory(dir)) {
        report.warnings.push_back("not a directory: " + dir.string());
        return report;
    }
    std::vector<fs::path> files;
    for (const auto &entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pwp")
            files.push_back(entry.path());
    for (const fs::path &f : files) {
        std::string id = fs::relative(f, dir).replace_extension().generic_string();
        try {
            PuzzleInstance inst = load_puzzle(f);
            report.puzzles.push_back({id, std::move(inst)});
        } catch (const std::exception &e) {
            report.warnings.push_back("skipping " + f.string() + ": " + e.what());
        }
    }
    std::sort(report.puzzles.begin(), report.puzzles.end(),
              [](const NamedPuzzle &a, const NamedPuzzle &b) { return a.id < b.id; });
    std::sort(report.warnings.begin(), report.warnings.end());
    return report;
}

inline BenchmarkRecord run_one(const NamedPuzzle &p, HeuristicKind heuristic,
                               const SearchLimits &limits,
                               std::optional<ExportFormat> format = std::nullopt) {
    BenchmarkRecord r;
    r.puzzle = p.id;
    r.planner = heuristic_name(heuristic);
    if (format) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            if (*format == ExportFormat::Pddl)
                (void)export_pddl(p.instance.puzzle, p.instance.initial);
            else
                (void)export_sas(p.instance.puzzle, p.instance.initial);
            r.translation_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        } catch (const ExportError &) {
            // left empty: the model is too large to export
        }
    }
    SearchConfig config;
    config.heuristic = heuristic;
    config.limits = limits;
    PlanResult result;
    try {
        result = gbf_search(p.instance.puzzle, p.instance.initial, config);
    } catch (const std::exception &) {
        r.status = "error";
        return r;
    }
    r.status = status_name(result.status);
    if (result.solved() && !validate_plan(p.instance.puzzle, p.instance.initial, result.actions))
        r.status = "error";
    if (r.solved()) {
        r.plan_length = result.actions.size();
        r.plan = plan_to_string(result.actions);
    }
    r.wall_time_s = result.stats.wall_time_s;
    r.generated = result.stats.generated;
    r.expanded = result.stats.expanded;
    r.heuristic_evaluations = result.stats.heuristic_evaluations;
    r.peak_open = result.stats.peak_open;
    r.memory_estimate_bytes = result.stats.memory_estimate_bytes;
    return r;
}

/*
  One record per (puzzle, planner), ordered by puzzle id and then by the order
  of `planners`. With jobs > 1 the runs are spread over worker threads, each
  running whole searches; the ordering does not depend on scheduling.
*/
inline std::vector<BenchmarkRecord> run_benchmark(const std::vector<NamedPuzzle> &puzzles,
                                                  const std::vector<HeuristicKind> &planners,
                                                  const SearchLimits &limits, std::size_t jobs = 1,
                                                  std::optional<ExportFormat> format = std::nullopt) {
    const std::size_t total = puzzles.size() * planners.size();
    std::vector<BenchmarkRecord> records(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < total;)
            records[i] = run_one(puzzles[i / planners.size()], planners[i % planners.size()],
                                 limits, format);
    };
    jobs = std::max<std::size_t>(1, std::min(jobs, total));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t j = 0; j < jobs; ++j)
            threads.emplace_back(worker);
        for (auto &t : threads)
            t.join();
    }
    return records;
}

inline std::string csv_quote(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

inline const std::vector<std::string> &bench_columns() {
    static const std::vector<std::string> cols = {
        "format_version", "puzzle",    "planner",  "status",
        "plan_length",    "wall_time_s", "translation_time_s", "generated",
        "expanded",       "heuristic_evaluations", "peak_open", "memory_estimate_bytes",
        "plan"};
    return cols;
}

inline void write_csv(std::ostream &out, const std::vector<BenchmarkRecord> &records) {
    const auto &cols = bench_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i];
    out << '\n';
    out << std::setprecision(6) << std::fixed;
    for (const BenchmarkRecord &r : records) {
        out << kBenchFormatVersion << ',' << csv_quote(r.puzzle) << ',' << r.planner << ','
            << r.status << ',' << r.plan_length << ',' << r.wall_time_s << ',';
        if (r.translation_time_s)
            out << *r.translation_time_s;
        out << ',' << r.generated << ',' << r.expanded << ',' << r.heuristic_evaluations << ','
            << r.peak_open << ',' << r.memory_estimate_bytes << ',' << r.plan << '\n';
    }
}

inline nlohmann::ordered_json to_json(const std::vector<BenchmarkRecord> &records) {
    nlohmann::ordered_json doc;
    doc["format_version"] = kBenchFormatVersion;
    doc["columns"] = bench_columns();
    auto &rows = doc["records"] = nlohmann::ordered_json::array();
    for (const BenchmarkRecord &r : records) {
        nlohmann::ordered_json j;
        j["puzzle"] = r.puzzle;
        j["planner"] = r.planner;
        j["status"] = r.status;
        j["plan_length"] = r.plan_length;
        j["wall_time_s"] = r.wall_time_s;
        j["translation_time_s"] = r.translation_time_s ? nlohmann::ordered_json(*r.translation_time_s)
                                                       : nlohmann::ordered_json(nullptr);
        j["generated"] = r.generated;
        j["expanded"] = r.expanded;
        j["heuristic_evaluations"] = r.heuristic_evaluations;
        j["peak_open"] = r.peak_open;
        j["memory_estimate_bytes"] = r.memory_estimate_bytes;
        j["plan"] = r.plan;
        rows.push_back(std::move(j));
    }
    return doc;
}

struct CurvePoint {
    std::string planner;
    double time_s;
    std::size_t solved;
};

// Cumulative number of solved puzzles against planning time, per planner: one
// point per solved puzzle, in increasing time.
inline std::vector<CurvePoint> solved_curve(const std::vector<BenchmarkRecord> &records) {
    std::vector<std::string> planners;
    for (const auto &r : records)
        if (std::find(planners.begin(), planners.end(), r.planner) == planners.end())
            planners.push_back(r.planner);
    std::vector<CurvePoint> out;
    for (const std::string &name : planners) {
        std::vector<double> times;
        for (const auto &r : records)
            if (r.planner == name && r.solved())
                times.push_back(r.wall_time_s);
        std::sort(times.begin(), times.end());
        for (std::size_t i = 0; i < times.size(); ++i)
            out.push_back({name, times[i], i + 1});
    }
    return out;
}

inline void write_curve_csv(std::ostream &out, const std::vector<CurvePoint> &curve) {
    out << "planner,time_s,solved\n" << std::setprecision(6) << std::fixed;
    for (const CurvePoint &p : curve)
        out << p.planner << ',' << p.time_s << ',' << p.solved << '\n';
}

}  // namespace pushworld
