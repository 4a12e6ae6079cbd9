// pushworld: solve, benchmark, generate, export, validate and play puzzles.

#include <pushworld/pushworld.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace pushworld;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitError = 1;
constexpr int kExitLimits = 2;

struct Options {
    std::string file;
    std::string dir;
    std::vector<std::string> heuristics;
    double time_limit = 60.0;
    std::size_t memory_limit = 4096;
    std::size_t jobs = 1;
    std::uint64_t seed = 0;
    std::string format;
    std::string out;

    // gen
    std::string variant;
    std::size_t train = kTrainCount;
    std::size_t test = kTestCount;
    int augment_size = 0;
    double planner_seconds = 5.0;
    double oracle_seconds = 30.0;

    // export
    std::size_t max_chain = 3;

    // validate / play
    std::string plan_file;
    std::string script;
};

std::optional<fs::path> corpus_root() {
    if (const char *env = std::getenv("PUSHWORLD_PUZZLE_DIR"); env && *env)
        return fs::path(env);
    return std::nullopt;
}

// Paths that do not exist as given are looked up under PUSHWORLD_PUZZLE_DIR.
fs::path resolve(const std::string &name) {
    fs::path p(name);
    if (!fs::exists(p) && p.is_relative())
        if (auto root = corpus_root(); root && fs::exists(*root / p))
            return *root / p;
    return p;
}

PuzzleInstance load_or_report(const std::string &name) {
    try {
        return load_puzzle(resolve(name));
    } catch (const ParseError &e) {
        std::cerr << name << ":" << e.line() << ": " << e.what() << "\n";
    } catch (const std::exception &e) {
        std::cerr << name << ": " << e.what() << "\n";
    }
    std::exit(kExitError);
}

SearchLimits limits_of(const Options &o) { return {o.time_limit, o.memory_limit}; }

HeuristicKind heuristic_of(const std::string &name) {
    auto h = heuristic_from_name(name);
    if (!h)
        throw CLI::ValidationError("--heuristic", "unknown heuristic '" + name + "'");
    return *h;
}

void print_stats(std::ostream &out, const PlanResult &r) {
    out << "# status: " << status_name(r.status) << "\n"
        << "# plan_length: " << (r.solved() ? r.actions.size() : 0) << "\n"
        << "# wall_time_s: " << r.stats.wall_time_s << "\n"
        << "# generated: " << r.stats.generated << "\n"
        << "# expanded: " << r.stats.expanded << "\n"
        << "# heuristic_evaluations: " << r.stats.heuristic_evaluations << "\n"
        << "# peak_open: " << r.stats.peak_open << "\n"
        << "# memory_estimate_bytes: " << r.stats.memory_estimate_bytes << "\n";
}

int cmd_solve(const Options &o) {
    PuzzleInstance inst = load_or_report(o.file);
    SearchConfig config;
    config.heuristic = heuristic_of(o.heuristics.empty() ? "novelty-rgd" : o.heuristics.front());
    config.limits = limits_of(o);
    PlanResult r = gbf_search(inst.puzzle, inst.initial, config);
    if (r.solved() && !validate_plan(inst.puzzle, inst.initial, r.actions)) {
        std::cerr << "internal error: the returned plan does not validate\n";
        return kExitError;
    }
    std::ostringstream plan;
    for (Action a : r.actions)
        plan << action_letter(a) << "\n";
    std::cout << plan.str();
    print_stats(std::cerr, r);
    if (r.solved() && !o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) {
            std::cerr << "cannot write " << o.out << "\n";
            return kExitError;
        }
        f << plan.str();
    }
    if (r.solved())
        return kExitSolved;
    if (r.status == SearchStatus::Exhausted) {
        std::cerr << "no plan exists\n";
        return kExitError;
    }
    return kExitLimits;
}

int cmd_bench(const Options &o) {
    fs::path dir = o.dir.empty() ? corpus_root().value_or(fs::path{}) : resolve(o.dir);
    if (dir.empty()) {
        std::cerr << "bench: no directory given and PUSHWORLD_PUZZLE_DIR is unset\n";
        return kExitError;
    }
    std::vector<HeuristicKind> planners;
    for (const std::string &h : o.heuristics)
        planners.push_back(heuristic_of(h));
    if (planners.empty())
        planners = {HeuristicKind::NoveltyRgd};
    std::optional<ExportFormat> format;
    if (!o.format.empty())
        format = export_format_from_name(o.format);

    LoadReport loaded = load_puzzle_dir(dir);
    for (const std::string &w : loaded.warnings)
        std::cerr << "warning: " << w << "\n";
    auto records = run_benchmark(loaded.puzzles, planners, limits_of(o), o.jobs, format);

    fs::path out = o.out.empty() ? fs::path("bench_results") : fs::path(o.out);
    fs::create_directories(out);
    {
        std::ofstream f(out / "results.csv");
        write_csv(f, records);
    }
    {
        std::ofstream f(out / "results.json");
        f << to_json(records).dump(2) << "\n";
    }
    {
        std::ofstream f(out / "curve.csv");
        write_curve_csv(f, solved_curve(records));
    }
    std::map<std::string, std::size_t> solved;
    for (const auto &r : records)
        solved[r.planner] += r.solved();
    for (HeuristicKind h : planners)
        std::cout << heuristic_name(h) << ": solved " << solved[heuristic_name(h)] << "/"
                  << loaded.puzzles.size() << "\n";
    std::cout << "results written to " << out.string() << "\n";
    return 0;
}

int cmd_gen(const Options &o) {
    auto variant = variant_from_name(o.variant);
    if (!variant) {
        std::cerr << "gen: unknown variant '" << o.variant << "'\n";
        return kExitError;
    }
    VariantSpec spec;
    spec.variant = *variant;
    spec.seed = o.seed;
    spec.planner_seconds = o.planner_seconds;
    spec.oracle_seconds = o.oracle_seconds;
    fs::path root = o.out.empty() ? fs::path("puzzles") : fs::path(o.out);
    try {
        std::vector<PuzzleInstance> train = generate(spec, o.train, 0, o.jobs);
        std::vector<PuzzleInstance> test = generate(spec, o.test, o.train, o.jobs);
        if (o.augment_size > 0) {
            train = augment(train, o.augment_size, o.augment_size, o.seed);
            test = augment(test, o.augment_size, o.augment_size, o.seed + 8 * o.train);
        }
        write_split(root, o.variant, "train", train);
        write_split(root, o.variant, "test", test);
        std::cout << "wrote " << train.size() << " train and " << test.size()
                  << " test puzzles under " << (root / o.variant).string() << "\n";
    } catch (const GenerationError &e) {
        std::cerr << "gen: " << e.what() << "\n";
        return kExitError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "gen: " << e.what() << "\n";
        return kExitError;
    }
    return 0;
}

int cmd_export(const Options &o) {
    PuzzleInstance inst = load_or_report(o.file);
    auto format = export_format_from_name(o.format.empty() ? "pddl" : o.format);
    ExportOptions opts;
    opts.max_chain = o.max_chain;
    auto emit = [&](const fs::path &name, const std::string &text) {
        if (o.out.empty()) {
            std::cout << text;
            return;
        }
        fs::create_directories(o.out);
        std::ofstream f(fs::path(o.out) / name);
        f << text;
    };
    try {
        bool truncated;
        if (*format == ExportFormat::Pddl) {
            PddlExport e = export_pddl(inst.puzzle, inst.initial, opts);
            emit("domain.pddl", e.domain);
            emit("problem.pddl", e.problem);
            truncated = e.chain_truncated;
            std::cerr << "actions: " << e.action_count << "\n";
        } else {
            SasExport e = export_sas(inst.puzzle, inst.initial, opts);
            emit("output.sas", e.text);
            truncated = e.chain_truncated;
            std::cerr << "operators: " << e.operator_count << "\n";
        }
        if (truncated)
            std::cerr << "warning: some pushes move more than " << o.max_chain
                      << " objects and are not exported\n";
    } catch (const ExportError &e) {
        std::cerr << "export: " << e.what() << "\n";
        return kExitError;
    }
    return 0;
}

int cmd_validate(const Options &o) {
    std::optional<PuzzleInstance> parsed;
    try {
        parsed = parse_puzzle_unchecked(
            [&] {
                std::ifstream f(resolve(o.file), std::ios::binary);
                if (!f)
                    throw std::runtime_error("cannot open " + o.file);
                std::ostringstream s;
                s << f.rdbuf();
                return s.str();
            }(),
            fs::path(o.file).stem().string());
    } catch (const ParseError &e) {
        std::cerr << o.file << ":" << e.line() << ": " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception &e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
    const PuzzleInstance &inst = *parsed;
    auto violations = validate_puzzle(inst.puzzle, inst.initial);
    for (const Violation &v : violations)
        std::cout << violation_name(v.kind) << ": " << v.message << "\n";
    if (!violations.empty())
        return kExitError;
    if (!o.plan_file.empty()) {
        std::ifstream f(o.plan_file);
        if (!f) {
            std::cerr << "cannot open " << o.plan_file << "\n";
            return kExitError;
        }
        std::vector<Action> plan;
        for (std::string line; std::getline(f, line);) {
            for (char c : line) {
                if (std::isspace(static_cast<unsigned char>(c)))
                    continue;
                if (c == '#')
                    break;
                auto a = action_from_letter(c);
                if (!a) {
                    std::cerr << "bad action '" << c << "' in plan\n";
                    return kExitError;
                }
                plan.push_back(*a);
            }
        }
        if (!validate_plan(inst.puzzle, inst.initial, plan)) {
            std::cout << "plan: INVALID\n";
            return kExitError;
        }
        std::cout << "plan: valid (" << plan.size() << " actions)\n";
    }
    std::cout << "puzzle: valid\n";
    return 0;
}

int cmd_play(const Options &o) {
    PuzzleInstance inst = load_or_report(o.file);
    if (o.script.empty()) {
        if (!isatty(STDIN_FILENO)) {
            std::cerr << "play needs a terminal; use --script FILE (or --script - for stdin)"
                         " to feed commands non-interactively\n";
            return kExitError;
        }
        return play(inst.puzzle, inst.initial, std::cin, std::cout).solved ? 0 : 3;
    }
    if (o.script == "-")
        return play(inst.puzzle, inst.initial, std::cin, std::cout).solved ? 0 : 3;
    std::ifstream f(o.script);
    if (!f) {
        std::cerr << "cannot open " << o.script << "\n";
        return kExitError;
    }
    return play(inst.puzzle, inst.initial, f, std::cout).solved ? 0 : 3;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"PushWorld planning tools"};
    app.require_subcommand(1);
    Options o;

    auto add_search_flags = [&](CLI::App *sub, bool many) {
        auto *h = sub->add_option("--heuristic", o.heuristics,
                                  many ? "Planner(s): blind, rgd, novelty-rgd (repeatable)"
                                       : "Planner: blind, rgd, novelty-rgd");
        h->check(CLI::IsMember({"blind", "rgd", "novelty-rgd"}));
        if (!many)
            h->expected(1);
        sub->add_option("--time-limit", o.time_limit, "Seconds per search")->capture_default_str();
        sub->add_option("--memory-limit", o.memory_limit, "MB per search")->capture_default_str();
    };

    auto *solve = app.add_subcommand("solve", "Find a plan for one puzzle");
    solve->add_option("file", o.file, "Puzzle file")->required();
    add_search_flags(solve, false);
    solve->add_option("--out", o.out, "Also write the plan here");
    solve->add_option("--seed", o.seed, "Unused; accepted for uniformity");

    auto *bench = app.add_subcommand("bench", "Run planners over a directory of puzzles");
    bench->add_option("dir", o.dir, "Puzzle directory (default: $PUSHWORLD_PUZZLE_DIR)");
    add_search_flags(bench, true);
    bench->add_option("--jobs", o.jobs, "Parallel searches")->capture_default_str();
    bench->add_option("--format", o.format, "Also time the export to this format")
        ->check(CLI::IsMember({"pddl", "sas"}));
    bench->add_option("--out", o.out, "Results directory (default: bench_results)");
    bench->add_option("--seed", o.seed, "Unused; searches are deterministic");

    auto *gen = app.add_subcommand("gen", "Generate a puzzle set");
    gen->add_option("variant", o.variant,
                    "base, larger, more_walls, more_obstacles, more_shapes, multiple_goals, "
                    "all or corridor")
        ->required();
    gen->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    gen->add_option("--train", o.train, "Training puzzles")->capture_default_str();
    gen->add_option("--test", o.test, "Test puzzles")->capture_default_str();
    gen->add_option("--augment", o.augment_size,
                    "Emit all 8 rotations/reflections padded to this square size");
    gen->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
    gen->add_option("--planner-seconds", o.planner_seconds, "Certification planner budget")
        ->capture_default_str();
    gen->add_option("--oracle-seconds", o.oracle_seconds, "Certification fallback budget")
        ->capture_default_str();
    gen->add_option("--out", o.out, "Output root (default: puzzles)");

    auto *exp = app.add_subcommand("export", "Write a PDDL or SAS+ model of a puzzle");
    exp->add_option("file", o.file, "Puzzle file")->required();
    exp->add_option("--format", o.format, "pddl or sas")->check(CLI::IsMember({"pddl", "sas"}));
    exp->add_option("--max-chain", o.max_chain, "Most objects moved by one action")
        ->capture_default_str();
    exp->add_option("--out", o.out, "Output directory (default: standard output)");

    auto *val = app.add_subcommand("validate", "Check a puzzle file and optionally a plan");
    val->add_option("file", o.file, "Puzzle file")->required();
    val->add_option("--plan", o.plan_file, "Plan file, one action letter per line");

    auto *ply = app.add_subcommand("play", "Play a puzzle in the terminal");
    ply->add_option("file", o.file, "Puzzle file")->required();
    ply->add_option("--script", o.script, "Read commands from a file ('-' for stdin)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(o);
        if (bench->parsed())
            return cmd_bench(o);
        if (gen->parsed())
            return cmd_gen(o);
        if (exp->parsed())
            return cmd_export(o);
        if (val->parsed())
            return cmd_validate(o);
        if (ply->parsed())
            return cmd_play(o);
    } catch (const CLI::Error &e) {
        return app.exit(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
