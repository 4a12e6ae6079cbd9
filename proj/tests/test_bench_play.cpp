#include "test_util.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pushworld;

namespace fs = std::filesystem;

namespace {

const std::vector<HeuristicKind> kPlanners = {HeuristicKind::Blind, HeuristicKind::NoveltyRgd};

fs::path scratch(const std::string &name) {
    fs::path dir = fs::temp_directory_path() / ("pushworld_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

}  // namespace

TEST(Bench, EmptyDirectoryGivesHeaderOnly) {
    auto dir = scratch("bench_empty");
    auto report = load_puzzle_dir(dir);
    EXPECT_TRUE(report.puzzles.empty());
    auto records = run_benchmark(report.puzzles, kPlanners, {1.0, 256});
    std::ostringstream csv;
    write_csv(csv, records);
    auto rows = lines(csv.str());
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].rfind("format_version,puzzle,planner,status", 0), 0u);
    EXPECT_TRUE(to_json(records)["records"].empty());
    std::ostringstream curve;
    write_curve_csv(curve, solved_curve(records));
    EXPECT_EQ(curve.str(), "planner,time_s,solved\n");
    fs::remove_all(dir);
}

TEST(Bench, LoadsRecursivelyAndSkipsBadFiles) {
    auto dir = scratch("bench_load");
    auto fig = testutil::figure_puzzle();
    save_puzzle(dir / "b" / "two.pwp", fig.puzzle, fig.initial);
    save_puzzle(dir / "a.pwp", fig.puzzle, fig.initial);
    std::ofstream(dir / "broken.pwp") << "SIZE 3\n";
    std::ofstream(dir / "notes.txt") << "ignored\n";
    auto report = load_puzzle_dir(dir);
    ASSERT_EQ(report.puzzles.size(), 2u);
    EXPECT_EQ(report.puzzles[0].id, "a");
    EXPECT_EQ(report.puzzles[1].id, "b/two");
    ASSERT_EQ(report.warnings.size(), 1u);
    EXPECT_NE(report.warnings[0].find("broken.pwp"), std::string::npos);
    EXPECT_FALSE(load_puzzle_dir(dir / "missing").warnings.empty());
    fs::remove_all(dir);
}

TEST(Bench, RecordsAreOrderedAndDeterministic) {
    auto report = load_puzzle_dir(testutil::data_path("figures"));
    ASSERT_FALSE(report.puzzles.empty());
    std::vector<NamedPuzzle> puzzles = report.puzzles;
    for (auto &inst : generate(VariantSpec{Variant::Base, 3, 2.0, 10.0, 1000, 2}, 3))
        puzzles.push_back({inst.puzzle.name(), inst});
    auto one = run_benchmark(puzzles, kPlanners, {10.0, 512}, 1, ExportFormat::Pddl);
    auto two = run_benchmark(puzzles, kPlanners, {10.0, 512}, 2, ExportFormat::Pddl);
    ASSERT_EQ(one.size(), puzzles.size() * kPlanners.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].puzzle, puzzles[i / 2].id);
        EXPECT_EQ(one[i].planner, heuristic_name(kPlanners[i % 2]));
        EXPECT_EQ(one[i].puzzle, two[i].puzzle);
        EXPECT_EQ(one[i].status, two[i].status);
        EXPECT_EQ(one[i].plan, two[i].plan);
        EXPECT_EQ(one[i].expanded, two[i].expanded);
        EXPECT_TRUE(one[i].solved());
        EXPECT_TRUE(one[i].translation_time_s.has_value());
        auto inst = puzzles[i / 2].instance;
        std::vector<Action> plan;
        for (char c : one[i].plan)
            plan.push_back(*action_from_letter(c));
        EXPECT_TRUE(validate_plan(inst.puzzle, inst.initial, plan));
        EXPECT_EQ(one[i].plan_length, plan.size());
    }
}

TEST(Bench, CsvAndJsonAgree) {
    auto report = load_puzzle_dir(testutil::data_path("figures"));
    auto records = run_benchmark(report.puzzles, kPlanners, {10.0, 512});
    std::ostringstream csv;
    write_csv(csv, records);
    auto rows = lines(csv.str());
    ASSERT_EQ(rows.size(), records.size() + 1);
    auto json = to_json(records);
    EXPECT_EQ(json["format_version"], kBenchFormatVersion);
    ASSERT_EQ(json["records"].size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        std::string row = rows[i + 1];
        std::vector<std::string> fields;
        std::stringstream ss(row);
        for (std::string f; std::getline(ss, f, ',');)
            fields.push_back(f);
        if (row.back() == ',')
            fields.push_back("");
        ASSERT_EQ(fields.size(), bench_columns().size());
        EXPECT_EQ(fields[0], std::to_string(kBenchFormatVersion));
        EXPECT_EQ(fields[1], json["records"][i]["puzzle"]);
        EXPECT_EQ(fields[2], json["records"][i]["planner"]);
        EXPECT_EQ(fields[3], json["records"][i]["status"]);
        EXPECT_EQ(fields[6], "");  // no export requested
        EXPECT_TRUE(json["records"][i]["translation_time_s"].is_null());
        EXPECT_EQ(fields.back(), json["records"][i]["plan"]);
    }
    auto curve = solved_curve(records);
    ASSERT_EQ(curve.size(), records.size());
    EXPECT_EQ(curve[0].solved, 1u);
}

TEST(Bench, UnsolvedAndQuoted) {
    auto inst = testutil::doc("SIZE 5 5\nOBJECT A 2,2\nOBJECT R 0,0\nGOAL R 2,0\n");
    NamedPuzzle p{"odd,name", inst};
    auto r = run_one(p, HeuristicKind::Rgd, {10.0, 256});
    EXPECT_EQ(r.status, "exhausted");
    EXPECT_EQ(r.plan_length, 0u);
    EXPECT_TRUE(r.plan.empty());
    std::ostringstream csv;
    write_csv(csv, {r});
    EXPECT_NE(csv.str().find("\"odd,name\""), std::string::npos);
    EXPECT_EQ(csv_quote("ab"), "ab");
    EXPECT_EQ(csv_quote("a\"b,"), "\"a\"\"b,\"");
    EXPECT_TRUE(solved_curve({r}).empty());
}

TEST(Play, RenderMarksGoalsWallsAndObjects) {
    auto inst = testutil::doc("SIZE 3 2\nWALL 2,0\nAGENTWALL 2,1\nOBJECT A 0,0\nOBJECT R 1,0\nGOAL R 1,1\n");
    EXPECT_EQ(render(inst.puzzle, inst.initial), " A  R  # \n . [.] + \n");
}

TEST(Play, ScriptedSolveReportsBanner) {
    auto fig = testutil::figure_puzzle();
    std::istringstream in("RRRUURURULLL");
    std::ostringstream out;
    auto outcome = play(fig.puzzle, fig.initial, in, out);
    EXPECT_TRUE(outcome.solved);
    EXPECT_EQ(outcome.moves.size(), 12u);
    EXPECT_NE(out.str().find("*** Puzzle solved in 12 moves! ***"), std::string::npos);
}

TEST(Play, BlockedMovesUndoAndReset) {
    auto inst = testutil::doc("SIZE 4 1\nOBJECT A 0,0\nOBJECT R 1,0\nGOAL R 3,0\n");
    {
        // Left is a wall: not counted. Then one push, undo, and quit.
        std::istringstream in("aLdzq");
        std::ostringstream out;
        auto outcome = play(inst.puzzle, inst.initial, in, out);
        EXPECT_FALSE(outcome.solved);
        EXPECT_TRUE(outcome.moves.empty());
        EXPECT_NE(out.str().find("moves: 1"), std::string::npos);
        EXPECT_NE(out.str().find("bye"), std::string::npos);
    }
    {
        std::istringstream in("Rx\x1b[C\x1b[C");
        std::ostringstream out;
        auto outcome = play(inst.puzzle, inst.initial, in, out);
        EXPECT_TRUE(outcome.solved);
        EXPECT_EQ(outcome.moves, (std::vector<Action>{Action::Right, Action::Right}));
    }
    {
        std::istringstream in("");
        std::ostringstream out;
        EXPECT_FALSE(play(inst.puzzle, inst.initial, in, out).solved);
    }
}

TEST(Play, ReadCommandKeys) {
    std::istringstream in("?w\x1b[Ds Z X Q");
    EXPECT_EQ(read_command(in)->action, Action::Up);
    EXPECT_EQ(read_command(in)->action, Action::Left);
    EXPECT_EQ(read_command(in)->action, Action::Down);
    EXPECT_EQ(read_command(in)->command, PlayCommand::Undo);
    EXPECT_EQ(read_command(in)->command, PlayCommand::Reset);
    EXPECT_EQ(read_command(in)->command, PlayCommand::Quit);
    EXPECT_FALSE(read_command(in));
}
