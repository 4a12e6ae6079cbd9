#include "export_check.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <deque>
#include <map>

using namespace pushworld;
using testutil::doc;

namespace {

using Facts = std::set<std::string>;

// Shortest plan length in the PDDL model, by breadth-first search.
int pddl_plan_length(const oracle::PddlTask &task) {
    std::map<Facts, int> dist{{task.init, 0}};
    std::deque<Facts> queue{task.init};
    while (!queue.empty()) {
        Facts s = queue.front();
        queue.pop_front();
        if (oracle::pddl_goal(task, s))
            return dist[s];
        for (const auto &a : task.actions)
            if (oracle::pddl_applicable(a, s)) {
                Facts n = oracle::pddl_apply(a, s);
                if (dist.emplace(n, dist[s] + 1).second)
                    queue.push_back(n);
            }
    }
    return -1;
}

}  // namespace

TEST(ExportPddl, AgentAndBoxPlanLengthMatchesOptimal) {
    auto inst = doc("SIZE 5 4\nWALL 2,0\nOBJECT A 0,0\nOBJECT R 1,2\nGOAL R 3,1\n");
    ExportOptions opts;
    opts.max_chain = 2;
    auto e = export_pddl(inst.puzzle, inst.initial, opts);
    EXPECT_FALSE(e.chain_truncated);
    auto task = oracle::read_pddl(e.domain, e.problem);
    auto opt = optimal_plan_bfs(inst.puzzle, inst.initial);
    ASSERT_TRUE(opt.solved());
    EXPECT_EQ(pddl_plan_length(task), static_cast<int>(opt.actions.size()));
    auto check = oracle::check_pddl(inst.puzzle, inst.initial, e, 2);
    EXPECT_TRUE(check.ok) << check.problem;
}

TEST(ExportPddl, WallBlockedMoveHasNoAction) {
    // Agent against the left border with the box against a wall on its right.
    auto inst = doc("SIZE 4 1\nWALL 2,0\nOBJECT A 0,0\nOBJECT R 1,0\nGOAL R 3,0\n");
    auto e = export_pddl(inst.puzzle, inst.initial);
    auto task = oracle::read_pddl(e.domain, e.problem);
    for (const auto &a : task.actions)
        EXPECT_FALSE(oracle::pddl_applicable(a, task.init)) << a.name;
    EXPECT_EQ(pddl_plan_length(task), -1);
}

TEST(ExportPddl, RecursivePushReplay) {
    auto fig = testutil::figure_puzzle();
    auto e = export_pddl(fig.puzzle, fig.initial);
    auto task = oracle::read_pddl(e.domain, e.problem);
    auto opt = optimal_plan_bfs(fig.puzzle, fig.initial);
    ASSERT_EQ(opt.actions.size(), 12u);
    EXPECT_TRUE(oracle::replay_pddl(fig.puzzle, fig.initial, opt.actions, task));
    EXPECT_EQ(task.actions.size(), e.action_count);
}

TEST(ExportSas, AgentAndBoxVariables) {
    auto inst = doc("SIZE 5 4\nWALL 2,0\nAGENTWALL 4,3\nOBJECT A 0,0\nOBJECT R 1,2\nGOAL R 3,1\n");
    auto e = export_sas(inst.puzzle, inst.initial);
    auto task = oracle::read_sas(e.text);
    ASSERT_EQ(task.domain.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(static_cast<std::size_t>(task.domain[i]), MovementGraph(inst.puzzle, i).node_count());
        EXPECT_EQ(e.domain_sizes[i], MovementGraph(inst.puzzle, i).node_count());
    }
    ASSERT_EQ(task.goal.size(), 1u);
    EXPECT_EQ(task.goal[0].first, 1);
    EXPECT_EQ(oracle::sas_atom_position(task.atoms[1][task.goal[0].second]), (Position{3, 1}));
    auto check = oracle::check_sas(inst.puzzle, inst.initial, e, 3);
    EXPECT_TRUE(check.ok) << check.problem;
}

TEST(ExportSas, GoalSectionListsEveryGoal) {
    auto inst = doc("SIZE 6 6\nOBJECT A 0,0\nOBJECT G 2,2\nOBJECT H 3,4 4,4\nGOAL G 1,1\nGOAL H 2,3\n");
    auto task = oracle::read_sas(export_sas(inst.puzzle, inst.initial).text);
    ASSERT_EQ(task.goal.size(), inst.puzzle.goals().size());
    for (std::size_t i = 0; i < task.goal.size(); ++i) {
        const Goal &g = inst.puzzle.goals()[i];
        EXPECT_EQ(static_cast<std::size_t>(task.goal[i].first), g.object);
        EXPECT_EQ(oracle::sas_atom_position(task.atoms[g.object][task.goal[i].second]), g.anchor);
    }
}

TEST(ExportSas, RecursivePushReplay) {
    auto fig = testutil::figure_puzzle();
    auto e = export_sas(fig.puzzle, fig.initial);
    auto task = oracle::read_sas(e.text);
    EXPECT_EQ(task.ops.size(), e.operator_count);
    auto opt = optimal_plan_bfs(fig.puzzle, fig.initial);
    EXPECT_TRUE(oracle::replay_sas(fig.puzzle, fig.initial, opt.actions, task));
}

TEST(Export, ModelsMatchNativeOnSmallPuzzles) {
    std::size_t checked = 0;
    for (Variant v : {Variant::Base, Variant::MoreShapes})
        for (const auto &inst : testutil::random_layouts(v, 8, 53)) {
            ASSERT_LE(inst.puzzle.num_objects(), 3u);
            auto pddl = oracle::check_pddl(inst.puzzle, inst.initial, export_pddl(inst.puzzle, inst.initial), 3);
            EXPECT_TRUE(pddl.ok) << pddl.problem;
            auto sas = oracle::check_sas(inst.puzzle, inst.initial, export_sas(inst.puzzle, inst.initial), 3);
            EXPECT_TRUE(sas.ok) << sas.problem;
            EXPECT_EQ(pddl.states, sas.states);
            auto native = reachable_states(inst.puzzle, inst.initial, 1000000);
            ASSERT_TRUE(native);
            EXPECT_EQ(pddl.states, native->size());
            ++checked;
        }
    EXPECT_EQ(checked, 16u);
}

TEST(Export, LongChainsAreFlagged) {
    auto inst = doc("SIZE 7 1\nOBJECT A 0,0\nOBJECT B 1,0\nOBJECT C 2,0\nOBJECT D 3,0\nGOAL D 5,0\n");
    ExportOptions opts;
    opts.max_chain = 3;
    EXPECT_TRUE(export_pddl(inst.puzzle, inst.initial, opts).chain_truncated);
    EXPECT_TRUE(export_sas(inst.puzzle, inst.initial, opts).chain_truncated);
    opts.max_chain = 4;
    auto e = export_pddl(inst.puzzle, inst.initial, opts);
    EXPECT_FALSE(e.chain_truncated);
    EXPECT_EQ(pddl_plan_length(oracle::read_pddl(e.domain, e.problem)), 2);
    // With chains capped at three the four-object push is missing: the model
    // has no plan even though the puzzle does.
    opts.max_chain = 3;
    auto cut = export_pddl(inst.puzzle, inst.initial, opts);
    EXPECT_EQ(pddl_plan_length(oracle::read_pddl(cut.domain, cut.problem)), -1);
    auto check = oracle::check_pddl(inst.puzzle, inst.initial, cut, 3);
    EXPECT_TRUE(check.ok) << check.problem;
}

TEST(Export, ObjectCap) {
    std::string text = "SIZE 12 1\nOBJECT A 0,0\n";
    for (int i = 0; i < 8; ++i)
        text += "OBJECT " + std::string(1, static_cast<char>('B' + i)) + " " + std::to_string(2 + i) + ",0\n";
    text += "GOAL B 1,0\n";
    auto inst = doc(text);
    EXPECT_THROW(export_pddl(inst.puzzle, inst.initial), ExportError);
    EXPECT_THROW(export_sas(inst.puzzle, inst.initial), ExportError);
    ExportOptions opts;
    opts.max_objects = 9;
    EXPECT_NO_THROW(export_pddl(inst.puzzle, inst.initial, opts));
    opts.max_chain = 0;
    EXPECT_THROW(export_pddl(inst.puzzle, inst.initial, opts), ExportError);
}
