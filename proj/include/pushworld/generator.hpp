#pragma once

#include "io.hpp"
#include "puzzle.hpp"
#include "search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

/*
  Procedural puzzle sets.

  Each instance draws its parameters (grid size, wall count, object counts and
  shapes) once from its own RNG stream, then places walls, objects and goals
  uniformly at random until the placement is certified solvable. Keeping the
  parameters fixed across rejections means solvability filtering never skews
  the parameter distributions.
*/
namespace pushworld {

enum class Variant { Base, Larger, MoreWalls, MoreObstacles, MoreShapes, MultipleGoals, All, Corridor };

inline constexpr std::array<Variant, 8> kAllVariants = {
    Variant::Base,       Variant::Larger,        Variant::MoreWalls, Variant::MoreObstacles,
    Variant::MoreShapes, Variant::MultipleGoals, Variant::All,       Variant::Corridor};

inline const char *variant_name(Variant v) {
    switch (v) {
    case Variant::Base: return "base";
    case Variant::Larger: return "larger";
    case Variant::MoreWalls: return "more_walls";
    case Variant::MoreObstacles: return "more_obstacles";
    case Variant::MoreShapes: return "more_shapes";
    case Variant::MultipleGoals: return "multiple_goals";
    case Variant::All: return "all";
    case Variant::Corridor: return "corridor";
    }
    return "?";
}

inline std::optional<Variant> variant_from_name(std::string_view name) {
    for (Variant v : kAllVariants)
        if (name == variant_name(v))
            return v;
    return std::nullopt;
}

class GenerationError : public std::runtime_error {
    std::size_t index_;

public:
    GenerationError(std::size_t index, const std::string &what)
        : std::runtime_error(what), index_(index) {}
    std::size_t index() const { return index_; }
};

struct VariantSpec {
    Variant variant = Variant::Base;
    std::uint64_t seed = 0;
    // Certification budget per placement: the planner first, then the
    // breadth-first oracle if the planner ran out of time.
    double planner_seconds = 5.0;
    double oracle_seconds = 30.0;
    std::size_t max_rejections = 1000;
    // After max_rejections placements fail, the instance's parameters are
    // drawn again from its own stream, at most this many times in total.
    std::size_t max_param_draws = 10;
    // Corridor variant only: room scale of instance i is corridor_base + i.
    int corridor_base = 2;
};

// Parameters of one instance; redrawn only when a draw keeps failing.
struct InstanceParams {
    int width = 5;
    int height = 5;
    int walls = 3;
    Shape agent = Shape::unit();
    std::vector<Shape> goal_objects;
    std::vector<Shape> obstacles;
};

inline Shape transform_shape(const Shape &s, int symmetry);

// One representative per free polyomino of the given size.
inline const std::vector<Shape> &free_polyominoes(int cells) {
    static const std::vector<Shape> one = {Shape::unit()};
    static const std::vector<Shape> two = {Shape::rectangle(2, 1)};
    static const std::vector<Shape> three = {Shape::rectangle(3, 1),
                                             Shape({{0, 0}, {0, 1}, {1, 1}})};
    switch (cells) {
    case 1: return one;
    case 2: return two;
    case 3: return three;
    }
    throw std::invalid_argument("polyominoes are sampled with 1 to 3 cells");
}

// Uniform cell count in [1,3], uniform free shape of that size, then one of
// the 8 rotations/reflections uniformly.
template <class Rng>
Shape sample_polyomino(Rng &rng) {
    int cells = std::uniform_int_distribution<int>(1, 3)(rng);
    const auto &free = free_polyominoes(cells);
    const Shape &base =
        free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
    return transform_shape(base, std::uniform_int_distribution<int>(0, 7)(rng));
}

template <class Rng>
InstanceParams sample_params(Variant v, Rng &rng) {
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    InstanceParams p;
    p.goal_objects = {Shape::unit()};
    p.obstacles = {Shape::unit()};
    switch (v) {
    case Variant::Base:
        break;
    case Variant::Larger:
        p.width = uniform(5, 10);
        p.height = uniform(5, 10);
        break;
    case Variant::MoreWalls:
        p.walls = uniform(3, 5);
        break;
    case Variant::MoreObstacles:
        p.obstacles = {Shape::unit(), Shape::unit()};
        break;
    case Variant::MoreShapes:
        p.agent = sample_polyomino(rng);
        p.goal_objects = {sample_polyomino(rng)};
        p.obstacles = {sample_polyomino(rng)};
        break;
    case Variant::MultipleGoals:
        p.goal_objects = {Shape::unit(), Shape::rectangle(2, 1)};
        break;
    case Variant::All: {
        p.width = uniform(5, 10);
        p.height = uniform(5, 10);
        p.walls = uniform(3, 5);
        int obstacles = uniform(1, 2);
        int goals = uniform(1, 2);
        p.agent = sample_polyomino(rng);
        p.goal_objects.clear();
        p.obstacles.clear();
        for (int i = 0; i < goals; ++i)
            p.goal_objects.push_back(sample_polyomino(rng));
        for (int i = 0; i < obstacles; ++i)
            p.obstacles.push_back(sample_polyomino(rng));
        break;
    }
    case Variant::Corridor:
        throw std::invalid_argument("corridor puzzles have no random parameters");
    }
    return p;
}

/*
  The scaling family: an open room of N+2 columns and N+1 rows. The agent
  starts in the top-left corner, the goal object one column in from the
  bottom-right corner, and its goal is the bottom-left corner. The shortest
  plan walks 2N+1 steps to the goal object's right side and pushes it N times.
*/
inline PuzzleInstance corridor_puzzle(int n) {
    if (n < 2)
        throw std::invalid_argument("corridor size must be at least 2");
    Puzzle puzzle(n + 2, n + 1, {}, {},
                  {{"A", Shape::unit()}, {"G", Shape::unit()}}, {{1, {0, n}}},
                  "corridor_" + std::to_string(n));
    return {std::move(puzzle), State{{{0, 0}, {n, n}}}};
}

// Checks solvability within the spec's budget.
inline bool certify_solvable(const Puzzle &puzzle, const State &initial, const VariantSpec &spec) {
    SearchConfig config;
    config.heuristic = HeuristicKind::NoveltyRgd;
    config.limits.time_limit_s = spec.planner_seconds;
    PlanResult r = gbf_search(puzzle, initial, config);
    if (r.solved())
        return validate_plan(puzzle, initial, r.actions);
    if (r.status == SearchStatus::Exhausted)
        return false;
    SearchLimits oracle;
    oracle.time_limit_s = spec.oracle_seconds;
    r = optimal_plan_bfs(puzzle, initial, oracle);
    return r.solved() && validate_plan(puzzle, initial, r.actions);
}

namespace detail {

template <class Rng>
std::optional<PuzzleInstance> place_once(const InstanceParams &p, const std::string &name,
                                         Rng &rng) {
    const int w = p.width, h = p.height;
    const std::size_t cells = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    std::vector<std::uint8_t> taken(cells, 0);
    auto idx = [w](Position c) { return static_cast<std::size_t>(c.y * w + c.x); };

    // Walls: distinct cells drawn uniformly from the whole grid.
    std::vector<std::size_t> order(cells);
    for (std::size_t i = 0; i < cells; ++i)
        order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    if (static_cast<std::size_t>(p.walls) > cells)
        return std::nullopt;
    std::vector<Position> walls;
    for (int i = 0; i < p.walls; ++i) {
        Position c{static_cast<int>(order[i] % w), static_cast<int>(order[i] / w)};
        walls.push_back(c);
        taken[order[i]] = 1;
    }
    std::vector<std::uint8_t> wall_grid = taken;

    std::vector<ObjectSpec> objects;
    objects.push_back({"A", p.agent});
    static constexpr const char *goal_ids[] = {"G", "H"};
    static constexpr const char *obstacle_ids[] = {"O", "P"};
    for (std::size_t i = 0; i < p.goal_objects.size(); ++i)
        objects.push_back({goal_ids[i], p.goal_objects[i]});
    for (std::size_t i = 0; i < p.obstacles.size(); ++i)
        objects.push_back({obstacle_ids[i], p.obstacles[i]});

    // Anchors where `shape` lies inside the grid and off every marked cell.
    auto free_anchors = [&](const Shape &shape, const std::vector<std::uint8_t> &grid) {
        std::vector<Position> out;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                bool ok = true;
                for (Position c : shape.cells()) {
                    Position q{x + c.x, y + c.y};
                    if (q.x < 0 || q.y < 0 || q.x >= w || q.y >= h || grid[idx(q)]) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    out.push_back({x, y});
            }
        return out;
    };

    State state;
    for (const ObjectSpec &o : objects) {
        auto anchors = free_anchors(o.shape, taken);
        if (anchors.empty())
            return std::nullopt;
        Position a = anchors[std::uniform_int_distribution<std::size_t>(0, anchors.size() - 1)(rng)];
        for (Position c : o.shape.placed_at(a))
            taken[idx(c)] = 1;
        state.positions.push_back(a);
    }

    // Goal footprints avoid walls and each other; they may cover objects.
    std::vector<std::uint8_t> goal_grid = wall_grid;
    std::vector<Goal> goals;
    for (std::size_t i = 0; i < p.goal_objects.size(); ++i) {
        auto anchors = free_anchors(p.goal_objects[i], goal_grid);
        if (anchors.empty())
            return std::nullopt;
        Position a = anchors[std::uniform_int_distribution<std::size_t>(0, anchors.size() - 1)(rng)];
        for (Position c : p.goal_objects[i].placed_at(a))
            goal_grid[idx(c)] = 1;
        goals.push_back({1 + i, a});
    }

    Puzzle puzzle(w, h, std::move(walls), {}, std::move(objects), std::move(goals), name);
    return PuzzleInstance{std::move(puzzle), std::move(state)};
}

}  // namespace detail

// One certified instance from stream `index`. Throws GenerationError when the
// rejection cap is hit.
inline PuzzleInstance generate_instance(const VariantSpec &spec, std::size_t index) {
    const std::string name = std::string(variant_name(spec.variant)) + "_" + std::to_string(index);
    if (spec.variant == Variant::Corridor) {
        PuzzleInstance inst = corridor_puzzle(spec.corridor_base + static_cast<int>(index));
        inst.puzzle.set_name(name);
        return inst;
    }
    std::mt19937_64 rng(spec.seed + index);
    for (std::size_t draw = 0; draw < std::max<std::size_t>(1, spec.max_param_draws); ++draw) {
        const InstanceParams params = sample_params(spec.variant, rng);
        for (std::size_t attempt = 0; attempt < spec.max_rejections; ++attempt) {
            auto inst = detail::place_once(params, name, rng);
            if (!inst || is_goal(inst->puzzle, inst->initial))
                continue;
            if (!validate_puzzle(inst->puzzle, inst->initial).empty())
                continue;
            // Cheap sound rejection before any search.
            if (!goals_relaxed_reachable(inst->puzzle, inst->initial))
                continue;
            if (certify_solvable(inst->puzzle, inst->initial, spec))
                return std::move(*inst);
        }
    }
    throw GenerationError(index, std::string("gave up on ") + variant_name(spec.variant) +
                                     " instance " + std::to_string(index) + " after " +
                                     std::to_string(spec.max_rejections) + " rejections on each of " +
                                     std::to_string(std::max<std::size_t>(1, spec.max_param_draws)) +
                                     " parameter draws");
}

// Instances first_index .. first_index+count-1, in index order. Workers pull
// indices independently; each index has its own RNG stream, so the output does
// not depend on `jobs`.
inline std::vector<PuzzleInstance> generate(const VariantSpec &spec, std::size_t count,
                                            std::size_t first_index = 0, std::size_t jobs = 1) {
    std::vector<std::optional<PuzzleInstance>> slots(count);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::optional<GenerationError> error;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < count;) {
            try {
                slots[i] = generate_instance(spec, first_index + i);
            } catch (const GenerationError &e) {
                std::lock_guard lock(error_mutex);
                if (!error || e.index() < error->index())
                    error = e;
            }
        }
    };
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t j = 0; j < jobs; ++j)
            threads.emplace_back(worker);
        for (auto &t : threads)
            t.join();
    }
    if (error)
        throw *error;
    std::vector<PuzzleInstance> out;
    out.reserve(count);
    for (auto &s : slots)
        out.push_back(std::move(*s));
    return out;
}

// Symmetry k in [0,8): mirror left-right when k >= 4, then k % 4 quarter turns
// clockwise.
inline Position transform_point(Position p, int width, int height, int symmetry) {
    if (symmetry >= 4)
        p.x = width - 1 - p.x;
    for (int r = 0; r < symmetry % 4; ++r) {
        p = {height - 1 - p.y, p.x};
        std::swap(width, height);
    }
    return p;
}

inline Position transform_delta(Position d, int symmetry) {
    if (symmetry >= 4)
        d.x = -d.x;
    for (int r = 0; r < symmetry % 4; ++r)
        d = {-d.y, d.x};
    return d;
}

inline Action transform_action(Action a, int symmetry) {
    return *action_from_delta(transform_delta(displacement(a), symmetry));
}

inline Shape transform_shape(const Shape &s, int symmetry) {
    std::vector<Position> cells;
    for (Position c : s.cells())
        cells.push_back(transform_delta(c, symmetry));
    return Shape(std::move(cells));
}

/*
  Applies symmetry `symmetry` and then shifts the result by `offset` inside a
  target_width x target_height grid, walling off every cell the original
  puzzle does not cover.
*/
inline PuzzleInstance transform_puzzle(const Puzzle &puzzle, const State &state, int symmetry,
                                       int target_width, int target_height, Position offset) {
    const int w = puzzle.width(), h = puzzle.height();
    const bool swapped = symmetry % 2 == 1;
    const int tw = swapped ? h : w, th = swapped ? w : h;
    if (offset.x < 0 || offset.y < 0 || offset.x + tw > target_width ||
        offset.y + th > target_height)
        throw std::invalid_argument("transformed puzzle does not fit the target grid");
    auto map = [&](Position p) { return transform_point(p, w, h, symmetry) + offset; };
    auto map_cells = [&](const std::vector<Position> &cells) {
        std::vector<Position> out;
        for (Position c : cells)
            out.push_back(map(c));
        return out;
    };

    std::vector<Position> walls = map_cells(puzzle.walls());
    for (int y = 0; y < target_height; ++y)
        for (int x = 0; x < target_width; ++x)
            if (x < offset.x || y < offset.y || x >= offset.x + tw || y >= offset.y + th)
                walls.push_back({x, y});
    std::vector<Position> agent_walls = map_cells(puzzle.agent_walls());

    std::vector<ObjectSpec> objects;
    State out_state;
    for (std::size_t i = 0; i < puzzle.num_objects(); ++i) {
        auto [shape, anchor] = Shape::from_absolute(map_cells(puzzle.shape(i).placed_at(state[i])));
        objects.push_back({puzzle.object(i).id, shape});
        out_state.positions.push_back(anchor);
    }
    std::vector<Goal> goals;
    for (const Goal &g : puzzle.goals()) {
        auto cells = map_cells(puzzle.shape(g.object).placed_at(g.anchor));
        goals.push_back({g.object, *std::min_element(cells.begin(), cells.end())});
    }
    Puzzle out(target_width, target_height, std::move(walls), std::move(agent_walls),
               std::move(objects), std::move(goals), puzzle.name());
    return {std::move(out), std::move(out_state)};
}

/*
  Every input yields 8 outputs, one per rotation/reflection, each padded with
  walls to the target size at a random offset. Output 8*i+k is symmetry k of
  input i and is named "<input name>_s<k>".
*/
inline std::vector<PuzzleInstance> augment(const std::vector<PuzzleInstance> &puzzles,
                                           int target_width, int target_height,
                                           std::uint64_t seed) {
    std::vector<PuzzleInstance> out;
    out.reserve(puzzles.size() * 8);
    for (std::size_t i = 0; i < puzzles.size(); ++i) {
        const Puzzle &p = puzzles[i].puzzle;
        const int side = std::max(p.width(), p.height());
        if (target_width < side || target_height < side)
            throw std::invalid_argument("augmentation target must be at least " +
                                        std::to_string(side) + " in both dimensions");
        for (int k = 0; k < 8; ++k) {
            std::mt19937_64 rng(seed + 8 * i + static_cast<std::uint64_t>(k));
            const bool swapped = k % 2 == 1;
            const int tw = swapped ? p.height() : p.width();
            const int th = swapped ? p.width() : p.height();
            Position offset{std::uniform_int_distribution<int>(0, target_width - tw)(rng),
                            std::uniform_int_distribution<int>(0, target_height - th)(rng)};
            PuzzleInstance inst =
                transform_puzzle(p, puzzles[i].initial, k, target_width, target_height, offset);
            inst.puzzle.set_name(p.name() + "_s" + std::to_string(k));
            out.push_back(std::move(inst));
        }
    }
    return out;
}

// Writes <root>/<set>/<split>/<index>.pwp for each instance.
inline void write_split(const std::filesystem::path &root, const std::string &set,
                        const std::string &split, const std::vector<PuzzleInstance> &puzzles) {
    for (std::size_t i = 0; i < puzzles.size(); ++i)
        save_puzzle(root / set / split / (std::to_string(i) + ".pwp"), puzzles[i].puzzle,
                    puzzles[i].initial);
}

inline constexpr std::size_t kTrainCount = 2000;
inline constexpr std::size_t kTestCount = 200;

}  // namespace pushworld
