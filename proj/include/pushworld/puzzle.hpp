#pragma once

#include "geometry.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pushworld {

inline constexpr std::size_t kAgent = 0;

struct ObjectSpec {
    std::string id;
    Shape shape;

    friend bool operator==(const ObjectSpec &, const ObjectSpec &) = default;
};

struct Goal {
    std::size_t object = 0;
    Position anchor;

    friend bool operator==(const Goal &, const Goal &) = default;
};

/*
  Immutable world description. Walls never move, so they live here rather than
  in the state. Cells outside [0,width) x [0,height) behave as walls. Object 0
  is always the agent.

  The constructor only rejects inputs that would make the object unusable
  (non-positive size, no agent, goal index out of range). Everything else,
  e.g. walls out of bounds or empty shapes, is reported by validate_puzzle().
*/
class Puzzle {
    int width_ = 0;
    int height_ = 0;
    std::vector<Position> walls_;
    std::vector<Position> agent_walls_;
    std::vector<ObjectSpec> objects_;
    std::vector<Goal> goals_;
    std::string name_;
    std::vector<std::uint8_t> wall_grid_;
    std::vector<std::uint8_t> agent_wall_grid_;

    static std::vector<Position> sorted_unique(std::vector<Position> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

public:
    Puzzle(int width, int height, std::vector<Position> walls,
           std::vector<Position> agent_walls, std::vector<ObjectSpec> objects,
           std::vector<Goal> goals, std::string name = {})
        : width_(width),
          height_(height),
          walls_(sorted_unique(std::move(walls))),
          agent_walls_(sorted_unique(std::move(agent_walls))),
          objects_(std::move(objects)),
          goals_(std::move(goals)),
          name_(std::move(name)) {
        if (width_ <= 0 || height_ <= 0)
            throw std::invalid_argument("puzzle dimensions must be positive");
        if (objects_.empty())
            throw std::invalid_argument("puzzle must contain the agent object");
        for (const Goal &g : goals_)
            if (g.object >= objects_.size())
                throw std::invalid_argument("goal references a missing object");
        wall_grid_.assign(cell_count(), 0);
        agent_wall_grid_.assign(cell_count(), 0);
        for (Position w : walls_)
            if (in_bounds(w))
                wall_grid_[cell_index(w)] = 1;
        for (Position w : agent_walls_)
            if (in_bounds(w))
                agent_wall_grid_[cell_index(w)] = 1;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t cell_count() const {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    const std::vector<Position> &walls() const { return walls_; }
    const std::vector<Position> &agent_walls() const { return agent_walls_; }
    const std::vector<ObjectSpec> &objects() const { return objects_; }
    const ObjectSpec &object(std::size_t i) const { return objects_.at(i); }
    const Shape &shape(std::size_t i) const { return objects_[i].shape; }
    std::size_t num_objects() const { return objects_.size(); }
    const std::vector<Goal> &goals() const { return goals_; }
    const std::string &name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    bool in_bounds(Position p) const {
        return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
    }
    std::size_t cell_index(Position p) const {
        return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(p.x);
    }
    Position cell_at(std::size_t index) const {
        return {static_cast<int>(index % static_cast<std::size_t>(width_)),
                static_cast<int>(index / static_cast<std::size_t>(width_))};
    }

    bool is_wall(Position p) const { return in_bounds(p) && wall_grid_[cell_index(p)]; }

    // True if `cell` blocks `object`: out of bounds, a wall, or an agent wall
    // when the object is the agent.
    bool blocks(std::size_t object, Position cell) const {
        if (!in_bounds(cell))
            return true;
        std::size_t i = cell_index(cell);
        return wall_grid_[i] || (object == kAgent && agent_wall_grid_[i]);
    }

    // True if the object placed at `anchor` overlaps nothing that blocks it.
    bool fits(std::size_t object, Position anchor) const {
        for (Position c : objects_[object].shape.cells())
            if (blocks(object, c + anchor))
                return false;
        return true;
    }

    std::optional<std::size_t> find_object(std::string_view id) const {
        for (std::size_t i = 0; i < objects_.size(); ++i)
            if (objects_[i].id == id)
                return i;
        return std::nullopt;
    }

    friend bool operator==(const Puzzle &a, const Puzzle &b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.walls_ == b.walls_ &&
               a.agent_walls_ == b.agent_walls_ && a.objects_ == b.objects_ &&
               a.goals_ == b.goals_;
    }
};

// Anchor position of every object, index-aligned with Puzzle::objects().
struct State {
    std::vector<Position> positions;

    const Position &operator[](std::size_t i) const { return positions[i]; }
    std::size_t size() const { return positions.size(); }

    friend bool operator==(const State &, const State &) = default;
    friend auto operator<=>(const State &a, const State &b) {
        return std::lexicographical_compare_three_way(
            a.positions.begin(), a.positions.end(), b.positions.begin(),
            b.positions.end());
    }
};

struct StateHash {
    std::size_t operator()(const State &s) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (Position p : s.positions) {
            h ^= PositionHash{}(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// Objects that move together under one action. `blocked` plays the role of the
// wall sentinel: some mover would enter a blocking cell, so nothing moves.
struct PushSet {
    std::vector<std::size_t> movers;  // ascending object indices, always contains the agent
    bool blocked = false;

    bool contains(std::size_t object) const {
        return std::binary_search(movers.begin(), movers.end(), object);
    }
    friend bool operator==(const PushSet &, const PushSet &) = default;
};

/*
  Transition function with reusable scratch buffers. load() rasterizes a state
  once so that all four actions can be evaluated against it. Not thread-safe;
  use one instance per worker.
*/
class Simulator {
    const Puzzle *puzzle_;
    std::vector<int> occupancy_;
    State loaded_;
    bool has_loaded_ = false;
    std::vector<std::size_t> stack_;
    std::vector<std::uint8_t> in_set_;

    void clear() {
        if (!has_loaded_)
            return;
        for (std::size_t i = 0; i < loaded_.size(); ++i)
            for (Position c : puzzle_->shape(i).cells()) {
                Position cell = c + loaded_[i];
                if (puzzle_->in_bounds(cell))
                    occupancy_[puzzle_->cell_index(cell)] = -1;
            }
        has_loaded_ = false;
    }

public:
    explicit Simulator(const Puzzle &puzzle)
        : puzzle_(&puzzle),
          occupancy_(puzzle.cell_count(), -1),
          in_set_(puzzle.num_objects(), 0) {}

    const Puzzle &puzzle() const { return *puzzle_; }

    void load(const State &state) {
        clear();
        loaded_ = state;
        has_loaded_ = true;
        for (std::size_t i = 0; i < state.size(); ++i)
            for (Position c : puzzle_->shape(i).cells()) {
                Position cell = c + state[i];
                if (puzzle_->in_bounds(cell))
                    occupancy_[puzzle_->cell_index(cell)] = static_cast<int>(i);
            }
    }

    PushSet push_set(Action action) {
        const State &state = loaded_;
        const Position u = displacement(action);
        PushSet result;
        std::fill(in_set_.begin(), in_set_.end(), 0);
        stack_.assign(1, kAgent);
        in_set_[kAgent] = 1;
        while (!stack_.empty()) {
            std::size_t obj = stack_.back();
            stack_.pop_back();
            result.movers.push_back(obj);
            for (Position c : puzzle_->shape(obj).cells()) {
                Position dest = c + state[obj] + u;
                if (puzzle_->blocks(obj, dest)) {
                    result.blocked = true;
                    continue;
                }
                int other = occupancy_[puzzle_->cell_index(dest)];
                if (other >= 0 && !in_set_[static_cast<std::size_t>(other)]) {
                    in_set_[static_cast<std::size_t>(other)] = 1;
                    stack_.push_back(static_cast<std::size_t>(other));
                }
            }
        }
        std::sort(result.movers.begin(), result.movers.end());
        return result;
    }

    // Successor of the loaded state; returns nullopt when the push is blocked.
    std::optional<State> successor(Action action) {
        PushSet m = push_set(action);
        if (m.blocked)
            return std::nullopt;
        State next = loaded_;
        const Position u = displacement(action);
        for (std::size_t obj : m.movers)
            next.positions[obj] = next.positions[obj] + u;
        return next;
    }

    State apply(Action action) {
        if (auto next = successor(action))
            return *std::move(next);
        return loaded_;
    }
};

inline PushSet push_set(const Puzzle &puzzle, const State &state, Action action) {
    Simulator sim(puzzle);
    sim.load(state);
    return sim.push_set(action);
}

inline State apply_action(const Puzzle &puzzle, const State &state, Action action) {
    Simulator sim(puzzle);
    sim.load(state);
    return sim.apply(action);
}

inline bool is_goal(const Puzzle &puzzle, const State &state) {
    for (const Goal &g : puzzle.goals())
        if (state[g.object] != g.anchor)
            return false;
    return true;
}

inline bool is_goal(const std::vector<Goal> &goals, const State &state) {
    for (const Goal &g : goals)
        if (state[g.object] != g.anchor)
            return false;
    return true;
}

inline State replay(const Puzzle &puzzle, State state, const std::vector<Action> &actions) {
    Simulator sim(puzzle);
    for (Action a : actions) {
        sim.load(state);
        state = sim.apply(a);
    }
    return state;
}

enum class ViolationKind {
    EmptyShape,
    OutOfBounds,
    InWall,
    Overlap,
    GoalInWall,
    NoGoal,
    StateMismatch,
    DuplicateId,
};

inline const char *violation_name(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::EmptyShape:
        return "empty-shape";
    case ViolationKind::OutOfBounds:
        return "out-of-bounds";
    case ViolationKind::InWall:
        return "in-wall";
    case ViolationKind::Overlap:
        return "overlap";
    case ViolationKind::GoalInWall:
        return "goal-in-wall";
    case ViolationKind::NoGoal:
        return "no-goal";
    case ViolationKind::StateMismatch:
        return "state-mismatch";
    case ViolationKind::DuplicateId:
        return "duplicate-id";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::string message;
};

// Checks all puzzle and state invariants. An empty result means the pair is
// well formed.
inline std::vector<Violation> validate_puzzle(const Puzzle &puzzle, const State &initial) {
    std::vector<Violation> out;
    auto report = [&](ViolationKind k, std::string msg) {
        out.push_back({k, std::move(msg)});
    };
    auto cell_str = [](Position p) {
        return std::to_string(p.x) + "," + std::to_string(p.y);
    };

    for (Position w : puzzle.walls())
        if (!puzzle.in_bounds(w))
            report(ViolationKind::OutOfBounds, "wall " + cell_str(w) + " outside the grid");
    for (Position w : puzzle.agent_walls())
        if (!puzzle.in_bounds(w))
            report(ViolationKind::OutOfBounds,
                   "agent wall " + cell_str(w) + " outside the grid");

    std::set<std::string> ids;
    for (const ObjectSpec &o : puzzle.objects()) {
        if (!ids.insert(o.id).second)
            report(ViolationKind::DuplicateId, "object id '" + o.id + "' declared twice");
        if (o.shape.empty())
            report(ViolationKind::EmptyShape, "object '" + o.id + "' has no cells");
    }

    if (puzzle.goals().empty())
        report(ViolationKind::NoGoal, "puzzle has no goal");
    std::set<std::size_t> goal_objects;
    for (const Goal &g : puzzle.goals()) {
        const ObjectSpec &o = puzzle.object(g.object);
        if (!goal_objects.insert(g.object).second)
            report(ViolationKind::DuplicateId, "object '" + o.id + "' has two goals");
        for (Position c : o.shape.placed_at(g.anchor)) {
            if (!puzzle.in_bounds(c)) {
                report(ViolationKind::GoalInWall,
                       "goal of '" + o.id + "' places cell " + cell_str(c) + " outside the grid");
                break;
            }
            if (puzzle.blocks(g.object, c)) {
                report(ViolationKind::GoalInWall,
                       "goal of '" + o.id + "' places cell " + cell_str(c) + " inside a wall");
                break;
            }
        }
    }

    if (initial.size() != puzzle.num_objects()) {
        report(ViolationKind::StateMismatch, "state has " + std::to_string(initial.size()) +
                                                 " positions for " +
                                                 std::to_string(puzzle.num_objects()) +
                                                 " objects");
        return out;
    }

    std::vector<int> owner(puzzle.cell_count(), -1);
    for (std::size_t i = 0; i < puzzle.num_objects(); ++i) {
        const ObjectSpec &o = puzzle.object(i);
        for (Position c : o.shape.placed_at(initial[i])) {
            if (!puzzle.in_bounds(c)) {
                report(ViolationKind::OutOfBounds,
                       "object '" + o.id + "' cell " + cell_str(c) + " outside the grid");
                continue;
            }
            if (puzzle.blocks(i, c))
                report(ViolationKind::InWall,
                       "object '" + o.id + "' cell " + cell_str(c) + " inside a wall");
            int &slot = owner[puzzle.cell_index(c)];
            if (slot >= 0)
                report(ViolationKind::Overlap,
                       "objects '" + puzzle.object(static_cast<std::size_t>(slot)).id +
                           "' and '" + o.id + "' share cell " + cell_str(c));
            else
                slot = static_cast<int>(i);
        }
    }
    return out;
}

}  // namespace pushworld
