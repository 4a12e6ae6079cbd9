#pragma once

#include "puzzle.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace pushworld {

using Cost = int;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

constexpr Cost add_cost(Cost a, Cost b) {
    if (a == kInfiniteCost || b == kInfiniteCost)
        return kInfiniteCost;
    return a + b;
}

// a - b for finite b; an infinite a stays infinite.
constexpr Cost sub_cost(Cost a, Cost b) {
    return a == kInfiniteCost ? kInfiniteCost : a - b;
}

/*
  Positions an object can occupy without touching a wall (or an agent wall,
  for the agent), with unit-step edges between them. Movable objects are
  ignored, so the graph depends only on the puzzle and is built once.
*/
class MovementGraph {
    std::size_t object_ = 0;
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> node_;
    std::size_t node_count_ = 0;

public:
    MovementGraph(const Puzzle &puzzle, std::size_t object)
        : object_(object),
          width_(puzzle.width()),
          height_(puzzle.height()),
          node_(puzzle.cell_count(), 0) {
        // Anchor cells are occupied cells, so every node lies inside the grid.
        for (int y = 0; y < height_; ++y)
            for (int x = 0; x < width_; ++x) {
                Position p{x, y};
                if (!puzzle.shape(object).empty() && puzzle.fits(object, p)) {
                    node_[index(p)] = 1;
                    ++node_count_;
                }
            }
    }

    std::size_t object() const { return object_; }
    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t node_count() const { return node_count_; }
    std::size_t cell_count() const { return node_.size(); }

    std::size_t index(Position p) const {
        return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(p.x);
    }
    Position position(std::size_t index) const {
        return {static_cast<int>(index % static_cast<std::size_t>(width_)),
                static_cast<int>(index / static_cast<std::size_t>(width_))};
    }

    bool contains(Position p) const {
        return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_ && node_[index(p)];
    }

    std::optional<Position> successor(Position p, Action a) const {
        Position q = p + displacement(a);
        if (contains(p) && contains(q))
            return q;
        return std::nullopt;
    }

    bool has_edge(Position from, Position to) const {
        auto a = action_from_delta(to - from);
        return a && contains(from) && contains(to);
    }

    std::vector<Position> nodes() const {
        std::vector<Position> out;
        out.reserve(node_count_);
        for (std::size_t i = 0; i < node_.size(); ++i)
            if (node_[i])
                out.push_back(position(i));
        return out;
    }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < node_.size(); ++i)
            if (node_[i]) {
                Position p = position(i);
                if (contains(p + Position{1, 0}))
                    ++n;
                if (contains(p + Position{0, 1}))
                    ++n;
            }
        return n;
    }
};

/*
  Shortest path lengths in one movement graph. Each queried target keeps its
  own breadth-first expansion; a query for a source the expansion has not
  reached yet resumes it from where it stopped. Distances are final once
  assigned, so cached answers never change.
*/
class PathLengthCache {
    struct Frontier {
        std::vector<int> distance;  // -1 = not reached yet
        std::vector<std::uint32_t> queue;
        std::size_t head = 0;
    };

    std::shared_ptr<const MovementGraph> graph_;
    std::unordered_map<std::size_t, Frontier> frontiers_;
    std::size_t expansions_ = 0;

    Frontier &frontier_for(Position target) {
        std::size_t t = graph_->index(target);
        auto [it, inserted] = frontiers_.try_emplace(t);
        if (inserted) {
            it->second.distance.assign(graph_->cell_count(), -1);
            it->second.distance[t] = 0;
            it->second.queue.push_back(static_cast<std::uint32_t>(t));
        }
        return it->second;
    }

public:
    explicit PathLengthCache(std::shared_ptr<const MovementGraph> graph)
        : graph_(std::move(graph)) {}

    const MovementGraph &graph() const { return *graph_; }

    Cost shortest_path_length(Position from, Position to) {
        if (!graph_->contains(from) || !graph_->contains(to))
            return kInfiniteCost;
        if (from == to)
            return 0;
        Frontier &f = frontier_for(to);
        const std::size_t goal = graph_->index(from);
        // Edges are symmetric, so expanding from the target yields distances to it.
        while (f.distance[goal] < 0 && f.head < f.queue.size()) {
            std::size_t cur = f.queue[f.head++];
            ++expansions_;
            Position p = graph_->position(cur);
            int next_dist = f.distance[cur] + 1;
            for (Action a : kAllActions) {
                Position q = p + displacement(a);
                if (!graph_->contains(q))
                    continue;
                std::size_t qi = graph_->index(q);
                if (f.distance[qi] < 0) {
                    f.distance[qi] = next_dist;
                    f.queue.push_back(static_cast<std::uint32_t>(qi));
                }
            }
        }
        return f.distance[goal] < 0 ? kInfiniteCost : f.distance[goal];
    }

    // Distance if already known, without expanding.
    std::optional<Cost> cached(Position from, Position to) const {
        if (!graph_->contains(from) || !graph_->contains(to))
            return kInfiniteCost;
        if (from == to)
            return 0;
        auto it = frontiers_.find(graph_->index(to));
        if (it == frontiers_.end())
            return std::nullopt;
        const Frontier &f = it->second;
        int d = f.distance[graph_->index(from)];
        if (d >= 0)
            return d;
        if (f.head >= f.queue.size())
            return kInfiniteCost;
        return std::nullopt;
    }

    std::size_t target_count() const { return frontiers_.size(); }
    std::size_t expansions() const { return expansions_; }
};

/*
  Offsets d such that a pusher anchored at (pushee anchor + d) does not overlap
  the pushee, but does overlap it after one step in `direction`. Sorted
  row-major.
*/
inline std::vector<Position> relative_pushing_positions(const Shape &pushee, const Shape &pusher,
                                                        Action direction) {
    const Position u = displacement(direction);
    std::vector<Position> out;
    for (Position e : pushee.cells())
        for (Position c : pusher.cells()) {
            Position delta = e - c - u;
            bool overlaps = false;
            for (Position c2 : pusher.cells()) {
                Position cell = c2 + delta;
                if (std::find(pushee.cells().begin(), pushee.cells().end(), cell) !=
                    pushee.cells().end()) {
                    overlaps = true;
                    break;
                }
            }
            if (!overlaps)
                out.push_back(delta);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Memoizes relative_pushing_positions() on (pushee shape, pusher shape, direction).
class PushingPositionMemo {
    std::map<std::tuple<Shape, Shape, Action>, std::vector<Position>> memo_;

public:
    const std::vector<Position> &get(const Shape &pushee, const Shape &pusher,
                                     Action direction) {
        auto key = std::make_tuple(pushee, pusher, direction);
        auto it = memo_.find(key);
        if (it == memo_.end())
            it = memo_.emplace(key, relative_pushing_positions(pushee, pusher, direction)).first;
        return it->second;
    }
    std::size_t size() const { return memo_.size(); }
};

}  // namespace pushworld

namespace pushworld {

/*
  Over-approximation of the anchors each object can ever occupy. The agent
  reaches its whole wall-only component and may step anywhere in it. Another
  object may step from p to p+u if some other object can stand at a pushing
  position for that step and may itself make the step along u from there;
  collisions with third objects are ignored. An object
  that cannot move at all in this relaxation never moves for real, so its
  cells are turned into walls and the whole computation repeats until no
  further object freezes. Any anchor missing from the result is unreachable
  in the real puzzle. Indexed by object, then by cell index.
*/
inline std::vector<std::vector<std::uint8_t>> relaxed_reachable_positions(const Puzzle &puzzle,
                                                                          const State &state) {
    const std::size_t n = puzzle.num_objects();
    std::vector<std::uint8_t> frozen(n, 0);
    PushingPositionMemo memo;
    for (;;) {
        std::vector<Position> walls = puzzle.walls();
        for (std::size_t i = 1; i < n; ++i)
            if (frozen[i])
                for (Position c : puzzle.shape(i).placed_at(state[i]))
                    walls.push_back(c);
        const Puzzle relaxed(puzzle.width(), puzzle.height(), walls, puzzle.agent_walls(),
                             puzzle.objects(), {});
        std::vector<MovementGraph> graphs;
        for (std::size_t i = 0; i < n; ++i)
            graphs.emplace_back(relaxed, i);
        std::vector<std::vector<std::uint8_t>> reach(
            n, std::vector<std::uint8_t>(puzzle.cell_count(), 0));
        auto has = [&](std::size_t i, Position p) {
            return puzzle.in_bounds(p) && reach[i][puzzle.cell_index(p)];
        };
        for (std::size_t i = 0; i < n; ++i)
            if (puzzle.in_bounds(state[i]))
                reach[i][puzzle.cell_index(state[i])] = 1;

        std::vector<Position> stack;
        if (graphs[kAgent].contains(state[kAgent]))
            stack.push_back(state[kAgent]);
        while (!stack.empty()) {
            Position p = stack.back();
            stack.pop_back();
            for (Action a : kAllActions)
                if (auto q = graphs[kAgent].successor(p, a); q && !has(kAgent, *q)) {
                    reach[kAgent][puzzle.cell_index(*q)] = 1;
                    stack.push_back(*q);
                }
        }

        // moves[i][cell * 4 + dir]: object i may step from that anchor along dir.
        std::vector<std::vector<std::uint8_t>> moves(
            n, std::vector<std::uint8_t>(puzzle.cell_count() * 4, 0));
        auto can_move = [&](std::size_t i, Position p, Action a) {
            return puzzle.in_bounds(p) &&
                   moves[i][puzzle.cell_index(p) * 4 + static_cast<std::size_t>(a)];
        };
        for (Position p : graphs[kAgent].nodes())
            if (has(kAgent, p))
                for (Action a : kAllActions)
                    if (graphs[kAgent].successor(p, a))
                        moves[kAgent][puzzle.cell_index(p) * 4 + static_cast<std::size_t>(a)] = 1;

        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t j = 1; j < n; ++j) {
                if (frozen[j])
                    continue;
                for (Position p : graphs[j].nodes()) {
                    if (!has(j, p))
                        continue;
                    for (Action a : kAllActions) {
                        auto next = graphs[j].successor(p, a);
                        if (!next || can_move(j, p, a))
                            continue;
                        bool pushable = false;
                        for (std::size_t k = 0; k < n && !pushable; ++k) {
                            if (k == j || frozen[k])
                                continue;
                            for (Position d : memo.get(puzzle.shape(j), puzzle.shape(k), a))
                                if (has(k, p + d) && can_move(k, p + d, a)) {
                                    pushable = true;
                                    break;
                                }
                        }
                        if (pushable) {
                            moves[j][puzzle.cell_index(p) * 4 + static_cast<std::size_t>(a)] = 1;
                            reach[j][puzzle.cell_index(*next)] = 1;
                            changed = true;
                        }
                    }
                }
            }
        }

        bool newly_frozen = false;
        for (std::size_t j = 1; j < n; ++j) {
            if (frozen[j])
                continue;
            std::size_t count = 0;
            for (auto r : reach[j])
                count += r;
            if (count <= 1) {
                frozen[j] = 1;
                newly_frozen = true;
            }
        }
        if (!newly_frozen)
            return reach;
    }
}

// False only when some goal is provably unreachable.
inline bool goals_relaxed_reachable(const Puzzle &puzzle, const State &state) {
    auto reach = relaxed_reachable_positions(puzzle, state);
    for (const Goal &g : puzzle.goals())
        if (!puzzle.in_bounds(g.anchor) || !reach[g.object][puzzle.cell_index(g.anchor)])
            return false;
    return true;
}

}  // namespace pushworld
