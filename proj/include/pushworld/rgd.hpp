#pragma once

#include "motion.hpp"
#include "puzzle.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace pushworld {

/*
  Recursive graph distance heuristic.

  The estimate for a goal object is the cheapest first step along its movement
  graph: remaining graph distance after the step, plus the cost of getting some
  pusher to shove it there. A pusher's cost is its own graph distance to a
  pushing position plus, recursively, the cost of something pushing the pusher.
  The agent ends the recursion because it moves by itself. Objects already used
  higher up in the recursion cannot push again.

  All caches are derived from the state-independent movement graphs, so a
  context can be reused across every state of one search. One context per
  search; not thread-safe.
*/
class HeuristicContext {
    const Puzzle *puzzle_;
    std::vector<std::shared_ptr<const MovementGraph>> graphs_;
    std::vector<PathLengthCache> paths_;
    PushingPositionMemo pushing_memo_;
    // pushing_offsets_[(pushee * n + pusher) * 4 + direction]
    std::vector<const std::vector<Position> *> pushing_offsets_;
    std::unordered_map<std::uint64_t, Cost> min_distance_cache_;
    std::size_t max_depth_;
    std::size_t depth_limit_ = 1;
    std::size_t evaluations_ = 0;

    std::size_t n() const { return puzzle_->num_objects(); }

    const std::vector<Position> &offsets(std::size_t pushee, std::size_t pusher,
                                         Action dir) const {
        return *pushing_offsets_[(pushee * n() + pusher) * 4 + static_cast<std::size_t>(dir)];
    }

    // Minimum number of pusher moves, starting after the pusher steps to
    // `pusher_next` via `pusher_dir`, until it has pushed `pushee` (anchored at
    // `pushee_at`) one cell in `dir`. Zero when that first step is itself the push.
    Cost min_push_distance(std::size_t pusher, std::size_t pushee, Position pushee_at,
                           Position pusher_next, Action pusher_dir, Action dir) {
        const MovementGraph &g = *graphs_[pusher];
        std::uint64_t key = (static_cast<std::uint64_t>(pusher) << 56) |
                            (static_cast<std::uint64_t>(pushee) << 48) |
                            (static_cast<std::uint64_t>(g.index(pushee_at)) << 26) |
                            (static_cast<std::uint64_t>(g.index(pusher_next)) << 4) |
                            (static_cast<std::uint64_t>(pusher_dir) << 2) |
                            static_cast<std::uint64_t>(dir);
        if (auto it = min_distance_cache_.find(key); it != min_distance_cache_.end())
            return it->second;

        const Position u = displacement(dir);
        const Position pusher_at = pusher_next - displacement(pusher_dir);
        Cost best = kInfiniteCost;
        for (Position delta : offsets(pushee, pusher, dir)) {
            Position start = pushee_at + delta;
            Position end = start + u;
            if (!g.contains(start) || !g.contains(end))
                continue;
            if (start == pusher_at && end == pusher_next) {
                best = 0;  // the pusher's own step is the push
                break;
            }
            Cost d = add_cost(paths_[pusher].shortest_path_length(pusher_next, start), 1);
            best = std::min(best, d);
        }
        min_distance_cache_.emplace(key, best);
        return best;
    }

public:
    explicit HeuristicContext(const Puzzle &puzzle,
                              std::optional<std::size_t> max_recursion_depth = std::nullopt)
        : puzzle_(&puzzle),
          max_depth_(max_recursion_depth.value_or(puzzle.num_objects())) {
        if (puzzle.num_objects() > 64)
            throw std::invalid_argument("the heuristic supports at most 64 objects");
        if (puzzle.cell_count() >= (std::size_t{1} << 22))
            throw std::invalid_argument("the heuristic supports at most 2^22 cells");
        if (max_depth_ == 0)
            throw std::invalid_argument("max recursion depth must be positive");
        for (std::size_t i = 0; i < n(); ++i) {
            graphs_.push_back(std::make_shared<const MovementGraph>(puzzle, i));
            paths_.emplace_back(graphs_.back());
        }
        pushing_offsets_.resize(n() * n() * 4);
        for (std::size_t pushee = 0; pushee < n(); ++pushee)
            for (std::size_t pusher = 0; pusher < n(); ++pusher)
                for (Action a : kAllActions)
                    pushing_offsets_[(pushee * n() + pusher) * 4 + static_cast<std::size_t>(a)] =
                        &pushing_memo_.get(puzzle.shape(pushee), puzzle.shape(pusher), a);
    }

    HeuristicContext(const HeuristicContext &) = delete;
    HeuristicContext &operator=(const HeuristicContext &) = delete;

    const Puzzle &puzzle() const { return *puzzle_; }
    const MovementGraph &graph(std::size_t object) const { return *graphs_[object]; }
    std::size_t max_recursion_depth() const { return max_depth_; }
    void set_max_recursion_depth(std::size_t depth) {
        if (depth == 0)
            throw std::invalid_argument("max recursion depth must be positive");
        max_depth_ = depth;
    }
    std::size_t evaluations() const { return evaluations_; }
    std::size_t min_distance_cache_size() const { return min_distance_cache_.size(); }
    std::size_t pushing_memo_size() const { return pushing_memo_.size(); }

    Cost shortest_path_length(std::size_t object, Position from, Position to) {
        return paths_[object].shortest_path_length(from, to);
    }

    // Estimated cost of the pusher chain that moves `object` to its adjacent
    // position `next`. `used` is a bitmask of objects already in the chain.
    // Returns `bound` unchanged when nothing cheaper than `bound` exists.
    Cost pushing_cost(std::size_t object, Position next, std::uint64_t used, const State &state,
                      Cost bound, std::size_t level = 1) {
        if (level > depth_limit_)
            return bound;
        if (object == kAgent)
            return std::min(bound, Cost{1});
        const Position here = state[object];
        auto dir = action_from_delta(next - here);
        if (!dir)
            return bound;
        Cost c_min = bound;
        for (std::size_t pusher = 0; pusher < n(); ++pusher) {
            if (used & (std::uint64_t{1} << pusher))
                continue;
            const std::uint64_t next_used = used | (std::uint64_t{1} << pusher);
            const Position pusher_at = state[pusher];
            for (Action pusher_dir : kAllActions) {
                auto pusher_next = graphs_[pusher]->successor(pusher_at, pusher_dir);
                if (!pusher_next)
                    continue;
                Cost d_min =
                    min_push_distance(pusher, object, here, *pusher_next, pusher_dir, *dir);
                if (pusher == kAgent) {
                    c_min = std::min(c_min, add_cost(d_min, 1));
                } else if (d_min < c_min) {
                    c_min = add_cost(d_min, pushing_cost(pusher, *pusher_next, next_used, state,
                                                         sub_cost(c_min, d_min), level + 1));
                }
            }
        }
        return c_min;
    }

    Cost cost_to_reach_position(std::size_t object, Position goal, const State &state) {
        const Position here = state[object];
        if (here == goal)
            return 0;
        const MovementGraph &g = *graphs_[object];
        if (!g.contains(goal))
            return kInfiniteCost;
        Cost c_min = kInfiniteCost;
        const std::uint64_t used = std::uint64_t{1} << object;
        for (Action a : kAllActions) {
            auto next = g.successor(here, a);
            if (!next)
                continue;
            Cost d = paths_[object].shortest_path_length(*next, goal);
            if (d < c_min)
                c_min = add_cost(d, pushing_cost(object, *next, used, state, sub_cost(c_min, d)));
        }
        return c_min;
    }

    // Heuristic value with the recursion depth fixed to `depth`.
    Cost cost_at_depth(const State &state, const std::vector<Goal> &goals, std::size_t depth) {
        depth_limit_ = depth;
        Cost c = 0;
        for (const Goal &g : goals) {
            c = add_cost(c, cost_to_reach_position(g.object, g.anchor, state));
            if (c == kInfiniteCost)
                break;
        }
        return c;
    }

    // Heuristic value with incremental deepening: the recursion depth starts at
    // one and grows until the estimate is finite or the depth cap is reached.
    Cost cost(const State &state, const std::vector<Goal> &goals) {
        ++evaluations_;
        const std::size_t cap = std::max<std::size_t>(1, std::min(max_depth_, n()));
        for (std::size_t depth = 1;; ++depth) {
            Cost c = cost_at_depth(state, goals, depth);
            if (c != kInfiniteCost || depth >= cap)
                return c;
        }
    }

    Cost cost(const State &state) { return cost(state, puzzle_->goals()); }
};

inline Cost rgd_cost(const State &state, const std::vector<Goal> &goals, HeuristicContext &ctx) {
    return ctx.cost(state, goals);
}

}  // namespace pushworld
