#pragma once

#include "novelty.hpp"
#include "puzzle.hpp"
#include "rgd.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pushworld {

enum class HeuristicKind { Blind, Rgd, NoveltyRgd };

inline const char *heuristic_name(HeuristicKind h) {
    switch (h) {
    case HeuristicKind::Blind:
        return "blind";
    case HeuristicKind::Rgd:
        return "rgd";
    case HeuristicKind::NoveltyRgd:
        return "novelty-rgd";
    }
    return "unknown";
}

inline std::optional<HeuristicKind> heuristic_from_name(std::string_view name) {
    if (name == "blind")
        return HeuristicKind::Blind;
    if (name == "rgd")
        return HeuristicKind::Rgd;
    if (name == "novelty-rgd" || name == "novelty_rgd")
        return HeuristicKind::NoveltyRgd;
    return std::nullopt;
}

enum class SearchStatus { Solved, Exhausted, TimeLimit, MemoryLimit };

inline const char *status_name(SearchStatus s) {
    switch (s) {
    case SearchStatus::Solved:
        return "solved";
    case SearchStatus::Exhausted:
        return "exhausted";
    case SearchStatus::TimeLimit:
        return "time_limit";
    case SearchStatus::MemoryLimit:
        return "memory_limit";
    }
    return "unknown";
}

struct SearchLimits {
    double time_limit_s = 60.0;
    std::size_t memory_limit_mb = 4096;
};

struct SearchConfig {
    HeuristicKind heuristic = HeuristicKind::NoveltyRgd;
    SearchLimits limits;
    // Keep a log of generation/expansion events with their priority keys.
    bool record_events = false;
};

struct PriorityKey {
    int novelty = 0;
    Cost h = 0;
    std::uint64_t sequence = 0;

    friend bool operator==(const PriorityKey &, const PriorityKey &) = default;
    friend auto operator<=>(const PriorityKey &, const PriorityKey &) = default;
};

struct SearchEvent {
    enum class Kind { Generated, Expanded } kind;
    PriorityKey key;
};

struct SearchStats {
    std::size_t generated = 0;
    std::size_t expanded = 0;
    std::size_t peak_open = 0;
    std::size_t heuristic_evaluations = 0;
    std::size_t stored_states = 0;
    std::size_t memory_estimate_bytes = 0;
    double wall_time_s = 0.0;
};

struct PlanResult {
    SearchStatus status = SearchStatus::Exhausted;
    std::vector<Action> actions;
    SearchStats stats;
    std::vector<SearchEvent> events;

    bool solved() const { return status == SearchStatus::Solved; }
};

inline bool validate_plan(const Puzzle &puzzle, const State &initial,
                          const std::vector<Action> &actions) {
    if (initial.size() != puzzle.num_objects())
        return false;
    return is_goal(puzzle, replay(puzzle, initial, actions));
}

inline std::string plan_to_string(const std::vector<Action> &actions) {
    std::string s;
    for (Action a : actions)
        s.push_back(action_letter(a));
    return s;
}

namespace detail {

// Append-only store of expanded/generated states with parent links and
// duplicate detection over the full position vectors.
class StateStore {
    std::size_t width_;
    std::vector<Position> pool_;
    std::vector<std::uint32_t> parent_;
    std::vector<Action> action_;

    struct Hash {
        const StateStore *store;
        std::size_t operator()(std::uint32_t id) const noexcept {
            std::size_t h = 0xcbf29ce484222325ULL;
            const Position *p = store->data(id);
            for (std::size_t i = 0; i < store->width_; ++i) {
                h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(p[i].x)) |
                     (static_cast<std::size_t>(static_cast<std::uint32_t>(p[i].y)) << 32);
                h *= 0x100000001b3ULL;
            }
            return h ^ (h >> 29);
        }
    };
    struct Equal {
        const StateStore *store;
        bool operator()(std::uint32_t a, std::uint32_t b) const noexcept {
            return std::equal(store->data(a), store->data(a) + store->width_, store->data(b));
        }
    };
    std::unordered_set<std::uint32_t, Hash, Equal> index_;

public:
    static constexpr std::uint32_t kNoParent = 0xffffffffu;

    explicit StateStore(std::size_t objects)
        : width_(objects), index_(1024, Hash{this}, Equal{this}) {}
    StateStore(const StateStore &) = delete;
    StateStore &operator=(const StateStore &) = delete;

    const Position *data(std::uint32_t id) const { return pool_.data() + id * width_; }
    std::size_t size() const { return parent_.size(); }

    State state(std::uint32_t id) const { return State{{data(id), data(id) + width_}}; }

    // Returns the new id, or nullopt when the state is already stored.
    std::optional<std::uint32_t> insert(const State &s, std::uint32_t parent, Action a) {
        auto id = static_cast<std::uint32_t>(parent_.size());
        pool_.insert(pool_.end(), s.positions.begin(), s.positions.end());
        parent_.push_back(parent);
        action_.push_back(a);
        if (!index_.insert(id).second) {
            pool_.resize(pool_.size() - width_);
            parent_.pop_back();
            action_.pop_back();
            return std::nullopt;
        }
        return id;
    }

    std::vector<Action> plan_to(std::uint32_t id) const {
        std::vector<Action> out;
        while (parent_[id] != kNoParent) {
            out.push_back(action_[id]);
            id = parent_[id];
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    std::size_t bytes_per_state() const {
        return width_ * sizeof(Position) + sizeof(std::uint32_t) + sizeof(Action) + 40;
    }
};

class Stopwatch {
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
};

inline std::size_t node_budget(const SearchLimits &limits, std::size_t bytes_per_node) {
    std::size_t bytes = limits.memory_limit_mb * std::size_t{1024} * 1024;
    return std::max<std::size_t>(1, bytes / bytes_per_node);
}

}  // namespace detail

/*
  Greedy best-first search. Successors are evaluated when generated and ordered
  by (novelty, h, insertion order). States whose estimate is infinite are kept
  with the worst possible key instead of being pruned, so the search stays
  complete on finite state spaces.
*/
inline PlanResult gbf_search(const Puzzle &puzzle, const State &initial,
                             const SearchConfig &config = {}) {
    constexpr int kWorstNovelty = kNotNovel + 1;
    detail::Stopwatch clock;
    PlanResult result;
    SearchStats &stats = result.stats;
    detail::StateStore store(puzzle.num_objects());
    const std::size_t per_node = store.bytes_per_state() + sizeof(PriorityKey) + 8;
    const std::size_t max_nodes = detail::node_budget(config.limits, per_node);

    const bool use_h = config.heuristic != HeuristicKind::Blind;
    const bool use_novelty = config.heuristic == HeuristicKind::NoveltyRgd;
    std::optional<HeuristicContext> heuristic;
    std::optional<NoveltyArchive> archive;
    if (use_h)
        heuristic.emplace(puzzle);
    if (use_novelty)
        archive.emplace(puzzle);

    using Entry = std::pair<PriorityKey, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::uint64_t sequence = 0;

    auto finish = [&](SearchStatus status) {
        result.status = status;
        stats.stored_states = store.size();
        stats.memory_estimate_bytes = store.size() * per_node;
        stats.wall_time_s = clock.seconds();
        return result;
    };
    auto evaluate = [&](const State &s) {
        PriorityKey key{0, 0, sequence++};
        if (use_novelty)
            key.novelty = archive->evaluate_and_record(s);
        if (use_h) {
            key.h = heuristic->cost(s);
            ++stats.heuristic_evaluations;
            if (key.h == kInfiniteCost)
                key.novelty = kWorstNovelty;
        }
        return key;
    };

    auto root = store.insert(initial, detail::StateStore::kNoParent, Action::Left);
    ++stats.generated;
    if (is_goal(puzzle, initial))
        return finish(SearchStatus::Solved);
    PriorityKey root_key = evaluate(initial);
    if (config.record_events)
        result.events.push_back({SearchEvent::Kind::Generated, root_key});
    open.push({root_key, *root});

    Simulator sim(puzzle);
    while (!open.empty()) {
        if ((stats.expanded & 31) == 0 && clock.seconds() > config.limits.time_limit_s)
            return finish(SearchStatus::TimeLimit);
        auto [key, id] = open.top();
        open.pop();
        ++stats.expanded;
        if (config.record_events)
            result.events.push_back({SearchEvent::Kind::Expanded, key});
        State state = store.state(id);
        sim.load(state);
        for (Action a : kAllActions) {
            auto next = sim.successor(a);
            if (!next)
                continue;
            ++stats.generated;
            auto child = store.insert(*next, id, a);
            if (!child)
                continue;
            if (is_goal(puzzle, *next)) {
                result.actions = store.plan_to(*child);
                return finish(SearchStatus::Solved);
            }
            PriorityKey child_key = evaluate(*next);
            if (config.record_events)
                result.events.push_back({SearchEvent::Kind::Generated, child_key});
            open.push({child_key, *child});
            if (store.size() > max_nodes)
                return finish(SearchStatus::MemoryLimit);
        }
        stats.peak_open = std::max(stats.peak_open, open.size());
        if (config.limits.time_limit_s <= 0.0)
            return finish(SearchStatus::TimeLimit);
    }
    return finish(SearchStatus::Exhausted);
}

// Breadth-first search over full states; returns a shortest plan.
inline PlanResult optimal_plan_bfs(const Puzzle &puzzle, const State &initial,
                                   const SearchLimits &limits = {}) {
    detail::Stopwatch clock;
    PlanResult result;
    detail::StateStore store(puzzle.num_objects());
    const std::size_t per_node = store.bytes_per_state() + sizeof(std::uint32_t);
    const std::size_t max_nodes = detail::node_budget(limits, per_node);
    auto finish = [&](SearchStatus status) {
        result.status = status;
        result.stats.stored_states = store.size();
        result.stats.memory_estimate_bytes = store.size() * per_node;
        result.stats.wall_time_s = clock.seconds();
        return result;
    };

    auto root = store.insert(initial, detail::StateStore::kNoParent, Action::Left);
    ++result.stats.generated;
    if (is_goal(puzzle, initial))
        return finish(SearchStatus::Solved);
    std::deque<std::uint32_t> frontier{*root};
    Simulator sim(puzzle);
    while (!frontier.empty()) {
        if ((result.stats.expanded & 31) == 0 && clock.seconds() > limits.time_limit_s)
            return finish(SearchStatus::TimeLimit);
        std::uint32_t id = frontier.front();
        frontier.pop_front();
        ++result.stats.expanded;
        sim.load(store.state(id));
        for (Action a : kAllActions) {
            auto next = sim.successor(a);
            if (!next)
                continue;
            ++result.stats.generated;
            auto child = store.insert(*next, id, a);
            if (!child)
                continue;
            if (is_goal(puzzle, *next)) {
                result.actions = store.plan_to(*child);
                return finish(SearchStatus::Solved);
            }
            frontier.push_back(*child);
            if (store.size() > max_nodes)
                return finish(SearchStatus::MemoryLimit);
        }
        result.stats.peak_open = std::max(result.stats.peak_open, frontier.size());
    }
    return finish(SearchStatus::Exhausted);
}

// All states reachable from `initial`, in breadth-first order. Stops early and
// returns nullopt if more than `max_states` would be produced.
inline std::optional<std::vector<State>> reachable_states(const Puzzle &puzzle,
                                                          const State &initial,
                                                          std::size_t max_states) {
    detail::StateStore store(puzzle.num_objects());
    store.insert(initial, detail::StateStore::kNoParent, Action::Left);
    Simulator sim(puzzle);
    for (std::uint32_t id = 0; id < store.size(); ++id) {
        sim.load(store.state(id));
        for (Action a : kAllActions)
            if (auto next = sim.successor(a)) {
                store.insert(*next, id, a);
                if (store.size() > max_states)
                    return std::nullopt;
            }
    }
    std::vector<State> out;
    out.reserve(store.size());
    for (std::uint32_t id = 0; id < store.size(); ++id)
        out.push_back(store.state(id));
    return out;
}

}  // namespace pushworld
