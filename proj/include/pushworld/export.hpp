#pragma once

#include "motion.hpp"
#include "puzzle.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/*
  Grounded exports of a puzzle for external classical planners.

  Every export action corresponds to one push: an action direction plus the
  exact set of objects (with their anchors) that move together. A push is only
  grounded when each member is reached from the agent through contacts and
  no member would enter a wall. In the PDDL model the remaining condition, that
  no other object sits in a cell the chain is about to enter, is a negative
  precondition on cell occupancy. The SAS+ model has only one position
  variable per object, so the same condition is spelled out as prevail
  conditions over the admissible positions of every object that could be in
  the way.
*/
namespace pushworld {

class ExportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExportOptions {
    // Largest number of moving objects, agent included, in one exported action.
    std::size_t max_chain = 3;
    std::size_t max_objects = 8;
    std::size_t max_operators = 1'000'000;
};

struct ChainMember {
    std::size_t object;
    Position anchor;

    friend bool operator==(const ChainMember &, const ChainMember &) = default;
    friend auto operator<=>(const ChainMember &a, const ChainMember &b) {
        if (auto c = a.object <=> b.object; c != 0)
            return c;
        return a.anchor <=> b.anchor;
    }
};

struct GroundPush {
    Action action;
    std::vector<ChainMember> members;  // ascending object index
    std::vector<Position> entered;     // cells the chain newly occupies
    std::vector<Position> vacated;     // cells the chain leaves
};

struct PushEnumeration {
    std::vector<GroundPush> pushes;
    // True when some unblocked push needs more than max_chain movers.
    bool chain_truncated = false;
};

inline PushEnumeration enumerate_pushes(const Puzzle &puzzle, std::size_t max_chain) {
    if (max_chain == 0)
        throw ExportError("max_chain must be at least 1");
    const std::size_t n = puzzle.num_objects();
    std::vector<MovementGraph> graphs;
    for (std::size_t i = 0; i < n; ++i)
        graphs.emplace_back(puzzle, i);

    PushEnumeration out;
    for (Action action : kAllActions) {
        const Position u = displacement(action);
        std::set<std::vector<ChainMember>> seen;

        std::function<void(const std::vector<ChainMember> &)> visit =
            [&](const std::vector<ChainMember> &members) {
                std::vector<Position> current, moved;
                for (const ChainMember &m : members)
                    for (Position c : puzzle.shape(m.object).cells()) {
                        current.push_back(c + m.anchor);
                        Position dest = c + m.anchor + u;
                        if (puzzle.blocks(m.object, dest))
                            return;  // supersets are blocked as well
                        moved.push_back(dest);
                    }
                if (members.size() > max_chain) {
                    out.chain_truncated = true;
                    return;
                }
                std::sort(current.begin(), current.end());
                std::sort(moved.begin(), moved.end());
                GroundPush push{action, members, {}, {}};
                std::set_difference(moved.begin(), moved.end(), current.begin(), current.end(),
                                    std::back_inserter(push.entered));
                std::set_difference(current.begin(), current.end(), moved.begin(), moved.end(),
                                    std::back_inserter(push.vacated));
                std::vector<Position> entered = push.entered;
                out.pushes.push_back(std::move(push));

                for (std::size_t j = 0; j < n; ++j) {
                    if (std::any_of(members.begin(), members.end(),
                                    [j](const ChainMember &m) { return m.object == j; }))
                        continue;
                    std::set<Position> anchors;
                    for (Position cell : entered)
                        for (Position c : puzzle.shape(j).cells())
                            anchors.insert(cell - c);
                    for (Position r : anchors) {
                        if (!graphs[j].contains(r))
                            continue;
                        bool overlaps = false;
                        for (Position c : puzzle.shape(j).cells())
                            if (std::binary_search(current.begin(), current.end(), c + r)) {
                                overlaps = true;
                                break;
                            }
                        if (overlaps)
                            continue;
                        std::vector<ChainMember> bigger = members;
                        bigger.push_back({j, r});
                        std::sort(bigger.begin(), bigger.end());
                        if (seen.insert(bigger).second)
                            visit(bigger);
                    }
                }
            };

        for (Position p : graphs[kAgent].nodes()) {
            std::vector<ChainMember> root{{kAgent, p}};
            seen.insert(root);
            visit(root);
        }
    }
    return out;
}

namespace detail {

inline std::string loc_name(Position p) {
    return "c" + std::to_string(p.x) + "_" + std::to_string(p.y);
}
inline std::string thing_name(std::size_t i) { return "o" + std::to_string(i); }

inline std::string push_name(const GroundPush &p, std::size_t index) {
    return std::string("push-") + action_name(p.action) + "-" + std::to_string(p.members.size()) +
           "-" + std::to_string(index);
}

inline void check_export_size(const Puzzle &puzzle, const ExportOptions &opts) {
    if (puzzle.num_objects() > opts.max_objects)
        throw ExportError("puzzle has " + std::to_string(puzzle.num_objects()) +
                          " objects; the export cap is " + std::to_string(opts.max_objects));
}

inline std::string sanitize(std::string s) {
    for (char &c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'))
            c = '_';
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front())))
        s = "p" + s;
    return s;
}

}  // namespace detail

struct PddlExport {
    std::string domain;
    std::string problem;
    bool chain_truncated = false;
    std::size_t action_count = 0;
};

inline PddlExport export_pddl(const Puzzle &puzzle, const State &state,
                              const ExportOptions &opts = {}) {
    using detail::loc_name;
    using detail::thing_name;
    detail::check_export_size(puzzle, opts);
    PushEnumeration pushes = enumerate_pushes(puzzle, opts.max_chain);
    if (pushes.pushes.size() > opts.max_operators)
        throw ExportError("export would produce " + std::to_string(pushes.pushes.size()) +
                          " actions");

    std::ostringstream d;
    d << "; PushWorld puzzle '" << puzzle.name() << "', grounded pushes of up to "
      << opts.max_chain << " objects\n";
    for (std::size_t i = 0; i < puzzle.num_objects(); ++i)
        d << "; " << thing_name(i) << " = " << puzzle.object(i).id << "\n";
    d << "(define (domain pushworld)\n";
    d << "  (:requirements :strips :typing :negative-preconditions)\n";
    d << "  (:types thing loc)\n";
    d << "  (:constants";
    for (std::size_t i = 0; i < puzzle.num_objects(); ++i)
        d << ' ' << thing_name(i);
    d << " - thing";
    for (int y = 0; y < puzzle.height(); ++y)
        for (int x = 0; x < puzzle.width(); ++x)
            if (!puzzle.is_wall({x, y}))
                d << ' ' << loc_name({x, y});
    d << " - loc)\n";
    d << "  (:predicates (at ?o - thing ?p - loc) (occupied ?c - loc))\n";

    for (std::size_t k = 0; k < pushes.pushes.size(); ++k) {
        const GroundPush &p = pushes.pushes[k];
        const Position u = displacement(p.action);
        d << "  (:action " << detail::push_name(p, k) << "\n";
        d << "    :parameters ()\n";
        d << "    :precondition (and";
        for (const ChainMember &m : p.members)
            d << " (at " << thing_name(m.object) << ' ' << loc_name(m.anchor) << ')';
        for (Position c : p.entered)
            d << " (not (occupied " << loc_name(c) << "))";
        d << ")\n";
        d << "    :effect (and";
        for (const ChainMember &m : p.members)
            d << " (not (at " << thing_name(m.object) << ' ' << loc_name(m.anchor) << "))"
              << " (at " << thing_name(m.object) << ' ' << loc_name(m.anchor + u) << ')';
        for (Position c : p.entered)
            d << " (occupied " << loc_name(c) << ')';
        for (Position c : p.vacated)
            d << " (not (occupied " << loc_name(c) << "))";
        d << "))\n";
    }
    d << ")\n";

    std::ostringstream pr;
    pr << "(define (problem " << detail::sanitize(puzzle.name()) << ")\n";
    pr << "  (:domain pushworld)\n";
    pr << "  (:init";
    std::vector<Position> occupied;
    for (std::size_t i = 0; i < puzzle.num_objects(); ++i) {
        pr << "\n    (at " << thing_name(i) << ' ' << loc_name(state[i]) << ')';
        for (Position c : puzzle.shape(i).placed_at(state[i]))
            occupied.push_back(c);
    }
    std::sort(occupied.begin(), occupied.end());
    for (Position c : occupied)
        pr << "\n    (occupied " << loc_name(c) << ')';
    pr << ")\n";
    pr << "  (:goal (and";
    for (const Goal &g : puzzle.goals())
        pr << " (at " << thing_name(g.object) << ' ' << loc_name(g.anchor) << ')';
    pr << ")))\n";

    return {d.str(), pr.str(), pushes.chain_truncated, pushes.pushes.size()};
}

struct SasExport {
    std::string text;
    bool chain_truncated = false;
    std::size_t operator_count = 0;
    std::vector<std::size_t> domain_sizes;
};

inline SasExport export_sas(const Puzzle &puzzle, const State &state,
                            const ExportOptions &opts = {}) {
    detail::check_export_size(puzzle, opts);
    const std::size_t n = puzzle.num_objects();
    std::vector<MovementGraph> graphs;
    std::vector<std::vector<Position>> domains;
    for (std::size_t i = 0; i < n; ++i) {
        graphs.emplace_back(puzzle, i);
        domains.push_back(graphs.back().nodes());
    }
    auto value_of = [&](std::size_t var, Position p) -> std::size_t {
        const auto &dom = domains[var];
        auto it = std::lower_bound(dom.begin(), dom.end(), p);
        if (it == dom.end() || *it != p)
            throw ExportError("position outside the movement graph of " +
                              puzzle.object(var).id);
        return static_cast<std::size_t>(it - dom.begin());
    };
    auto cells_of = [&](std::size_t obj, Position anchor) {
        auto cells = puzzle.shape(obj).placed_at(anchor);
        std::sort(cells.begin(), cells.end());
        return cells;
    };
    auto intersects = [](const std::vector<Position> &a, const std::vector<Position> &b) {
        for (Position c : a)
            if (std::binary_search(b.begin(), b.end(), c))
                return true;
        return false;
    };

    PushEnumeration pushes = enumerate_pushes(puzzle, opts.max_chain);

    std::ostringstream ops;
    std::size_t op_count = 0;
    for (std::size_t k = 0; k < pushes.pushes.size(); ++k) {
        const GroundPush &p = pushes.pushes[k];
        const Position u = displacement(p.action);
        std::vector<Position> current;
        for (const ChainMember &m : p.members)
            for (Position c : cells_of(m.object, m.anchor))
                current.push_back(c);
        std::sort(current.begin(), current.end());

        // For each object outside the chain that could stand in an entered
        // cell, the positions it may hold for this push to apply.
        std::vector<std::size_t> constrained;
        std::vector<std::vector<std::pair<std::size_t, std::vector<Position>>>> allowed;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::any_of(p.members.begin(), p.members.end(),
                            [j](const ChainMember &m) { return m.object == j; }))
                continue;
            bool can_block = false;
            std::vector<std::pair<std::size_t, std::vector<Position>>> ok;
            for (Position r : domains[j]) {
                auto cells = cells_of(j, r);
                if (intersects(cells, p.entered)) {
                    can_block = true;
                    continue;
                }
                if (intersects(cells, current))
                    continue;  // cannot coexist with the chain
                ok.emplace_back(value_of(j, r), std::move(cells));
            }
            if (can_block) {
                constrained.push_back(j);
                allowed.push_back(std::move(ok));
            }
        }

        std::vector<std::size_t> choice(constrained.size(), 0);
        std::function<void(std::size_t)> emit = [&](std::size_t depth) {
            if (depth == constrained.size()) {
                if (++op_count > opts.max_operators)
                    throw ExportError("SAS+ export exceeds " +
                                      std::to_string(opts.max_operators) + " operators");
                ops << "begin_operator\n" << detail::push_name(p, k);
                for (std::size_t c = 0; c < constrained.size(); ++c)
                    ops << " " << detail::thing_name(constrained[c]) << "@" << choice[c];
                ops << "\n" << constrained.size() << "\n";
                for (std::size_t c = 0; c < constrained.size(); ++c)
                    ops << constrained[c] << ' ' << choice[c] << "\n";
                ops << p.members.size() << "\n";
                for (const ChainMember &m : p.members)
                    ops << "0 " << m.object << ' ' << value_of(m.object, m.anchor) << ' '
                        << value_of(m.object, m.anchor + u) << "\n";
                ops << "1\nend_operator\n";
                return;
            }
            for (const auto &[value, cells] : allowed[depth]) {
                bool clash = false;
                for (std::size_t prev = 0; prev < depth && !clash; ++prev) {
                    const auto &prev_cells =
                        std::find_if(allowed[prev].begin(), allowed[prev].end(),
                                     [&](const auto &e) { return e.first == choice[prev]; })
                            ->second;
                    clash = intersects(cells, prev_cells);
                }
                if (clash)
                    continue;
                choice[depth] = value;
                emit(depth + 1);
            }
        };
        emit(0);
    }

    std::ostringstream s;
    s << "begin_version\n3\nend_version\n";
    s << "begin_metric\n0\nend_metric\n";
    s << n << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        s << "begin_variable\nvar" << i << "\n-1\n" << domains[i].size() << "\n";
        for (Position p : domains[i])
            s << "Atom at(" << detail::thing_name(i) << ", " << detail::loc_name(p) << ")\n";
        s << "end_variable\n";
    }
    s << "0\n";
    s << "begin_state\n";
    for (std::size_t i = 0; i < n; ++i)
        s << value_of(i, state[i]) << "\n";
    s << "end_state\n";
    s << "begin_goal\n" << puzzle.goals().size() << "\n";
    for (const Goal &g : puzzle.goals())
        s << g.object << ' ' << value_of(g.object, g.anchor) << "\n";
    s << "end_goal\n";
    s << op_count << "\n" << ops.str();
    s << "0\n";

    SasExport result{s.str(), pushes.chain_truncated, op_count, {}};
    for (const auto &d : domains)
        result.domain_sizes.push_back(d.size());
    return result;
}

}  // namespace pushworld
