#pragma once

// Slow, independent reference implementations used only by the tests. They
// read the raw puzzle description (wall lists, shapes) and never touch the
// library's grids, caches or simulators.

#include <pushworld/puzzle.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using namespace pushworld;

inline std::set<Position> cells_of(const Puzzle &p, std::size_t obj, Position anchor) {
    std::set<Position> out;
    for (Position c : p.shape(obj).cells())
        out.insert({c.x + anchor.x, c.y + anchor.y});
    return out;
}

inline bool blocking(const Puzzle &p, std::size_t obj, Position cell) {
    if (cell.x < 0 || cell.y < 0 || cell.x >= p.width() || cell.y >= p.height())
        return true;
    const auto &w = p.walls();
    if (std::find(w.begin(), w.end(), cell) != w.end())
        return true;
    const auto &aw = p.agent_walls();
    return obj == kAgent && std::find(aw.begin(), aw.end(), cell) != aw.end();
}

struct NaivePush {
    std::set<std::size_t> movers;
    bool blocked = false;
};

// Grows the moving set by pairwise overlap tests until nothing changes.
inline NaivePush naive_push_set(const Puzzle &p, const State &s, Action a) {
    Position u = displacement(a);
    NaivePush out;
    out.movers.insert(kAgent);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < p.num_objects(); ++i) {
            if (!out.movers.count(i))
                continue;
            auto moved = cells_of(p, i, {s[i].x + u.x, s[i].y + u.y});
            for (std::size_t j = 0; j < p.num_objects(); ++j) {
                if (out.movers.count(j))
                    continue;
                for (Position c : cells_of(p, j, s[j]))
                    if (moved.count(c)) {
                        out.movers.insert(j);
                        changed = true;
                        break;
                    }
            }
        }
    }
    for (std::size_t i : out.movers)
        for (Position c : cells_of(p, i, {s[i].x + u.x, s[i].y + u.y}))
            if (blocking(p, i, c))
                out.blocked = true;
    return out;
}

inline State naive_apply(const Puzzle &p, const State &s, Action a) {
    NaivePush m = naive_push_set(p, s, a);
    if (m.blocked)
        return s;
    State next = s;
    Position u = displacement(a);
    for (std::size_t i : m.movers)
        next.positions[i] = {s[i].x + u.x, s[i].y + u.y};
    return next;
}

// True if no two objects overlap and nothing sits in a blocking cell.
inline bool state_valid(const Puzzle &p, const State &s) {
    std::set<Position> seen;
    for (std::size_t i = 0; i < p.num_objects(); ++i)
        for (Position c : cells_of(p, i, s[i])) {
            if (blocking(p, i, c) || !seen.insert(c).second)
                return false;
        }
    return true;
}

// Anchors at which `obj` avoids every cell that blocks it, by scanning cells.
inline std::set<Position> placements(const Puzzle &p, std::size_t obj) {
    std::set<Position> out;
    for (int y = -3; y < p.height() + 3; ++y)
        for (int x = -3; x < p.width() + 3; ++x) {
            bool ok = true;
            for (Position c : cells_of(p, obj, {x, y}))
                ok = ok && !blocking(p, obj, c);
            if (ok)
                out.insert({x, y});
        }
    return out;
}

// Plain BFS over placements; -1 when unreachable or not a placement.
inline int bfs_distance(const Puzzle &p, std::size_t obj, Position from, Position to) {
    auto nodes = placements(p, obj);
    if (!nodes.count(from) || !nodes.count(to))
        return -1;
    std::map<Position, int> dist{{from, 0}};
    std::deque<Position> q{from};
    while (!q.empty()) {
        Position c = q.front();
        q.pop_front();
        if (c == to)
            return dist[c];
        for (Position d : {Position{-1, 0}, Position{1, 0}, Position{0, -1}, Position{0, 1}}) {
            Position n{c.x + d.x, c.y + d.y};
            if (nodes.count(n) && !dist.count(n)) {
                dist[n] = dist[c] + 1;
                q.push_back(n);
            }
        }
    }
    return -1;
}

// Scans every offset in a window that surely contains all contacts.
inline std::vector<Position> brute_pushing_positions(const Shape &pushee, const Shape &pusher,
                                                     Action dir) {
    Position u = displacement(dir);
    std::set<Position> e(pushee.cells().begin(), pushee.cells().end());
    std::vector<Position> out;
    for (int dy = -8; dy <= 8; ++dy)
        for (int dx = -8; dx <= 8; ++dx) {
            bool before = false, after = false;
            for (Position c : pusher.cells()) {
                before = before || e.count({c.x + dx, c.y + dy});
                after = after || e.count({c.x + dx + u.x, c.y + dy + u.y});
            }
            if (!before && after)
                out.push_back({dx, dy});
        }
    std::sort(out.begin(), out.end());
    return out;
}

// Novelty by enumerating every subset of size 1..3 against a raw trace.
class BruteNovelty {
    std::vector<State> trace_;

public:
    int novelty(const State &s) const {
        const std::size_t n = s.size();
        auto seen = [&](const std::vector<std::size_t> &idx) {
            for (const State &t : trace_) {
                bool all = true;
                for (std::size_t i : idx)
                    all = all && t[i] == s[i];
                if (all)
                    return true;
            }
            return false;
        };
        for (std::size_t i = 0; i < n; ++i)
            if (!seen({i}))
                return 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!seen({i, j}))
                    return 2;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k)
                    if (!seen({i, j, k}))
                        return 3;
        return 4;
    }
    void record(const State &s) { trace_.push_back(s); }

    // Distinct k-tuples over the trace.
    std::size_t distinct(std::size_t k) const {
        std::set<std::vector<std::pair<std::size_t, Position>>> tuples;
        for (const State &s : trace_) {
            const std::size_t n = s.size();
            for (std::size_t i = 0; i < n; ++i) {
                if (k == 1)
                    tuples.insert({{i, s[i]}});
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (k == 2)
                        tuples.insert({{i, s[i]}, {j, s[j]}});
                    for (std::size_t l = j + 1; l < n && k == 3; ++l)
                        tuples.insert({{i, s[i]}, {j, s[j]}, {l, s[l]}});
                }
            }
        }
        return tuples.size();
    }
};

// ---------------------------------------------------------------------------
// PDDL: a minimal s-expression reader and a STRIPS simulator for grounded,
// parameterless actions with negative preconditions.

struct Sexp {
    std::string atom;
    std::vector<Sexp> list;
    bool is_atom() const { return !atom.empty(); }
};

inline Sexp parse_sexp(const std::string &text) {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        if (c == ';') {
            while (i < text.size() && text[i] != '\n')
                ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(' || c == ')') {
            tokens.emplace_back(1, c);
            ++i;
        } else {
            std::size_t j = i;
            while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
                   text[j] != '(' && text[j] != ')')
                ++j;
            std::string t = text.substr(i, j - i);
            for (char &ch : t)
                ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            tokens.push_back(t);
            i = j;
        }
    }
    std::size_t pos = 0;
    auto rec = [&](auto &&self) -> Sexp {
        if (pos >= tokens.size())
            throw std::runtime_error("unexpected end of s-expression");
        std::string t = tokens[pos++];
        if (t == ")")
            throw std::runtime_error("unexpected ')'");
        if (t != "(")
            return Sexp{t, {}};
        Sexp node;
        while (pos < tokens.size() && tokens[pos] != ")")
            node.list.push_back(self(self));
        if (pos >= tokens.size())
            throw std::runtime_error("missing ')'");
        ++pos;
        return node;
    };
    Sexp root = rec(rec);
    if (pos != tokens.size())
        throw std::runtime_error("trailing tokens");
    return root;
}

inline std::string fact_text(const Sexp &s) {
    std::string out;
    for (const Sexp &e : s.list)
        out += (out.empty() ? "" : " ") + e.atom;
    return out;
}

struct PddlAction {
    std::string name;
    std::vector<std::string> pre, neg, add, del;
};

struct PddlTask {
    std::vector<PddlAction> actions;
    std::set<std::string> init;
    std::vector<std::string> goal;
};

inline void collect_literals(const Sexp &e, std::vector<std::string> &pos,
                             std::vector<std::string> &neg) {
    if (e.list.empty())
        return;
    const std::string &head = e.list.front().atom;
    if (head == "and") {
        for (std::size_t i = 1; i < e.list.size(); ++i)
            collect_literals(e.list[i], pos, neg);
    } else if (head == "not") {
        neg.push_back(fact_text(e.list.at(1)));
    } else {
        pos.push_back(fact_text(e));
    }
}

inline PddlTask read_pddl(const std::string &domain, const std::string &problem) {
    PddlTask task;
    Sexp d = parse_sexp(domain);
    if (d.list.empty() || d.list[0].atom != "define")
        throw std::runtime_error("domain must start with define");
    for (const Sexp &part : d.list) {
        if (part.list.empty() || part.list[0].atom != ":action")
            continue;
        PddlAction a;
        a.name = part.list.at(1).atom;
        for (std::size_t i = 2; i + 1 < part.list.size(); i += 2) {
            const std::string &key = part.list[i].atom;
            if (key == ":parameters") {
                if (!part.list[i + 1].list.empty())
                    throw std::runtime_error("expected grounded actions");
            } else if (key == ":precondition") {
                collect_literals(part.list[i + 1], a.pre, a.neg);
            } else if (key == ":effect") {
                collect_literals(part.list[i + 1], a.add, a.del);
            }
        }
        task.actions.push_back(std::move(a));
    }
    Sexp p = parse_sexp(problem);
    for (const Sexp &part : p.list) {
        if (part.list.empty())
            continue;
        if (part.list[0].atom == ":init") {
            for (std::size_t i = 1; i < part.list.size(); ++i)
                task.init.insert(fact_text(part.list[i]));
        } else if (part.list[0].atom == ":goal") {
            std::vector<std::string> neg;
            collect_literals(part.list.at(1), task.goal, neg);
            if (!neg.empty())
                throw std::runtime_error("negative goals unsupported");
        }
    }
    return task;
}

inline bool pddl_applicable(const PddlAction &a, const std::set<std::string> &s) {
    for (const auto &f : a.pre)
        if (!s.count(f))
            return false;
    for (const auto &f : a.neg)
        if (s.count(f))
            return false;
    return true;
}

// Delete effects first, then add effects.
inline std::set<std::string> pddl_apply(const PddlAction &a, std::set<std::string> s) {
    for (const auto &f : a.del)
        s.erase(f);
    for (const auto &f : a.add)
        s.insert(f);
    return s;
}

inline bool pddl_goal(const PddlTask &t, const std::set<std::string> &s) {
    for (const auto &f : t.goal)
        if (!s.count(f))
            return false;
    return true;
}

// Facts the exported model should hold in native state `s`.
inline std::set<std::string> pddl_facts(const Puzzle &p, const State &s) {
    std::set<std::string> out;
    auto loc = [](Position c) {
        return "c" + std::to_string(c.x) + "_" + std::to_string(c.y);
    };
    for (std::size_t i = 0; i < p.num_objects(); ++i) {
        out.insert("at o" + std::to_string(i) + " " + loc(s[i]));
        for (Position c : cells_of(p, i, s[i]))
            out.insert("occupied " + loc(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// SAS+ (translator format, version 3) reader and simulator.

struct SasOperator {
    std::string name;
    std::vector<std::pair<int, int>> prevail;
    // (var, pre or -1, post)
    std::vector<std::tuple<int, int, int>> effects;
};

struct SasTask {
    std::vector<int> domain;
    std::vector<std::vector<std::string>> atoms;
    std::vector<int> init;
    std::vector<std::pair<int, int>> goal;
    std::vector<SasOperator> ops;
};

inline SasTask read_sas(const std::string &text) {
    std::istringstream in(text);
    SasTask t;
    std::string line;
    auto next = [&]() {
        if (!std::getline(in, line))
            throw std::runtime_error("unexpected end of SAS+ text");
        return line;
    };
    auto expect = [&](const std::string &want) {
        if (next() != want)
            throw std::runtime_error("expected '" + want + "', got '" + line + "'");
    };
    auto number = [&]() { return std::stoi(next()); };
    expect("begin_version");
    if (number() != 3)
        throw std::runtime_error("unsupported SAS+ version");
    expect("end_version");
    expect("begin_metric");
    number();
    expect("end_metric");
    int vars = number();
    for (int v = 0; v < vars; ++v) {
        expect("begin_variable");
        next();
        if (number() != -1)
            throw std::runtime_error("axiom layers unsupported");
        int size = number();
        t.domain.push_back(size);
        t.atoms.emplace_back();
        for (int i = 0; i < size; ++i)
            t.atoms.back().push_back(next());
        expect("end_variable");
    }
    int mutexes = number();
    if (mutexes != 0)
        throw std::runtime_error("mutex groups unsupported");
    expect("begin_state");
    for (int v = 0; v < vars; ++v)
        t.init.push_back(number());
    expect("end_state");
    expect("begin_goal");
    int goals = number();
    for (int g = 0; g < goals; ++g) {
        std::istringstream l(next());
        int var, val;
        l >> var >> val;
        t.goal.push_back({var, val});
    }
    expect("end_goal");
    int ops = number();
    for (int o = 0; o < ops; ++o) {
        expect("begin_operator");
        SasOperator op;
        op.name = next();
        int prevail = number();
        for (int i = 0; i < prevail; ++i) {
            std::istringstream l(next());
            int var, val;
            l >> var >> val;
            op.prevail.push_back({var, val});
        }
        int effects = number();
        for (int i = 0; i < effects; ++i) {
            std::istringstream l(next());
            int conds, var, pre, post;
            l >> conds;
            if (conds != 0)
                throw std::runtime_error("conditional effects unsupported");
            l >> var >> pre >> post;
            op.effects.emplace_back(var, pre, post);
        }
        if (number() != 1)
            throw std::runtime_error("unit costs expected");
        expect("end_operator");
        t.ops.push_back(std::move(op));
    }
    if (number() != 0)
        throw std::runtime_error("axioms unsupported");
    return t;
}

inline bool sas_applicable(const SasOperator &op, const std::vector<int> &s) {
    for (auto [v, val] : op.prevail)
        if (s[v] != val)
            return false;
    for (auto [v, pre, post] : op.effects)
        if (pre != -1 && s[v] != pre)
            return false;
    return true;
}

inline std::vector<int> sas_apply(const SasOperator &op, std::vector<int> s) {
    for (auto [v, pre, post] : op.effects)
        s[v] = post;
    return s;
}

inline bool sas_goal(const SasTask &t, const std::vector<int> &s) {
    for (auto [v, val] : t.goal)
        if (s[v] != val)
            return false;
    return true;
}

// Reads "Atom at(o<i>, c<x>_<y>)" back into a position.
inline Position sas_atom_position(const std::string &atom) {
    auto c = atom.find(", c");
    auto us = atom.find('_', c);
    auto close = atom.find(')', us);
    if (c == std::string::npos || us == std::string::npos || close == std::string::npos)
        throw std::runtime_error("unexpected atom '" + atom + "'");
    return {std::stoi(atom.substr(c + 3, us - c - 3)), std::stoi(atom.substr(us + 1, close - us - 1))};
}

}  // namespace oracle
