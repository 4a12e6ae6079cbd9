#pragma once

#include "puzzle.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

/*
  Line-based puzzle format (.pwp):

    PUSHWORLD 1            optional header, must be the first directive
    SIZE w h               exactly once
    WALL x,y ...           absolute wall cells, any number of lines
    AGENTWALL x,y ...      cells that block only the agent
    OBJECT <id> x,y ...    absolute cells of one object in the initial state
    GOAL <id> x,y          goal anchor of a declared object
    # ...                  comment until end of line

  The object with id "A" is the agent. Anchors are the row-major minimum cell,
  so cells may be listed in any order.
*/
namespace pushworld {

class ParseError : public std::runtime_error {
    std::size_t line_;

public:
    ParseError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }
};

class InvalidPuzzleError : public std::runtime_error {
    std::vector<Violation> violations_;

    static std::string summarize(const std::vector<Violation> &v) {
        std::string out = "invalid puzzle:";
        for (const Violation &x : v)
            out += std::string(" [") + violation_name(x.kind) + "] " + x.message + ";";
        return out;
    }

public:
    explicit InvalidPuzzleError(std::vector<Violation> v)
        : std::runtime_error(summarize(v)), violations_(std::move(v)) {}
    const std::vector<Violation> &violations() const { return violations_; }
};

struct PuzzleInstance {
    Puzzle puzzle;
    State initial;
};

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline bool parse_int(std::string_view s, int &out) {
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

inline Position parse_cell(std::string_view tok, std::size_t line) {
    auto comma = tok.find(',');
    Position p;
    if (comma == std::string_view::npos || !parse_int(tok.substr(0, comma), p.x) ||
        !parse_int(tok.substr(comma + 1), p.y))
        throw ParseError(line, "expected cell 'x,y', got '" + std::string(tok) + "'");
    constexpr int kLimit = 1 << 20;
    if (p.x < -kLimit || p.x > kLimit || p.y < -kLimit || p.y > kLimit)
        throw ParseError(line, "cell '" + std::string(tok) + "' is out of range");
    return p;
}

inline bool valid_id(std::string_view id) {
    if (id.empty())
        return false;
    for (char c : id)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    return true;
}

inline std::string cell_text(Position p) {
    return std::to_string(p.x) + "," + std::to_string(p.y);
}

}  // namespace detail

// Parses without semantic validation. Syntax errors throw ParseError.
inline PuzzleInstance parse_puzzle_unchecked(std::string_view text, std::string name = {}) {
    using detail::parse_cell;
    std::optional<std::pair<int, int>> size;
    std::vector<Position> walls, agent_walls;
    struct RawObject {
        std::string id;
        std::vector<Position> cells;
    };
    std::vector<RawObject> objects;
    std::vector<std::tuple<std::string, Position, std::size_t>> goals;
    bool seen_directive = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto tokens = detail::split_tokens(line);
        if (tokens.empty()) {
            if (end == text.size())
                break;
            continue;
        }
        std::string_view kw = tokens[0];
        if (kw == "PUSHWORLD") {
            if (seen_directive)
                throw ParseError(line_no, "PUSHWORLD header must be the first directive");
            int version = 0;
            if (tokens.size() != 2 || !detail::parse_int(tokens[1], version))
                throw ParseError(line_no, "expected 'PUSHWORLD <version>'");
            if (version != 1)
                throw ParseError(line_no, "unsupported format version " + std::to_string(version));
        } else if (kw == "SIZE") {
            if (size)
                throw ParseError(line_no, "duplicate SIZE");
            int w = 0, h = 0;
            if (tokens.size() != 3 || !detail::parse_int(tokens[1], w) ||
                !detail::parse_int(tokens[2], h))
                throw ParseError(line_no, "expected 'SIZE <width> <height>'");
            if (w <= 0 || h <= 0 || w > 4096 || h > 4096)
                throw ParseError(line_no, "SIZE must be between 1 and 4096");
            size = {w, h};
        } else if (kw == "WALL" || kw == "AGENTWALL") {
            if (tokens.size() < 2)
                throw ParseError(line_no, std::string(kw) + " needs at least one cell");
            auto &dest = kw == "WALL" ? walls : agent_walls;
            for (std::size_t i = 1; i < tokens.size(); ++i)
                dest.push_back(parse_cell(tokens[i], line_no));
        } else if (kw == "OBJECT") {
            if (tokens.size() < 3)
                throw ParseError(line_no, "expected 'OBJECT <id> x,y ...'");
            std::string id(tokens[1]);
            if (!detail::valid_id(id))
                throw ParseError(line_no, "invalid object id '" + id + "'");
            for (const RawObject &o : objects)
                if (o.id == id)
                    throw ParseError(line_no, "duplicate object '" + id + "'");
            RawObject obj{id, {}};
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                Position c = parse_cell(tokens[i], line_no);
                if (std::find(obj.cells.begin(), obj.cells.end(), c) != obj.cells.end())
                    throw ParseError(line_no, "object '" + id + "' lists cell " +
                                                  detail::cell_text(c) + " twice");
                obj.cells.push_back(c);
            }
            objects.push_back(std::move(obj));
        } else if (kw == "GOAL") {
            if (tokens.size() != 3)
                throw ParseError(line_no, "expected 'GOAL <id> x,y'");
            goals.emplace_back(std::string(tokens[1]), parse_cell(tokens[2], line_no), line_no);
        } else {
            throw ParseError(line_no, "unknown directive '" + std::string(kw) + "'");
        }
        seen_directive = true;
        if (end == text.size())
            break;
    }

    if (!size)
        throw ParseError(line_no, "missing SIZE");
    auto agent_it = std::find_if(objects.begin(), objects.end(),
                                 [](const RawObject &o) { return o.id == "A"; });
    if (agent_it == objects.end())
        throw ParseError(line_no, "missing agent object 'A'");
    std::rotate(objects.begin(), agent_it, agent_it + 1);

    std::vector<ObjectSpec> specs;
    State initial;
    for (RawObject &o : objects) {
        auto [shape, anchor] = Shape::from_absolute(std::move(o.cells));
        specs.push_back({o.id, std::move(shape)});
        initial.positions.push_back(anchor);
    }
    std::vector<Goal> goal_list;
    for (auto &[id, anchor, line] : goals) {
        std::size_t idx = specs.size();
        for (std::size_t i = 0; i < specs.size(); ++i)
            if (specs[i].id == id)
                idx = i;
        if (idx == specs.size())
            throw ParseError(line, "unknown object in GOAL: '" + id + "'");
        for (const Goal &g : goal_list)
            if (g.object == idx)
                throw ParseError(line, "second GOAL for object '" + id + "'");
        goal_list.push_back({idx, anchor});
    }
    Puzzle puzzle(size->first, size->second, std::move(walls), std::move(agent_walls),
                  std::move(specs), std::move(goal_list), std::move(name));
    return {std::move(puzzle), std::move(initial)};
}

// Parses and validates. Semantic problems throw InvalidPuzzleError.
inline PuzzleInstance parse_puzzle(std::string_view text, std::string name = {}) {
    PuzzleInstance inst = parse_puzzle_unchecked(text, std::move(name));
    if (auto v = validate_puzzle(inst.puzzle, inst.initial); !v.empty())
        throw InvalidPuzzleError(std::move(v));
    return inst;
}

inline std::string serialize_puzzle(const Puzzle &puzzle, const State &state) {
    std::ostringstream out;
    auto cells_line = [&](const char *kw, const std::vector<Position> &cells) {
        if (cells.empty())
            return;
        out << kw;
        for (Position c : cells)
            out << ' ' << detail::cell_text(c);
        out << '\n';
    };
    out << "PUSHWORLD 1\n";
    out << "SIZE " << puzzle.width() << ' ' << puzzle.height() << '\n';
    cells_line("WALL", puzzle.walls());
    cells_line("AGENTWALL", puzzle.agent_walls());
    for (std::size_t i = 0; i < puzzle.num_objects(); ++i) {
        const ObjectSpec &o = puzzle.object(i);
        out << "OBJECT " << o.id;
        for (Position c : o.shape.placed_at(state[i]))
            out << ' ' << detail::cell_text(c);
        out << '\n';
    }
    for (const Goal &g : puzzle.goals())
        out << "GOAL " << puzzle.object(g.object).id << ' ' << detail::cell_text(g.anchor)
            << '\n';
    return out.str();
}

inline PuzzleInstance load_puzzle(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_puzzle(buf.str(), path.stem().string());
}

inline void save_puzzle(const std::filesystem::path &path, const Puzzle &puzzle,
                        const State &state) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << serialize_puzzle(puzzle, state);
}

}  // namespace pushworld
