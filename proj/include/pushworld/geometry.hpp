#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pushworld {

// Grid coordinate. x grows rightward, y grows downward. Ordering is row-major
// (y first, then x), which is the order used for anchors and all iteration.
struct Position {
    int x = 0;
    int y = 0;

    friend constexpr bool operator==(Position, Position) = default;
    friend constexpr std::strong_ordering operator<=>(Position a, Position b) {
        if (auto c = a.y <=> b.y; c != 0)
            return c;
        return a.x <=> b.x;
    }
    friend constexpr Position operator+(Position a, Position b) {
        return {a.x + b.x, a.y + b.y};
    }
    friend constexpr Position operator-(Position a, Position b) {
        return {a.x - b.x, a.y - b.y};
    }
};

struct PositionHash {
    std::size_t operator()(Position p) const noexcept {
        auto key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
                   static_cast<std::uint32_t>(p.y);
        return std::hash<std::uint64_t>{}(key);
    }
};

enum class Action : std::uint8_t { Left = 0, Right = 1, Up = 2, Down = 3 };

inline constexpr std::array<Action, 4> kAllActions = {
    Action::Left, Action::Right, Action::Up, Action::Down};

constexpr Position displacement(Action a) {
    switch (a) {
    case Action::Left:
        return {-1, 0};
    case Action::Right:
        return {1, 0};
    case Action::Up:
        return {0, -1};
    case Action::Down:
        return {0, 1};
    }
    return {0, 0};
}

constexpr char action_letter(Action a) {
    constexpr std::array<char, 4> letters = {'L', 'R', 'U', 'D'};
    return letters[static_cast<std::size_t>(a)];
}

constexpr const char *action_name(Action a) {
    constexpr std::array<const char *, 4> names = {"left", "right", "up", "down"};
    return names[static_cast<std::size_t>(a)];
}

inline std::optional<Action> action_from_letter(char c) {
    switch (c) {
    case 'L':
    case 'l':
        return Action::Left;
    case 'R':
    case 'r':
        return Action::Right;
    case 'U':
    case 'u':
        return Action::Up;
    case 'D':
    case 'd':
        return Action::Down;
    default:
        return std::nullopt;
    }
}

// Returns the action whose displacement is `delta`, if `delta` is a unit step.
inline std::optional<Action> action_from_delta(Position delta) {
    for (Action a : kAllActions)
        if (displacement(a) == delta)
            return a;
    return std::nullopt;
}

/*
  Rigid object shape: the set of occupied cells relative to the anchor. The
  anchor is the row-major minimum occupied cell, so a normalized non-empty
  shape always has (0,0) as its first cell. Cells are kept sorted.
*/
class Shape {
    std::vector<Position> cells_;

public:
    Shape() = default;

    // Builds a shape from offsets and re-anchors it so that the row-major
    // minimum offset becomes (0,0).
    explicit Shape(std::vector<Position> offsets) : cells_(std::move(offsets)) {
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
        if (!cells_.empty()) {
            Position base = cells_.front();
            for (Position &c : cells_)
                c = c - base;
        }
    }

    // Splits absolute cells into a normalized shape and the anchor position.
    static std::pair<Shape, Position> from_absolute(std::vector<Position> cells) {
        if (cells.empty())
            return {Shape{}, Position{}};
        Position anchor = *std::min_element(cells.begin(), cells.end());
        for (Position &c : cells)
            c = c - anchor;
        return {Shape(std::move(cells)), anchor};
    }

    static Shape unit() { return Shape({{0, 0}}); }

    // Axis-aligned rectangle of `w` columns and `h` rows.
    static Shape rectangle(int w, int h) {
        std::vector<Position> cells;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                cells.push_back({x, y});
        return Shape(std::move(cells));
    }

    const std::vector<Position> &cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    std::vector<Position> placed_at(Position anchor) const {
        std::vector<Position> out;
        out.reserve(cells_.size());
        for (Position c : cells_)
            out.push_back(c + anchor);
        return out;
    }

    friend bool operator==(const Shape &, const Shape &) = default;
    friend auto operator<=>(const Shape &a, const Shape &b) {
        return std::lexicographical_compare_three_way(
            a.cells_.begin(), a.cells_.end(), b.cells_.begin(), b.cells_.end());
    }
};

}  // namespace pushworld
