#pragma once

#include "puzzle.hpp"

#include <cctype>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pushworld {

/*
  Text rendering, three characters per cell. The middle character is '#' for
  a wall, the first letter of an object's id, '+' for an agent-only wall and
  '.' otherwise. Cells covered by some goal placement are bracketed.
*/
inline std::string render(const Puzzle &puzzle, const State &state) {
    const int w = puzzle.width(), h = puzzle.height();
    std::vector<char> grid(puzzle.cell_count(), '.');
    std::vector<std::uint8_t> goal(puzzle.cell_count(), 0);
    for (Position p : puzzle.agent_walls())
        if (puzzle.in_bounds(p))
            grid[puzzle.cell_index(p)] = '+';
    for (Position p : puzzle.walls())
        if (puzzle.in_bounds(p))
            grid[puzzle.cell_index(p)] = '#';
    for (const Goal &g : puzzle.goals())
        for (Position c : puzzle.shape(g.object).placed_at(g.anchor))
            if (puzzle.in_bounds(c))
                goal[puzzle.cell_index(c)] = 1;
    for (std::size_t i = 0; i < puzzle.num_objects(); ++i)
        for (Position c : puzzle.shape(i).placed_at(state[i]))
            if (puzzle.in_bounds(c))
                grid[puzzle.cell_index(c)] = puzzle.object(i).id.front();
    std::string out;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t i = puzzle.cell_index({x, y});
            out += goal[i] ? '[' : ' ';
            out += grid[i];
            out += goal[i] ? ']' : ' ';
        }
        out += '\n';
    }
    return out;
}

enum class PlayCommand { Move, Undo, Reset, Quit };

struct PlayInput {
    PlayCommand command;
    Action action = Action::Left;
};

/*
  Reads the next command: L/R/U/D, w/a/s/d or arrow-key escape sequences to
  move, z to undo, x to reset, q to quit. Other characters are skipped.
  Returns nullopt at end of input.
*/
inline std::optional<PlayInput> read_command(std::istream &in) {
    for (int c; (c = in.get()) != EOF;) {
        switch (c) {
        case 'L': case 'a': return PlayInput{PlayCommand::Move, Action::Left};
        case 'R': case 'd': return PlayInput{PlayCommand::Move, Action::Right};
        case 'U': case 'w': return PlayInput{PlayCommand::Move, Action::Up};
        case 'D': case 's': return PlayInput{PlayCommand::Move, Action::Down};
        case 'z': case 'Z': return PlayInput{PlayCommand::Undo};
        case 'x': case 'X': return PlayInput{PlayCommand::Reset};
        case 'q': case 'Q': return PlayInput{PlayCommand::Quit};
        case 0x1b:
            if (in.peek() == '[') {
                in.get();
                switch (in.get()) {
                case 'A': return PlayInput{PlayCommand::Move, Action::Up};
                case 'B': return PlayInput{PlayCommand::Move, Action::Down};
                case 'C': return PlayInput{PlayCommand::Move, Action::Right};
                case 'D': return PlayInput{PlayCommand::Move, Action::Left};
                default: break;
                }
            }
            break;
        default:
            break;
        }
    }
    return std::nullopt;
}

struct PlayOutcome {
    bool solved = false;
    std::vector<Action> moves;  // moves in effect at the end, after undos
};

/*
  Interactive loop over arbitrary streams. The board is drawn after every
  command. Undo replays the remaining history from the initial state.
*/
inline PlayOutcome play(const Puzzle &puzzle, const State &initial, std::istream &in,
                        std::ostream &out) {
    PlayOutcome result;
    State state = initial;
    auto draw = [&] {
        out << render(puzzle, state) << "moves: " << result.moves.size() << "\n";
    };
    out << "L/R/U/D, wasd or arrows to move; z undo, x reset, q quit\n";
    draw();
    if (is_goal(puzzle, state)) {
        out << "*** Puzzle solved in 0 moves! ***\n";
        result.solved = true;
        return result;
    }
    while (auto cmd = read_command(in)) {
        switch (cmd->command) {
        case PlayCommand::Quit:
            out << "bye\n";
            return result;
        case PlayCommand::Reset:
            result.moves.clear();
            state = initial;
            break;
        case PlayCommand::Undo:
            if (!result.moves.empty()) {
                result.moves.pop_back();
                state = replay(puzzle, initial, result.moves);
            }
            break;
        case PlayCommand::Move: {
            State next = apply_action(puzzle, state, cmd->action);
            if (next != state) {
                result.moves.push_back(cmd->action);
                state = std::move(next);
            }
            break;
        }
        }
        draw();
        if (is_goal(puzzle, state)) {
            out << "*** Puzzle solved in " << result.moves.size() << " moves! ***\n";
            result.solved = true;
            return result;
        }
    }
    return result;
}

}  // namespace pushworld
