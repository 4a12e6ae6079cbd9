#pragma once

#include "puzzle.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace pushworld {

inline constexpr int kMaxNovelty = 3;
// Returned when every tuple up to kMaxNovelty has been seen before.
inline constexpr int kNotNovel = kMaxNovelty + 1;

/*
  Records which (object, position) atoms, pairs and triples have occurred in
  any recorded state. Each atom is packed as object * cells + cell, and tuples
  keep their atoms in ascending object order.
*/
class NoveltyArchive {
    std::size_t width_;
    std::size_t cells_;
    std::size_t objects_;
    std::vector<std::uint8_t> singles_;
    std::unordered_set<std::uint64_t> pairs_;

    struct TripleHash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t> &k) const noexcept {
            return std::hash<std::uint64_t>{}(k.first * 0x9e3779b97f4a7c15ULL ^ k.second);
        }
    };
    std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, TripleHash> triples_;
    std::vector<std::uint64_t> atoms_;

    void atomize(const State &state) {
        if (state.size() != objects_)
            throw std::invalid_argument("state does not match the archive's object count");
        atoms_.resize(objects_);
        for (std::size_t i = 0; i < objects_; ++i) {
            Position p = state[i];
            if (p.x < 0 || p.y < 0 || static_cast<std::size_t>(p.x) >= width_ ||
                static_cast<std::size_t>(p.y) >= cells_ / width_)
                throw std::invalid_argument("state position outside the grid");
            atoms_[i] = i * cells_ + static_cast<std::size_t>(p.y) * width_ +
                        static_cast<std::size_t>(p.x);
        }
    }

    std::uint64_t pair_key(std::uint64_t a, std::uint64_t b) const {
        return a * (objects_ * cells_) + b;
    }

public:
    NoveltyArchive(std::size_t width, std::size_t height, std::size_t objects)
        : width_(width), cells_(width * height), objects_(objects),
          singles_(width * height * objects, 0) {}

    explicit NoveltyArchive(const Puzzle &puzzle)
        : NoveltyArchive(static_cast<std::size_t>(puzzle.width()),
                         static_cast<std::size_t>(puzzle.height()), puzzle.num_objects()) {}

    // Smallest tuple size with an unseen tuple, or kNotNovel.
    int novelty(const State &state) {
        atomize(state);
        for (std::uint64_t a : atoms_)
            if (!singles_[a])
                return 1;
        for (std::size_t i = 0; i < objects_; ++i)
            for (std::size_t j = i + 1; j < objects_; ++j)
                if (!pairs_.count(pair_key(atoms_[i], atoms_[j])))
                    return 2;
        for (std::size_t i = 0; i < objects_; ++i)
            for (std::size_t j = i + 1; j < objects_; ++j)
                for (std::size_t k = j + 1; k < objects_; ++k)
                    if (!triples_.count({pair_key(atoms_[i], atoms_[j]), atoms_[k]}))
                        return 3;
        return kNotNovel;
    }

    void record(const State &state) {
        atomize(state);
        for (std::uint64_t a : atoms_)
            singles_[a] = 1;
        for (std::size_t i = 0; i < objects_; ++i)
            for (std::size_t j = i + 1; j < objects_; ++j) {
                pairs_.insert(pair_key(atoms_[i], atoms_[j]));
                for (std::size_t k = j + 1; k < objects_; ++k)
                    triples_.insert({pair_key(atoms_[i], atoms_[j]), atoms_[k]});
            }
    }

    // novelty() followed by record(), the order the search uses.
    int evaluate_and_record(const State &state) {
        int w = novelty(state);
        record(state);
        return w;
    }

    std::size_t single_count() const {
        std::size_t n = 0;
        for (auto s : singles_)
            n += s;
        return n;
    }
    std::size_t pair_count() const { return pairs_.size(); }
    std::size_t triple_count() const { return triples_.size(); }
};

}  // namespace pushworld
