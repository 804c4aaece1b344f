#pragma once
// Fixed-size dungeon grid primitives. Every level is 10 columns by 20 rows.

#include <array>
#include <cassert>
#include <cstdint>
#include <cstdlib>

namespace md2 {

inline constexpr int kMapWidth = 10;
inline constexpr int kMapHeight = 20;
inline constexpr int kMapTiles = kMapWidth * kMapHeight;

struct Coord {
    std::int8_t row = 0;  // 0..19, grows southward
    std::int8_t col = 0;  // 0..9, grows eastward

    friend bool operator==(Coord a, Coord b) { return a.row == b.row && a.col == b.col; }
    friend bool operator!=(Coord a, Coord b) { return !(a == b); }
};

inline bool in_bounds(Coord c) {
    return c.row >= 0 && c.row < kMapHeight && c.col >= 0 && c.col < kMapWidth;
}

// Row-major tile index; also the canonical tie-break order ("row-major order").
inline int tile_index(Coord c) {
    assert(in_bounds(c));
    return int(c.row) * kMapWidth + int(c.col);
}

inline Coord coord_of(int index) {
    assert(index >= 0 && index < kMapTiles);
    return Coord{std::int8_t(index / kMapWidth), std::int8_t(index % kMapWidth)};
}

inline bool row_major_less(Coord a, Coord b) { return tile_index(a) < tile_index(b); }

inline int manhattan(Coord a, Coord b) {
    return std::abs(int(a.row) - int(b.row)) + std::abs(int(a.col) - int(b.col));
}

// Fixed order N, S, E, W: this is also the tie-break order for monster steps.
enum class Direction : std::uint8_t { North = 0, South = 1, East = 2, West = 3 };

inline constexpr std::array<Direction, 4> kDirections = {
    Direction::North, Direction::South, Direction::East, Direction::West};

inline Coord neighbor(Coord c, Direction d) {
    switch (d) {
    case Direction::North: return Coord{std::int8_t(c.row - 1), c.col};
    case Direction::South: return Coord{std::int8_t(c.row + 1), c.col};
    case Direction::East: return Coord{c.row, std::int8_t(c.col + 1)};
    case Direction::West: return Coord{c.row, std::int8_t(c.col - 1)};
    }
    return c;
}

inline char direction_glyph(Direction d) {
    switch (d) {
    case Direction::North: return 'N';
    case Direction::South: return 'S';
    case Direction::East: return 'E';
    case Direction::West: return 'W';
    }
    return '?';
}

template <typename T>
class Grid {
public:
    T& at(Coord c) { return cells_[tile_index(c)]; }
    const T& at(Coord c) const { return cells_[tile_index(c)]; }
    T& at(int index) { return cells_[index]; }
    const T& at(int index) const { return cells_[index]; }

    void fill(const T& v) { cells_.fill(v); }
    auto begin() { return cells_.begin(); }
    auto end() { return cells_.end(); }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

    friend bool operator==(const Grid& a, const Grid& b) { return a.cells_ == b.cells_; }

private:
    std::array<T, kMapTiles> cells_{};
};

}  // namespace md2
