#pragma once
// Level maps: ASCII parsing, validation, BFS distance fields, and the
// structural metrics used to correlate persona behavior with map features.
//
// Map text is exactly 20 lines of 10 glyphs:
//   '#' wall        '.' floor       'H' hero spawn   'E' exit
//   'P' potion      'T' treasure    '^' trap         '1','2','3' portal pairs
//   'g' goblin      'w' wizard      'b' blob         'o' ogre    'm' minitaur
// Monsters and the hero stand on implicit floor. Each portal digit must appear
// exactly twice; there is exactly one hero spawn and one exit, and the exit
// must be reachable from the spawn through non-wall tiles.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "md2/grid.hpp"

namespace md2 {

enum class TileContent : std::uint8_t {
    None = 0,
    Potion,
    Treasure,
    Trap,
    Portal1,
    Portal2,
    Portal3,
    Exit,
};

inline bool is_portal(TileContent c) {
    return c == TileContent::Portal1 || c == TileContent::Portal2 || c == TileContent::Portal3;
}

enum class MonsterKind : std::uint8_t { Goblin = 0, Wizard, Blob, Ogre, Minitaur };
inline constexpr int kMonsterKinds = 5;

struct MonsterSpawn {
    MonsterKind kind;
    Coord pos;
};

class MapError : public std::runtime_error {
public:
    enum class Kind {
        BadDimensions,
        UnknownGlyph,
        HeroCount,
        ExitCount,
        UnpairedPortal,
        UnreachableExit,
    };

    MapError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// BFS over non-wall tiles, 4-connected. Unreachable tiles get -1.
inline Grid<std::int16_t> bfs_distances(const Grid<bool>& walls, Coord src) {
    Grid<std::int16_t> dist;
    dist.fill(-1);
    if (walls.at(src)) return dist;
    std::vector<int> frontier{tile_index(src)};
    dist.at(src) = 0;
    std::vector<int> next;
    std::int16_t d = 0;
    while (!frontier.empty()) {
        ++d;
        next.clear();
        for (int idx : frontier) {
            Coord c = coord_of(idx);
            for (Direction dir : kDirections) {
                Coord n = neighbor(c, dir);
                if (!in_bounds(n) || walls.at(n) || dist.at(n) >= 0) continue;
                dist.at(n) = d;
                next.push_back(tile_index(n));
            }
        }
        frontier.swap(next);
    }
    return dist;
}

class LevelMap {
public:
    std::string name;
    Grid<bool> walls;
    Grid<TileContent> content;  // static objects as authored
    Coord hero_spawn{};
    Coord exit_pos{};
    std::vector<MonsterSpawn> monsters;  // row-major authoring order

    int potion_count = 0;
    int treasure_count = 0;
    int trap_count = 0;
    int portal_tile_count = 0;
    int monster_count = 0;

    // Distance-to-exit field and its maximum over tiles reachable from the
    // exit; both are cached because exit proximity is evaluated per search node.
    Grid<std::int16_t> exit_distance;
    int max_exit_distance = 0;

    Coord portal_exit(Coord from) const {
        TileContent c = content.at(from);
        for (int i = 0; i < kMapTiles; ++i) {
            if (content.at(i) == c && coord_of(i) != from) return coord_of(i);
        }
        return from;  // unreachable for validated maps
    }

    int interactive_object_count() const { return potion_count + treasure_count + monster_count; }

    void finalize() {
        exit_distance = bfs_distances(walls, exit_pos);
        max_exit_distance = 0;
        for (int i = 0; i < kMapTiles; ++i) {
            if (exit_distance.at(i) > max_exit_distance) max_exit_distance = exit_distance.at(i);
        }
    }
};

inline LevelMap parse_map(std::string_view text, std::string name = "map") {
    LevelMap map;
    map.name = std::move(name);

    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    if (int(lines.size()) != kMapHeight) {
        throw MapError(MapError::Kind::BadDimensions,
                       map.name + ": expected " + std::to_string(kMapHeight) + " rows, got " +
                           std::to_string(lines.size()));
    }

    int heroes = 0, exits = 0;
    int portal_tiles[3] = {0, 0, 0};
    for (int r = 0; r < kMapHeight; ++r) {
        std::string_view line = lines[r];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (int(line.size()) != kMapWidth) {
            throw MapError(MapError::Kind::BadDimensions,
                           map.name + ": row " + std::to_string(r) + " has " +
                               std::to_string(line.size()) + " columns, expected " +
                               std::to_string(kMapWidth));
        }
        for (int c = 0; c < kMapWidth; ++c) {
            Coord at{std::int8_t(r), std::int8_t(c)};
            char ch = line[c];
            switch (ch) {
            case '#': map.walls.at(at) = true; break;
            case '.': break;
            case 'H':
                ++heroes;
                map.hero_spawn = at;
                break;
            case 'E':
                ++exits;
                map.exit_pos = at;
                map.content.at(at) = TileContent::Exit;
                break;
            case 'P':
                ++map.potion_count;
                map.content.at(at) = TileContent::Potion;
                break;
            case 'T':
                ++map.treasure_count;
                map.content.at(at) = TileContent::Treasure;
                break;
            case '^':
                ++map.trap_count;
                map.content.at(at) = TileContent::Trap;
                break;
            case '1':
            case '2':
            case '3': {
                int id = ch - '1';
                ++portal_tiles[id];
                map.content.at(at) =
                    TileContent(std::uint8_t(TileContent::Portal1) + std::uint8_t(id));
                break;
            }
            case 'g': map.monsters.push_back({MonsterKind::Goblin, at}); break;
            case 'w': map.monsters.push_back({MonsterKind::Wizard, at}); break;
            case 'b': map.monsters.push_back({MonsterKind::Blob, at}); break;
            case 'o': map.monsters.push_back({MonsterKind::Ogre, at}); break;
            case 'm': map.monsters.push_back({MonsterKind::Minitaur, at}); break;
            default:
                throw MapError(MapError::Kind::UnknownGlyph,
                               map.name + ": unknown glyph '" + std::string(1, ch) + "' at row " +
                                   std::to_string(r) + " col " + std::to_string(c));
            }
        }
    }

    if (heroes != 1) {
        throw MapError(MapError::Kind::HeroCount,
                       map.name + ": expected exactly 1 hero spawn, got " + std::to_string(heroes));
    }
    if (exits != 1) {
        throw MapError(MapError::Kind::ExitCount,
                       map.name + ": expected exactly 1 exit, got " + std::to_string(exits));
    }
    for (int id = 0; id < 3; ++id) {
        if (portal_tiles[id] != 0 && portal_tiles[id] != 2) {
            throw MapError(MapError::Kind::UnpairedPortal,
                           map.name + ": portal '" + std::string(1, char('1' + id)) +
                               "' appears " + std::to_string(portal_tiles[id]) +
                               " times, expected 2");
        }
        map.portal_tile_count += portal_tiles[id];
    }
    map.monster_count = int(map.monsters.size());

    Grid<std::int16_t> from_spawn = bfs_distances(map.walls, map.hero_spawn);
    if (from_spawn.at(map.exit_pos) < 0) {
        throw MapError(MapError::Kind::UnreachableExit,
                       map.name + ": exit is not reachable from the hero spawn");
    }

    map.finalize();
    return map;
}

inline std::string format_map(const LevelMap& map) {
    std::string out;
    out.reserve((kMapWidth + 1) * kMapHeight);
    Grid<char> glyphs;
    for (int i = 0; i < kMapTiles; ++i) {
        char ch = '.';
        if (map.walls.at(i)) {
            ch = '#';
        } else {
            switch (map.content.at(i)) {
            case TileContent::None: ch = '.'; break;
            case TileContent::Potion: ch = 'P'; break;
            case TileContent::Treasure: ch = 'T'; break;
            case TileContent::Trap: ch = '^'; break;
            case TileContent::Portal1: ch = '1'; break;
            case TileContent::Portal2: ch = '2'; break;
            case TileContent::Portal3: ch = '3'; break;
            case TileContent::Exit: ch = 'E'; break;
            }
        }
        glyphs.at(i) = ch;
    }
    static const char kMonsterGlyphs[kMonsterKinds] = {'g', 'w', 'b', 'o', 'm'};
    for (const MonsterSpawn& m : map.monsters) glyphs.at(m.pos) = kMonsterGlyphs[int(m.kind)];
    glyphs.at(map.hero_spawn) = 'H';
    for (int r = 0; r < kMapHeight; ++r) {
        for (int c = 0; c < kMapWidth; ++c) out.push_back(glyphs.at(r * kMapWidth + c));
        out.push_back('\n');
    }
    return out;
}

// Structural features of a level, independent of any playthrough.
struct LevelMetrics {
    int walls = 0;
    int open_areas = 0;    // passable tiles whose 4 in-grid neighbors are all passable
    int choke_points = 0;  // passable tiles with exactly 2 passable neighbors
    int dead_ends = 0;     // passable tiles with exactly 1 passable neighbor
    int shortest_path = 0; // BFS spawn -> exit
    int potions = 0;
    int treasures = 0;
    int traps = 0;
    int portals = 0;  // portal tiles
    int monsters = 0;
    int monsters_by_kind[kMonsterKinds] = {0, 0, 0, 0, 0};

    std::vector<std::pair<std::string, double>> named_values() const {
        return {
            {"walls", double(walls)},
            {"open_areas", double(open_areas)},
            {"choke_points", double(choke_points)},
            {"dead_ends", double(dead_ends)},
            {"shortest_path", double(shortest_path)},
            {"potions", double(potions)},
            {"treasures", double(treasures)},
            {"traps", double(traps)},
            {"portals", double(portals)},
            {"monsters", double(monsters)},
        };
    }
};

inline LevelMetrics structural_metrics(const LevelMap& map) {
    LevelMetrics m;
    for (int i = 0; i < kMapTiles; ++i) {
        if (map.walls.at(i)) {
            ++m.walls;
            continue;
        }
        Coord c = coord_of(i);
        int passable_neighbors = 0;
        for (Direction d : kDirections) {
            Coord n = neighbor(c, d);
            if (in_bounds(n) && !map.walls.at(n)) ++passable_neighbors;
        }
        if (passable_neighbors == 4) ++m.open_areas;  // border tiles can never reach 4
        if (passable_neighbors == 2) ++m.choke_points;
        if (passable_neighbors == 1) ++m.dead_ends;
    }
    Grid<std::int16_t> from_spawn = bfs_distances(map.walls, map.hero_spawn);
    m.shortest_path = from_spawn.at(map.exit_pos);
    m.potions = map.potion_count;
    m.treasures = map.treasure_count;
    m.traps = map.trap_count;
    m.portals = map.portal_tile_count;
    m.monsters = map.monster_count;
    for (const MonsterSpawn& s : map.monsters) ++m.monsters_by_kind[int(s.kind)];
    return m;
}

}  // namespace md2
