// Second, deliberately naive implementation of the structural level metrics,
// computed straight from the map text. It re-parses the glyph grid itself and
// finds the spawn-to-exit distance by iterating a Bellman-Ford style
// relaxation to a fixpoint, so it shares no code with the library's
// BFS-based implementation.
#pragma once

#include <array>
#include <climits>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

struct BruteMetrics {
    long long walls = 0;
    long long open_areas = 0;
    long long choke_points = 0;
    long long dead_ends = 0;
    long long shortest_path = -1;
    long long potions = 0;
    long long treasures = 0;
    long long traps = 0;
    long long portals = 0;
    long long monsters = 0;
    std::array<long long, 5> monsters_by_kind{};  // g, w, b, o, m
};

inline BruteMetrics brute_force_metrics(const std::string& text) {
    std::vector<std::string> rows;
    std::string line;
    for (char c : text) {
        if (c == '\n') {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            rows.push_back(line);
            line.clear();
        } else {
            line += c;
        }
    }
    if (!line.empty()) rows.push_back(line);
    while (!rows.empty() && rows.back().empty()) rows.pop_back();
    if (rows.size() != 20) throw std::runtime_error("fixture map must have 20 rows");
    for (const std::string& r : rows) {
        if (r.size() != 10) throw std::runtime_error("fixture map rows must be 10 wide");
    }

    BruteMetrics m;
    int spawn_r = -1, spawn_c = -1, exit_r = -1, exit_c = -1;
    auto wall = [&](int r, int c) { return rows[std::size_t(r)][std::size_t(c)] == '#'; };

    for (int r = 0; r < 20; ++r) {
        for (int c = 0; c < 10; ++c) {
            char g = rows[std::size_t(r)][std::size_t(c)];
            switch (g) {
            case '#': ++m.walls; break;
            case 'P': ++m.potions; break;
            case 'T': ++m.treasures; break;
            case '^': ++m.traps; break;
            case '1':
            case '2':
            case '3': ++m.portals; break;
            case 'g': ++m.monsters_by_kind[0]; break;
            case 'w': ++m.monsters_by_kind[1]; break;
            case 'b': ++m.monsters_by_kind[2]; break;
            case 'o': ++m.monsters_by_kind[3]; break;
            case 'm': ++m.monsters_by_kind[4]; break;
            case 'H':
                spawn_r = r;
                spawn_c = c;
                break;
            case 'E':
                exit_r = r;
                exit_c = c;
                break;
            default: break;
            }
            if (g == '#') continue;
            int passable = 0;
            if (r > 0 && !wall(r - 1, c)) ++passable;
            if (r < 19 && !wall(r + 1, c)) ++passable;
            if (c > 0 && !wall(r, c - 1)) ++passable;
            if (c < 9 && !wall(r, c + 1)) ++passable;
            if (passable == 4) ++m.open_areas;
            if (passable == 2) ++m.choke_points;
            if (passable == 1) ++m.dead_ends;
        }
    }
    for (long long k : m.monsters_by_kind) m.monsters += k;
    if (spawn_r < 0 || exit_r < 0) throw std::runtime_error("fixture map needs H and E");

    // Distance fixpoint: start from the spawn at 0, relax every passable
    // tile against its neighbours until nothing changes.
    std::array<std::array<int, 10>, 20> dist{};
    for (auto& row : dist) row.fill(INT_MAX);
    dist[std::size_t(spawn_r)][std::size_t(spawn_c)] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < 20; ++r) {
            for (int c = 0; c < 10; ++c) {
                if (wall(r, c)) continue;
                int best = dist[std::size_t(r)][std::size_t(c)];
                auto relax = [&](int rr, int cc) {
                    if (rr < 0 || rr > 19 || cc < 0 || cc > 9 || wall(rr, cc)) return;
                    int d = dist[std::size_t(rr)][std::size_t(cc)];
                    if (d != INT_MAX && d + 1 < best) best = d + 1;
                };
                relax(r - 1, c);
                relax(r + 1, c);
                relax(r, c - 1);
                relax(r, c + 1);
                if (best < dist[std::size_t(r)][std::size_t(c)]) {
                    dist[std::size_t(r)][std::size_t(c)] = best;
                    changed = true;
                }
            }
        }
    }
    int d = dist[std::size_t(exit_r)][std::size_t(exit_c)];
    m.shortest_path = d == INT_MAX ? -1 : d;
    return m;
}

}  // namespace oracle
