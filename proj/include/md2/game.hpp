#pragma once
// Deterministic dungeon rules engine. A full turn is one hero action followed
// by every living NPC acting in its original spawn order (row-major authoring
// order, kept stable even after NPCs move or die).
//
// Combat is resolved on entry: when a character steps into a tile held by a
// hostile character, both deal their collision damage simultaneously, and the
// attacker completes the move only if the defender dies. Collision damage:
// hero 1, goblin 1, wizard 0, blob = its level, ogre 2 (to anything, other
// ogres included), minitaur 1. Minitaurs never die; any damage knocks them out
// for 3 rounds, during which the hero may walk through them.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "md2/grid.hpp"
#include "md2/map.hpp"

namespace md2 {

inline constexpr int kHeroMaxHp = 10;
inline constexpr int kHeroCollisionDamage = 1;
inline constexpr int kJavelinDamage = 1;
inline constexpr int kWizardRange = 5;
inline constexpr int kKnockoutRounds = 3;
inline constexpr int kMaxBlobLevel = 3;
inline constexpr int kDefaultMaxTurns = 1000;

enum class Status : std::uint8_t { Running = 0, Won, Dead, TurnCapped };

inline const char* status_name(Status s) {
    switch (s) {
    case Status::Running: return "running";
    case Status::Won: return "won";
    case Status::Dead: return "dead";
    case Status::TurnCapped: return "turn-capped";
    }
    return "?";
}

// Hero-attributable playthrough events. Steps count move actions (bump attacks
// included: the action is spent even when the hero does not change tiles).
// Slain/knockout counts credit only deaths and knockouts caused by the hero's
// own damage; traps and monster in-fighting do not credit the hero.
struct EventCounters {
    std::uint16_t steps = 0;
    std::uint16_t potions_drunk = 0;
    std::uint16_t treasures_opened = 0;
    std::uint16_t minitaur_knockouts = 0;
    std::uint16_t monsters_slain = 0;
    std::uint16_t javelins_thrown = 0;
    std::uint16_t teleports_used = 0;
    std::uint16_t traps_sprung = 0;
};

struct Npc {
    MonsterKind kind;
    Coord pos;
    std::int8_t hp;             // blob level == hp at all times
    std::int8_t knockout_left = 0;  // minitaur only; > 0 means knocked out
    bool alive = true;

    bool knocked_out() const { return knockout_left > 0; }

    int collision_damage() const {
        switch (kind) {
        case MonsterKind::Goblin: return 1;
        case MonsterKind::Wizard: return 0;
        case MonsterKind::Blob: return hp;
        case MonsterKind::Ogre: return 2;
        case MonsterKind::Minitaur: return 1;
        }
        return 0;
    }
};

inline int initial_monster_hp(MonsterKind kind) {
    switch (kind) {
    case MonsterKind::Goblin: return 1;
    case MonsterKind::Wizard: return 1;
    case MonsterKind::Blob: return 1;  // maps spawn level-1 blobs
    case MonsterKind::Ogre: return 2;
    case MonsterKind::Minitaur: return 1;  // placeholder; minitaurs cannot die
    }
    return 1;
}

struct HeroAction {
    enum class Kind : std::uint8_t { Move = 0, Throw = 1 };
    Kind kind = Kind::Move;
    Direction dir = Direction::North;  // Move only
    std::uint8_t target = 0;           // Throw only: index into npcs()

    friend bool operator==(HeroAction a, HeroAction b) {
        if (a.kind != b.kind) return false;
        return a.kind == Kind::Move ? a.dir == b.dir : a.target == b.target;
    }
};

inline std::string action_text(HeroAction a) {
    if (a.kind == HeroAction::Kind::Move) return std::string(1, direction_glyph(a.dir));
    return "J" + std::to_string(int(a.target));
}

class IllegalAction : public std::logic_error {
public:
    explicit IllegalAction(const std::string& msg) : std::logic_error(msg) {}
};

// Symmetric tile-center line of sight: only wall tiles block, endpoints are
// never checked (characters always stand on floor). Symmetry comes from
// tracing every line from its row-major smaller endpoint.
inline bool line_of_sight(const LevelMap& map, Coord a, Coord b) {
    if (a == b) return true;
    if (tile_index(b) < tile_index(a)) std::swap(a, b);
    int x0 = a.col, y0 = a.row;
    const int x1 = b.col, y1 = b.row;
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
        if (x0 == x1 && y0 == y1) return true;
        if (map.walls.at(Coord{std::int8_t(y0), std::int8_t(x0)})) return false;
    }
}

class GameState {
public:
    static GameState initial(const LevelMap& map, int max_turns = kDefaultMaxTurns) {
        GameState s;
        s.map_ = &map;
        s.content_ = map.content;
        s.hero_ = map.hero_spawn;
        s.hero_hp_ = kHeroMaxHp;
        s.max_turns_ = std::int16_t(max_turns);
        s.npcs_.reserve(map.monsters.size());
        for (const MonsterSpawn& m : map.monsters) {
            s.npcs_.push_back(Npc{m.kind, m.pos, std::int8_t(initial_monster_hp(m.kind))});
        }
        return s;
    }

    const LevelMap& map() const { return *map_; }
    Status status() const { return status_; }
    bool terminal() const { return status_ != Status::Running; }
    Coord hero() const { return hero_; }
    int hero_hp() const { return hero_hp_; }
    bool has_javelin() const { return has_javelin_; }
    bool javelin_on_ground() const { return javelin_on_ground_; }
    Coord javelin_tile() const { return javelin_tile_; }
    int treasure_score() const { return treasure_score_; }
    int turn() const { return turn_; }
    int max_turns() const { return max_turns_; }
    const std::vector<Npc>& npcs() const { return npcs_; }
    const Grid<TileContent>& content() const { return content_; }
    const EventCounters& counters() const { return counters_; }
    int potions_eaten_by_blobs() const { return potions_eaten_by_blobs_; }
    int treasures_eaten_by_ogres() const { return treasures_eaten_by_ogres_; }

    // Legal actions in a fixed order: moves N,S,E,W onto non-wall tiles, then
    // javelin throws at living, conscious monsters in line of sight (only
    // while the hero carries the javelin). Terminal states have none.
    void legal_actions(std::vector<HeroAction>& out) const {
        out.clear();
        if (terminal()) return;
        for (Direction d : kDirections) {
            Coord n = neighbor(hero_, d);
            if (in_bounds(n) && !map_->walls.at(n)) {
                out.push_back(HeroAction{HeroAction::Kind::Move, d, 0});
            }
        }
        if (has_javelin_) {
            for (std::size_t i = 0; i < npcs_.size(); ++i) {
                const Npc& n = npcs_[i];
                if (!n.alive || n.knocked_out()) continue;
                if (line_of_sight(*map_, hero_, n.pos)) {
                    out.push_back(
                        HeroAction{HeroAction::Kind::Throw, Direction::North, std::uint8_t(i)});
                }
            }
        }
    }

    std::vector<HeroAction> legal_actions() const {
        std::vector<HeroAction> out;
        legal_actions(out);
        return out;
    }

    void apply(HeroAction action) {
        if (terminal()) throw IllegalAction("action applied to a terminal state");
        if (action.kind == HeroAction::Kind::Move) {
            hero_move(action.dir);
        } else {
            hero_throw(action.target);
        }
        if (status_ == Status::Running) {
            npc_phase();
        }
        if (status_ == Status::Running) {
            ++turn_;
            if (turn_ >= max_turns_) status_ = Status::TurnCapped;
        }
    }

    // FNV-1a over the dynamic state; two states colliding in gameplay terms
    // hash equal only if grid content, entities, counters and flags all match.
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (8 * i)) & 0xff;
                h *= 1099511628211ull;
            }
        };
        for (int i = 0; i < kMapTiles; ++i) mix(std::uint64_t(content_.at(i)));
        mix(std::uint64_t(tile_index(hero_)));
        mix(std::uint64_t(hero_hp_));
        mix((std::uint64_t(has_javelin_) << 1) | std::uint64_t(javelin_on_ground_));
        mix(std::uint64_t(javelin_on_ground_ ? tile_index(javelin_tile_) : kMapTiles));
        for (std::size_t i = 0; i < npcs_.size(); ++i) {
            const Npc& n = npcs_[i];
            if (!n.alive) {
                mix(0xdead0000ull + i);
                continue;
            }
            mix((i << 32) | (std::uint64_t(n.kind) << 24) | (std::uint64_t(tile_index(n.pos)) << 8) |
                std::uint64_t(n.hp));
            mix(std::uint64_t(n.knockout_left));
        }
        mix(std::uint64_t(treasure_score_));
        mix(std::uint64_t(turn_));
        mix(std::uint64_t(status_));
        mix((std::uint64_t(counters_.steps) << 48) | (std::uint64_t(counters_.potions_drunk) << 32) |
            (std::uint64_t(counters_.treasures_opened) << 16) | counters_.minitaur_knockouts);
        mix((std::uint64_t(counters_.monsters_slain) << 48) |
            (std::uint64_t(counters_.javelins_thrown) << 32) |
            (std::uint64_t(counters_.teleports_used) << 16) | counters_.traps_sprung);
        mix((std::uint64_t(potions_eaten_by_blobs_) << 16) |
            std::uint64_t(treasures_eaten_by_ogres_));
        return h;
    }

private:
    int living_npc_at(Coord c) const {
        for (std::size_t i = 0; i < npcs_.size(); ++i) {
            if (npcs_[i].alive && npcs_[i].pos == c) return int(i);
        }
        return -1;
    }

    // Damage sinks. Minitaurs convert damage into a (reset) knockout; blobs
    // lose a level per hit point because their damage equals their hp.
    void damage_npc(int idx, int amount, bool by_hero) {
        Npc& n = npcs_[idx];
        if (n.kind == MonsterKind::Minitaur) {
            n.knockout_left = kKnockoutRounds;
            if (by_hero) ++counters_.minitaur_knockouts;
            return;
        }
        n.hp = std::int8_t(n.hp - amount);
        if (n.hp <= 0) {
            n.alive = false;
            if (by_hero) ++counters_.monsters_slain;
        }
    }

    void damage_hero(int amount) {
        hero_hp_ -= amount;
        if (hero_hp_ <= 0) {
            hero_hp_ = 0;
            status_ = Status::Dead;
        }
    }

    void hero_move(Direction dir) {
        Coord dest = neighbor(hero_, dir);
        if (!in_bounds(dest) || map_->walls.at(dest)) {
            throw IllegalAction("hero move into a wall");
        }
        ++counters_.steps;
        int defender = living_npc_at(dest);
        if (defender >= 0 && !npcs_[defender].knocked_out()) {
            // Bump attack: simultaneous damage, move completes only on a kill.
            int retaliation = npcs_[defender].collision_damage();
            damage_npc(defender, kHeroCollisionDamage, true);
            damage_hero(retaliation);
            if (status_ != Status::Running) return;  // death outranks everything
            if (npcs_[defender].alive) return;       // defender survived: stay put
        }
        hero_ = dest;
        resolve_hero_entry(true);
    }

    void hero_throw(int target) {
        if (!has_javelin_ || target < 0 || target >= int(npcs_.size())) {
            throw IllegalAction("javelin throw without javelin or at a bad target");
        }
        const Npc& n = npcs_[target];
        if (!n.alive || n.knocked_out() || !line_of_sight(*map_, hero_, n.pos)) {
            throw IllegalAction("javelin target not visible");
        }
        ++counters_.javelins_thrown;
        has_javelin_ = false;
        javelin_on_ground_ = true;
        javelin_tile_ = n.pos;  // lands where the target stood, pickup on walk-over
        damage_npc(target, kJavelinDamage, true);
    }

    void resolve_hero_entry(bool allow_teleport) {
        switch (content_.at(hero_)) {
        case TileContent::None:
            break;
        case TileContent::Potion:
            if (hero_hp_ < kHeroMaxHp) ++hero_hp_;
            ++counters_.potions_drunk;
            content_.at(hero_) = TileContent::None;
            break;
        case TileContent::Treasure:
            ++treasure_score_;
            ++counters_.treasures_opened;
            content_.at(hero_) = TileContent::None;
            break;
        case TileContent::Trap:
            ++counters_.traps_sprung;
            damage_hero(1);
            if (status_ != Status::Running) return;
            break;
        case TileContent::Exit:
            status_ = Status::Won;
            return;
        case TileContent::Portal1:
        case TileContent::Portal2:
        case TileContent::Portal3:
            if (allow_teleport) {
                attempt_teleport();
                if (status_ != Status::Running) return;
            }
            break;
        }
        if (javelin_on_ground_ && javelin_tile_ == hero_) {
            javelin_on_ground_ = false;
            has_javelin_ = true;
        }
    }

    // The paired tile never re-teleports on arrival. A hostile standing on the
    // far portal is fought like any entry: the hero materializes only if the
    // defender dies, otherwise the hero stays on the entry portal.
    void attempt_teleport() {
        Coord dest = map_->portal_exit(hero_);
        int defender = living_npc_at(dest);
        if (defender >= 0 && !npcs_[defender].knocked_out()) {
            int retaliation = npcs_[defender].collision_damage();
            damage_npc(defender, kHeroCollisionDamage, true);
            damage_hero(retaliation);
            if (status_ != Status::Running) return;
            if (npcs_[defender].alive) return;
        }
        hero_ = dest;
        ++counters_.teleports_used;
    }

    // ---- NPC phase ------------------------------------------------------

    void npc_phase() {
        // The hero-distance field for minitaur pathing is rebuilt lazily at
        // most once per phase (the hero cannot move mid-phase).
        Grid<std::int16_t> hero_field;
        bool field_ready = false;
        for (std::size_t i = 0; i < npcs_.size(); ++i) {
            if (!npcs_[i].alive) continue;
            switch (npcs_[i].kind) {
            case MonsterKind::Goblin: act_goblin(int(i)); break;
            case MonsterKind::Wizard: act_wizard(int(i)); break;
            case MonsterKind::Blob: act_blob(int(i)); break;
            case MonsterKind::Ogre: act_ogre(int(i)); break;
            case MonsterKind::Minitaur: act_minitaur(int(i), hero_field, field_ready); break;
            }
            if (status_ != Status::Running) return;
        }
    }

    // Can NPC idx end a step on `dest`? The hero's tile is always a legal
    // (combat) destination. Monsters never stack: only blobs may enter blob
    // tiles (merge) and only ogres may enter other monsters' tiles (combat);
    // nobody piles onto a knocked-out minitaur.
    bool npc_step_allowed(int idx, Coord dest) const {
        if (!in_bounds(dest) || map_->walls.at(dest)) return false;
        if (dest == hero_) return true;
        int other = living_npc_at(dest);
        if (other < 0) return true;
        const Npc& self = npcs_[idx];
        const Npc& target = npcs_[other];
        if (target.kind == MonsterKind::Minitaur && target.knocked_out()) return false;
        if (self.kind == MonsterKind::Blob) return target.kind == MonsterKind::Blob;
        if (self.kind == MonsterKind::Ogre) return true;
        return false;
    }

    // Greedy chase step: try the distance-decreasing cardinal steps in the
    // fixed order N,S,E,W; a blocked step falls through to the next one, and
    // a monster with no usable decreasing step stands still.
    bool greedy_step(int idx, Coord target, Coord& out) const {
        const Coord from = npcs_[idx].pos;
        const int current = manhattan(from, target);
        for (Direction d : kDirections) {
            Coord n = neighbor(from, d);
            if (!in_bounds(n) || manhattan(n, target) >= current) continue;
            if (!npc_step_allowed(idx, n)) continue;
            out = n;
            return true;
        }
        return false;
    }

    void move_npc(int idx, Coord dest) {
        Npc& self = npcs_[idx];
        if (dest == hero_) {
            // Mutual collision damage; the attacker would only complete the
            // move if the hero died, and then the game is over anyway.
            int retaliation = self.collision_damage();
            damage_npc(idx, kHeroCollisionDamage, true);
            damage_hero(retaliation);
            return;
        }
        int other = living_npc_at(dest);
        if (other >= 0) {
            if (self.kind == MonsterKind::Blob && npcs_[other].kind == MonsterKind::Blob) {
                // Merge into the stationary blob; levels add up to the cap.
                npcs_[other].hp =
                    std::int8_t(std::min(int(self.hp) + int(npcs_[other].hp), kMaxBlobLevel));
                self.alive = false;
                return;
            }
            // Ogres collide with anything; the victim retaliates in kind.
            int retaliation = npcs_[other].collision_damage();
            damage_npc(other, self.collision_damage(), false);
            damage_npc(idx, retaliation, false);
            if (!npcs_[other].alive && self.alive) {
                self.pos = dest;
                npc_enter_tile(idx);
            }
            return;
        }
        self.pos = dest;
        npc_enter_tile(idx);
    }

    void npc_enter_tile(int idx) {
        Npc& self = npcs_[idx];
        TileContent c = content_.at(self.pos);
        if (c == TileContent::Trap) {
            damage_npc(idx, 1, false);
        } else if (c == TileContent::Potion && self.kind == MonsterKind::Blob) {
            // Consumed, denying it to the hero; merging is the only way blobs
            // gain levels.
            content_.at(self.pos) = TileContent::None;
            ++potions_eaten_by_blobs_;
        } else if (c == TileContent::Treasure && self.kind == MonsterKind::Ogre) {
            content_.at(self.pos) = TileContent::None;
            ++treasures_eaten_by_ogres_;
        }
    }

    void act_goblin(int idx) {
        if (!line_of_sight(*map_, npcs_[idx].pos, hero_)) return;
        Coord step;
        if (greedy_step(idx, hero_, step)) move_npc(idx, step);
    }

    void act_wizard(int idx) {
        if (!line_of_sight(*map_, npcs_[idx].pos, hero_)) return;
        if (manhattan(npcs_[idx].pos, hero_) <= kWizardRange) {
            damage_hero(1);  // ranged bolt, no movement
            return;
        }
        Coord step;
        if (greedy_step(idx, hero_, step)) move_npc(idx, step);
    }

    // Blobs chase the closest visible potion or the hero (potions win ties,
    // then row-major position); ogres do the same with treasures.
    bool pick_consumable_target(int idx, TileContent wanted, Coord& out) const {
        const Coord from = npcs_[idx].pos;
        bool found = false;
        int best_dist = 0;
        bool best_is_hero = false;
        Coord best{};
        auto consider = [&](Coord c, bool is_hero) {
            if (!line_of_sight(*map_, from, c)) return;
            int d = manhattan(from, c);
            if (!found || d < best_dist ||
                (d == best_dist && !is_hero && best_is_hero) ||
                (d == best_dist && is_hero == best_is_hero && row_major_less(c, best))) {
                found = true;
                best_dist = d;
                best_is_hero = is_hero;
                best = c;
            }
        };
        for (int i = 0; i < kMapTiles; ++i) {
            if (content_.at(i) == wanted) consider(coord_of(i), false);
        }
        consider(hero_, true);
        out = best;
        return found;
    }

    void act_blob(int idx) {
        Coord target;
        if (!pick_consumable_target(idx, TileContent::Potion, target)) return;
        Coord step;
        if (greedy_step(idx, target, step)) move_npc(idx, step);
    }

    void act_ogre(int idx) {
        Coord target;
        if (!pick_consumable_target(idx, TileContent::Treasure, target)) return;
        Coord step;
        if (greedy_step(idx, target, step)) move_npc(idx, step);
    }

    // Minitaurs walk the true shortest path (BFS distance field from the
    // hero), stepping to the distance-decreasing neighbor with the smallest
    // row-major index; walls alone shape the path, other monsters merely block
    // the step for a turn. Knocked-out rounds tick down in place of the move.
    void act_minitaur(int idx, Grid<std::int16_t>& hero_field, bool& field_ready) {
        Npc& self = npcs_[idx];
        if (self.knocked_out()) {
            --self.knockout_left;
            return;
        }
        if (!field_ready) {
            hero_field = bfs_distances(map_->walls, hero_);
            field_ready = true;
        }
        int here = hero_field.at(self.pos);
        if (here <= 0) return;  // walled off from the hero (0 cannot happen)
        Coord best{};
        bool found = false;
        for (Direction d : kDirections) {
            Coord n = neighbor(self.pos, d);
            if (!in_bounds(n) || hero_field.at(n) != here - 1) continue;
            if (!npc_step_allowed(idx, n)) continue;
            if (!found || row_major_less(n, best)) {
                found = true;
                best = n;
            }
        }
        if (found) move_npc(idx, best);
    }

    const LevelMap* map_ = nullptr;
    Grid<TileContent> content_;
    Coord hero_{};
    int hero_hp_ = kHeroMaxHp;
    bool has_javelin_ = true;
    bool javelin_on_ground_ = false;
    Coord javelin_tile_{};
    std::vector<Npc> npcs_;
    std::int16_t treasure_score_ = 0;
    std::int16_t turn_ = 0;
    std::int16_t max_turns_ = kDefaultMaxTurns;
    EventCounters counters_;
    Status status_ = Status::Running;
    std::uint16_t potions_eaten_by_blobs_ = 0;
    std::uint16_t treasures_eaten_by_ogres_ = 0;
};

inline GameState step(const GameState& s, HeroAction a) {
    GameState next = s;
    next.apply(a);
    return next;
}

}  // namespace md2
