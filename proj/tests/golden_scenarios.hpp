// Hand-traced end-to-end rule scenarios. Each one pins a small slice of the
// combat / NPC / tile semantics with exact expected outcomes worked out on
// paper from the rules, so any behavioural drift in the engine shows up as a
// concrete mismatch. Shared by the unit suite and the acceptance runner.
#pragma once

#include <cctype>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "md2/game.hpp"
#include "md2/map.hpp"

namespace golden {

// Scenario maps list only the interesting rows; the rest of the 10x20 grid
// is filled with wall rows so coordinates match the rows as written.
inline std::string pad_rows(std::initializer_list<const char*> rows) {
    std::string text;
    int used = 0;
    for (const char* r : rows) {
        text += r;
        text += '\n';
        ++used;
    }
    for (; used < md2::kMapHeight; ++used) text += "##########\n";
    return text;
}

// Collects human-readable expectation failures instead of aborting, so one
// scenario can report every mismatch at once.
struct Checker {
    const md2::GameState& s;
    std::vector<std::string> failures;

    explicit Checker(const md2::GameState& state) : s(state) {}

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void eq(const char* what, long long got, long long want) {
        if (got != want) {
            std::ostringstream os;
            os << what << ": got " << got << ", want " << want;
            failures.push_back(os.str());
        }
    }
    void eq(const char* what, md2::Coord got, int row, int col) {
        if (got.row != row || got.col != col) {
            std::ostringstream os;
            os << what << ": got (" << int(got.row) << "," << int(got.col) << "), want (" << row
               << "," << col << ")";
            failures.push_back(os.str());
        }
    }
    void eq(const char* what, md2::Status got, md2::Status want) {
        if (got != want) {
            std::ostringstream os;
            os << what << ": got " << md2::status_name(got) << ", want "
               << md2::status_name(want);
            failures.push_back(os.str());
        }
    }
    void eq(const char* what, md2::TileContent got, md2::TileContent want) {
        if (got != want) {
            std::ostringstream os;
            os << what << ": got content #" << int(got) << ", want #" << int(want);
            failures.push_back(os.str());
        }
    }
};

struct Scenario {
    std::string name;
    std::string map_text;
    std::string actions;  // N/S/E/W moves; J<index> javelin throws
    int max_turns = md2::kDefaultMaxTurns;
    std::function<void(Checker&)> verify;
};

inline md2::HeroAction parse_action(const std::string& actions, std::size_t& i) {
    md2::HeroAction a;
    char c = actions[i];
    if (c == 'J') {
        std::size_t j = i + 1;
        int target = 0;
        while (j < actions.size() && std::isdigit(static_cast<unsigned char>(actions[j]))) {
            target = target * 10 + (actions[j] - '0');
            ++j;
        }
        a.kind = md2::HeroAction::Kind::Throw;
        a.target = std::uint8_t(target);
        i = j;
        return a;
    }
    a.kind = md2::HeroAction::Kind::Move;
    switch (c) {
    case 'N': a.dir = md2::Direction::North; break;
    case 'S': a.dir = md2::Direction::South; break;
    case 'E': a.dir = md2::Direction::East; break;
    case 'W': a.dir = md2::Direction::West; break;
    default: throw std::runtime_error(std::string("bad action glyph: ") + c);
    }
    ++i;
    return a;
}

inline md2::GameState run_scenario(const md2::LevelMap& map, const std::string& actions,
                                   int max_turns) {
    md2::GameState s = md2::GameState::initial(map, max_turns);
    std::size_t i = 0;
    while (i < actions.size()) {
        if (actions[i] == ' ') {
            ++i;
            continue;
        }
        s.apply(parse_action(actions, i));
    }
    return s;
}

// Runs one scenario and returns its failure list (empty == pass).
inline std::vector<std::string> check_scenario(const Scenario& sc) {
    md2::LevelMap map = md2::parse_map(sc.map_text, sc.name);
    md2::GameState s = run_scenario(map, sc.actions, sc.max_turns);
    Checker c(s);
    sc.verify(c);
    return c.failures;
}

inline const std::vector<Scenario>& scenarios() {
    using md2::Status;
    using md2::TileContent;
    static const std::vector<Scenario> list = [] {
        std::vector<Scenario> v;

        // --- potions ---------------------------------------------------
        // A potion at full health is still consumed and still counted.
        v.push_back({"potion-at-full-hp",
                     pad_rows({"##########", "#H.PE#####"}),
                     "EE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero hp", c.s.hero_hp(), 10);
                         c.eq("potions drunk", c.s.counters().potions_drunk, 1);
                         c.eq("potion tile", c.s.content().at({1, 3}), TileContent::None);
                         c.eq("steps", c.s.counters().steps, 2);
                         c.eq("status", c.s.status(), Status::Running);
                     }});

        // A potion heals exactly one hit point.
        v.push_back({"potion-heals-one",
                     pad_rows({"##########", "#H^P.E####"}),
                     "EE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero hp", c.s.hero_hp(), 10);
                         c.eq("traps sprung", c.s.counters().traps_sprung, 1);
                         c.eq("potions drunk", c.s.counters().potions_drunk, 1);
                     }});

        // --- traps -----------------------------------------------------
        // Traps stay armed: re-entering the same tile damages again.
        v.push_back({"trap-reentry",
                     pad_rows({"##########", "#H^.E#####"}),
                     "EWE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero hp", c.s.hero_hp(), 8);
                         c.eq("traps sprung", c.s.counters().traps_sprung, 2);
                         c.eq("steps", c.s.counters().steps, 3);
                         c.eq("hero", c.s.hero(), 1, 2);
                     }});

        // Ten trap hits kill a full-health hero; hp clamps at zero.
        v.push_back({"trap-gauntlet-death",
                     pad_rows({"##########", "#H^^^^^^^#", "######^^^#", "######E###"}),
                     "EEEEEEESWW", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("status", c.s.status(), Status::Dead);
                         c.eq("hero hp", c.s.hero_hp(), 0);
                         c.eq("hero", c.s.hero(), 2, 6);
                         c.eq("traps sprung", c.s.counters().traps_sprung, 10);
                         c.eq("steps", c.s.counters().steps, 10);
                     }});

        // --- blobs -----------------------------------------------------
        // A blob stepping into another blob merges into the stationary one
        // (level 2); the merged blob then eats the potion it was chasing.
        v.push_back({"blob-merge-level-2",
                     pad_rows({"##########", "#bbP.....#", "#.########", "#H......E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.expect(!c.s.npcs()[0].alive, "moving blob should be absorbed");
                         c.expect(c.s.npcs()[1].alive, "merged blob should live");
                         c.eq("merged blob hp", c.s.npcs()[1].hp, 2);
                         c.eq("merged blob pos", c.s.npcs()[1].pos, 1, 3);
                         c.eq("potions eaten by blobs", c.s.potions_eaten_by_blobs(), 1);
                         c.eq("hero potions drunk", c.s.counters().potions_drunk, 0);
                         c.eq("potion tile", c.s.content().at({1, 3}), TileContent::None);
                     }});

        // A merge chain caps blob level at 3: 1+1=2, 2+1=3, 3+1 stays 3.
        v.push_back({"blob-merge-caps-at-3",
                     pad_rows({"##########", "#bbbbP...#", "########.#", "#E......H#"}),
                     "W", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.expect(!c.s.npcs()[0].alive, "blob 0 absorbed");
                         c.expect(!c.s.npcs()[1].alive, "blob 1 absorbed");
                         c.expect(!c.s.npcs()[2].alive, "blob 2 absorbed");
                         c.expect(c.s.npcs()[3].alive, "last blob lives");
                         c.eq("capped blob hp", c.s.npcs()[3].hp, 3);
                         c.eq("capped blob pos", c.s.npcs()[3].pos, 1, 5);
                         c.eq("potions eaten by blobs", c.s.potions_eaten_by_blobs(), 1);
                     }});

        // On a distance tie between a potion and the hero, blobs prefer the
        // potion.
        v.push_back({"blob-tie-prefers-potion",
                     pad_rows({"##########", "#P.b..H.E#"}),
                     "W", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("blob pos", c.s.npcs()[0].pos, 1, 2);
                         c.eq("potion tile", c.s.content().at({1, 1}), TileContent::Potion);
                         c.eq("potions eaten by blobs", c.s.potions_eaten_by_blobs(), 0);
                     }});

        // Two equidistant potions: the row-major smaller tile wins.
        v.push_back({"blob-potion-row-major-tie",
                     pad_rows({"##########", "###P######", "###b######", "###P######",
                               "#H..E#####"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("blob pos", c.s.npcs()[0].pos, 1, 3);
                         c.eq("potions eaten by blobs", c.s.potions_eaten_by_blobs(), 1);
                         c.eq("upper potion tile", c.s.content().at({1, 3}), TileContent::None);
                         c.eq("lower potion tile", c.s.content().at({3, 3}),
                              TileContent::Potion);
                     }});

        // --- ogres -----------------------------------------------------
        // Ogre-vs-ogre collision deals 2 damage both ways: both die and the
        // treasure behind survives.
        v.push_back({"ogre-collision-mutual-death",
                     pad_rows({"##########", "#ooT.....#", "#.########", "#H......E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.expect(!c.s.npcs()[0].alive, "moving ogre dies");
                         c.expect(!c.s.npcs()[1].alive, "rammed ogre dies");
                         c.eq("treasure tile", c.s.content().at({1, 3}), TileContent::Treasure);
                         c.eq("monsters slain (hero credit)", c.s.counters().monsters_slain, 0);
                     }});

        // Ogres eat treasures they walk over; the hero's counter is untouched.
        v.push_back({"ogre-eats-treasure",
                     pad_rows({"##########", "#o.T.....#", "#.########", "#H......E#"}),
                     "EE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("ogre pos", c.s.npcs()[0].pos, 1, 3);
                         c.eq("treasures eaten by ogres", c.s.treasures_eaten_by_ogres(), 1);
                         c.eq("hero treasures opened", c.s.counters().treasures_opened, 0);
                         c.eq("treasure tile", c.s.content().at({1, 3}), TileContent::None);
                     }});

        // Full melee exchange with an ogre: its counter-attack hits for 2
        // each collision, the hero's bump for 1; the ogre dies on the second
        // exchange and the kill is credited even when the ogre initiated it.
        v.push_back({"ogre-melee-exchange",
                     pad_rows({"##########", "#H.o....E#"}),
                     "EE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero", c.s.hero(), 1, 3);
                         c.eq("hero hp", c.s.hero_hp(), 6);
                         c.eq("monsters slain", c.s.counters().monsters_slain, 1);
                         c.expect(!c.s.npcs()[0].alive, "ogre dead after two exchanges");
                         c.eq("steps", c.s.counters().steps, 2);
                     }});

        // On a distance tie between a treasure and the hero, ogres prefer
        // the treasure.
        v.push_back({"ogre-tie-prefers-treasure",
                     pad_rows({"##########", "#T.o..H.E#"}),
                     "W", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("ogre pos", c.s.npcs()[0].pos, 1, 2);
                         c.eq("treasure tile", c.s.content().at({1, 1}), TileContent::Treasure);
                         c.eq("hero", c.s.hero(), 1, 5);
                     }});

        // Ogres shrug off traps (2 hp): damaged but alive, no knockout.
        v.push_back({"ogre-survives-trap",
                     pad_rows({"##########", "#H.^o...E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.expect(c.s.npcs()[0].alive, "ogre survives one trap hit");
                         c.eq("ogre hp", c.s.npcs()[0].hp, 1);
                         c.eq("ogre pos", c.s.npcs()[0].pos, 1, 3);
                         c.eq("hero traps sprung", c.s.counters().traps_sprung, 0);
                     }});

        // --- wizards ---------------------------------------------------
        // Bolt range boundary: at distance 5 the wizard bolts and stands; at
        // distance 6 it holds fire and closes in. Net effect: one bolt, one
        // step.
        v.push_back({"wizard-range-boundary",
                     pad_rows({"##########", "#H.....wE#"}),
                     "EW", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero hp", c.s.hero_hp(), 9);
                         c.eq("wizard pos", c.s.npcs()[0].pos, 1, 6);
                         c.expect(c.s.npcs()[0].alive, "wizard untouched");
                         c.eq("hero", c.s.hero(), 1, 1);
                     }});

        // Wizards have no melee: bumping one takes no retaliation and the
        // kill completes the move.
        v.push_back({"wizard-melee-harmless",
                     pad_rows({"##########", "#Hw.....E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero", c.s.hero(), 1, 2);
                         c.eq("hero hp", c.s.hero_hp(), 10);
                         c.eq("monsters slain", c.s.counters().monsters_slain, 1);
                         c.expect(!c.s.npcs()[0].alive, "wizard dead");
                     }});

        // A wall on the sight line silences and freezes the wizard entirely,
        // and the hero cannot throw at it either.
        v.push_back({"wizard-wall-blocks-sight",
                     pad_rows({"##########", "#H.#w....#", "#E########"}),
                     "EW", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero hp", c.s.hero_hp(), 10);
                         c.eq("wizard pos", c.s.npcs()[0].pos, 1, 4);
                         auto legal = c.s.legal_actions();
                         c.eq("legal action count", (long long)legal.size(), 2);
                         for (const auto& a : legal) {
                             c.expect(a.kind == md2::HeroAction::Kind::Move,
                                      "no throw without line of sight");
                         }
                     }});

        // Chip damage adds up: a bolt kills a hero worn down to 1 hp, even
        // standing next to the exit.
        v.push_back({"wizard-bolt-kills",
                     pad_rows({"##########", "#H^^^^^^^#", "########^#", "########^#",
                               "#####w.E.#"}),
                     "EEEEEEESSS", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("status", c.s.status(), Status::Dead);
                         c.eq("hero hp", c.s.hero_hp(), 0);
                         c.eq("hero", c.s.hero(), 4, 8);
                         c.eq("traps sprung", c.s.counters().traps_sprung, 9);
                         c.eq("wizard pos", c.s.npcs()[0].pos, 4, 5);
                         c.eq("monsters slain", c.s.counters().monsters_slain, 0);
                     }});

        // --- goblins ---------------------------------------------------
        // An adjacent goblin attacks into the hero and dies to the
        // simultaneous counter-damage; the kill is credited to the hero and
        // the goblin's corpse stays where it stood.
        v.push_back({"goblin-suicide-attack",
                     pad_rows({"##########", "#H.g....E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero hp", c.s.hero_hp(), 9);
                         c.eq("monsters slain", c.s.counters().monsters_slain, 1);
                         c.expect(!c.s.npcs()[0].alive, "goblin dead");
                         c.eq("goblin pos", c.s.npcs()[0].pos, 1, 3);
                         c.eq("hero", c.s.hero(), 1, 2);
                     }});

        // Goblins only chase what they can see: a wall between means no
        // movement at all.
        v.push_back({"goblin-wall-blocks-chase",
                     pad_rows({"##########", "#g.#.H..E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("goblin pos", c.s.npcs()[0].pos, 1, 1);
                         c.eq("hero hp", c.s.hero_hp(), 10);
                     }});

        // With clear sight the same goblin closes one tile per turn.
        v.push_back({"goblin-chases-in-sight",
                     pad_rows({"##########", "#g...H..E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("goblin pos", c.s.npcs()[0].pos, 1, 2);
                     }});

        // Monsters never stack: a goblin whose only closing step is occupied
        // by a wizard stands still (while the wizard in range bolts away).
        v.push_back({"goblin-blocked-by-wizard",
                     pad_rows({"##########", "#gw..H..E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("goblin pos", c.s.npcs()[0].pos, 1, 1);
                         c.eq("wizard pos", c.s.npcs()[1].pos, 1, 2);
                         c.eq("hero hp", c.s.hero_hp(), 9);
                     }});

        // A trap kills a 1-hp goblin that walks onto it; nobody gets credit.
        v.push_back({"goblin-dies-in-trap",
                     pad_rows({"##########", "#H.^g...E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.expect(!c.s.npcs()[0].alive, "goblin dead in trap");
                         c.eq("goblin pos", c.s.npcs()[0].pos, 1, 3);
                         c.eq("monsters slain (hero credit)", c.s.counters().monsters_slain, 0);
                         c.eq("hero traps sprung", c.s.counters().traps_sprung, 0);
                     }});

        // --- NPC acting order -------------------------------------------
        // NPCs act in row-major order of their spawn tiles. Two goblins
        // contest the single tile (2,2): the earlier-spawned one takes it,
        // the other has no alternative closing step and stands.
        v.push_back({"npc-order-contended-tile",
                     pad_rows({"##########", "#.g.######", "#g..######", "##H.######",
                               "###E######"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("first goblin pos", c.s.npcs()[0].pos, 2, 2);
                         c.eq("second goblin pos", c.s.npcs()[1].pos, 2, 1);
                     }});

        // The order keys on spawn tiles, not current tiles: after turn 1 the
        // first goblin sits row-major *after* the second, yet still acts
        // first on turn 2 — it attacks and dies, vacating (2,2) in time for
        // the second goblin to step in. Current-position ordering would have
        // left the second goblin stuck on (2,1).
        v.push_back({"npc-order-uses-spawn-tiles",
                     pad_rows({"##########", "#.g.######", "#g..######", "##H.######",
                               "###E######"}),
                     "EW", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.expect(!c.s.npcs()[0].alive, "first goblin died attacking");
                         c.eq("second goblin pos", c.s.npcs()[1].pos, 2, 2);
                         c.eq("hero hp", c.s.hero_hp(), 9);
                         c.eq("monsters slain", c.s.counters().monsters_slain, 1);
                     }});

        // --- minitaurs ---------------------------------------------------
        // A javelin knocks a minitaur out (never kills); the hero may then
        // walk over its tile and reclaim the javelin lying there.
        v.push_back({"minitaur-knockout-traversal",
                     pad_rows({"##########", "#H.m....E#"}),
                     "J0EE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.expect(c.s.npcs()[0].alive, "minitaurs never die");
                         c.eq("hero", c.s.hero(), 1, 3);
                         c.eq("minitaur pos", c.s.npcs()[0].pos, 1, 3);
                         c.eq("knockout rounds left", c.s.npcs()[0].knockout_left, 0);
                         c.eq("minitaur knockouts", c.s.counters().minitaur_knockouts, 1);
                         c.expect(c.s.has_javelin(), "javelin reclaimed by walk-over");
                         c.eq("javelins thrown", c.s.counters().javelins_thrown, 1);
                         c.eq("steps", c.s.counters().steps, 2);
                     }});

        // Three NPC phases after the knockout the minitaur wakes and strikes
        // back; the counter-damage re-knocks it out for another 3 rounds.
        v.push_back({"minitaur-wakes-and-attacks",
                     pad_rows({"##########", "#H.m....E#"}),
                     "J0EEE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero hp", c.s.hero_hp(), 9);
                         c.eq("minitaur pos", c.s.npcs()[0].pos, 1, 3);
                         c.eq("knockout rounds left", c.s.npcs()[0].knockout_left, 3);
                         c.eq("minitaur knockouts", c.s.counters().minitaur_knockouts, 2);
                         c.eq("monsters slain", c.s.counters().monsters_slain, 0);
                     }});

        // A trap knocks a minitaur out exactly like hero damage would, but
        // without crediting the hero's knockout counter.
        v.push_back({"minitaur-trap-knockout-uncredited",
                     pad_rows({"##########", "#H.^m...E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("minitaur pos", c.s.npcs()[0].pos, 1, 3);
                         c.eq("knockout rounds left", c.s.npcs()[0].knockout_left, 3);
                         c.eq("minitaur knockouts", c.s.counters().minitaur_knockouts, 0);
                         c.expect(c.s.npcs()[0].alive, "minitaur alive on the trap");
                     }});

        // Bumping an awake minitaur knocks it out, costs the retaliation
        // damage, and never completes the move (the blocked bump still
        // counts as a step).
        v.push_back({"minitaur-bump-knockout",
                     pad_rows({"##########", "#Hm.....E#"}),
                     "E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero", c.s.hero(), 1, 1);
                         c.eq("hero hp", c.s.hero_hp(), 9);
                         c.eq("minitaur knockouts", c.s.counters().minitaur_knockouts, 1);
                         c.eq("knockout rounds left", c.s.npcs()[0].knockout_left, 2);
                         c.eq("steps", c.s.counters().steps, 1);
                         c.eq("monsters slain", c.s.counters().monsters_slain, 0);
                     }});

        // --- javelin ------------------------------------------------------
        // Throw, kill, and walk-over pickup; throwing is not a step.
        v.push_back({"javelin-kill-and-pickup",
                     pad_rows({"##########", "#H..g...E#"}),
                     "J0EEE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("monsters slain", c.s.counters().monsters_slain, 1);
                         c.eq("javelins thrown", c.s.counters().javelins_thrown, 1);
                         c.expect(c.s.has_javelin(), "javelin picked back up");
                         c.expect(!c.s.javelin_on_ground(), "no javelin left on the floor");
                         c.eq("hero", c.s.hero(), 1, 4);
                         c.eq("steps", c.s.counters().steps, 3);
                     }});

        // Targets are NPC indices and other monsters do not block the line:
        // the hero skewers the far goblin over the near one's head. Without
        // the javelin no further throws are offered.
        v.push_back({"javelin-over-nearer-monster",
                     pad_rows({"##########", "#H.g.g..E#"}),
                     "J1E", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.expect(!c.s.npcs()[1].alive, "far goblin dead");
                         c.expect(!c.s.npcs()[0].alive, "near goblin dead from the bump");
                         c.eq("monsters slain", c.s.counters().monsters_slain, 2);
                         c.eq("javelins thrown", c.s.counters().javelins_thrown, 1);
                         c.eq("hero hp", c.s.hero_hp(), 9);
                         c.eq("javelin tile", c.s.javelin_tile(), 1, 5);
                         c.expect(c.s.javelin_on_ground(), "javelin where the target stood");
                         for (const auto& a : c.s.legal_actions()) {
                             c.expect(a.kind == md2::HeroAction::Kind::Move,
                                      "no throws while the javelin lies on the floor");
                         }
                     }});

        // --- portals -------------------------------------------------------
        // Teleports resolve in the same turn and work in both directions.
        v.push_back({"portal-round-trip",
                     pad_rows({"##########", "#H1.....E#", "#....1...#"}),
                     "EWE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero", c.s.hero(), 1, 2);
                         c.eq("teleports used", c.s.counters().teleports_used, 2);
                         c.eq("steps", c.s.counters().steps, 3);
                         c.eq("status", c.s.status(), Status::Running);
                     }});

        // A monster standing on the destination portal is fought before the
        // teleport completes; a kill lets the hero materialize there.
        v.push_back({"portal-defender-killed",
                     pad_rows({"##########", "#H.1..1gE#"}),
                     "EE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero", c.s.hero(), 1, 6);
                         c.eq("hero hp", c.s.hero_hp(), 9);
                         c.eq("teleports used", c.s.counters().teleports_used, 1);
                         c.eq("monsters slain", c.s.counters().monsters_slain, 1);
                         c.expect(!c.s.npcs()[0].alive, "portal guard dead");
                     }});

        // If the defender survives the exchange the teleport fails and the
        // hero stays on the entry portal.
        v.push_back({"portal-defender-survives",
                     pad_rows({"##########", "#H.1..1oE#"}),
                     "EE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("hero", c.s.hero(), 1, 3);
                         c.eq("hero hp", c.s.hero_hp(), 8);
                         c.eq("teleports used", c.s.counters().teleports_used, 0);
                         c.expect(c.s.npcs()[0].alive, "ogre tanks the bump");
                         c.eq("ogre hp", c.s.npcs()[0].hp, 1);
                         c.eq("ogre pos", c.s.npcs()[0].pos, 1, 5);
                     }});

        // --- treasure, terminals --------------------------------------------
        v.push_back({"treasures-accumulate",
                     pad_rows({"##########", "#HT.T..E##"}),
                     "EEE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("treasures opened", c.s.counters().treasures_opened, 2);
                         c.eq("treasure score", c.s.treasure_score(), 2);
                         c.eq("steps", c.s.counters().steps, 3);
                     }});

        // Hitting the turn cap ends the run with its own status.
        v.push_back({"turn-cap",
                     pad_rows({"##########", "#H...E####"}),
                     "EEE", 3, [](Checker& c) {
                         c.eq("status", c.s.status(), Status::TurnCapped);
                         c.eq("turn", c.s.turn(), 3);
                         c.expect(c.s.terminal(), "turn cap is terminal");
                         c.expect(c.s.legal_actions().empty(), "no actions after the cap");
                         c.eq("hero", c.s.hero(), 1, 4);
                     }});

        v.push_back({"win-on-exit",
                     pad_rows({"##########", "#H.E######"}),
                     "EE", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("status", c.s.status(), Status::Won);
                         c.expect(c.s.terminal(), "win is terminal");
                         c.eq("hero", c.s.hero(), 1, 3);
                         c.eq("steps", c.s.counters().steps, 2);
                     }});

        // Simultaneous lethal damage: the hero's death outranks both the
        // kill it just scored and the exit tile it was bumping onto.
        v.push_back({"death-outranks-win",
                     pad_rows({"##########", "#H^^^^^^.#", "########^#", "########^#",
                               "########^#", "#######gE#"}),
                     "EEEEEEESSSS", md2::kDefaultMaxTurns, [](Checker& c) {
                         c.eq("status", c.s.status(), Status::Dead);
                         c.eq("hero hp", c.s.hero_hp(), 0);
                         c.eq("hero", c.s.hero(), 4, 8);
                         c.eq("monsters slain", c.s.counters().monsters_slain, 1);
                         c.expect(!c.s.npcs()[0].alive, "goblin died in the exchange");
                         c.eq("goblin pos", c.s.npcs()[0].pos, 5, 8);
                         c.eq("traps sprung", c.s.counters().traps_sprung, 9);
                         c.eq("steps", c.s.counters().steps, 11);
                     }});

        return v;
    }();
    return list;
}

}  // namespace golden
