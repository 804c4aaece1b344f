#pragma once
// Procedural personas: linear utilities over end-of-playthrough gameplay
// metrics, plus the four evolved tree policies that ship as built-ins.
//
// Metrics (all derived from one state):
//   ST  steps taken (raw count of move actions)
//   PE  exit proximity: 1 - d(hero, exit) / D, with d the BFS shortest-path
//       distance and D the map's maximum BFS distance from the exit
//   PD, TO, MS  potions drunk / treasures opened / monsters slain as ratios
//       of the map's initial counts (0 when the map has none)
//   MTK, JT, TU, TS  raw counts (knockouts, javelin throws, teleports, traps)
//   HL  health left: hp / 10
//   IC  interactions: (potions + treasures + kills) / initial interactive
//       object count
//
// A persona's utility is a weighted sum of those metrics while alive and a
// flat death penalty (-5 by default) when dead.

#include <string>
#include <string_view>
#include <vector>

#include "md2/expr.hpp"
#include "md2/game.hpp"

namespace md2 {

struct GameplayMetrics {
    double steps_taken = 0;
    double exit_proximity = 0;
    double potion_ratio = 0;
    double treasure_ratio = 0;
    double minitaur_knockouts = 0;
    double monster_ratio = 0;
    double javelin_throws = 0;
    double health_left = 0;
    double teleports_used = 0;
    double traps_sprung = 0;
    double interaction_ratio = 0;
};

inline Bindings make_bindings(const GameplayMetrics& m, double mean_reward) {
    Bindings b{};
    b[std::size_t(Var::StepsTaken)] = m.steps_taken;
    b[std::size_t(Var::ExitProximity)] = m.exit_proximity;
    b[std::size_t(Var::PotionsDrunk)] = m.potion_ratio;
    b[std::size_t(Var::TreasuresOpened)] = m.treasure_ratio;
    b[std::size_t(Var::MinitaursKnocked)] = m.minitaur_knockouts;
    b[std::size_t(Var::MonstersSlain)] = m.monster_ratio;
    b[std::size_t(Var::JavelinsThrown)] = m.javelin_throws;
    b[std::size_t(Var::HealthLeft)] = m.health_left;
    b[std::size_t(Var::TeleportsUsed)] = m.teleports_used;
    b[std::size_t(Var::TrapsSprung)] = m.traps_sprung;
    b[std::size_t(Var::MeanReward)] = mean_reward;
    b[std::size_t(Var::InteractionRatio)] = m.interaction_ratio;
    return b;
}

inline double exit_proximity(const GameState& s) {
    const LevelMap& map = s.map();
    if (map.max_exit_distance == 0) return 1.0;
    int d = map.exit_distance.at(s.hero());
    if (d < 0) return 0.0;  // hero in a pocket the exit cannot reach (authoring error)
    return 1.0 - double(d) / double(map.max_exit_distance);
}

inline GameplayMetrics metrics_from_state(const GameState& s) {
    const LevelMap& map = s.map();
    const EventCounters& c = s.counters();
    auto ratio = [](int num, int den) { return den > 0 ? double(num) / double(den) : 0.0; };
    GameplayMetrics m;
    m.steps_taken = c.steps;
    m.exit_proximity = exit_proximity(s);
    m.potion_ratio = ratio(c.potions_drunk, map.potion_count);
    m.treasure_ratio = ratio(c.treasures_opened, map.treasure_count);
    m.minitaur_knockouts = c.minitaur_knockouts;
    m.monster_ratio = ratio(c.monsters_slain, map.monster_count);
    m.javelin_throws = c.javelins_thrown;
    m.health_left = double(s.hero_hp()) / double(kHeroMaxHp);
    m.teleports_used = c.teleports_used;
    m.traps_sprung = c.traps_sprung;
    m.interaction_ratio = ratio(c.potions_drunk + c.treasures_opened + c.monsters_slain,
                                map.interactive_object_count());
    return m;
}

// What a persona is "about": the single metric used to pick the best run of a
// multi-run evolution and to correlate behavior with level features. Search
// effort stands in for wall-clock time so that node-budget runs stay
// deterministic.
enum class CorePriority : std::uint8_t {
    SearchEffort = 0,
    MonsterRatio,
    TreasureRatio,
    InteractionRatio,
};

struct Persona {
    std::string name;
    std::vector<std::pair<Var, double>> weights;
    double death_penalty = 5.0;
    CorePriority core = CorePriority::InteractionRatio;

    double utility(const GameplayMetrics& m, bool alive) const {
        if (!alive) return -death_penalty;
        Bindings b = make_bindings(m, 0.0);
        double u = 0.0;
        for (const auto& [var, w] : weights) u += w * b[std::size_t(var)];
        return u;
    }

    double utility(const GameState& s) const {
        return utility(metrics_from_state(s), s.status() != Status::Dead);
    }
};

inline Persona runner_persona() {
    return Persona{"runner",
                   {{Var::ExitProximity, 1.0}, {Var::StepsTaken, -0.01}},
                   5.0,
                   CorePriority::SearchEffort};
}

inline Persona monster_killer_persona() {
    return Persona{"monster-killer",
                   {{Var::MonstersSlain, 0.7}, {Var::ExitProximity, 0.3}},
                   5.0,
                   CorePriority::MonsterRatio};
}

inline Persona treasure_collector_persona() {
    return Persona{"treasure-collector",
                   {{Var::TreasuresOpened, 0.7}, {Var::ExitProximity, 0.3}},
                   5.0,
                   CorePriority::TreasureRatio};
}

inline Persona completionist_persona() {
    return Persona{"completionist",
                   {{Var::InteractionRatio, 0.7}, {Var::ExitProximity, 0.3}},
                   5.0,
                   CorePriority::InteractionRatio};
}

inline const std::vector<Persona>& standard_personas() {
    static const std::vector<Persona> all = {runner_persona(), monster_killer_persona(),
                                             treasure_collector_persona(),
                                             completionist_persona()};
    return all;
}

// nullptr when no standard persona carries that name.
inline const Persona* persona_by_name(std::string_view name) {
    for (const Persona& p : standard_personas())
        if (p.name == name) return &p;
    return nullptr;
}

// ---- Built-in evolved tree policies --------------------------------------
// One expression per persona, reproduced from the best evolved individuals.
// Sum chains are associated to keep every tree inside the depth cap.

namespace detail {
inline ExprTree c(double v) { return ExprTree::constant(v); }
inline ExprTree v(Var var) { return ExprTree::variable(var); }
inline ExprTree add(const ExprTree& a, const ExprTree& b) { return ExprTree::compose(Op::Add, a, b); }
inline ExprTree sub(const ExprTree& a, const ExprTree& b) { return ExprTree::compose(Op::Sub, a, b); }
inline ExprTree mul(const ExprTree& a, const ExprTree& b) { return ExprTree::compose(Op::Mul, a, b); }
}  // namespace detail

// 6.235 * ST * PE^2 * (PE + 1) + R * (1 - HL)
inline ExprTree runner_policy() {
    using namespace detail;
    ExprTree st = v(Var::StepsTaken), pe = v(Var::ExitProximity);
    ExprTree lhs = mul(mul(mul(c(6.235), st), mul(pe, pe)), add(pe, c(1.0)));
    ExprTree rhs = mul(v(Var::MeanReward), sub(c(1.0), v(Var::HealthLeft)));
    return add(lhs, rhs);
}

// 4 * MS * PE * (MS + 2 * HL * (PE - IC))
inline ExprTree monster_killer_policy() {
    using namespace detail;
    ExprTree ms = v(Var::MonstersSlain), pe = v(Var::ExitProximity);
    ExprTree inner = add(ms, mul(mul(c(2.0), v(Var::HealthLeft)),
                                 sub(pe, v(Var::InteractionRatio))));
    return mul(mul(mul(c(4.0), ms), pe), inner);
}

// 2*PD + 2*MS + TO + 3*R + ST + PE + 0.19
inline ExprTree treasure_collector_policy() {
    using namespace detail;
    ExprTree sum = mul(c(2.0), v(Var::PotionsDrunk));
    sum = add(sum, mul(c(2.0), v(Var::MonstersSlain)));
    sum = add(sum, v(Var::TreasuresOpened));
    sum = add(sum, mul(c(3.0), v(Var::MeanReward)));
    sum = add(sum, v(Var::StepsTaken));
    sum = add(sum, v(Var::ExitProximity));
    return add(sum, c(0.19));
}

// ST*MS*(ST^2*MS + IC) + R - TO + IC - PE + 2*ST*PE*(ST*MS + 1)
inline ExprTree completionist_policy() {
    using namespace detail;
    ExprTree st = v(Var::StepsTaken), ms = v(Var::MonstersSlain), pe = v(Var::ExitProximity);
    ExprTree ic = v(Var::InteractionRatio);
    ExprTree head = mul(mul(st, ms), add(mul(mul(st, st), ms), ic));
    ExprTree tail = mul(mul(mul(c(2.0), st), pe), add(mul(st, ms), c(1.0)));
    // Balanced association keeps the depth at 7 (a left chain would reach 9).
    ExprTree left = add(head, sub(v(Var::MeanReward), v(Var::TreasuresOpened)));
    ExprTree right = add(sub(ic, pe), tail);
    return add(left, right);
}

inline const ExprTree* builtin_policy(const std::string& name) {
    static const std::vector<std::pair<std::string, ExprTree>> table = {
        {"runner-evolved", runner_policy()},
        {"mk-evolved", monster_killer_policy()},
        {"tc-evolved", treasure_collector_policy()},
        {"c-evolved", completionist_policy()},
    };
    for (const auto& [key, tree] : table) {
        if (key == name) return &tree;
    }
    return nullptr;
}

inline std::string builtin_policy_name(const Persona& p) {
    if (p.name == "runner") return "runner-evolved";
    if (p.name == "monster-killer") return "mk-evolved";
    if (p.name == "treasure-collector") return "tc-evolved";
    if (p.name == "completionist") return "c-evolved";
    return "";
}

}  // namespace md2
