#pragma once
// Batch playtesting harness: run every agent on every map for N seeded trials,
// then aggregate means, confidence intervals, Welch matrices, visit heatmaps,
// and correlations against structural level metrics. All output writers emit
// byte-stable text: fixed column order, '\n' newlines, shortest round-trip
// doubles.

#include <algorithm>
#include <array>
#include <cassert>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "md2/map.hpp"
#include "md2/mcts.hpp"
#include "md2/parallel.hpp"
#include "md2/persona.hpp"
#include "md2/rng.hpp"
#include "md2/stats.hpp"

namespace md2 {

struct AgentSpec {
    Persona persona;
    TreePolicy policy;

    std::string label() const { return persona.name + "/" + policy.id; }
};

struct PlaytestConfig {
    SearchBudget budget;
    int trials = 50;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct AgentHeatmap {
    std::string map_name;
    std::string agent;
    Grid<std::uint32_t> visits;
};

struct BatchResult {
    // Fixed order: map-major, then agent, then trial. Parallel workers write
    // into their own slots, so scheduling never reorders anything.
    std::vector<Playtrace> records;
    std::vector<AgentHeatmap> heatmaps;  // one per (map, agent), same order

    std::size_t index(std::size_t map, std::size_t agent, std::size_t trial,
                      std::size_t agents, std::size_t trials) const {
        return (map * agents + agent) * trials + trial;
    }
};

// Per-tile hero visit counts summed over the traces recorded on `map`.
inline Grid<std::uint32_t> heatmap(const std::vector<Playtrace>& traces, const LevelMap& map) {
    Grid<std::uint32_t> grid;
    grid.fill(0);
    for (const Playtrace& trace : traces) {
        if (trace.map_name != map.name) continue;
        for (int i = 0; i < kMapTiles; ++i) grid.at(i) += trace.visits.at(i);
    }
    return grid;
}

inline BatchResult batch(const std::vector<const LevelMap*>& maps,
                         const std::vector<AgentSpec>& agents,
                         const PlaytestConfig& config) {
    if (maps.empty()) throw std::invalid_argument("batch needs at least one map");
    if (agents.empty()) throw std::invalid_argument("batch needs at least one agent");
    if (config.trials < 1) throw std::invalid_argument("batch needs at least one trial");
    if (!config.budget.bounded()) throw std::invalid_argument("batch budget must be bounded");

    const std::size_t n_maps = maps.size();
    const std::size_t n_agents = agents.size();
    const std::size_t n_trials = std::size_t(config.trials);

    BatchResult result;
    result.records.resize(n_maps * n_agents * n_trials);
    parallel_for(result.records.size(), config.jobs, [&](std::size_t idx) {
        std::size_t trial = idx % n_trials;
        std::size_t agent = (idx / n_trials) % n_agents;
        std::size_t map = idx / (n_trials * n_agents);
        std::uint64_t seed = derive_seed(config.seed, map, agent, trial);
        result.records[idx] = plan(*maps[map], agents[agent].persona,
                                   agents[agent].policy, config.budget, seed);
    });

    result.heatmaps.reserve(n_maps * n_agents);
    for (std::size_t m = 0; m < n_maps; ++m)
        for (std::size_t a = 0; a < n_agents; ++a) {
            AgentHeatmap hm;
            hm.map_name = maps[m]->name;
            hm.agent = agents[a].label();
            hm.visits.fill(0);
            for (std::size_t t = 0; t < n_trials; ++t) {
                const Playtrace& trace =
                    result.records[result.index(m, a, t, n_agents, n_trials)];
                for (int i = 0; i < kMapTiles; ++i) hm.visits.at(i) += trace.visits.at(i);
            }
            result.heatmaps.push_back(std::move(hm));
        }
    return result;
}

namespace detail {

inline std::string shortest_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    assert(res.ec == std::errc());
    return std::string(buf, res.ptr);
}

// Names the per-trial metrics that feed the aggregate tables and Welch
// matrices; `steps` rides along as a plain count.
struct MetricColumn {
    const char* name;
    double (*get)(const Playtrace&);
};

inline const std::array<MetricColumn, 5>& metric_columns() {
    static const std::array<MetricColumn, 5> cols = {{
        {"monsters_ratio", [](const Playtrace& t) { return t.final_metrics.monster_ratio; }},
        {"potions_ratio", [](const Playtrace& t) { return t.final_metrics.potion_ratio; }},
        {"treasures_ratio", [](const Playtrace& t) { return t.final_metrics.treasure_ratio; }},
        {"interactive_ratio",
         [](const Playtrace& t) { return t.final_metrics.interaction_ratio; }},
        {"steps", [](const Playtrace& t) { return double(t.steps); }},
    }};
    return cols;
}

}  // namespace detail

inline void write_records_csv(std::ostream& out, const std::vector<Playtrace>& records) {
    out << "map,persona,policy,seed,outcome,monsters_ratio,potions_ratio,"
           "treasures_ratio,interactive_ratio,steps,elapsed_seconds,nodes_expanded\n";
    for (const Playtrace& t : records) {
        out << t.map_name << ',' << t.persona << ',' << t.policy_id << ',' << t.seed << ','
            << status_name(t.outcome) << ','
            << detail::shortest_double(t.final_metrics.monster_ratio) << ','
            << detail::shortest_double(t.final_metrics.potion_ratio) << ','
            << detail::shortest_double(t.final_metrics.treasure_ratio) << ','
            << detail::shortest_double(t.final_metrics.interaction_ratio) << ','
            << t.steps << ',' << detail::shortest_double(t.elapsed_seconds) << ','
            << t.nodes_expanded << '\n';
    }
}

// Plain (P2) PGM; max gray level is the highest count so the most-visited
// tile renders white.
inline void write_heatmap_pgm(std::ostream& out, const Grid<std::uint32_t>& grid) {
    std::uint32_t maxval = 1;
    for (int i = 0; i < kMapTiles; ++i) maxval = std::max(maxval, grid.at(i));
    out << "P2\n" << kMapWidth << ' ' << kMapHeight << '\n' << maxval << '\n';
    for (int row = 0; row < kMapHeight; ++row) {
        for (int col = 0; col < kMapWidth; ++col) {
            if (col) out << ' ';
            out << grid.at(Coord{std::int8_t(row), std::int8_t(col)});
        }
        out << '\n';
    }
}

inline void write_heatmap_csv(std::ostream& out, const Grid<std::uint32_t>& grid) {
    for (int row = 0; row < kMapHeight; ++row) {
        for (int col = 0; col < kMapWidth; ++col) {
            if (col) out << ',';
            out << grid.at(Coord{std::int8_t(row), std::int8_t(col)});
        }
        out << '\n';
    }
}

namespace detail {

struct RecordSlice {
    const std::vector<Playtrace>* records = nullptr;
    std::vector<std::size_t> indices;

    std::vector<double> column(double (*get)(const Playtrace&)) const {
        std::vector<double> values;
        values.reserve(indices.size());
        for (std::size_t i : indices) values.push_back(get((*records)[i]));
        return values;
    }
};

inline nlohmann::ordered_json summarize_agent(const RecordSlice& slice) {
    nlohmann::ordered_json out;
    std::size_t wins = 0;
    for (std::size_t i : slice.indices)
        if ((*slice.records)[i].outcome == Status::Won) ++wins;
    out["trials"] = slice.indices.size();
    out["wins"] = wins;
    out["win_rate"] = double(wins) / double(slice.indices.size());
    nlohmann::ordered_json metrics;
    for (const MetricColumn& col : metric_columns()) {
        std::vector<double> values = slice.column(col.get);
        nlohmann::ordered_json entry;
        if (values.size() >= 2) {
            CiResult ci = ci95(values);
            entry["mean"] = ci.mean;
            entry["ci95"] = ci.half_width;
        } else {
            entry["mean"] = values.front();
            entry["ci95"] = nullptr;
        }
        metrics[col.name] = std::move(entry);
    }
    out["metrics"] = std::move(metrics);
    nlohmann::ordered_json extras;
    std::vector<double> utilities;
    utilities.reserve(slice.indices.size());
    for (std::size_t i : slice.indices) utilities.push_back((*slice.records)[i].utility);
    if (utilities.size() >= 2) {
        CiResult ci = ci95(utilities);
        extras["mean"] = ci.mean;
        extras["ci95"] = ci.half_width;
    } else {
        extras["mean"] = utilities.front();
        extras["ci95"] = nullptr;
    }
    out["utility"] = std::move(extras);
    return out;
}

// Full Welch matrix (both orders plus the diagonal) per metric; the
// zero-variance conventions make the diagonal t == 0, p == 1 automatically.
// A constant-vs-constant pair with unequal means has t == +/-inf, which JSON
// cannot carry; it serializes as null while p stays 0, so significance
// reading is unaffected.
inline nlohmann::ordered_json welch_matrices(const std::vector<std::string>& labels,
                                             const std::vector<RecordSlice>& slices) {
    nlohmann::ordered_json out;
    for (const MetricColumn& col : metric_columns()) {
        nlohmann::ordered_json matrix;
        std::vector<std::vector<double>> columns;
        columns.reserve(slices.size());
        for (const RecordSlice& slice : slices) columns.push_back(slice.column(col.get));
        for (std::size_t a = 0; a < labels.size(); ++a) {
            nlohmann::ordered_json row;
            for (std::size_t b = 0; b < labels.size(); ++b) {
                WelchResult w = welch_t_test(columns[a], columns[b]);
                nlohmann::ordered_json cell;
                cell["t"] = w.t;
                cell["p"] = w.p;
                row[labels[b]] = std::move(cell);
            }
            matrix[labels[a]] = std::move(row);
        }
        out[col.name] = std::move(matrix);
    }
    return out;
}

inline const char* core_metric_name(CorePriority core) {
    switch (core) {
        case CorePriority::SearchEffort: return "search_nodes";
        case CorePriority::MonsterRatio: return "monsters_ratio";
        case CorePriority::TreasureRatio: return "treasures_ratio";
        case CorePriority::InteractionRatio: return "interactive_ratio";
    }
    return "?";
}

inline double core_metric_value(CorePriority core, const Playtrace& t) {
    switch (core) {
        case CorePriority::SearchEffort: return double(t.nodes_expanded);
        case CorePriority::MonsterRatio: return t.final_metrics.monster_ratio;
        case CorePriority::TreasureRatio: return t.final_metrics.treasure_ratio;
        case CorePriority::InteractionRatio: return t.final_metrics.interaction_ratio;
    }
    return 0.0;
}

inline bool effectively_constant(const std::vector<double>& values) {
    for (double v : values)
        if (v != values.front()) return false;
    return true;
}

}  // namespace detail

// Pearson correlations between each agent's core-priority metric (per-map
// means) and every structural level metric. Constant columns cannot be
// correlated; those pairs are kept in the table but flagged as skipped.
inline nlohmann::ordered_json correlate_levels(const BatchResult& result,
                                               const std::vector<const LevelMap*>& maps,
                                               const std::vector<AgentSpec>& agents,
                                               const PlaytestConfig& config) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    if (maps.size() < 3) return out;

    const std::size_t n_trials = std::size_t(config.trials);
    std::vector<LevelMetrics> level(maps.size());
    for (std::size_t m = 0; m < maps.size(); ++m) level[m] = structural_metrics(*maps[m]);
    const auto level_names = level.front().named_values();

    for (std::size_t a = 0; a < agents.size(); ++a) {
        const AgentSpec& agent = agents[a];
        std::vector<double> per_map_mean(maps.size(), 0.0);
        for (std::size_t m = 0; m < maps.size(); ++m) {
            double total = 0.0;
            for (std::size_t t = 0; t < n_trials; ++t) {
                const Playtrace& trace =
                    result.records[result.index(m, a, t, agents.size(), n_trials)];
                total += detail::core_metric_value(agent.persona.core, trace);
            }
            per_map_mean[m] = total / double(n_trials);
        }
        for (std::size_t lv = 0; lv < level_names.size(); ++lv) {
            nlohmann::ordered_json row;
            row["agent"] = agent.label();
            row["agent_metric"] = detail::core_metric_name(agent.persona.core);
            row["level_metric"] = level_names[lv].first;
            std::vector<double> x(maps.size());
            for (std::size_t m = 0; m < maps.size(); ++m)
                x[m] = level[m].named_values()[lv].second;
            if (detail::effectively_constant(x)) {
                row["skipped"] = "constant level metric";
            } else if (detail::effectively_constant(per_map_mean)) {
                row["skipped"] = "constant agent metric";
            } else {
                PearsonResult pr = pearson(x, per_map_mean);
                row["r"] = pr.r;
                row["p"] = pr.p;
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

inline nlohmann::ordered_json build_report(const BatchResult& result,
                                           const std::vector<const LevelMap*>& maps,
                                           const std::vector<AgentSpec>& agents,
                                           const PlaytestConfig& config) {
    const std::size_t n_trials = std::size_t(config.trials);
    std::vector<std::string> labels;
    labels.reserve(agents.size());
    for (const AgentSpec& agent : agents) labels.push_back(agent.label());

    nlohmann::ordered_json report;
    nlohmann::ordered_json cfg;
    cfg["trials"] = config.trials;
    cfg["seed"] = config.seed;
    if (config.budget.max_nodes) cfg["budget_nodes"] = *config.budget.max_nodes;
    if (config.budget.wall_seconds) cfg["budget_seconds"] = *config.budget.wall_seconds;
    cfg["rollout_length"] = config.budget.rollout_length;
    cfg["max_turns"] = config.budget.max_turns;
    report["config"] = std::move(cfg);

    nlohmann::ordered_json per_map;
    std::vector<detail::RecordSlice> pooled(agents.size());
    for (std::size_t a = 0; a < agents.size(); ++a) pooled[a].records = &result.records;

    for (std::size_t m = 0; m < maps.size(); ++m) {
        std::vector<detail::RecordSlice> slices(agents.size());
        for (std::size_t a = 0; a < agents.size(); ++a) {
            slices[a].records = &result.records;
            for (std::size_t t = 0; t < n_trials; ++t) {
                std::size_t idx = result.index(m, a, t, agents.size(), n_trials);
                slices[a].indices.push_back(idx);
                pooled[a].indices.push_back(idx);
            }
        }
        nlohmann::ordered_json entry;
        nlohmann::ordered_json agents_json;
        for (std::size_t a = 0; a < agents.size(); ++a)
            agents_json[labels[a]] = detail::summarize_agent(slices[a]);
        entry["agents"] = std::move(agents_json);
        if (n_trials >= 2) entry["t_tests"] = detail::welch_matrices(labels, slices);
        per_map[maps[m]->name] = std::move(entry);
    }
    report["maps"] = std::move(per_map);

    nlohmann::ordered_json pooled_json;
    nlohmann::ordered_json pooled_agents;
    for (std::size_t a = 0; a < agents.size(); ++a)
        pooled_agents[labels[a]] = detail::summarize_agent(pooled[a]);
    pooled_json["agents"] = std::move(pooled_agents);
    if (n_trials >= 2) pooled_json["t_tests"] = detail::welch_matrices(labels, pooled);
    report["pooled"] = std::move(pooled_json);

    report["correlations"] = correlate_levels(result, maps, agents, config);
    return report;
}

}  // namespace md2
