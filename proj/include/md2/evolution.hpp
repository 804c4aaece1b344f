#pragma once
// Island-model genetic programming over tree policies. Each island breeds in
// isolation; every generation the best genome of island i replaces the worst
// genome of island (i+1) mod k. Elites and the arriving migrant carry their
// stored fitness, so the best-so-far curve never goes down.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "md2/expr.hpp"
#include "md2/map.hpp"
#include "md2/mcts.hpp"
#include "md2/parallel.hpp"
#include "md2/persona.hpp"
#include "md2/rng.hpp"

namespace md2 {

struct EvolutionConfig {
    int population = 100;       // total across islands; must divide evenly
    int islands = 5;
    int generations = 100;
    double elitism = 0.15;      // fraction of each island copied unchanged
    double mutation_rate = 0.10;
    int mating_pool = 5;        // best-of-island parents per generation
    int trials_per_eval = 1;    // independent searches averaged per map
    SearchBudget budget;        // per-search budget during fitness evaluation
    std::uint64_t seed = 0;
    int jobs = 1;

    int island_size() const { return population / islands; }
    int elite_count() const {
        int e = int(std::floor(elitism * double(island_size())));
        return e < island_size() ? e : island_size() - 1;
    }
    int migrant_count() const { return islands > 1 ? 1 : 0; }

    void validate() const {
        if (population < 2) throw std::invalid_argument("population must be at least 2");
        if (islands < 1) throw std::invalid_argument("need at least one island");
        if (population % islands != 0)
            throw std::invalid_argument("population must divide evenly across islands");
        if (island_size() < 2) throw std::invalid_argument("islands need at least 2 members");
        if (generations < 0) throw std::invalid_argument("generations must be non-negative");
        if (elitism < 0.0 || elitism >= 1.0)
            throw std::invalid_argument("elitism must lie in [0, 1)");
        if (mutation_rate < 0.0 || mutation_rate > 1.0)
            throw std::invalid_argument("mutation rate must lie in [0, 1]");
        if (mating_pool < 2) throw std::invalid_argument("mating pool needs at least 2 parents");
        if (trials_per_eval < 1) throw std::invalid_argument("trials per eval must be positive");
        if (!budget.bounded()) throw std::invalid_argument("fitness budget must be bounded");
        int spoken_for = elite_count() + migrant_count();
        if (spoken_for >= island_size())
            throw std::invalid_argument("elites plus migrant leave no room for offspring");
    }
};

struct Individual {
    ExprTree genome;
    double fitness = 0.0;
};

using Island = std::vector<Individual>;

struct GenerationStats {
    int generation = 0;
    double best = 0.0;
    double mean = 0.0;
};

struct EvolutionResult {
    Individual best;
    std::vector<GenerationStats> history;
    std::vector<Island> final_islands;
};

// Mean utility of the best plan found over every training map and trial.
// Trial seeds derive from `seed` so the evaluation is reproducible and
// independent of scheduling.
inline double genome_fitness(const ExprTree& genome, const Persona& persona,
                             const std::vector<const LevelMap*>& maps,
                             const SearchBudget& budget, std::uint64_t seed,
                             int trials = 1) {
    assert(!maps.empty());
    assert(trials >= 1);
    TreePolicy policy = TreePolicy::expression(genome, "candidate");
    double total = 0.0;
    for (std::size_t m = 0; m < maps.size(); ++m) {
        for (int t = 0; t < trials; ++t) {
            Playtrace trace =
                plan(*maps[m], persona, policy, budget, derive_seed(seed, m, t));
            total += trace.best_utility;
        }
    }
    return total / double(maps.size() * std::size_t(trials));
}

namespace detail {

// Rank island members best-first; equal fitness keeps the lower slot first so
// reruns rank identically.
inline std::vector<int> rank_by_fitness(const Island& island) {
    std::vector<int> order(island.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return island[std::size_t(a)].fitness > island[std::size_t(b)].fitness;
    });
    return order;
}

}  // namespace detail

// Ring migration, computed from the pre-migration populations: the best member
// of island i overwrites the worst member of island i+1 (wrapping). With one
// island this is a no-op. Returns, per island, the slot that received a
// migrant (-1 if none).
inline std::vector<int> migrate(std::vector<Island>& islands) {
    std::vector<int> landed(islands.size(), -1);
    if (islands.size() < 2) return landed;
    std::vector<Individual> best(islands.size());
    std::vector<int> worst_slot(islands.size());
    for (std::size_t i = 0; i < islands.size(); ++i) {
        std::vector<int> order = detail::rank_by_fitness(islands[i]);
        best[i] = islands[i][std::size_t(order.front())];
        worst_slot[i] = order.back();
    }
    for (std::size_t i = 0; i < islands.size(); ++i) {
        std::size_t dst = (i + 1) % islands.size();
        islands[dst][std::size_t(worst_slot[dst])] = best[i];
        landed[dst] = worst_slot[dst];
    }
    return landed;
}

namespace detail {

struct PendingEval {
    int island = 0;
    int slot = 0;
};

inline GenerationStats population_stats(const std::vector<Island>& islands, int generation) {
    GenerationStats stats;
    stats.generation = generation;
    stats.best = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    std::size_t count = 0;
    for (const Island& island : islands) {
        for (const Individual& member : island) {
            stats.best = std::max(stats.best, member.fitness);
            total += member.fitness;
            ++count;
        }
    }
    stats.mean = total / double(count);
    return stats;
}

}  // namespace detail

using EvolutionObserver = std::function<void(const GenerationStats&)>;

inline EvolutionResult evolve(const Persona& persona,
                              const std::vector<const LevelMap*>& maps,
                              const EvolutionConfig& config,
                              const EvolutionObserver& observer = {}) {
    config.validate();
    if (maps.empty()) throw std::invalid_argument("evolution needs at least one training map");

    const int k = config.islands;
    const int m = config.island_size();
    Rng rng(derive_seed(config.seed, std::uint64_t(0x45564f4c)));  // breeding stream

    std::vector<Island> islands;
    islands.assign(std::size_t(k), Island(std::size_t(m)));
    std::vector<detail::PendingEval> pending;
    pending.reserve(std::size_t(k * m));

    for (int i = 0; i < k; ++i)
        for (int s = 0; s < m; ++s) {
            islands[std::size_t(i)][std::size_t(s)].genome = ExprTree::random(rng);
            pending.push_back({i, s});
        }

    auto evaluate_pending = [&](int generation) {
        parallel_for(pending.size(), config.jobs, [&](std::size_t idx) {
            const detail::PendingEval& job = pending[idx];
            Individual& member = islands[std::size_t(job.island)][std::size_t(job.slot)];
            std::uint64_t seed =
                derive_seed(config.seed, std::uint64_t(generation),
                            std::uint64_t(job.island), std::uint64_t(job.slot));
            member.fitness = genome_fitness(member.genome, persona, maps, config.budget,
                                            seed, config.trials_per_eval);
        });
        pending.clear();
    };

    evaluate_pending(0);

    EvolutionResult result;
    result.history.reserve(std::size_t(config.generations) + 1);
    result.history.push_back(detail::population_stats(islands, 0));
    if (observer) observer(result.history.back());

    const int elites = config.elite_count();
    const int migrants = config.migrant_count();
    const int offspring_per_island = m - elites - migrants;
    const int pool_size = config.mating_pool < m ? config.mating_pool : m;

    for (int gen = 1; gen <= config.generations; ++gen) {
        std::vector<int> migrant_slot = migrate(islands);

        for (int i = 0; i < k; ++i) {
            Island& island = islands[std::size_t(i)];
            std::vector<int> order = detail::rank_by_fitness(island);

            Island next;
            next.reserve(std::size_t(m));
            for (int e = 0; e < elites; ++e)
                next.push_back(island[std::size_t(order[std::size_t(e)])]);
            if (migrants == 1) next.push_back(island[std::size_t(migrant_slot[std::size_t(i)])]);

            // Parents are copies; mutation rewrites a copy, never the survivor.
            std::vector<ExprTree> pool;
            pool.reserve(std::size_t(pool_size));
            for (int p = 0; p < pool_size; ++p) {
                ExprTree parent = island[std::size_t(order[std::size_t(p)])].genome;
                if (rng.chance(config.mutation_rate)) parent = ExprTree::mutate(parent, rng);
                pool.push_back(std::move(parent));
            }

            assert(int(next.size()) == m - offspring_per_island);
            while (int(next.size()) < m) {
                std::size_t a = rng.index(pool.size());
                std::size_t b = rng.index(pool.size() - 1);
                if (b >= a) ++b;
                auto [child_a, child_b] = ExprTree::crossover(pool[a], pool[b], rng);
                Individual born;
                born.genome = std::move(child_a);
                pending.push_back({i, int(next.size())});
                next.push_back(std::move(born));
                if (int(next.size()) < m) {
                    Individual sibling;
                    sibling.genome = std::move(child_b);
                    pending.push_back({i, int(next.size())});
                    next.push_back(std::move(sibling));
                }
            }
            island = std::move(next);
        }

        evaluate_pending(gen);
        result.history.push_back(detail::population_stats(islands, gen));
        if (observer) observer(result.history.back());
    }

    const Individual* champion = nullptr;
    for (const Island& island : islands)
        for (const Individual& member : island)
            if (!champion || member.fitness > champion->fitness) champion = &member;
    result.best = *champion;
    result.final_islands = std::move(islands);
    return result;
}

}  // namespace md2
