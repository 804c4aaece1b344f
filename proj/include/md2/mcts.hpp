#pragma once
// Monte Carlo tree search over full game states, one tree per map.
//
// Iteration: descend through fully expanded nodes by tree-policy score,
// expand one untried action chosen uniformly at random, roll out up to 10
// uniformly random legal actions, then backpropagate the persona utility of
// the end state along the path. The search stops the moment any expanded or
// simulated state is a win and returns that exact action sequence; otherwise,
// on budget exhaustion, it returns the sequence of the highest-utility
// simulation seen (ties keep the earliest).
//
// Tree policies: UCB1 with c = sqrt(2), or an expression tree evaluated on the
// child's gameplay metrics with R bound to its mean backpropagated reward.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "md2/expr.hpp"
#include "md2/game.hpp"
#include "md2/map.hpp"
#include "md2/persona.hpp"
#include "md2/rng.hpp"

namespace md2 {

inline double ucb1(double w, std::uint64_t n, std::uint64_t t,
                   double c = std::numbers::sqrt2) {
    assert(n >= 1 && t >= n);
    return w / double(n) + c * std::sqrt(std::log(double(t)) / double(n));
}

struct TreePolicy {
    enum class Kind : std::uint8_t { Ucb1, Expression };
    Kind kind = Kind::Ucb1;
    double exploration = std::numbers::sqrt2;
    ExprTree tree;
    std::string id = "ucb1";

    static TreePolicy make_ucb1(double exploration = std::numbers::sqrt2) {
        TreePolicy p;
        p.kind = Kind::Ucb1;
        p.exploration = exploration;
        return p;
    }

    static TreePolicy expression(ExprTree tree, std::string id) {
        TreePolicy p;
        p.kind = Kind::Expression;
        p.tree = std::move(tree);
        p.id = std::move(id);
        return p;
    }
};

struct SearchBudget {
    std::optional<double> wall_seconds;  // real-time cap
    // Iteration cap; the deterministic mode. Each iteration expands at most
    // one node, so this also bounds tree size. Counting iterations instead of
    // expansions keeps the search terminating even when a degenerate policy
    // pins selection to an already-terminal path, where no expansion happens.
    std::optional<std::uint64_t> max_nodes;
    int rollout_length = 10;
    int max_turns = kDefaultMaxTurns;

    bool bounded() const { return wall_seconds.has_value() || max_nodes.has_value(); }
    bool deterministic() const { return !wall_seconds.has_value(); }
};

struct SearchNode {
    GameState state;
    HeroAction action{};  // edge from the parent; meaningless at the root
    SearchNode* parent = nullptr;
    std::vector<std::unique_ptr<SearchNode>> children;
    std::vector<HeroAction> untried;
    GameplayMetrics metrics;
    std::uint64_t visits = 0;
    double reward_sum = 0.0;
    // Audit trail: simulations that started from this exact node. Every
    // node's totals must equal its own share plus its children's sums.
    std::uint64_t own_simulations = 0;
    double own_reward = 0.0;
};

inline double tree_policy_score(const SearchNode& child, const TreePolicy& policy) {
    assert(child.parent && child.visits >= 1);
    if (policy.kind == TreePolicy::Kind::Ucb1) {
        return ucb1(child.reward_sum, child.visits, child.parent->visits, policy.exploration);
    }
    Bindings b = make_bindings(child.metrics, child.reward_sum / double(child.visits));
    return policy.tree.evaluate(b);
}

struct Playtrace {
    std::string map_name;
    std::string persona;
    std::string policy_id;
    std::uint64_t seed = 0;
    std::vector<HeroAction> actions;
    std::vector<std::uint64_t> digests;  // initial state hash, then one per action
    GameplayMetrics final_metrics;
    Status outcome = Status::Running;
    int steps = 0;               // move actions actually taken
    double utility = 0.0;        // persona utility of the final replayed state
    double best_utility = 0.0;   // highest simulation utility seen by the search
    std::uint64_t nodes_expanded = 0;
    std::uint64_t simulations = 0;
    double elapsed_seconds = 0.0;  // 0 in deterministic (node-budget) mode
    Grid<std::uint32_t> visits;    // hero tile occupancy: start tile plus one per action
};

class ReplayError : public std::runtime_error {
public:
    ReplayError(std::size_t index, const std::string& why)
        : std::runtime_error("action " + std::to_string(index) + ": " + why), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

// Replays an action sequence from the initial state, recording digests and
// tile visits. The sequence is truncated at the first terminal state; an
// illegal action is an error identifying the offending index.
inline Playtrace replay(const LevelMap& map, std::span<const HeroAction> actions,
                        int max_turns = kDefaultMaxTurns) {
    Playtrace t;
    t.map_name = map.name;
    GameState s = GameState::initial(map, max_turns);
    t.digests.push_back(s.hash());
    t.visits.at(s.hero()) += 1;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (s.terminal()) break;
        try {
            s.apply(actions[i]);
        } catch (const IllegalAction& e) {
            throw ReplayError(i, e.what());
        }
        t.actions.push_back(actions[i]);
        t.digests.push_back(s.hash());
        t.visits.at(s.hero()) += 1;
    }
    t.final_metrics = metrics_from_state(s);
    t.outcome = s.status();
    t.steps = s.counters().steps;
    return t;
}

class Search {
public:
    Search(const LevelMap& map, const Persona& persona, const TreePolicy& policy,
           const SearchBudget& budget, std::uint64_t seed)
        : map_(&map), persona_(&persona), policy_(&policy), budget_(budget), rng_(seed) {
        assert(budget.bounded());
        root_ = std::make_unique<SearchNode>();
        root_->state = GameState::initial(map, budget.max_turns);
        root_->metrics = metrics_from_state(root_->state);
        root_->untried = root_->state.legal_actions();
        start_ = std::chrono::steady_clock::now();
    }

    const SearchNode& root() const { return *root_; }
    std::uint64_t nodes_expanded() const { return nodes_expanded_; }
    std::uint64_t simulations() const { return simulations_; }
    bool won() const { return won_; }
    double best_utility() const { return best_utility_; }
    const std::vector<HeroAction>& best_sequence() const { return best_sequence_; }

    double elapsed_seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    bool budget_exhausted() const {
        if (budget_.max_nodes && simulations_ >= *budget_.max_nodes) return true;
        if (budget_.wall_seconds && elapsed_seconds() >= *budget_.wall_seconds) return true;
        return false;
    }

    // One search iteration. Returns false once the search is over (budget
    // exhausted, win found, or nothing to search).
    bool iterate() {
        if (won_ || budget_exhausted() || root_->state.terminal()) return false;

        SearchNode* node = root_.get();
        while (node->untried.empty() && !node->children.empty()) {
            node = select_child(node);
        }

        SearchNode* sim_node = node;
        if (!node->state.terminal() && !node->untried.empty()) {
            sim_node = expand(node);
            if (sim_node->state.status() == Status::Won) {
                finish_with_win(sim_node, {}, persona_->utility(sim_node->state));
                return false;
            }
        }

        double utility;
        rollout_suffix_.clear();
        if (sim_node->state.terminal()) {
            utility = persona_->utility(sim_node->state);
        } else {
            GameState state = sim_node->state;
            for (int k = 0; k < budget_.rollout_length; ++k) {
                state.legal_actions(action_buffer_);
                if (action_buffer_.empty()) break;
                HeroAction a = action_buffer_[rng_.index(action_buffer_.size())];
                state.apply(a);
                rollout_suffix_.push_back(a);
                if (state.status() == Status::Won) {
                    finish_with_win(sim_node, rollout_suffix_, persona_->utility(state));
                    return false;
                }
                if (state.terminal()) break;
            }
            utility = persona_->utility(state);
        }

        sim_node->own_simulations += 1;
        sim_node->own_reward += utility;
        for (SearchNode* n = sim_node; n != nullptr; n = n->parent) {
            n->visits += 1;
            n->reward_sum += utility;
        }
        simulations_ += 1;

        if (simulations_ == 1 || utility > best_utility_) {
            best_utility_ = utility;
            best_sequence_ = path_to(sim_node);
            best_sequence_.insert(best_sequence_.end(), rollout_suffix_.begin(),
                                  rollout_suffix_.end());
        }
        return !budget_exhausted();
    }

    void run() {
        while (iterate()) {
        }
    }

    // Selection: an unvisited child is infinitely urgent; otherwise the
    // highest tree-policy score wins and ties keep the earliest-created child.
    SearchNode* select_child(SearchNode* node) {
        SearchNode* best = nullptr;
        double best_score = 0.0;
        for (const auto& child : node->children) {
            if (child->visits == 0) return child.get();
            double score = tree_policy_score(*child, *policy_);
            if (best == nullptr || score > best_score) {
                best = child.get();
                best_score = score;
            }
        }
        return best;
    }

    Playtrace build_trace() const {
        Playtrace t = replay(*map_, best_sequence_, budget_.max_turns);
        t.persona = persona_->name;
        t.policy_id = policy_->id;
        t.utility = persona_->utility(t.final_metrics, t.outcome != Status::Dead);
        t.best_utility = simulations_ == 0 && !won_ ? t.utility : best_utility_;
        t.nodes_expanded = nodes_expanded_;
        t.simulations = simulations_;
        t.elapsed_seconds = budget_.deterministic() ? 0.0 : elapsed_seconds();
        return t;
    }

private:
    SearchNode* expand(SearchNode* node) {
        std::size_t pick = rng_.index(node->untried.size());
        HeroAction action = node->untried[pick];
        node->untried[pick] = node->untried.back();
        node->untried.pop_back();

        auto child = std::make_unique<SearchNode>();
        child->state = node->state;
        child->state.apply(action);
        child->action = action;
        child->parent = node;
        child->metrics = metrics_from_state(child->state);
        child->state.legal_actions(child->untried);
        node->children.push_back(std::move(child));
        ++nodes_expanded_;
        return node->children.back().get();
    }

    std::vector<HeroAction> path_to(const SearchNode* node) const {
        std::vector<HeroAction> path;
        for (const SearchNode* n = node; n->parent != nullptr; n = n->parent) {
            path.push_back(n->action);
        }
        std::reverse(path.begin(), path.end());
        return path;
    }

    void finish_with_win(SearchNode* node, std::span<const HeroAction> suffix, double utility) {
        won_ = true;
        best_sequence_ = path_to(node);
        best_sequence_.insert(best_sequence_.end(), suffix.begin(), suffix.end());
        best_utility_ = utility;
    }

    const LevelMap* map_;
    const Persona* persona_;
    const TreePolicy* policy_;
    SearchBudget budget_;
    Rng rng_;
    std::unique_ptr<SearchNode> root_;
    std::uint64_t nodes_expanded_ = 0;
    std::uint64_t simulations_ = 0;
    bool won_ = false;
    double best_utility_ = 0.0;
    std::vector<HeroAction> best_sequence_;
    std::vector<HeroAction> rollout_suffix_;
    std::vector<HeroAction> action_buffer_;
    std::chrono::steady_clock::time_point start_;
};

// Plans a full playthrough of one map: runs the search to budget and replays
// the chosen action sequence into a trace.
inline Playtrace plan(const LevelMap& map, const Persona& persona, const TreePolicy& policy,
                      const SearchBudget& budget, std::uint64_t seed) {
    Search search(map, persona, policy, budget, seed);
    search.run();
    Playtrace t = search.build_trace();
    t.seed = seed;
    return t;
}

}  // namespace md2
