// md2 — dungeon playtesting toolkit.
//
//   md2 simulate --map m.map --persona runner --policy builtin:runner-evolved
//   md2 evolve   --map a.map --map b.map --persona runner --generations 100
//   md2 playtest --map a.map --map b.map --trials 50 --out runs/
//
// Policy specs: "ucb1", "builtin:<name>", "expr:<text>", or a path to a file
// holding one expression. A JSON config file (--config) OVERRIDES flags; the
// MD2_OUT_DIR environment variable supplies the default output directory.
// Exit codes: 0 success, 1 runtime/I-O failure, 2 bad arguments or config.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "md2/evolution.hpp"
#include "md2/mcts.hpp"
#include "md2/persona.hpp"
#include "md2/playtest.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CliError {
    int code;
    std::string message;
};

// ---- shared option state ---------------------------------------------------

struct Options {
    std::vector<std::string> map_paths;
    std::vector<std::string> persona_names;
    std::vector<std::string> policy_specs;  // simulate uses at most one
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> budget_nodes;
    std::optional<double> budget_seconds;
    int rollout_length = 10;
    int max_turns = md2::kDefaultMaxTurns;
    int trials = 50;
    int jobs = 1;
    int runs = 1;
    md2::EvolutionConfig evo;  // population/islands/generations/... defaults

    std::map<std::string, md2::Persona> custom_personas;
};

std::string default_out_dir() {
    const char* env = std::getenv("MD2_OUT_DIR");
    return env && *env ? env : ".";
}

md2::SearchBudget make_budget(const Options& opt, std::uint64_t default_nodes) {
    md2::SearchBudget b;
    b.wall_seconds = opt.budget_seconds;
    b.max_nodes = opt.budget_nodes;
    if (!b.bounded()) b.max_nodes = default_nodes;
    b.rollout_length = opt.rollout_length;
    b.max_turns = opt.max_turns;
    return b;
}

// ---- config file (overrides flags) -----------------------------------------

const md2::Persona& resolve_persona(const Options& opt, const std::string& name) {
    if (const md2::Persona* p = md2::persona_by_name(name)) return *p;
    auto it = opt.custom_personas.find(name);
    if (it != opt.custom_personas.end()) return it->second;
    throw CliError{2, "unknown persona '" + name + "'"};
}

md2::Persona parse_persona_def(const std::string& name, const ordered_json& def) {
    if (md2::persona_by_name(name))
        throw CliError{2, "persona '" + name + "' is built in and cannot be redefined"};
    md2::Persona p;
    p.name = name;
    p.core = md2::CorePriority::InteractionRatio;
    for (const auto& [key, value] : def.items()) {
        if (key == "weights") {
            for (const auto& [var_name, weight] : value.items()) {
                bool known = false;
                for (int v = 0; v < md2::kVarCount; ++v) {
                    if (var_name == md2::kVarNames[v]) {
                        p.weights.emplace_back(md2::Var(v), weight.get<double>());
                        known = true;
                        break;
                    }
                }
                if (!known)
                    throw CliError{2, "persona '" + name + "': unknown metric '" + var_name + "'"};
            }
        } else if (key == "death-penalty") {
            p.death_penalty = value.get<double>();
        } else if (key == "core") {
            std::string core = value.get<std::string>();
            if (core == "search_nodes") p.core = md2::CorePriority::SearchEffort;
            else if (core == "monsters_ratio") p.core = md2::CorePriority::MonsterRatio;
            else if (core == "treasures_ratio") p.core = md2::CorePriority::TreasureRatio;
            else if (core == "interactive_ratio") p.core = md2::CorePriority::InteractionRatio;
            else throw CliError{2, "persona '" + name + "': unknown core metric '" + core + "'"};
        } else {
            throw CliError{2, "persona '" + name + "': unknown config key '" + key + "'"};
        }
    }
    if (p.weights.empty())
        throw CliError{2, "persona '" + name + "' defines no weights"};
    return p;
}

// Applies the config file on top of parsed flags. `allowed` lists the keys the
// current subcommand understands; anything else is rejected.
void apply_config(Options& opt, const std::vector<std::string>& allowed) {
    if (opt.config_path.empty()) return;
    std::ifstream in(opt.config_path);
    if (!in) throw CliError{2, "cannot read config file '" + opt.config_path + "'"};
    ordered_json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw CliError{2, "config file '" + opt.config_path + "': " + e.what()};
    }
    if (!cfg.is_object()) throw CliError{2, "config file must hold a JSON object"};
    auto permitted = [&](const std::string& key) {
        for (const std::string& k : allowed)
            if (k == key) return true;
        return false;
    };
    try {
        for (const auto& [key, value] : cfg.items()) {
            if (!permitted(key)) throw CliError{2, "unknown config key '" + key + "'"};
            if (key == "maps") opt.map_paths = value.get<std::vector<std::string>>();
            else if (key == "personas") opt.persona_names = value.get<std::vector<std::string>>();
            else if (key == "persona") opt.persona_names = {value.get<std::string>()};
            else if (key == "policies") opt.policy_specs = value.get<std::vector<std::string>>();
            else if (key == "policy") opt.policy_specs = {value.get<std::string>()};
            else if (key == "out") opt.out_dir = value.get<std::string>();
            else if (key == "seed") opt.seed = value.get<std::uint64_t>();
            else if (key == "budget-nodes") opt.budget_nodes = value.get<std::uint64_t>();
            else if (key == "budget-seconds") opt.budget_seconds = value.get<double>();
            else if (key == "rollout-length") opt.rollout_length = value.get<int>();
            else if (key == "max-turns") opt.max_turns = value.get<int>();
            else if (key == "trials") opt.trials = value.get<int>();
            else if (key == "jobs") opt.jobs = value.get<int>();
            else if (key == "runs") opt.runs = value.get<int>();
            else if (key == "population") opt.evo.population = value.get<int>();
            else if (key == "islands") opt.evo.islands = value.get<int>();
            else if (key == "generations") opt.evo.generations = value.get<int>();
            else if (key == "elitism") opt.evo.elitism = value.get<double>();
            else if (key == "mutation-rate") opt.evo.mutation_rate = value.get<double>();
            else if (key == "mating-pool") opt.evo.mating_pool = value.get<int>();
            else if (key == "trials-per-eval") opt.evo.trials_per_eval = value.get<int>();
            else if (key == "custom-personas") {
                for (const auto& [name, def] : value.items())
                    opt.custom_personas.emplace(name, parse_persona_def(name, def));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw CliError{2, "config file '" + opt.config_path + "': " + e.what()};
    }
}

// ---- policies ---------------------------------------------------------------

struct PolicyChoice {
    md2::TreePolicy policy;
    std::string expression;  // echoed in trace metadata; empty for ucb1
};

PolicyChoice resolve_policy(const std::string& spec) {
    if (spec == "ucb1") return {md2::TreePolicy::make_ucb1(), ""};
    auto parse_expr = [&](const std::string& text, const std::string& id,
                          const std::string& where) {
        try {
            md2::ExprTree tree = md2::ExprTree::parse(text);
            std::string echoed = tree.format();
            return PolicyChoice{md2::TreePolicy::expression(std::move(tree), id), echoed};
        } catch (const md2::ExprParseError& e) {
            throw CliError{2, where + ": " + e.what()};
        }
    };
    if (spec.rfind("builtin:", 0) == 0) {
        std::string name = spec.substr(8);
        const md2::ExprTree* tree = md2::builtin_policy(name);
        if (!tree) throw CliError{2, "unknown built-in policy '" + name + "'"};
        return {md2::TreePolicy::expression(*tree, name), tree->format()};
    }
    if (spec.rfind("expr:", 0) == 0) {
        return parse_expr(spec.substr(5), "expr", "policy expression");
    }
    std::ifstream in(spec);
    if (!in) throw CliError{2, "cannot read policy file '" + spec + "'"};
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
        text.pop_back();
    return parse_expr(text, fs::path(spec).stem().string(), "policy file '" + spec + "'");
}

// Default policy of a persona: its built-in evolved expression.
PolicyChoice default_policy(const md2::Persona& p) {
    std::string name = md2::builtin_policy_name(p);
    if (name.empty())
        throw CliError{2, "persona '" + p.name + "' has no built-in policy; pass --policy"};
    return resolve_policy("builtin:" + name);
}

// ---- I/O helpers ------------------------------------------------------------

std::vector<md2::LevelMap> load_maps(const std::vector<std::string>& paths) {
    if (paths.empty()) throw CliError{2, "no maps given (--map)"};
    std::vector<std::string> missing;
    for (const std::string& p : paths)
        if (!fs::exists(p)) missing.push_back(p);
    if (!missing.empty()) {
        std::string msg = "missing maps:";
        for (const std::string& p : missing) msg += " " + p;
        throw CliError{1, msg};
    }
    std::vector<md2::LevelMap> maps;
    maps.reserve(paths.size());
    for (const std::string& p : paths) {
        std::ifstream in(p);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            maps.push_back(md2::parse_map(buf.str(), fs::path(p).stem().string()));
        } catch (const md2::MapError& e) {
            throw CliError{2, p + ": " + e.what()};
        }
    }
    return maps;
}

fs::path prepare_out_dir(const Options& opt) {
    fs::path dir = opt.out_dir.empty() ? default_out_dir() : opt.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CliError{1, "cannot create output directory '" + dir.string() + "'"};
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw CliError{1, "cannot write '" + path.string() + "'"};
    std::cout << "wrote " << path.string() << "\n";
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == '/' || c == ' ') c = '-';
    return s;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", (unsigned long long)v);
    return buf;
}

ordered_json budget_json(const md2::SearchBudget& b) {
    ordered_json j;
    if (b.max_nodes) j["nodes"] = *b.max_nodes; else j["nodes"] = nullptr;
    if (b.wall_seconds) j["seconds"] = *b.wall_seconds; else j["seconds"] = nullptr;
    j["rollout_length"] = b.rollout_length;
    j["max_turns"] = b.max_turns;
    return j;
}

ordered_json trace_json(const md2::Playtrace& t, std::uint64_t master_seed,
                        const md2::SearchBudget& budget, const std::string& expression) {
    ordered_json j;
    j["map"] = t.map_name;
    j["persona"] = t.persona;
    ordered_json policy;
    policy["id"] = t.policy_id;
    policy["kind"] = expression.empty() ? "ucb1" : "expression";
    if (!expression.empty()) policy["expression"] = expression;
    j["policy"] = std::move(policy);
    j["master_seed"] = master_seed;
    j["seed"] = t.seed;
    j["budget"] = budget_json(budget);
    j["outcome"] = md2::status_name(t.outcome);
    j["steps"] = t.steps;
    j["utility"] = t.utility;
    j["best_utility"] = t.best_utility;
    j["nodes_expanded"] = t.nodes_expanded;
    j["simulations"] = t.simulations;
    j["elapsed_seconds"] = t.elapsed_seconds;
    const md2::GameplayMetrics& m = t.final_metrics;
    ordered_json metrics;
    metrics["ST"] = m.steps_taken;
    metrics["PE"] = m.exit_proximity;
    metrics["PD"] = m.potion_ratio;
    metrics["TO"] = m.treasure_ratio;
    metrics["MTK"] = m.minitaur_knockouts;
    metrics["MS"] = m.monster_ratio;
    metrics["JT"] = m.javelin_throws;
    metrics["HL"] = m.health_left;
    metrics["TU"] = m.teleports_used;
    metrics["TS"] = m.traps_sprung;
    metrics["IC"] = m.interaction_ratio;
    j["metrics"] = std::move(metrics);
    std::string actions;
    for (md2::HeroAction a : t.actions) actions += md2::action_text(a);
    j["actions"] = std::move(actions);
    j["initial_digest"] = hex64(t.digests.front());
    j["final_digest"] = hex64(t.digests.back());
    return j;
}

std::string pgm_text(const md2::Grid<std::uint32_t>& grid) {
    std::ostringstream out;
    md2::write_heatmap_pgm(out, grid);
    return out.str();
}

// ---- subcommands ------------------------------------------------------------

int cmd_simulate(Options& opt) {
    apply_config(opt, {"maps", "personas", "policy", "out", "seed", "budget-nodes",
                       "budget-seconds", "rollout-length", "max-turns", "custom-personas"});
    if (opt.policy_specs.size() > 1)
        throw CliError{2, "simulate accepts a single --policy"};
    if (opt.persona_names.empty())
        for (const md2::Persona& p : md2::standard_personas()) opt.persona_names.push_back(p.name);
    std::vector<md2::LevelMap> maps = load_maps(opt.map_paths);
    md2::SearchBudget budget = make_budget(opt, 50000);
    fs::path dir = prepare_out_dir(opt);

    for (std::size_t mi = 0; mi < maps.size(); ++mi) {
        for (std::size_t pi = 0; pi < opt.persona_names.size(); ++pi) {
            const md2::Persona& persona = resolve_persona(opt, opt.persona_names[pi]);
            PolicyChoice choice = opt.policy_specs.empty() ? default_policy(persona)
                                                           : resolve_policy(opt.policy_specs[0]);
            md2::Playtrace t = plan(maps[mi], persona, choice.policy, budget,
                                    md2::derive_seed(opt.seed, mi, pi));
            std::string stem = sanitize(maps[mi].name) + "_" + sanitize(persona.name);
            write_file(dir / ("trace_" + stem + ".json"),
                       trace_json(t, opt.seed, budget, choice.expression).dump(2) + "\n");
            write_file(dir / ("heatmap_" + stem + ".pgm"), pgm_text(t.visits));
            std::cout << maps[mi].name << " " << persona.name << " " << choice.policy.id << ": "
                      << md2::status_name(t.outcome) << " in " << t.steps << " steps, utility "
                      << t.utility << "\n";
        }
    }
    return 0;
}

// Mean core-priority metric of a champion across the training maps, measured
// with run-independent seeds so multi-run selection compares like with like.
double champion_core_score(const md2::ExprTree& genome, const md2::Persona& persona,
                           const std::vector<md2::LevelMap>& maps,
                           const md2::SearchBudget& budget, std::uint64_t master_seed) {
    md2::TreePolicy policy = md2::TreePolicy::expression(genome, "champion");
    double total = 0.0;
    for (std::size_t mi = 0; mi < maps.size(); ++mi) {
        md2::Playtrace t = plan(maps[mi], persona, policy, budget,
                                md2::derive_seed(master_seed, std::uint64_t(0xC0DE), mi));
        total += md2::detail::core_metric_value(persona.core, t);
    }
    return total / double(maps.size());
}

int cmd_evolve(Options& opt) {
    apply_config(opt, {"maps", "persona", "personas", "out", "seed", "budget-nodes",
                       "budget-seconds", "rollout-length", "max-turns", "population", "islands",
                       "generations", "elitism", "mutation-rate", "mating-pool",
                       "trials-per-eval", "runs", "jobs", "custom-personas"});
    if (opt.persona_names.size() != 1)
        throw CliError{2, "evolve needs exactly one --persona"};
    if (opt.runs < 1) throw CliError{2, "--runs must be positive"};
    const md2::Persona& persona = resolve_persona(opt, opt.persona_names[0]);
    std::vector<md2::LevelMap> maps = load_maps(opt.map_paths);
    std::vector<const md2::LevelMap*> map_ptrs;
    for (const md2::LevelMap& m : maps) map_ptrs.push_back(&m);

    md2::EvolutionConfig config = opt.evo;
    config.budget = make_budget(opt, 20000);
    config.jobs = opt.jobs;
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw CliError{2, e.what()};
    }
    fs::path dir = prepare_out_dir(opt);

    struct RunOutcome {
        md2::Individual best;
        double core_score = 0.0;
    };
    std::vector<RunOutcome> outcomes;
    for (int run = 0; run < opt.runs; ++run) {
        config.seed = md2::derive_seed(opt.seed, std::uint64_t(run));
        md2::EvolutionResult result = md2::evolve(persona, map_ptrs, config);
        std::ostringstream csv;
        csv << "generation,best,mean\n";
        for (const md2::GenerationStats& g : result.history) {
            csv << g.generation << ',' << md2::detail::shortest_double(g.best) << ','
                << md2::detail::shortest_double(g.mean) << '\n';
        }
        write_file(dir / ("history_" + sanitize(persona.name) + "_run" + std::to_string(run) +
                          ".csv"),
                   csv.str());
        RunOutcome out;
        out.best = result.best;
        out.core_score =
            champion_core_score(out.best.genome, persona, maps, config.budget, opt.seed);
        std::cout << "run " << run << ": fitness " << out.best.fitness << ", "
                  << md2::detail::core_metric_name(persona.core) << " " << out.core_score << "\n";
        outcomes.push_back(std::move(out));
    }

    // Lower search effort is better; every other core metric is a ratio to
    // maximize. Ties keep the earliest run.
    std::size_t chosen = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i) {
        bool better = persona.core == md2::CorePriority::SearchEffort
                          ? outcomes[i].core_score < outcomes[chosen].core_score
                          : outcomes[i].core_score > outcomes[chosen].core_score;
        if (better) chosen = i;
    }
    write_file(dir / ("genome_" + sanitize(persona.name) + ".txt"),
               outcomes[chosen].best.genome.format() + "\n");
    std::cout << "selected run " << chosen << "\n";
    return 0;
}

int cmd_playtest(Options& opt) {
    apply_config(opt, {"maps", "personas", "policies", "policy", "out", "seed", "budget-nodes",
                       "budget-seconds", "rollout-length", "max-turns", "trials", "jobs",
                       "custom-personas"});
    if (opt.persona_names.empty())
        for (const md2::Persona& p : md2::standard_personas()) opt.persona_names.push_back(p.name);
    if (opt.trials < 1) throw CliError{2, "--trials must be positive"};
    std::vector<md2::LevelMap> maps = load_maps(opt.map_paths);
    std::vector<const md2::LevelMap*> map_ptrs;
    for (const md2::LevelMap& m : maps) map_ptrs.push_back(&m);

    std::vector<md2::AgentSpec> agents;
    for (std::size_t pi = 0; pi < opt.persona_names.size(); ++pi) {
        const md2::Persona& persona = resolve_persona(opt, opt.persona_names[pi]);
        PolicyChoice choice;
        if (opt.policy_specs.empty()) choice = default_policy(persona);
        else if (opt.policy_specs.size() == 1) choice = resolve_policy(opt.policy_specs[0]);
        else if (opt.policy_specs.size() == opt.persona_names.size())
            choice = resolve_policy(opt.policy_specs[pi]);
        else
            throw CliError{2, "--policy count must be 1 or match --persona count"};
        agents.push_back(md2::AgentSpec{persona, choice.policy});
    }

    md2::PlaytestConfig config;
    config.budget = make_budget(opt, 50000);
    config.trials = opt.trials;
    config.seed = opt.seed;
    config.jobs = opt.jobs;
    fs::path dir = prepare_out_dir(opt);

    md2::BatchResult result = md2::batch(map_ptrs, agents, config);

    std::ostringstream csv;
    md2::write_records_csv(csv, result.records);
    write_file(dir / "records.csv", csv.str());
    write_file(dir / "report.json",
               md2::build_report(result, map_ptrs, agents, config).dump(2) + "\n");
    for (const md2::AgentHeatmap& hm : result.heatmaps) {
        std::string stem = "heatmap_" + sanitize(hm.map_name) + "_" + sanitize(hm.agent);
        write_file(dir / (stem + ".pgm"), pgm_text(hm.visits));
        std::ostringstream grid_csv;
        md2::write_heatmap_csv(grid_csv, hm.visits);
        write_file(dir / (stem + ".csv"), grid_csv.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"dungeon playtesting toolkit: deterministic simulator, tree-policy "
                 "evolution, and batch playtesting with statistics"};
    app.require_subcommand(1);

    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--map", opt.map_paths, "map file (repeatable)");
        cmd->add_option("--config", opt.config_path, "JSON config; overrides flags");
        cmd->add_option("--out", opt.out_dir, "output directory (default $MD2_OUT_DIR or .)");
        cmd->add_option("--seed", opt.seed, "master seed");
        cmd->add_option("--budget-nodes", [&opt](const std::vector<std::string>& v) {
            opt.budget_nodes = std::stoull(v[0]);
            return true;
        }, "search iteration cap (deterministic mode)");
        cmd->add_option("--budget-seconds", [&opt](const std::vector<std::string>& v) {
            opt.budget_seconds = std::stod(v[0]);
            return true;
        }, "wall-clock search cap");
        cmd->add_option("--rollout-length", opt.rollout_length, "random rollout length");
        cmd->add_option("--max-turns", opt.max_turns, "turn cap per playthrough");
    };

    CLI::App* sim = app.add_subcommand("simulate", "plan one run per map and persona");
    add_shared(sim);
    sim->add_option("--persona", opt.persona_names, "persona name (repeatable; default all)");
    sim->add_option("--policy", opt.policy_specs,
                    "ucb1 | builtin:<name> | expr:<text> | file (default: persona's built-in)");

    CLI::App* evo = app.add_subcommand("evolve", "evolve a tree policy for one persona");
    add_shared(evo);
    evo->add_option("--persona", opt.persona_names, "persona to evolve for");
    evo->add_option("--population", opt.evo.population, "total population");
    evo->add_option("--islands", opt.evo.islands, "island count");
    evo->add_option("--generations", opt.evo.generations, "generations to breed");
    evo->add_option("--elitism", opt.evo.elitism, "elite fraction per island");
    evo->add_option("--mutation-rate", opt.evo.mutation_rate, "parent mutation probability");
    evo->add_option("--mating-pool", opt.evo.mating_pool, "parents drawn per island");
    evo->add_option("--trials-per-eval", opt.evo.trials_per_eval, "searches averaged per map");
    evo->add_option("--runs", opt.runs, "independent runs; best kept by core metric");
    evo->add_option("--jobs", opt.jobs, "parallel fitness evaluations");

    CLI::App* pt = app.add_subcommand("playtest", "batch trials with statistics report");
    add_shared(pt);
    pt->add_option("--persona", opt.persona_names, "persona name (repeatable; default all)");
    pt->add_option("--policy", opt.policy_specs,
                   "policy per persona (1 value broadcasts; default: built-ins)");
    pt->add_option("--trials", opt.trials, "trials per map and agent");
    pt->add_option("--jobs", opt.jobs, "parallel trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "md2: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(opt);
        if (evo->parsed()) return cmd_evolve(opt);
        return cmd_playtest(opt);
    } catch (const CliError& e) {
        std::cerr << "md2: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "md2: " << e.what() << "\n";
        return 1;
    }
}
