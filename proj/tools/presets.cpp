#include "presets.hpp"

#include "opinet/rng.hpp"

namespace opinet::cli {

namespace {

/// Complete-graph two-opinion base model with q12 = q21 = 1.
ExperimentConfig pa_base(int n) {
    ExperimentConfig cfg;
    cfg.model.opinions = 2;
    cfg.model.q = {-1, 1, 1, -1};
    TopologySpec spec;
    spec.kind = TopologySpec::Kind::Complete;
    spec.n = n;
    cfg.graph.spec = spec;
    cfg.influence.lambda = {{0.0, 0.0}};
    return cfg;
}

ExperimentConfig with_lambda(ExperimentConfig cfg, double l1, double l2) {
    cfg.influence.lambda = {{l1, l2}};
    return cfg;
}

std::string fmt(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::vector<PresetRun> table1() {
    ExperimentConfig cfg = pa_base(100);
    cfg.run.solver = "lumped";
    cfg.influence.sweep = {{0, 0}, {2, 2}, {10, 10}};
    return {{"", cfg}};
}

std::vector<PresetRun> uipa_sim1(std::uint64_t seed) {
    std::vector<PresetRun> runs;
    const std::vector<std::string> inits{"binomial", "uniform", "deterministic"};
    const std::vector<double> lambdas{0, 2, 10};
    int scenario = 0;
    for (const auto& init : inits) {
        for (double lam : lambdas) {
            const std::string dir = init + "-lambda" + fmt(lam);

            ExperimentConfig theory = with_lambda(pa_base(100), lam, lam);
            theory.run.solver = "lumped";
            theory.run.t_end = 10;
            theory.run.grid_points = 201;
            theory.run.init = init;
            theory.run.init_value = 0; // deterministic: nobody holds opinion 1
            runs.push_back({dir + "/theory", theory});

            ExperimentConfig sim = with_lambda(pa_base(100), lam, lam);
            sim.run.solver = "ssa";
            sim.run.t_end = 10;
            sim.run.grid_points = 201;
            sim.run.replications = 5;
            sim.run.seed = derive_seed(seed, scenario);
            // same initial laws expressed for agent-level simulation
            if (init == "binomial") sim.run.init = "iid";
            else if (init == "uniform") sim.run.init = "uniform";
            else { // deterministic count 0: everyone starts at opinion 2
                sim.run.init = "all";
                sim.run.init_value = 2;
            }
            runs.push_back({dir + "/sim", sim});
            ++scenario;
        }
    }
    return runs;
}

std::vector<PresetRun> uipa_herd(std::uint64_t seed) {
    std::vector<PresetRun> runs;
    int scenario = 0;
    for (double lam : {10.0, 20.0, 200.0}) {
        const std::string dir = "lambda" + fmt(lam);

        ExperimentConfig theory = with_lambda(pa_base(20), lam, lam);
        theory.run.solver = "lumped";
        theory.run.t_end = 50;
        theory.run.grid_points = 501;
        theory.run.init = "binomial";
        runs.push_back({dir + "/theory", theory});

        ExperimentConfig sim = with_lambda(pa_base(20), lam, lam);
        sim.run.solver = "ssa";
        sim.run.t_end = 50;
        sim.run.grid_points = 501;
        sim.run.replications = 1;
        sim.run.init = "iid";
        sim.run.seed = derive_seed(seed, 100 + scenario);
        runs.push_back({dir + "/sim", sim});
        ++scenario;
    }
    return runs;
}

std::vector<PresetRun> bipa_dist() {
    std::vector<PresetRun> runs;
    for (double l1 : {0.0, 1.0, 2.0, 5.0, 10.0, 50.0}) {
        ExperimentConfig cfg = with_lambda(pa_base(100), l1, 0.0);
        cfg.run.solver = "lumped";
        runs.push_back({"lambda1-" + fmt(l1), cfg});
    }
    return runs;
}

std::vector<PresetRun> bipa_mv() {
    ExperimentConfig cfg = pa_base(100);
    cfg.run.solver = "lumped";
    for (double l1 = 0.0; l1 <= 50.0 + 1e-9; l1 += 0.5)
        cfg.influence.sweep.push_back({l1, 0.0});
    return {{"", cfg}};
}

// The paper describes only "a gradual stepwise increase of lambda_2 from 0
// to 40"; we use 5 equal steps over [0, 10].
std::vector<PresetRun> bipa_oprev(std::uint64_t seed) {
    ExperimentConfig base = pa_base(100);
    base.influence.breakpoints = {2, 4, 6, 8};
    base.influence.lambda = {
        {20, 0}, {20, 10}, {20, 20}, {20, 30}, {20, 40}};
    base.run.t_end = 10;
    base.run.grid_points = 401;
    base.run.init = "stationary"; // steady state of the first segment

    ExperimentConfig theory = base;
    theory.run.solver = "lumped";
    ExperimentConfig sim = base;
    sim.run.solver = "ssa";
    sim.run.replications = 3;
    sim.run.seed = derive_seed(seed, 200);
    return {{"theory", theory}, {"sim", sim}};
}

std::vector<PresetRun> bipa_step(std::uint64_t seed) {
    ExperimentConfig base = pa_base(100);
    base.influence.breakpoints = {1, 4, 7};
    base.influence.lambda = {{0, 0}, {20, 0}, {20, 20}, {16, 20}};
    base.run.t_end = 10;
    base.run.grid_points = 401;

    ExperimentConfig theory = base;
    theory.run.solver = "lumped";
    theory.run.init = "binomial";
    ExperimentConfig sim = base;
    sim.run.solver = "ssa";
    sim.run.init = "iid";
    sim.run.replications = 3;
    sim.run.seed = derive_seed(seed, 300);
    return {{"theory", theory}, {"sim", sim}};
}

std::vector<PresetRun> multitopo(double l1, double l2, std::uint64_t seed) {
    std::vector<PresetRun> runs;
    const std::vector<std::pair<std::string, TopologySpec::Kind>> topologies{
        {"noninteracting", TopologySpec::Kind::Empty},
        {"complete", TopologySpec::Kind::Complete},
        {"smallworld", TopologySpec::Kind::SmallWorld},
        {"star", TopologySpec::Kind::Star},
    };
    int idx = 0;
    for (const auto& [name, kind] : topologies) {
        ExperimentConfig cfg = with_lambda(pa_base(100), l1, l2);
        TopologySpec spec;
        spec.kind = kind;
        spec.n = 100;
        if (kind == TopologySpec::Kind::SmallWorld) {
            spec.k = 1;
            spec.p = 0.2;
            spec.seed = derive_seed(seed, 400 + idx);
        }
        cfg.graph.spec = spec;
        cfg.run.solver = "ssa";
        cfg.run.t_end = 100;
        cfg.run.grid_points = 401;
        cfg.run.replications = 10;
        cfg.run.init = "iid";
        cfg.run.seed = derive_seed(seed, 500 + idx);
        runs.push_back({name, cfg});
        ++idx;
    }
    return runs;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"table1",    "uipa-sim1", "uipa-herd",   "bipa-dist",  "bipa-mv",
            "bipa-oprev", "bipa-step", "multitopo-u", "multitopo-b1"};
}

std::vector<PresetRun> expand_preset(const std::string& name,
                                     std::uint64_t seed) {
    if (name == "table1") return table1();
    if (name == "uipa-sim1") return uipa_sim1(seed);
    if (name == "uipa-herd") return uipa_herd(seed);
    if (name == "bipa-dist") return bipa_dist();
    if (name == "bipa-mv") return bipa_mv();
    if (name == "bipa-oprev") return bipa_oprev(seed);
    if (name == "bipa-step") return bipa_step(seed);
    if (name == "multitopo-u") return multitopo(10, 10, seed);
    if (name == "multitopo-b1") return multitopo(1, 0, seed);
    throw UnknownPreset("unknown preset '" + name + "'");
}

} // namespace opinet::cli
