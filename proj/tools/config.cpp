#include "config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "opinet/errors.hpp"

namespace opinet::cli {

namespace {

std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    const auto a = s.find_first_not_of(ws);
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& section, const std::string& key,
                    const std::string& text) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigParseError("[" + section + "] " + key + ": not a number: '" +
                               text + "'");
    }
}

std::vector<double> parse_numbers(const std::string& section,
                                  const std::string& key,
                                  const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(parse_number(section, key, tok));
    return out;
}

/// Rows separated by ';', numbers by whitespace.
std::vector<std::vector<double>> parse_rows(const std::string& section,
                                            const std::string& key,
                                            const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream in(text);
    std::string row;
    while (std::getline(in, row, ';')) {
        row = trim(row);
        if (!row.empty()) rows.push_back(parse_numbers(section, key, row));
    }
    return rows;
}

class Reader {
  public:
    Reader(const RawConfig& raw, std::string section)
        : raw_(raw), section_(std::move(section)) {
        if (auto it = raw_.find(section_); it != raw_.end()) keys_ = &it->second;
    }

    std::optional<std::string> get(const std::string& key) {
        seen_.insert(key);
        if (!keys_) return std::nullopt;
        auto it = keys_->find(key);
        if (it == keys_->end()) return std::nullopt;
        return it->second;
    }
    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v)
            throw ConfigParseError("[" + section_ + "] missing required key '" +
                                   key + "'");
        return *v;
    }
    double number(const std::string& key, double fallback) {
        auto v = get(key);
        return v ? parse_number(section_, key, *v) : fallback;
    }
    std::vector<double> numbers(const std::string& key) {
        auto v = get(key);
        return v ? parse_numbers(section_, key, *v) : std::vector<double>{};
    }
    std::vector<std::vector<double>> rows(const std::string& key) {
        auto v = get(key);
        return v ? parse_rows(section_, key, *v)
                 : std::vector<std::vector<double>>{};
    }
    std::uint64_t uint64(const std::string& key, std::uint64_t fallback) {
        auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            std::uint64_t out = std::stoull(*v, &used);
            if (used != v->size()) throw std::invalid_argument(*v);
            return out;
        } catch (const std::exception&) {
            throw ConfigParseError("[" + section_ + "] " + key +
                                   ": not an unsigned integer: '" + *v + "'");
        }
    }

    void reject_unknown() const {
        if (!keys_) return;
        for (const auto& [key, value] : *keys_)
            if (!seen_.count(key))
                throw ConfigParseError("[" + section_ + "] unknown key '" + key +
                                       "'");
    }

  private:
    const RawConfig& raw_;
    std::string section_;
    const std::map<std::string, std::string>* keys_ = nullptr;
    std::set<std::string> seen_;
};

} // namespace

RawConfig parse_ini(const std::string& text) {
    RawConfig cfg;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigParseError("line " + std::to_string(lineno) +
                                       ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            cfg[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError("line " + std::to_string(lineno) +
                                   ": expected 'key = value'");
        if (section.empty())
            throw ConfigParseError("line " + std::to_string(lineno) +
                                   ": key outside any [section]");
        cfg[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

RawConfig load_ini(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_ini(buf.str());
}

ExperimentConfig parse_config(const RawConfig& raw) {
    for (const auto& [section, keys] : raw)
        if (section != "model" && section != "influence" && section != "graph" &&
            section != "run" && section != "output")
            throw ConfigParseError("unknown section [" + section + "]");

    ExperimentConfig cfg;

    Reader model(raw, "model");
    cfg.model.opinions = static_cast<int>(model.number("opinions", 2));
    if (cfg.model.opinions < 2)
        throw ValidationError("[model] opinions: must be >= 2");
    const int m = cfg.model.opinions;
    if (auto q = model.get("q")) {
        cfg.model.q = parse_numbers("model", "q", *q);
        if (static_cast<int>(cfg.model.q.size()) != m * m)
            throw ConfigParseError("[model] q: expected " + std::to_string(m * m) +
                                   " row-major entries");
    } else {
        const double q12 = model.number("q12", 1.0);
        const double q21 = model.number("q21", 1.0);
        if (m != 2)
            throw ConfigParseError("[model] q: required when opinions > 2");
        cfg.model.q = {-q12, q12, q21, -q21};
    }
    model.reject_unknown();

    Reader influence(raw, "influence");
    cfg.influence.breakpoints = influence.numbers("breakpoints");
    cfg.influence.lambda = influence.rows("lambda");
    cfg.influence.sweep = influence.rows("sweep");
    if (cfg.influence.lambda.empty())
        cfg.influence.lambda.push_back(std::vector<double>(m, 0.0));
    if (cfg.influence.lambda.size() != cfg.influence.breakpoints.size() + 1)
        throw ConfigParseError(
            "[influence] lambda: need one row per schedule segment "
            "(breakpoints + 1)");
    for (const auto& seg : cfg.influence.lambda) {
        if (static_cast<int>(seg.size()) != m)
            throw ConfigParseError("[influence] lambda: each row needs one "
                                   "intensity per opinion");
        for (double l : seg)
            if (!(l >= 0.0))
                throw ValidationError("[influence] lambda: must be nonnegative");
    }
    for (const auto& row : cfg.influence.sweep) {
        if (static_cast<int>(row.size()) != m)
            throw ConfigParseError("[influence] sweep: each row needs one "
                                   "intensity per opinion");
        for (double l : row)
            if (!(l >= 0.0))
                throw ValidationError("[influence] sweep: must be nonnegative");
    }
    influence.reject_unknown();

    Reader graph(raw, "graph");
    if (auto edges = graph.get("edges")) {
        cfg.graph.edges_path = *edges;
    } else {
        TopologySpec spec;
        spec.kind = TopologySpec::parse_kind(graph.require("kind"));
        spec.n = static_cast<int>(graph.number("n", 0));
        spec.k = static_cast<int>(graph.number("k", 1));
        spec.p = graph.number("p", 0.0);
        spec.seed = graph.uint64("seed", 1);
        if (spec.n < 1) throw ValidationError("[graph] n: must be >= 1");
        cfg.graph.spec = spec;
    }
    graph.reject_unknown();

    Reader run(raw, "run");
    cfg.run.solver = run.require("solver");
    static const std::set<std::string> solvers{"master", "lumped", "marginal",
                                              "pair", "ssa"};
    if (!solvers.count(cfg.run.solver))
        throw ValidationError("[run] solver: unknown solver '" + cfg.run.solver +
                              "'");
    cfg.run.t_end = run.number("t_end", 0.0);
    cfg.run.grid_points = static_cast<int>(run.number("grid", 0));
    cfg.run.replications = static_cast<int>(run.number("replications", 1));
    cfg.run.seed = run.uint64("seed", 1);
    cfg.run.burn_in = run.number("burn_in", -1.0);
    cfg.run.threads = static_cast<int>(run.number("threads", 0));
    cfg.run.batches = static_cast<int>(run.number("batches", 20));
    if (auto init = run.get("init")) cfg.run.init = *init;
    static const std::set<std::string> inits{
        "binomial", "uniform", "deterministic", "stationary", "iid", "all"};
    if (!inits.count(cfg.run.init))
        throw ValidationError("[run] init: unknown initial condition '" +
                              cfg.run.init + "'");
    cfg.run.init_p = run.number("init_p", 0.5);
    cfg.run.init_value = static_cast<int>(run.number("init_value", 0));
    if (auto we = run.get("write_events"))
        cfg.run.write_events = (*we == "true" || *we == "1");
    if (cfg.run.t_end < 0) throw ValidationError("[run] t_end: must be >= 0");
    if (cfg.run.replications < 1)
        throw ValidationError("[run] replications: must be >= 1");
    if (!(cfg.run.init_p >= 0.0 && cfg.run.init_p <= 1.0))
        throw ValidationError("[run] init_p: must be in [0, 1]");
    if (cfg.run.batches < 2)
        throw ValidationError("[run] batches: must be >= 2");
    run.reject_unknown();

    Reader output(raw, "output");
    if (auto dir = output.get("directory")) cfg.output.directory = *dir;
    if (auto fmt = output.get("format")) cfg.output.format = *fmt;
    if (cfg.output.format != "csv" && cfg.output.format != "json")
        throw ValidationError("[output] format: must be 'csv' or 'json'");
    output.reject_unknown();

    // semantic checks that need the assembled objects
    config_rate_matrix(cfg);
    config_schedule(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(load_ini(path));
}

std::string to_ini(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "[model]\n";
    os << "opinions = " << cfg.model.opinions << "\n";
    os << "q =";
    for (double v : cfg.model.q) os << " " << v;
    os << "\n\n[influence]\n";
    if (!cfg.influence.breakpoints.empty()) {
        os << "breakpoints =";
        for (double b : cfg.influence.breakpoints) os << " " << b;
        os << "\n";
    }
    os << "lambda = ";
    for (std::size_t s = 0; s < cfg.influence.lambda.size(); ++s) {
        if (s) os << "; ";
        for (std::size_t j = 0; j < cfg.influence.lambda[s].size(); ++j)
            os << (j ? " " : "") << cfg.influence.lambda[s][j];
    }
    os << "\n";
    if (!cfg.influence.sweep.empty()) {
        os << "sweep = ";
        for (std::size_t s = 0; s < cfg.influence.sweep.size(); ++s) {
            if (s) os << "; ";
            for (std::size_t j = 0; j < cfg.influence.sweep[s].size(); ++j)
                os << (j ? " " : "") << cfg.influence.sweep[s][j];
        }
        os << "\n";
    }
    os << "\n[graph]\n";
    if (!cfg.graph.edges_path.empty()) {
        os << "edges = " << cfg.graph.edges_path << "\n";
    } else {
        const TopologySpec& spec = *cfg.graph.spec;
        os << "kind = " << TopologySpec::kind_name(spec.kind) << "\n";
        os << "n = " << spec.n << "\n";
        if (spec.kind == TopologySpec::Kind::SmallWorld) {
            os << "k = " << spec.k << "\n";
            os << "p = " << spec.p << "\n";
            os << "seed = " << spec.seed << "\n";
        }
    }
    os << "\n[run]\n";
    os << "solver = " << cfg.run.solver << "\n";
    os << "t_end = " << cfg.run.t_end << "\n";
    os << "grid = " << cfg.run.grid_points << "\n";
    os << "replications = " << cfg.run.replications << "\n";
    os << "seed = " << cfg.run.seed << "\n";
    os << "burn_in = " << cfg.run.burn_in << "\n";
    os << "threads = " << cfg.run.threads << "\n";
    os << "batches = " << cfg.run.batches << "\n";
    os << "init = " << cfg.run.init << "\n";
    os << "init_p = " << cfg.run.init_p << "\n";
    os << "init_value = " << cfg.run.init_value << "\n";
    os << "write_events = " << (cfg.run.write_events ? "true" : "false") << "\n";
    os << "\n[output]\n";
    if (!cfg.output.directory.empty())
        os << "directory = " << cfg.output.directory << "\n";
    os << "format = " << cfg.output.format << "\n";
    return os.str();
}

RateMatrix config_rate_matrix(const ExperimentConfig& cfg) {
    const int m = cfg.model.opinions;
    Eigen::MatrixXd q(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) q(i, j) = cfg.model.q[i * m + j];
    try {
        return RateMatrix(q);
    } catch (const Error& e) {
        throw ValidationError(std::string("[model] q: ") + e.what());
    }
}

IntensitySchedule config_schedule(const ExperimentConfig& cfg) {
    std::vector<InfluenceIntensities> segs;
    for (const auto& row : cfg.influence.lambda) {
        Eigen::VectorXd v(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) v(j) = row[j];
        segs.emplace_back(v);
    }
    try {
        return IntensitySchedule(cfg.influence.breakpoints, segs);
    } catch (const Error& e) {
        throw ValidationError(std::string("[influence] breakpoints: ") + e.what());
    }
}

Graph config_graph(const ExperimentConfig& cfg) {
    if (!cfg.graph.edges_path.empty()) {
        std::ifstream in(cfg.graph.edges_path);
        if (!in)
            throw ValidationError("[graph] edges: cannot open file '" +
                                  cfg.graph.edges_path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return Graph::from_edge_list(buf.str());
    }
    return generate_topology(*cfg.graph.spec);
}

NetworkModel config_network(const ExperimentConfig& cfg) {
    return NetworkModel(config_graph(cfg), config_rate_matrix(cfg),
                        config_schedule(cfg));
}

} // namespace opinet::cli
