#include "vlslab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace vlslab {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

using nlohmann::json;

double parse_double(std::string_view s, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
    return v;
}

template <typename Int>
Int parse_int(std::string_view s, const char* what) {
    Int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace

std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void save_edge_list(const std::string& path, const RevealedGraph& g) {
    std::string s = "n " + std::to_string(g.n()) + "\n";
    for (auto [i, j] : g.edges())
        s += std::to_string(i + 1) + " " + std::to_string(j + 1) + "\n";
    write_file(path, s);
}

RevealedGraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open for reading: " + path);
    std::string tag;
    int n = 0;
    if (!(in >> tag >> n) || tag != "n")
        throw std::invalid_argument("edge list must start with 'n <value>': " + path);
    std::vector<std::pair<int, int>> edges;
    int i = 0, j = 0;
    while (in >> i >> j) edges.emplace_back(i - 1, j - 1);
    if (!in.eof()) {
        in.clear();
        in >> tag;
        throw std::invalid_argument("bad edge list token '" + tag + "' in " + path);
    }
    return RevealedGraph(n, std::move(edges));
}

void save_instance_json(const std::string& path, const RankOneInstance& inst) {
    json j;
    j["n"] = inst.n();
    j["b"] = inst.b();
    j["seed"] = inst.seed();
    j["alpha"] = inst.alpha();
    j["beta"] = inst.beta();
    json edges = json::array();
    for (auto [r, c] : inst.graph().edges()) edges.push_back({r + 1, c + 1});
    j["edges"] = std::move(edges);
    write_file(path, j.dump(2) + "\n");
}

RankOneInstance load_instance_json(const std::string& path) {
    const json j = json::parse(read_file(path));
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "n" && key != "b" && key != "seed" && key != "alpha" && key != "beta" &&
            key != "edges")
            throw std::invalid_argument("instance file has unknown key '" + key + "'");
    }
    const int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("instance edges must be [i, j] pairs");
        edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
    }
    return RankOneInstance(RevealedGraph(n, std::move(edges)), j.at("b").get<double>(),
                           j.at("alpha").get<std::vector<double>>(),
                           j.at("beta").get<std::vector<double>>(),
                           j.value("seed", std::uint64_t{0}));
}

ExperimentConfig load_experiment_config(const std::string& path) {
    const json j = json::parse(read_file(path));
    static const char* known[] = {"family",   "n_values",    "b_values", "trials",   "seed",
                                  "max_iters", "tail_window", "rate_tol", "cost_tol", "stride"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::invalid_argument("config has unknown key '" + key + "'");
    }
    ExperimentConfig cfg;
    const std::string fam = j.at("family").get<std::string>();
    const auto family = family_from_name(fam);
    if (!family) throw std::invalid_argument("config: unknown family '" + fam + "'");
    cfg.family = *family;
    cfg.n_values = j.at("n_values").get<std::vector<int>>();
    cfg.b_values = j.at("b_values").get<std::vector<double>>();
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.max_iters = j.value("max_iters", cfg.max_iters);
    cfg.tail_window = j.value("tail_window", cfg.tail_window);
    cfg.rate_tol = j.value("rate_tol", cfg.rate_tol);
    cfg.cost_tol = j.value("cost_tol", cfg.cost_tol);
    cfg.stride = j.value("stride", cfg.stride);
    validate(cfg);
    return cfg;
}

std::string trajectory_csv(const Trajectory& traj) {
    if (traj.frob.size() != traj.ts.size())
        throw std::invalid_argument("trajectory_csv: trajectory lacks recorded frobenius errors");
    std::string s = "t,cost,frobenius_error,u_error\n";
    for (std::size_t k = 0; k < traj.ts.size(); ++k) {
        s += std::to_string(traj.ts[k]);
        s += ',';
        s += fmt_double(traj.costs[k]);
        s += ',';
        s += fmt_double(traj.frob[k]);
        s += ',';
        s += fmt_double(traj.u_errors[k]);
        s += '\n';
    }
    return s;
}

void save_trajectory_csv(const std::string& path, const Trajectory& traj) {
    write_file(path, trajectory_csv(traj));
}

std::string spectral_csv(const std::vector<SpectralReport>& reports) {
    std::string s =
        "n,family,b,delta,d,lambda2,lambda_n,rho,dirichlet_gap,theorem2_bound,"
        "gershgorin_floor,diag_min\n";
    for (const SpectralReport& r : reports) {
        s += std::to_string(r.n) + ',' + r.family + ',' + fmt_double(r.b) + ',' +
             std::to_string(r.delta) + ',' + std::to_string(r.diameter) + ',' +
             fmt_double(r.lambda2) + ',' + fmt_double(r.lambda_n) + ',' + fmt_double(r.rho) + ',' +
             fmt_double(r.dirichlet_gap) + ',' + fmt_double(r.theorem2) + ',' +
             fmt_double(r.gershgorin_analytic) + ',' + fmt_double(r.diag_min) + '\n';
    }
    return s;
}

void save_spectral_csv(const std::string& path, const std::vector<SpectralReport>& reports) {
    write_file(path, spectral_csv(reports));
}

namespace {

const char* const kRecordsHeader =
    "family,n,b,trial,seed,status,iters,final_cost,gamma_est,eta,rate_ok,tail_start,"
    "tail_end,rho_limit,theorem2_bound,invariants_ok,max_cost_increase";

} // namespace

std::string records_csv(const std::vector<TrialRecord>& records) {
    std::string s = std::string(kRecordsHeader) + "\n";
    for (const TrialRecord& r : records) {
        s += std::string(family_name(r.family)) + ',' + std::to_string(r.n) + ',' +
             fmt_double(r.b) + ',' + std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',' +
             r.status + ',' + std::to_string(r.iters) + ',' + fmt_double(r.final_cost) + ',' +
             fmt_double(r.gamma_est) + ',' + fmt_double(r.eta) + ',' +
             (r.rate_ok ? "1" : "0") + ',' + std::to_string(r.tail_start) + ',' +
             std::to_string(r.tail_end) + ',' + fmt_double(r.rho_limit) + ',' +
             fmt_double(r.theorem2) + ',' + (r.invariants_ok ? "1" : "0") + ',' +
             fmt_double(r.max_cost_increase) + '\n';
    }
    return s;
}

void save_records_csv(const std::string& path, const std::vector<TrialRecord>& records) {
    write_file(path, records_csv(records));
}

std::vector<TrialRecord> load_records_csv(const std::string& path) {
    const std::string content = read_file(path);
    std::vector<TrialRecord> records;
    std::size_t pos = 0;
    bool first = true;
    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string::npos) end = content.size();
        const std::string_view line(content.data() + pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (first) {
            if (line != kRecordsHeader)
                throw std::invalid_argument("records file has an unexpected header: " + path);
            first = false;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 17)
            throw std::invalid_argument("records row has wrong field count: " + std::string(line));
        TrialRecord r;
        const auto family = family_from_name(f[0]);
        if (!family) throw std::invalid_argument("records row has unknown family: " + std::string(f[0]));
        r.family = *family;
        r.n = parse_int<int>(f[1], "n");
        r.b = parse_double(f[2], "b");
        r.trial = parse_int<int>(f[3], "trial");
        r.seed = parse_int<std::uint64_t>(f[4], "seed");
        r.status = std::string(f[5]);
        r.iters = parse_int<std::int64_t>(f[6], "iters");
        r.final_cost = parse_double(f[7], "final_cost");
        r.gamma_est = parse_double(f[8], "gamma_est");
        r.eta = parse_double(f[9], "eta");
        r.rate_ok = parse_int<int>(f[10], "rate_ok") != 0;
        r.tail_start = parse_int<std::int64_t>(f[11], "tail_start");
        r.tail_end = parse_int<std::int64_t>(f[12], "tail_end");
        r.rho_limit = parse_double(f[13], "rho_limit");
        r.theorem2 = parse_double(f[14], "theorem2_bound");
        r.invariants_ok = parse_int<int>(f[15], "invariants_ok") != 0;
        r.max_cost_increase = parse_double(f[16], "max_cost_increase");
        records.push_back(std::move(r));
    }
    if (first) throw std::invalid_argument("records file is empty: " + path);
    return records;
}

std::string figure_csv(const std::vector<FigureRow>& rows, FigureKind kind) {
    std::string s = kind == FigureKind::eta_vs_n ? "n" : "b";
    s += ",max_eta,mean_eta,eta_spec,eta_bound\n";
    for (const FigureRow& r : rows) {
        s += fmt_double(r.x) + ',' + fmt_double(r.max_eta) + ',' + fmt_double(r.mean_eta) + ',' +
             fmt_double(r.eta_spec) + ',' + fmt_double(r.eta_bound) + '\n';
    }
    return s;
}

void save_figure_csv(const std::string& path, const std::vector<FigureRow>& rows, FigureKind kind) {
    write_file(path, figure_csv(rows, kind));
}

std::string snapshot_text(const ConsensusSnapshot& snap) {
    const int n = static_cast<int>(snap.u.size());
    std::string s = "t " + std::to_string(snap.t) + "\n";
    s += "n " + std::to_string(n) + "\n";
    auto vec_line = [&](const char* label, const std::vector<double>& v) {
        s += label;
        for (double x : v) {
            s += ' ';
            s += fmt_double(x);
        }
        s += '\n';
    };
    vec_line("u", snap.u);
    vec_line("v", snap.v);
    vec_line("pi", snap.pi);
    s += "P\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) s += ' ';
            s += fmt_double(snap.P(i, j));
        }
        s += '\n';
    }
    return s;
}

void save_snapshot_text(const std::string& path, const ConsensusSnapshot& snap) {
    write_file(path, snapshot_text(snap));
}

} // namespace vlslab
