#include "dhjb/config.hpp"

#include "dhjb/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dhjb {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model.r", "model.T", "model.rho", "model.c_f0",
        "kernel.family", "kernel.params", "kernel.N",
        "f0.kind", "f0.params",
        "utility.u1", "utility.u1_params", "utility.u1_sup",
        "utility.u2", "utility.u2_params", "utility.u2_sup",
        "numerics.dt", "numerics.horizon", "numerics.segments",
        "numerics.coord_tol", "numerics.value_tol", "numerics.max_sweeps",
        "numerics.grad_h", "numerics.bump_nodes", "numerics.bump_mass",
        "numerics.test_mode",
        "tol.hjb", "tol.cont", "tol.weak_slack", "tol.pair", "tol.equiv",
        "tol.stab", "tol.opt_gap_factor",
        "probes.operator_samples", "probes.trajectory_samples",
        "probes.value_pairs", "probes.hjb_points", "probes.sequence_terms",
        "seed",
    };
    return keys;
}

} // namespace

std::string ConfigFile::get(const std::string& key, const std::string& fallback) const {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second;
}

double ConfigFile::get_num(const std::string& key, double fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (trim(it->second.substr(pos)).empty()) return v;
    } catch (...) {
    }
    throw std::invalid_argument("config: bad number for " + key + ": '" + it->second + "'");
}

std::vector<double> ConfigFile::get_list(const std::string& key) const {
    std::vector<double> out;
    const auto it = entries.find(key);
    if (it == entries.end()) return out;
    for (const std::string& part : split(it->second, ',')) {
        const std::string p = trim(part);
        if (p.empty()) continue;
        out.push_back(std::stod(p));
    }
    return out;
}

ConfigFile parse_config_text(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!known_keys().count(key))
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        cfg.entries[key] = val;
    }
    return cfg;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

Scenario scenario_from_config(const ConfigFile& cfg) {
    Scenario s;
    s.params.r = cfg.get_num("model.r", 0.1);
    s.params.T = cfg.get_num("model.T", 1.0);
    s.params.rho = cfg.get_num("model.rho", 0.65);
    s.params.c_f0 = cfg.get_num("model.c_f0", 0.2);
    if (!(s.params.r > 0.0))
        throw std::invalid_argument("config: model.r must be positive (r <= 0 is unsupported)");
    if (!(s.params.T > 0.0) || !(s.params.rho > 0.0))
        throw std::invalid_argument("config: model.T and model.rho must be positive");

    const std::string fam = cfg.get("kernel.family", "linear_ramp");
    const std::vector<double> kparams = cfg.has("kernel.params")
                                            ? cfg.get_list("kernel.params")
                                            : std::vector<double>{1.0};
    const int N = static_cast<int>(cfg.get_num("kernel.N", 100));
    if (fam == "linear_ramp")
        s.kernel = make_kernel(KernelFamily::linear_ramp, kparams, N, s.params.T);
    else if (fam == "hat")
        s.kernel = make_kernel(KernelFamily::hat, kparams, N, s.params.T);
    else if (fam == "poly")
        s.kernel = make_kernel(KernelFamily::poly, kparams, N, s.params.T);
    else if (fam == "flat")
        s.kernel = flat_kernel(kparams.empty() ? 1.0 : kparams[0], N, s.params.T);
    else
        throw std::invalid_argument("config: unknown kernel.family '" + fam + "'");
    s.num.N = N;

    const std::string f0kind = cfg.get("f0.kind", "affine_saturating");
    const std::vector<double> fp = cfg.has("f0.params") ? cfg.get_list("f0.params")
                                                        : std::vector<double>{0.1, 0.2, 10.0, 0.1};
    if (f0kind == "affine_saturating") {
        if (fp.size() != 4)
            throw std::invalid_argument("config: affine_saturating needs a1,a2,K,b");
        s.f0 = affine_saturating(fp[0], fp[1], fp[2], fp[3]);
    } else if (f0kind == "zero") {
        s.f0 = Nonlinearity{Nonlinearity::Kind::zero, {}};
    } else if (f0kind == "linear_y") {
        s.f0 = Nonlinearity{Nonlinearity::Kind::linear_y, {}};
    } else if (f0kind == "custom_table") {
        if (fp.size() < 9)
            throw std::invalid_argument("config: custom_table needs nx,ny,x_max,y_min,y_max,v...");
        s.f0 = table_nonlinearity(static_cast<int>(fp[0]), static_cast<int>(fp[1]), fp[2], fp[3],
                                  fp[4], std::vector<double>(fp.begin() + 5, fp.end()));
    } else {
        throw std::invalid_argument("config: unknown f0.kind '" + f0kind + "'");
    }

    const std::string u1 = cfg.get("utility.u1", "pow_ratio");
    const std::vector<double> u1p = cfg.has("utility.u1_params") ? cfg.get_list("utility.u1_params")
                                                                 : std::vector<double>{0.5};
    if (u1 == "pow_ratio")
        s.utility.u1 = pow_ratio_utility(u1p.empty() ? 0.5 : u1p[0]);
    else
        throw std::invalid_argument("config: unknown utility.u1 '" + u1 + "'");
    s.params.u1_sup = cfg.get_num("utility.u1_sup", 1.0);

    const std::string u2 = cfg.get("utility.u2", "zero");
    const std::vector<double> u2p = cfg.get_list("utility.u2_params");
    if (u2 == "zero")
        s.utility.u2 = zero_utility();
    else if (u2 == "log")
        s.utility.u2 = log_utility();
    else if (u2 == "neg_pow")
        s.utility.u2 = neg_pow_utility(u2p.empty() ? 0.5 : u2p[0]);
    else
        throw std::invalid_argument("config: unknown utility.u2 '" + u2 + "'");
    s.params.u2_sup = cfg.get_num("utility.u2_sup", 0.0);

    s.num.dt = cfg.get_num("numerics.dt", 0.01);
    s.num.horizon = cfg.get_num("numerics.horizon", 0.0);
    s.num.segments = static_cast<int>(cfg.get_num("numerics.segments", 7));
    s.num.coord_tol = cfg.get_num("numerics.coord_tol", 1e-4);
    s.num.value_tol = cfg.get_num("numerics.value_tol", 1e-6);
    s.num.max_sweeps = static_cast<int>(cfg.get_num("numerics.max_sweeps", 10));
    s.num.grad_h = cfg.get_num("numerics.grad_h", 1e-3);
    s.num.bump_nodes = static_cast<int>(cfg.get_num("numerics.bump_nodes", 11));
    s.num.bump_mass = cfg.get_num("numerics.bump_mass", 1e-3);
    s.num.test_mode = cfg.get("numerics.test_mode", "false") == "true";
    s.num.seed = seed_from_config(cfg);

    s.tol.hjb = cfg.get_num("tol.hjb", 0.1);
    s.tol.cont = cfg.get_num("tol.cont", 5e-2);
    s.tol.weak_slack = cfg.get_num("tol.weak_slack", 1e-6);
    s.tol.pair = cfg.get_num("tol.pair", 1e-3);
    s.tol.equiv = cfg.get_num("tol.equiv", 5e-3);
    s.tol.stab = cfg.get_num("tol.stab", 5e-2);
    s.tol.opt_gap_factor = cfg.get_num("tol.opt_gap_factor", 10.0);

    if (!s.num.test_mode) {
        const HypothesisReport rep =
            validate_hypotheses(s.params, s.f0, s.kernel, s.utility);
        if (!rep.all_pass()) {
            std::string msg = "config: hypothesis validation failed:";
            for (const auto& e : rep.entries)
                if (!e.pass) msg += " " + e.name + (e.witness.empty() ? "" : " (" + e.witness + ")");
            msg += "; set numerics.test_mode = true to override for analytic tests";
            throw std::invalid_argument(msg);
        }
    }
    return s;
}

SuiteCounts counts_from_config(const ConfigFile& cfg) {
    SuiteCounts c;
    c.operator_samples = static_cast<int>(cfg.get_num("probes.operator_samples", 200));
    c.trajectory_samples = static_cast<int>(cfg.get_num("probes.trajectory_samples", 20));
    c.value_pairs = static_cast<int>(cfg.get_num("probes.value_pairs", 10));
    c.hjb_points = static_cast<int>(cfg.get_num("probes.hjb_points", 3));
    c.sequence_terms = static_cast<int>(cfg.get_num("probes.sequence_terms", 5));
    return c;
}

unsigned long long seed_from_config(const ConfigFile& cfg) {
    return static_cast<unsigned long long>(cfg.get_num("seed", 12345));
}

HState parse_eta_spec(const std::string& spec, int N, double T) {
    const std::vector<std::string> parts = split(spec, ':');
    const std::string& kind = parts[0];
    if (kind == "const" && parts.size() == 2) {
        const double v = std::stod(parts[1]);
        return const_state(v, v, N, T);
    }
    if (kind == "ramp" && parts.size() == 3)
        return ramp_state(std::stod(parts[1]), std::stod(parts[2]), N, T);
    if (kind == "bump" && parts.size() == 4) {
        const double center = std::stod(parts[1]);
        const double width = std::stod(parts[2]);
        const double mass = std::stod(parts[3]);
        return bump_state(mass / width, center, width, mass, N, T);
    }
    if (kind == "file" && parts.size() == 2) {
        std::ifstream in(parts[1]);
        if (!in) throw std::runtime_error("cannot open state file " + parts[1]);
        std::string line;
        double eta0 = kNaN;
        std::vector<std::pair<double, double>> pts;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#' || line.rfind("xi,", 0) == 0) continue;
            const auto cells = split(line, ',');
            if (cells.size() != 2) throw std::runtime_error("state file: expected two columns");
            if (trim(cells[0]) == "eta0") {
                eta0 = std::stod(cells[1]);
                continue;
            }
            pts.emplace_back(std::stod(cells[0]), std::stod(cells[1]));
        }
        if (pts.size() < 2 || std::isnan(eta0))
            throw std::runtime_error("state file: needs an eta0 row and at least two xi rows");
        std::sort(pts.begin(), pts.end());
        HState s;
        s.dxi = T / N;
        s.eta0 = eta0;
        s.eta1.resize(static_cast<size_t>(N) + 1);
        for (int i = 0; i <= N; ++i) {
            const double xi = -T + i * s.dxi;
            auto hi = std::lower_bound(pts.begin(), pts.end(), std::make_pair(xi, -kInf));
            if (hi == pts.begin())
                s.eta1[i] = pts.front().second;
            else if (hi == pts.end())
                s.eta1[i] = pts.back().second;
            else {
                const auto lo = hi - 1;
                const double w = (xi - lo->first) / (hi->first - lo->first);
                s.eta1[i] = (1.0 - w) * lo->second + w * hi->second;
            }
        }
        return s;
    }
    throw std::invalid_argument("bad eta spec '" + spec +
                                "' (const:v | ramp:v0:v1 | bump:center:width:mass | file:path)");
}

ControlPath parse_control_spec(const std::string& spec, double horizon) {
    const std::vector<std::string> parts = split(spec, ':');
    if (parts[0] == "zero") return ControlPath{};
    if (parts[0] == "const" && parts.size() == 2)
        return const_control(std::stod(parts[1]), horizon);
    if (parts[0] == "steps" && parts.size() == 2) {
        ControlPath c;
        for (const std::string& v : split(parts[1], ','))
            if (!trim(v).empty()) c.values.push_back(std::stod(v));
        if (c.values.empty()) throw std::invalid_argument("steps control: no values");
        c.dt_seg = horizon / static_cast<double>(c.values.size());
        return c;
    }
    throw std::invalid_argument("bad control spec '" + spec +
                                "' (zero | const:v | steps:v1,v2,...)");
}

std::string builtin_config_text() {
    return R"(# value-suite calibration setup
model.r = 0.1
model.T = 1.0
model.rho = 0.65
model.c_f0 = 0.2
kernel.family = linear_ramp
kernel.params = 1.0
kernel.N = 100
f0.kind = affine_saturating
f0.params = 0.1, 0.2, 10.0, 0.1
utility.u1 = pow_ratio
utility.u1_params = 0.5
utility.u1_sup = 1.0
utility.u2 = zero
utility.u2_sup = 0.0
numerics.dt = 0.01
numerics.horizon = 7.7
numerics.segments = 7
seed = 12345
)";
}

} // namespace dhjb
