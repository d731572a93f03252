#include "mhdctrl/config.hpp"

#include <fstream>

#include <json.hpp>

namespace mhdctrl {

namespace {

std::vector<StreamMode> parse_modes(const nlohmann::json& arr, const char* name) {
    std::vector<StreamMode> modes;
    if (!arr.is_array()) throw config_error(std::string("config: ") + name + " must be an array");
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 4)
            throw config_error(std::string("config: ") + name + " entries are [m,n,a_cos,a_sin]");
        StreamMode m;
        m.m = e[0].get<int>();
        m.n = e[1].get<int>();
        m.a_cos = e[2].get<double>();
        m.a_sin = e[3].get<double>();
        if (m.n < 1 || m.m < 0)
            throw config_error(std::string("config: ") + name + " needs m >= 0, n >= 1");
        modes.push_back(m);
    }
    return modes;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error(std::string("config: malformed JSON: ") + e.what());
    }
    RunConfig c;
    auto get = [&](const char* key, auto& dst) {
        if (j.contains(key)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
    };
    get("L", c.L);
    get("W", c.W);
    get("l", c.l);
    get("nx", c.nx);
    get("ny", c.ny);
    get("nt", c.nt);
    get("k", c.k_weight);
    get("d", c.d);
    get("M_override", c.M_override);
    get("mu", c.mu);
    get("alpha", c.alpha);
    get("mtilde", c.mtilde);
    get("T", c.T);
    get("eps_cap", c.eps_cap);
    get("tol_X", c.tol_X);
    get("max_iter", c.max_iter);
    get("seed", c.seed);
    get("resolution_scale", c.resolution_scale);
    get("snapshot_stride", c.snapshot_stride);
    if (j.contains("data")) {
        const auto& d = j.at("data");
        if (d.contains("u0")) c.u0 = parse_modes(d.at("u0"), "data.u0");
        if (d.contains("H0")) c.H0 = parse_modes(d.at("H0"), "data.H0");
        if (d.contains("uT")) c.uT = parse_modes(d.at("uT"), "data.uT");
        if (d.contains("HT")) c.HT = parse_modes(d.at("HT"), "data.HT");
    }
    if (!(c.L > 0 && c.W > 0 && c.l > 0)) throw config_error("config: L, W, l must be positive");
    if (!(c.mu > 0)) throw config_error("config: mu must be positive");
    if (!(c.d > 0 && c.d < 0.5)) throw config_error("config: d must lie in (0, 1/2)");
    if (!(c.alpha > 0 && c.alpha < 1)) throw config_error("config: alpha must lie in (0,1)");
    if (c.mtilde != 3)
        throw config_error("config: the discrete Holder estimator supports mtilde = 3 only");
    if (!(c.T > 0)) throw config_error("config: T must be positive");
    return c;
}

GridSpec RunConfig::make_grid() const {
    DomainSpec dom = build_domains(L, W, l);
    const double s = resolution_scale > 0 ? resolution_scale : 1.0;
    return GridSpec::make(dom, int(nx * s + 0.5), int(ny * s + 0.5), int(nt * s + 0.5));
}

ControllerConfig RunConfig::controller() const {
    ControllerConfig cc;
    cc.mu = mu;
    cc.mtilde = mtilde;
    cc.alpha = alpha;
    cc.k_weight = k_weight;
    cc.tol_X = tol_X;
    cc.max_iter = max_iter;
    cc.lambda_d = d;
    cc.M_override = M_override;
    cc.seed = seed;
    return cc;
}

}  // namespace mhdctrl
