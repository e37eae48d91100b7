#include "phonoq/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "phonoq/table.hpp"

namespace phonoq::config {

namespace {

using nlohmann::json;

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

cplx get_cplx(const json& j, const char* key, cplx fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j[key];
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    throw ConfigError(std::string("field '") + key + "' must be a number or [re, im]");
}

steady::ToneTag tag_from_string(const std::string& s) {
    if (s == "cool") return steady::ToneTag::cool;
    if (s == "displace_plus") return steady::ToneTag::displace_plus;
    if (s == "displace_minus") return steady::ToneTag::displace_minus;
    if (s == "meas_red") return steady::ToneTag::meas_red;
    if (s == "meas_blue") return steady::ToneTag::meas_blue;
    if (s == "custom") return steady::ToneTag::custom;
    throw ConfigError("unknown tone tag '" + s + "'");
}

std::string tag_to_string(steady::ToneTag t) {
    switch (t) {
        case steady::ToneTag::cool: return "cool";
        case steady::ToneTag::displace_plus: return "displace_plus";
        case steady::ToneTag::displace_minus: return "displace_minus";
        case steady::ToneTag::meas_red: return "meas_red";
        case steady::ToneTag::meas_blue: return "meas_blue";
        case steady::ToneTag::custom: return "custom";
    }
    return "custom";
}

json cplx_json(cplx v) { return json::array({v.real(), v.imag()}); }

} // namespace

std::vector<double> SweepAxis::grid() const {
    if (!values.empty()) return values;
    if (points < 1) throw ConfigError("axis '" + name + "' needs points >= 1");
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = min;
        return g;
    }
    if (scale == "log") {
        if (!(min > 0.0) || !(max > 0.0))
            throw ConfigError("log axis '" + name + "' needs positive bounds");
        const double l0 = std::log(min), l1 = std::log(max);
        for (int i = 0; i < points; ++i)
            g[i] = std::exp(l0 + (l1 - l0) * i / double(points - 1));
    } else if (scale == "linear") {
        for (int i = 0; i < points; ++i)
            g[i] = min + (max - min) * i / double(points - 1);
    } else {
        throw ConfigError("axis scale must be 'linear' or 'log'");
    }
    return g;
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    // Hz inputs are converted to angular rad/s on load.
    double unit = 1.0;
    if (j.contains("units")) {
        const std::string u = j["units"].get<std::string>();
        if (u == "hz") unit = 2.0 * std::numbers::pi;
        else if (u != "rad") throw ConfigError("units must be 'rad' or 'hz'");
    }

    if (j.contains("policy")) {
        const auto& p = j["policy"];
        c.policy.hermiticity_tol = get_num(p, "hermiticity_tol", c.policy.hermiticity_tol);
        c.policy.eigenvalue_floor = get_num(p, "eigenvalue_floor", c.policy.eigenvalue_floor);
        c.policy.trace_deficit_max = get_num(p, "trace_deficit_max", c.policy.trace_deficit_max);
        c.policy.unitarity_tol = get_num(p, "unitarity_tol", c.policy.unitarity_tol);
        c.policy.fixed_point_tol = get_num(p, "fixed_point_tol", c.policy.fixed_point_tol);
        if (p.contains("validate_positivity")) c.policy.validate_positivity = p["validate_positivity"].get<bool>();
    }

    if (j.contains("system")) {
        const auto& s = j["system"];
        c.system.kappa = unit * get_num(s, "kappa", c.system.kappa / unit);
        c.system.gamma = unit * get_num(s, "gamma", c.system.gamma / unit);
        c.system.omega_m = unit * get_num(s, "omega_m", c.system.omega_m / unit);
        c.system.g0 = unit * get_num(s, "g0", c.system.g0 / unit);
        c.system.n_th = get_num(s, "n_th", c.system.n_th);
        c.system.delta_c = unit * get_num(s, "delta_c", c.system.delta_c / unit);
    }

    if (j.contains("state")) {
        const auto& s = j["state"];
        c.beta = get_cplx(s, "beta", c.beta);
        c.n_m = get_num(s, "n_m", c.n_m);
        if (s.contains("beta_infinite")) c.beta_infinite = s["beta_infinite"].get<bool>();
    }

    if (j.contains("pulse")) {
        const auto& p = j["pulse"];
        c.pulse_plan.tau_w = get_num(p, "tau_w", 0.0);
        c.pulse_plan.tau_r = get_num(p, "tau_r", 0.0);
        if (p.contains("G_R") || p.contains("G_B")) {
            c.pulse_plan.explicit_couplings = true;
            c.pulse_plan.G_R = unit * get_cplx(p, "G_R", {});
            c.pulse_plan.G_B = unit * get_cplx(p, "G_B", {});
        } else {
            c.pulse_plan.lambda = get_num(p, "lambda", 1.0);
            c.pulse_plan.theta = get_num(p, "theta", std::numbers::pi);
            c.pulse_plan.g_b = unit * get_num(p, "g_b", 0.0);
        }
    }

    if (j.contains("detection")) {
        const auto& d = j["detection"];
        c.detection.eta = get_num(d, "eta", 1.0);
        c.detection.epsilon = get_num(d, "epsilon", 1.0);
        c.detection.split = get_num(d, "split", 0.5);
    }

    if (j.contains("tones")) {
        for (const auto& t : j["tones"]) {
            steady::DriveTone tone;
            tone.omega = unit * get_num(t, "omega", 0.0);
            tone.Omega = unit * get_cplx(t, "Omega", {});
            if (t.contains("tag")) tone.tag = tag_from_string(t["tag"].get<std::string>());
            c.tones.push_back(tone);
        }
    }

    if (j.contains("filter")) {
        steady::FilterSpec f;
        f.center = unit * get_num(j["filter"], "center", 0.0);
        f.W = unit * get_num(j["filter"], "W", 0.0);
        c.filter = f;
    }
    c.epsilon_threshold = get_num(j, "epsilon_threshold", c.epsilon_threshold);
    if (j.contains("r_target")) c.r_target = get_cplx(j, "r_target", {});

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        if (!s.contains("axes") || !s["axes"].is_array())
            throw ConfigError("sweep requires an 'axes' array");
        for (const auto& a : s["axes"]) {
            SweepAxis ax;
            if (!a.contains("name")) throw ConfigError("sweep axis needs a name");
            ax.name = a["name"].get<std::string>();
            ax.min = get_num(a, "min", 0.0);
            ax.max = get_num(a, "max", ax.min);
            ax.points = static_cast<int>(get_num(a, "points", 1));
            if (a.contains("scale")) ax.scale = a["scale"].get<std::string>();
            if (a.contains("values")) ax.values = a["values"].get<std::vector<double>>();
            (void)ax.grid(); // validate eagerly
            c.axes.push_back(std::move(ax));
        }
    }

    if (j.contains("output") && j["output"].contains("format"))
        c.format = j["output"]["format"].get<std::string>();
    if (c.format != "csv" && c.format != "json")
        throw ConfigError("output format must be 'csv' or 'json'");
    c.jobs = static_cast<int>(get_num(j, "jobs", 1));
    if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
    c.seed = static_cast<long>(get_num(j, "seed", 0));
    c.dim_cap = static_cast<int>(get_num(j, "dim_cap", c.dim_cap));
    if (j.contains("strict")) c.strict = j["strict"].get<bool>();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in '" + path + "': " + e.what());
    }
    return from_json(j);
}

nlohmann::json RunConfig::semantic_json() const {
    json j;
    j["policy"] = {{"hermiticity_tol", policy.hermiticity_tol},
                   {"eigenvalue_floor", policy.eigenvalue_floor},
                   {"trace_deficit_max", policy.trace_deficit_max},
                   {"unitarity_tol", policy.unitarity_tol},
                   {"fixed_point_tol", policy.fixed_point_tol},
                   {"validate_positivity", policy.validate_positivity}};
    j["system"] = {{"kappa", system.kappa},   {"gamma", system.gamma},
                   {"omega_m", system.omega_m}, {"g0", system.g0},
                   {"n_th", system.n_th},     {"delta_c", system.delta_c}};
    j["state"] = {{"beta", cplx_json(beta)}, {"n_m", n_m}, {"beta_infinite", beta_infinite}};
    j["pulse"] = {{"explicit", pulse_plan.explicit_couplings},
                  {"G_R", cplx_json(pulse_plan.G_R)},
                  {"G_B", cplx_json(pulse_plan.G_B)},
                  {"lambda", pulse_plan.lambda},
                  {"theta", pulse_plan.theta},
                  {"g_b", pulse_plan.g_b},
                  {"tau_w", pulse_plan.tau_w},
                  {"tau_r", pulse_plan.tau_r}};
    j["detection"] = {{"eta", detection.eta}, {"epsilon", detection.epsilon}, {"split", detection.split}};
    json tl = json::array();
    for (const auto& t : tones)
        tl.push_back({{"omega", t.omega}, {"Omega", cplx_json(t.Omega)}, {"tag", tag_to_string(t.tag)}});
    j["tones"] = std::move(tl);
    if (filter) j["filter"] = {{"center", filter->center}, {"W", filter->W}};
    j["epsilon_threshold"] = epsilon_threshold;
    if (r_target) j["r_target"] = cplx_json(*r_target);
    json al = json::array();
    for (const auto& a : axes)
        al.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max},
                      {"points", a.points}, {"scale", a.scale}, {"values", a.values}});
    j["axes"] = std::move(al);
    j["dim_cap"] = dim_cap;
    j["strict"] = strict;
    return j;
}

std::string RunConfig::hash() const {
    return table::fnv1a_hex(semantic_json().dump());
}

} // namespace phonoq::config
