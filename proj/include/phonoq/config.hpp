#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phonoq/steady.hpp"

namespace phonoq::config {

inline constexpr const char* kVersion = "0.1.0";

struct SweepAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int points = 1;
    std::string scale = "linear"; // linear | log
    std::vector<double> values;   // explicit grid overrides min/max/points

    std::vector<double> grid() const;
};

struct PulseSettings {
    // Either explicit couplings ...
    cplx G_R{};
    cplx G_B{};
    bool explicit_couplings = false;
    // ... or the (lambda, theta) parameterization with |G_B| = g_b.
    double lambda = 1.0;
    double theta = 3.141592653589793;
    double g_b = 0.0;
    double tau_w = 0.0;
    double tau_r = 0.0;
};

struct RunConfig {
    NumericPolicy policy;
    pulse::SystemParams system;
    // Initial mechanical state. beta_infinite selects the high-displacement
    // closed forms only.
    cplx beta{0.0, 0.0};
    double n_m = 0.0;
    bool beta_infinite = false;

    PulseSettings pulse_plan;
    pulse::DetectionModel detection;
    std::vector<steady::DriveTone> tones;
    std::optional<steady::FilterSpec> filter;
    double epsilon_threshold = 0.1; // n_o budget for amplitude_bound
    std::optional<cplx> r_target;   // steady: target r for t_c

    std::vector<SweepAxis> axes;
    std::string format = "csv"; // csv | json
    int jobs = 1;
    long seed = 0; // reserved, unused: all computations deterministic
    int dim_cap = 400;
    bool strict = false;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);

    // Canonical serialization of the semantic fields (everything that affects
    // computed numbers; excludes jobs/format/seed/output path).
    nlohmann::json semantic_json() const;
    std::string hash() const;
};

} // namespace phonoq::config
