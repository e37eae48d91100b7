#include "phonoq/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>

#include "phonoq/herald.hpp"
#include "phonoq/mandel.hpp"
#include "phonoq/steady.hpp"

namespace phonoq::runner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Cartesian grid over the config axes with per-axis defaults for everything
// not swept. Iteration is row-major (last axis fastest).
struct Grid {
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;
    long total = 1;

    std::vector<double> point(long index) const {
        std::vector<double> pt(values.size());
        for (int a = static_cast<int>(values.size()) - 1; a >= 0; --a) {
            const long n = static_cast<long>(values[a].size());
            pt[a] = values[a][index % n];
            index /= n;
        }
        return pt;
    }
};

Grid make_grid(const config::RunConfig& cfg, const std::vector<std::string>& allowed) {
    Grid g;
    for (const auto& ax : cfg.axes) {
        if (std::find(allowed.begin(), allowed.end(), ax.name) == allowed.end())
            throw ConfigError("unknown sweep axis '" + ax.name + "' for this run mode");
        g.names.push_back(ax.name);
        g.values.push_back(ax.grid());
        g.total *= static_cast<long>(g.values.back().size());
    }
    return g;
}

double axis_value(const Grid& g, const std::vector<double>& pt, const std::string& name,
                  double fallback) {
    for (size_t i = 0; i < g.names.size(); ++i)
        if (g.names[i] == name) return pt[i];
    return fallback;
}

std::map<std::string, std::string> base_metadata(const config::RunConfig& cfg) {
    return {{"tool", std::string("phonoq ") + config::kVersion}, {"config_hash", cfg.hash()}};
}

// Signed-r convention for sweep grids: negative r selects phi -> phi + pi.
cplx signed_r_to_complex(double r_signed, double phi) {
    const double mag = std::abs(r_signed);
    const double ph = phi + (r_signed < 0.0 ? std::numbers::pi : 0.0);
    return mag * std::exp(cplx(0, ph));
}

struct StateCache {
    std::map<std::pair<double, double>, fock::DensityMatrix> states; // (beta, n_m) -> rho
    std::map<std::pair<double, double>, int> dims;

    const fock::DensityMatrix& get(double beta, double n_m) const {
        return states.at({beta, n_m});
    }
};

// Built serially so that worker threads only read.
StateCache build_state_cache(const std::vector<std::pair<double, double>>& combos, int dim_cap,
                             const NumericPolicy& policy) {
    StateCache cache;
    for (const auto& [beta, n_m] : combos) {
        if (cache.states.count({beta, n_m})) continue;
        const int dim = fock::recommended_dim(beta, n_m, 1);
        if (dim > dim_cap) continue; // marked absent downstream
        cache.states.emplace(std::make_pair(beta, n_m),
                             fock::prepare_state(fock::StateKind::displaced_thermal, beta, n_m, 0,
                                                 fock::FockDim(dim), policy));
        cache.dims.emplace(std::make_pair(beta, n_m), dim);
    }
    return cache;
}

std::string dims_summary(const StateCache& cache) {
    int lo = 0, hi = 0;
    for (const auto& [k, d] : cache.dims) {
        if (lo == 0 || d < lo) lo = d;
        hi = std::max(hi, d);
    }
    if (hi == 0) return "none";
    return std::to_string(lo) + ".." + std::to_string(hi);
}

} // namespace

table::ResultTable run_sweep_q(const config::RunConfig& cfg) {
    const Grid grid = make_grid(cfg, {"r", "phi", "n_m", "beta"});

    table::ResultTable t;
    t.columns = grid.names;
    for (const char* c : {"q_analytic", "q_numeric", "q_highdisp", "abs_diff"})
        t.columns.push_back(c);

    const double beta_default = std::abs(cfg.beta);
    std::vector<std::pair<double, double>> combos;
    for (long i = 0; i < grid.total; ++i) {
        const auto pt = grid.point(i);
        combos.emplace_back(axis_value(grid, pt, "beta", beta_default),
                            axis_value(grid, pt, "n_m", cfg.n_m));
    }
    StateCache cache;
    if (!cfg.beta_infinite) cache = build_state_cache(combos, cfg.dim_cap, cfg.policy);

    std::vector<std::vector<double>> rows(grid.total);
    parallel_for(static_cast<int>(grid.total), cfg.jobs, [&](int i) {
        const auto pt = grid.point(i);
        const double r_signed = axis_value(grid, pt, "r", 0.0);
        const double phi = axis_value(grid, pt, "phi", 0.0);
        const double n_m = axis_value(grid, pt, "n_m", cfg.n_m);
        const double beta = axis_value(grid, pt, "beta", beta_default);

        const cplx r = signed_r_to_complex(r_signed, phi);
        const double phi_eff = phi + (r_signed < 0.0 ? std::numbers::pi : 0.0);

        double q_an = kNaN, q_num = kNaN;
        const double q_hd = mandel::q_highdisp(std::abs(r_signed), phi_eff, n_m);
        if (!cfg.beta_infinite && beta > 0.0) {
            q_an = mandel::q_conditioned_analytic(r, beta, n_m, cfg.policy);
            if (cache.states.count({beta, n_m})) {
                const auto cond = herald::conditional_state(
                    cache.get(beta, n_m), herald::HeraldSpec::from_r(r, beta), cfg.policy);
                q_num = mandel::mandel_q(cond.rho, cfg.policy).q;
            }
        }
        std::vector<double> row(pt);
        row.push_back(q_an);
        row.push_back(q_num);
        row.push_back(q_hd);
        row.push_back(std::isnan(q_an) || std::isnan(q_num) ? kNaN : std::abs(q_an - q_num));
        rows[i] = std::move(row);
    });

    t.rows = std::move(rows);
    t.metadata = base_metadata(cfg);
    t.metadata["dims"] = cfg.beta_infinite ? "none" : dims_summary(cache);
    return t;
}

table::ResultTable run_protocol(const config::RunConfig& cfg) {
    const Grid grid = make_grid(cfg, {"lambda", "theta", "n_m", "beta"});

    table::ResultTable t;
    t.columns = grid.names;
    for (const char* c :
         {"k_R_re", "k_R_im", "k_B_re", "k_B_im", "r_re", "r_im", "herald_prob_weight",
          "q_conditional_numeric", "epsilon", "p0", "p1", "p2", "q_from_clicks",
          "q_predicted_analytic", "status"})
        t.columns.push_back(c);

    const double beta_default = std::abs(cfg.beta);
    std::vector<std::pair<double, double>> combos;
    for (long i = 0; i < grid.total; ++i) {
        const auto pt = grid.point(i);
        combos.emplace_back(axis_value(grid, pt, "beta", beta_default),
                            axis_value(grid, pt, "n_m", cfg.n_m));
    }
    StateCache cache = build_state_cache(combos, cfg.dim_cap, cfg.policy);

    std::vector<std::vector<double>> rows(grid.total);
    parallel_for(static_cast<int>(grid.total), cfg.jobs, [&](int i) {
        const auto pt = grid.point(i);
        const double lambda = axis_value(grid, pt, "lambda", cfg.pulse_plan.lambda);
        const double theta = axis_value(grid, pt, "theta", cfg.pulse_plan.theta);
        const double n_m = axis_value(grid, pt, "n_m", cfg.n_m);
        const double beta_mag = axis_value(grid, pt, "beta", beta_default);
        const cplx beta = beta_mag; // real-positive displacement for swept rows

        std::vector<double> row(pt);
        row.resize(t.columns.size(), kNaN);
        double& status = row.back();
        status = kOk;

        try {
            pulse::PulsePlan plan =
                cfg.pulse_plan.explicit_couplings
                    ? pulse::PulsePlan::make(cfg.pulse_plan.G_R, cfg.pulse_plan.G_B,
                                             cfg.pulse_plan.tau_w, cfg.system.kappa)
                    : pulse::PulsePlan::make(lambda * cfg.pulse_plan.g_b *
                                                 std::exp(cplx(0, theta - 2.0 * std::arg(beta))),
                                             cfg.pulse_plan.g_b, cfg.pulse_plan.tau_w,
                                             cfg.system.kappa);
            const auto [k_R, k_B] = pulse::pulse_coefficients(plan);
            if (k_R == cplx(0, 0) && k_B == cplx(0, 0))
                throw ZeroLikelihoodError("zero-power pulse heralds nothing");
            size_t c = pt.size();
            row[c++] = k_R.real();
            row[c++] = k_R.imag();
            row[c++] = k_B.real();
            row[c++] = k_B.imag();

            const auto spec = herald::HeraldSpec::from_coefficients(k_R, k_B, beta);
            const auto r_opt = spec.r();
            if (r_opt) {
                row[c++] = r_opt->real();
                row[c++] = r_opt->imag();
            } else {
                c += 2;
            }

            if (!cache.states.count({beta_mag, n_m}))
                throw TruncationError("state dimension exceeds the configured cap",
                                      fock::recommended_dim(beta_mag, n_m, 1));
            const auto cond = herald::conditional_state(cache.get(beta_mag, n_m), spec, cfg.policy);
            row[c++] = cond.herald_prob_weight;
            row[c++] = mandel::mandel_q(cond.rho, cfg.policy).q;

            pulse::DetectionModel det = cfg.detection;
            if (cfg.pulse_plan.tau_r > 0.0)
                det.epsilon = pulse::readout_conversion(plan.G_R, cfg.system.kappa, cfg.pulse_plan.tau_r);
            row[c++] = det.epsilon;

            const auto clicks = pulse::click_probabilities(cond.rho, det);
            row[c++] = clicks.p0;
            row[c++] = clicks.p1;
            row[c++] = clicks.p2;
            row[c++] = pulse::q_from_clicks(clicks.p1, clicks.p2, det.thinning());
            if (r_opt) row[c] = mandel::q_conditioned_analytic(*r_opt, beta, n_m, cfg.policy);
        } catch (const ZeroLikelihoodError&) {
            status = kZeroLikelihood;
        } catch (const UndefinedQError&) {
            status = kUndefinedEstimator;
        } catch (const Error&) {
            status = kNumericError;
        }
        rows[i] = std::move(row);
    });

    t.rows = std::move(rows);
    t.metadata = base_metadata(cfg);
    t.metadata["dims"] = dims_summary(cache);
    return t;
}

table::ResultTable run_steady(const config::RunConfig& cfg) {
    table::ResultTable t;
    t.columns = {"sigma_re",
                 "sigma_im",
                 "gamma_eff",
                 "omega_m_eff",
                 "n_o",
                 "n_m",
                 "beta_re",
                 "beta_im",
                 "beta_abs",
                 "b_c_re",
                 "b_c_im",
                 "beta_residual",
                 "fixed_point_iters",
                 "sigma_displacement_contribution",
                 "sigma_measurement_contribution",
                 "amplitude_bound",
                 "amplitude_bound_rsb",
                 "eta_abs",
                 "t_c",
                 "t_period",
                 "status"};

    std::vector<double> row(t.columns.size(), kNaN);
    double status = kOk;
    const std::span<const steady::DriveTone> tones(cfg.tones);

    auto report = steady::effective_mechanics(tones, cfg.system, cfg.policy);
    const auto disp = steady::coherent_displacement(tones, cfg.system, report);
    const auto budget = steady::thermal_budget(tones, cfg.system, report);

    // Pairwise self-energy contributions by tag.
    cplx sigma_disp = 0, sigma_meas = 0;
    cplx k_cool = 0, k_R_meas = 0, k_B_meas = 0;
    const auto coeffs = steady::sideband_coefficients(tones, cfg.system, report.omega_m_eff);
    std::optional<double> delta_proj;
    for (size_t j = 0; j < cfg.tones.size(); ++j) {
        switch (cfg.tones[j].tag) {
            case steady::ToneTag::displace_plus:
            case steady::ToneTag::displace_minus:
                sigma_disp += report.sigma_by_tone[j];
                break;
            case steady::ToneTag::meas_red:
                sigma_meas += report.sigma_by_tone[j];
                k_R_meas += coeffs[j].k_R;
                delta_proj = cfg.tones[j].omega + report.omega_m_eff;
                break;
            case steady::ToneTag::meas_blue:
                sigma_meas += report.sigma_by_tone[j];
                k_B_meas += coeffs[j].k_B;
                if (!delta_proj) delta_proj = cfg.tones[j].omega - report.omega_m_eff;
                break;
            case steady::ToneTag::cool:
                k_cool += coeffs[j].k_R;
                break;
            case steady::ToneTag::custom:
                break;
        }
    }

    size_t c = 0;
    row[c++] = report.sigma.real();
    row[c++] = report.sigma.imag();
    row[c++] = report.gamma_eff;
    row[c++] = report.omega_m_eff;
    row[c++] = budget.n_o;
    row[c++] = budget.n_m;
    row[c++] = disp.beta.real();
    row[c++] = disp.beta.imag();
    row[c++] = std::abs(disp.beta);
    row[c++] = disp.b_c.real();
    row[c++] = disp.b_c.imag();
    row[c++] = disp.residual;
    row[c++] = report.fixed_point_iters;
    row[c++] = std::abs(sigma_disp);
    row[c++] = std::abs(sigma_meas);
    row[c++] = steady::amplitude_bound(cfg.epsilon_threshold, cfg.system, report.omega_m_eff, false);
    row[c++] = steady::amplitude_bound(cfg.epsilon_threshold, cfg.system, report.omega_m_eff, true);

    if (cfg.filter && delta_proj) {
        const cplx eta = steady::filter_leakage(*delta_proj, cfg.filter->W);
        row[c] = std::abs(eta);
        if (k_B_meas != cplx(0, 0) && disp.beta != cplx(0, 0)) {
            const cplx r_target = cfg.r_target.value_or(
                -std::conj(disp.beta) / std::abs(disp.beta) *
                std::sqrt(3.0 * (1.0 + 2.0 * budget.n_m)));
            try {
                const auto mt = steady::ideal_measurement_time(k_R_meas, k_B_meas, k_cool, eta,
                                                               *delta_proj, r_target, disp.beta,
                                                               cfg.policy);
                row[c + 1] = mt.t_c;
                row[c + 2] = mt.period;
            } catch (const NoSolutionError&) {
                status = kNumericError;
            }
        }
    }
    row.back() = status;

    t.add_row(std::move(row));
    t.metadata = base_metadata(cfg);
    t.metadata["dims"] = "none";
    const auto rw = report.regime_warnings(cfg.system);
    if (!rw.empty()) {
        std::string joined;
        for (const auto& w : rw) joined += (joined.empty() ? "" : "; ") + w;
        t.metadata["warnings"] = joined;
    }
    return t;
}

namespace {

// Finite-beta minimum of the conditioned Q over lambda at theta = pi,
// bracketed around the asymptotic optimum (golden-section search).
double lambda_at_minimum(double beta, double n_m, const NumericPolicy& policy) {
    const double target = std::sqrt(3.0 * (1.0 + 2.0 * n_m));
    auto q_of = [&](double lam) {
        const auto rc = herald::r_from_drives({lam, std::numbers::pi}, beta);
        return mandel::q_conditioned_analytic(rc.r, beta, n_m, policy);
    };
    double a = 1.0 + target / beta - 0.02;
    double b = 1.0 + target / beta + 0.02;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = q_of(x1), f2 = q_of(x2);
    while (b - a > 1e-11) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = q_of(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = q_of(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

table::ResultTable run_sensitivity(const config::RunConfig& cfg) {
    const Grid grid = make_grid(cfg, {"delta", "n_m", "beta"});

    table::ResultTable t;
    t.columns = grid.names;
    for (const char* c : {"dq_eq12_lambda", "dq_fd_lambda", "rel_err_lambda", "dq_eq12_theta",
                          "dq_fd_theta", "rel_err_theta"})
        t.columns.push_back(c);

    const double beta_default = std::abs(cfg.beta);
    std::vector<std::vector<double>> rows(grid.total);

    // The minimizer search depends only on (beta, n_m); cache it serially.
    std::map<std::pair<double, double>, double> lam_star;
    for (long i = 0; i < grid.total; ++i) {
        const auto pt = grid.point(i);
        const double n_m = axis_value(grid, pt, "n_m", cfg.n_m);
        const double beta = axis_value(grid, pt, "beta", beta_default);
        if (!lam_star.count({beta, n_m}))
            lam_star[{beta, n_m}] = lambda_at_minimum(beta, n_m, cfg.policy);
    }

    parallel_for(static_cast<int>(grid.total), cfg.jobs, [&](int i) {
        const auto pt = grid.point(i);
        const double d = axis_value(grid, pt, "delta", 1e-3);
        const double n_m = axis_value(grid, pt, "n_m", cfg.n_m);
        const double beta = axis_value(grid, pt, "beta", beta_default);
        const double lam0 = lam_star.at({beta, n_m});

        auto q_of = [&](double lam, double th) {
            const auto rc = herald::r_from_drives({lam, th}, beta);
            return mandel::q_conditioned_analytic(rc.r, beta, n_m, cfg.policy);
        };
        const double q0 = q_of(lam0, std::numbers::pi);
        const double fd_l = 0.5 * (q_of(lam0 + d, std::numbers::pi) + q_of(lam0 - d, std::numbers::pi)) - q0;
        const double fd_t = 0.5 * (q_of(lam0, std::numbers::pi + d) + q_of(lam0, std::numbers::pi - d)) - q0;
        const double eq_l = mandel::delta_q_sensitivity({d, 0.0, beta, n_m});
        const double eq_t = mandel::delta_q_sensitivity({0.0, d, beta, n_m});

        std::vector<double> row(pt);
        row.push_back(eq_l);
        row.push_back(fd_l);
        row.push_back(std::abs(fd_l - eq_l) / std::abs(eq_l));
        row.push_back(eq_t);
        row.push_back(fd_t);
        row.push_back(std::abs(fd_t - eq_t) / std::abs(eq_t));
        rows[i] = std::move(row);
    });

    t.rows = std::move(rows);
    t.metadata = base_metadata(cfg);
    t.metadata["dims"] = "none";
    return t;
}

std::vector<std::string> collect_warnings(const config::RunConfig& cfg) {
    std::vector<std::string> w = cfg.system.regime_warnings();
    if (cfg.pulse_plan.tau_w > 0.0) {
        try {
            const auto plan = cfg.pulse_plan.explicit_couplings
                                  ? pulse::PulsePlan::make(cfg.pulse_plan.G_R, cfg.pulse_plan.G_B,
                                                           cfg.pulse_plan.tau_w, cfg.system.kappa)
                                  : pulse::PulsePlan::make(cfg.pulse_plan.lambda * cfg.pulse_plan.g_b,
                                                           cfg.pulse_plan.g_b, cfg.pulse_plan.tau_w,
                                                           cfg.system.kappa);
            const auto pw = plan.regime_warnings();
            w.insert(w.end(), pw.begin(), pw.end());
        } catch (const Error& e) {
            w.push_back(std::string("pulse plan: ") + e.what());
        }
    }
    if (cfg.filter) {
        const auto fw = cfg.filter->regime_warnings(cfg.system);
        w.insert(w.end(), fw.begin(), fw.end());
    }
    return w;
}

} // namespace phonoq::runner
