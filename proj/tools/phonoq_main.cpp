#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "phonoq/runner.hpp"

namespace {

using phonoq::config::RunConfig;
using phonoq::table::ResultTable;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format;
    int jobs = 0;
    int dim_cap = 0;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON configuration file");
    cmd->add_option("--out", o.out_path, "output file (stdout when omitted)");
    cmd->add_option("--format", o.format, "csv | json (overrides config)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--jobs", o.jobs, "worker threads (overrides config)")->check(CLI::PositiveNumber);
    cmd->add_option("--dim-cap", o.dim_cap, "largest Fock dimension for numeric columns")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--strict", o.strict, "escalate regime warnings to errors (exit 3)");
}

RunConfig load_config(const CommonOpts& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : RunConfig::from_file(o.config_path);
    if (!o.format.empty()) cfg.format = o.format;
    if (o.jobs > 0) cfg.jobs = o.jobs;
    if (o.dim_cap > 0) cfg.dim_cap = o.dim_cap;
    if (o.strict) cfg.strict = true;
    return cfg;
}

void emit(const ResultTable& t, const RunConfig& cfg, const CommonOpts& o) {
    const std::string body =
        cfg.format == "json" ? phonoq::table::to_json(t) : phonoq::table::to_csv(t);
    if (o.out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw phonoq::ConfigError("cannot open output file '" + o.out_path + "'");
    out << body;
}

void enforce_regimes(const RunConfig& cfg) {
    const auto warnings = phonoq::runner::collect_warnings(cfg);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    if (cfg.strict && !warnings.empty())
        throw phonoq::RegimeError("regime violations present under --strict");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"phonoq: heralded-optomechanics phonon statistics toolkit"};
    app.require_subcommand(1);

    CommonOpts sweep_o, proto_o, steady_o, sens_o;
    auto* sweep = app.add_subcommand("sweep-q", "Mandel Q over a (r, phi, n_m, beta) grid");
    add_common(sweep, sweep_o);
    auto* proto = app.add_subcommand("protocol", "end-to-end pulsed heralding pipeline");
    add_common(proto, proto_o);
    auto* steadyc = app.add_subcommand("steady", "continuous-wave steady-state report");
    add_common(steadyc, steady_o);
    auto* sens = app.add_subcommand("sensitivity", "drive-error penalty vs finite differences");
    add_common(sens, sens_o);
    app.add_subcommand("validate", "run the full invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("validate")) {
            return phonoq::runner::run_validation(std::cout) == 0 ? 0 : 2;
        }
        const CommonOpts& o = app.got_subcommand(sweep)    ? sweep_o
                              : app.got_subcommand(proto)  ? proto_o
                              : app.got_subcommand(steadyc) ? steady_o
                                                            : sens_o;
        const RunConfig cfg = load_config(o);
        enforce_regimes(cfg);
        ResultTable t;
        if (app.got_subcommand(sweep))
            t = phonoq::runner::run_sweep_q(cfg);
        else if (app.got_subcommand(proto))
            t = phonoq::runner::run_protocol(cfg);
        else if (app.got_subcommand(steadyc))
            t = phonoq::runner::run_steady(cfg);
        else
            t = phonoq::runner::run_sensitivity(cfg);
        emit(t, cfg, o);
        return 0;
    } catch (const phonoq::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 3;
    } catch (const phonoq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const phonoq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
