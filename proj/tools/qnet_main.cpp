// qnet: outcome distributions, nonlocality certificates, threshold curves and
// classical models for cycle quantum networks.

#include "qnet/cli.hpp"

#include <CLI11.hpp>

namespace {

qnet::Rational parse_ratio(const std::string& text, const std::string& flag) {
    auto r = qnet::try_parse_rational(text);
    if (!r) throw CLI::ValidationError(flag, "expected a rational like 0.8 or 4/5");
    return *r;
}

}  // namespace

int main(int argc, char** argv) {
    qnet::apply_thread_env();

    CLI::App app{"cycle quantum network toolkit"};
    app.require_subcommand(1);

    qnet::RunConfig cfg;
    std::string u2_text, lambda02_text = "1/2", format_text = "csv";
    std::string sweep_min_text = "1/10", sweep_max_text = "99/100";

    // Returns a resolver to run inside the subcommand's callback (CLI11 keeps
    // a single callback per subcommand).
    auto add_scenario = [&](CLI::App* cmd, bool with_network) {
        auto* tri = cmd->add_flag("--triangle", "qubit triangle scenario");
        auto* qutrit = cmd->add_flag("--qutrit-example", "qutrit triangle with the reference basis");
        auto* cyc = cmd->add_option("--cycle", cfg.cycle_n, "qubit N-cycle scenario");
        tri->excludes(qutrit);
        tri->excludes(cyc);
        qutrit->excludes(cyc);
        cmd->add_option("--u2", u2_text, "squared measurement parameter (rational)");
        cmd->add_option("--lambda02", lambda02_text, "squared Schmidt coefficient (rational)");
        if (with_network)
            cmd->add_option("--network", cfg.network_file, "network JSON file (float mode)");
        return [&, qutrit, cyc]() {
            if (qutrit->count()) cfg.scenario = qnet::Scenario::QutritExample;
            else if (cyc->count()) cfg.scenario = qnet::Scenario::Cycle;
            else if (!cfg.network_file.empty()) cfg.scenario = qnet::Scenario::NetworkFile;
            else cfg.scenario = qnet::Scenario::Triangle;
            if (!u2_text.empty()) cfg.u2 = parse_ratio(u2_text, "--u2");
            cfg.lambda02 = parse_ratio(lambda02_text, "--lambda02");
        };
    };

    auto* dist = app.add_subcommand("distribution", "compute an outcome distribution");
    auto dist_scenario = add_scenario(dist, true);
    dist->add_option("--out", cfg.out_path, "output path (default stdout)");
    dist->add_option("--format", format_text, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    dist->add_flag("--coarse", cfg.coarse, "emit the coarse-grained distribution");
    dist->add_option("--cap", cfg.cap, "outcome table size cap");
    auto* exact_flag = dist->add_flag("--exact", "force exact arithmetic");
    auto* float_flag = dist->add_flag("--float", "force floating point");
    exact_flag->excludes(float_flag);
    dist->callback([&, dist_scenario]() {
        dist_scenario();
        cfg.command = qnet::Command::Distribution;
        cfg.format = format_text == "json" ? qnet::OutputFormat::Json : qnet::OutputFormat::Csv;
        if (exact_flag->count()) cfg.exact_mode = 1;
        if (float_flag->count()) cfg.exact_mode = 0;
    });

    auto* certify = app.add_subcommand("certify", "run nonlocality certificates");
    auto certify_scenario = add_scenario(certify, false);
    certify->add_option("--out", cfg.out_path, "report path (default stdout)");
    certify->add_option("--cap", cfg.cap, "outcome table size cap");
    certify->callback([&, certify_scenario]() {
        certify_scenario();
        cfg.command = qnet::Command::Certify;
    });

    auto* threshold = app.add_subcommand("threshold", "sweep the threshold curve u_max^2(lambda0^2)");
    threshold->add_option("--min", sweep_min_text, "sweep start for lambda0^2");
    threshold->add_option("--max", sweep_max_text, "sweep end for lambda0^2");
    threshold->add_option("--steps", cfg.sweep_steps, "number of sweep rows");
    threshold->add_option("--tol", cfg.tolerance, "bisection tolerance");
    threshold->add_option("--out", cfg.out_path, "CSV path (default stdout)");
    threshold->callback([&]() {
        cfg.command = qnet::Command::Threshold;
        cfg.sweep_min = parse_ratio(sweep_min_text, "--min");
        cfg.sweep_max = parse_ratio(sweep_max_text, "--max");
    });

    auto* model = app.add_subcommand("model", "build classical models and sample them");
    auto* uniform = model->add_flag("--uniform-chi", "exact model at u^2 = 1/2");
    auto* thresh = model->add_flag("--threshold", "model at the threshold parameter");
    auto* alias_flag = model->add_flag("--appendix-d", "alias of --threshold");
    uniform->excludes(thresh);
    uniform->excludes(alias_flag);
    model->add_option("--u2", u2_text, "squared measurement parameter (threshold model)");
    model->add_option("--samples", cfg.n_samples, "number of outcome samples");
    model->add_option("--seed", cfg.seed, "sampling seed");
    model->add_option("--samples-out", cfg.samples_path, "sample CSV path");
    model->add_option("--out", cfg.out_path, "model/report JSON path (default stdout)");
    model->callback([&]() {
        cfg.command = qnet::Command::Model;
        cfg.model_kind = (thresh->count() || alias_flag->count()) ? qnet::ModelKind::Threshold
                                                                : qnet::ModelKind::UniformChi;
        if (!u2_text.empty()) cfg.u2 = parse_ratio(u2_text, "--u2");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : qnet::kExitConfig;
    }
    return qnet::run_command(cfg);
}
