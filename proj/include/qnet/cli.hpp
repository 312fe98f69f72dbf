// cli.hpp
// Command implementations behind the qnet tool: scenario construction,
// distribution dumps, certificate runs, threshold sweeps, model solving and
// sampling. Kept out of main() so the exit-code and file-format contracts
// are unit-testable.
//
// Exit codes: 0 success / consistent-with-local, 2 invalid configuration,
// 3 resource cap exceeded, 10 nonlocality certified, 11 no model solution.

#pragma once

#include "qnet/engine.hpp"
#include "qnet/io.hpp"
#include "qnet/trilocal.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qnet {

enum class Command { Distribution, Certify, Threshold, Model };
enum class Scenario { Triangle, QutritExample, Cycle, NetworkFile };
enum class ModelKind { UniformChi, Threshold };
enum class OutputFormat { Csv, Json };

struct RunConfig {
    Command command = Command::Distribution;
    Scenario scenario = Scenario::Triangle;
    ModelKind model_kind = ModelKind::UniformChi;

    int cycle_n = 3;
    std::optional<Rational> u2;
    Rational lambda02{1, 2};
    std::string network_file;

    std::string out_path;      // empty = stdout
    std::string samples_path;  // sample CSV (model command)
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 0;
    std::size_t n_samples = 0;
    std::size_t cap = 100'000'000;
    bool coarse = false;
    int exact_mode = -1;  // -1 auto, 0 float, 1 exact
    double tolerance = 1e-12;

    // threshold sweep range (squared lambda0)
    Rational sweep_min{1, 10}, sweep_max{99, 100};
    int sweep_steps = 90;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitNonlocal = 10;
inline constexpr int kExitNoSolution = 11;

namespace detail {

struct OutputFile {
    std::ofstream file;
    std::ostream& stream;
    explicit OutputFile(const std::string& path)
        : file(path.empty() ? std::ofstream() : std::ofstream(path)), stream(path.empty() ? std::cout : file) {
        if (!path.empty() && !file) throw std::invalid_argument("cannot open output file: " + path);
    }
};

inline Rational require_u2(const RunConfig& cfg) {
    if (!cfg.u2) throw std::invalid_argument("this scenario requires --u2");
    if (!(*cfg.u2 > 0 && *cfg.u2 < 1)) throw std::domain_error("--u2 must lie in (0,1)");
    return *cfg.u2;
}

// Exact mode by default when the scenario is rational-parameterized and the
// outcome table is small enough for radical arithmetic.
inline bool use_exact(const RunConfig& cfg, std::size_t table_size) {
    if (cfg.exact_mode >= 0) return cfg.exact_mode == 1;
    return cfg.scenario != Scenario::NetworkFile && table_size <= (std::size_t(1) << 20);
}

template <class S>
int distribution_body(const RunConfig& cfg, const BasicCycleNetwork<S>& net, std::ostream& log) {
    auto dist = cycle_distribution(net, cfg.cap);
    OutputFile out(cfg.out_path);
    // Support summary before optional coarse graining (built-in bases only;
    // custom bases have no prescribed support structure).
    const std::string& basis_kind = net.measurements[0].kind;
    SupportKind kind = basis_kind == "qubit" ? SupportKind::QubitCycle : SupportKind::QutritTriangle;
    bool supported = basis_kind == "qubit" || (basis_kind == "qutrit" && net.n_parties() == 3);
    double support_dev = supported ? check_support_constraints(dist, kind).max_deviation() : -1;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (!is_support_zero(dist[i])) ++nonzero;
    log << "outcomes: " << dist.size() << ", support: " << nonzero
        << ", normalization: " << format_probability(qnet::to_double(dist.total()));
    if (supported) log << ", support-constraint deviation: " << support_dev;
    log << "\n";

    if (cfg.coarse) {
        auto coarse = coarse_grain(dist);
        if (cfg.format == OutputFormat::Csv) write_distribution_csv(out.stream, coarse);
        else out.stream << distribution_json(coarse).dump(2) << "\n";
    } else {
        if (cfg.format == OutputFormat::Csv) write_distribution_csv(out.stream, dist);
        else out.stream << distribution_json(dist).dump(2) << "\n";
    }
    return kExitOk;
}

inline int cmd_distribution(const RunConfig& cfg, std::ostream& log) {
    switch (cfg.scenario) {
        case Scenario::Triangle: {
            Rational u2 = require_u2(cfg);
            if (use_exact(cfg, 64))
                return distribution_body(cfg, triangle_network<RadicalSum>(u2, cfg.lambda02), log);
            return distribution_body(cfg, triangle_network<double>(u2, cfg.lambda02), log);
        }
        case Scenario::QutritExample: {
            if (use_exact(cfg, 729))
                return distribution_body(cfg, qutrit_triangle_network<RadicalSum>(), log);
            return distribution_body(cfg, qutrit_triangle_network<double>(), log);
        }
        case Scenario::Cycle: {
            Rational u2 = require_u2(cfg);
            std::size_t size = outcome_count(static_cast<std::size_t>(cfg.cycle_n), 2);
            if (use_exact(cfg, size))
                return distribution_body(cfg, qubit_cycle_network<RadicalSum>(cfg.cycle_n, u2), log);
            return distribution_body(cfg, qubit_cycle_network<double>(cfg.cycle_n, u2), log);
        }
        case Scenario::NetworkFile: {
            std::ifstream in(cfg.network_file);
            if (!in) throw std::invalid_argument("cannot open network file: " + cfg.network_file);
            Json j = Json::parse(in);
            return distribution_body(cfg, network_from_json(j), log);
        }
    }
    return kExitConfig;
}

inline int cmd_certify(const RunConfig& cfg, std::ostream& log) {
    Json report;
    bool nonlocal = false;
    switch (cfg.scenario) {
        case Scenario::Triangle: {
            Rational u2 = require_u2(cfg);
            report["scenario"] = {{"kind", "triangle"},
                                  {"u2", to_fraction_string(u2)},
                                  {"lambda02", to_fraction_string(cfg.lambda02)}};
            auto dist = cycle_distribution(triangle_network<double>(u2, cfg.lambda02), cfg.cap);
            report["support"] = report_json(check_support_constraints(dist, SupportKind::QubitCycle));
            double min_slack = 1;
            for (double s : finner_slack(dist)) min_slack = std::min(min_slack, s);
            report["finner_min_slack"] = min_slack;
            RadicalSum ineq = ineq_lhs_exact(cfg.lambda02, u2);
            report["ineq_lhs"] = ineq.to_double();
            report["ineq_sign"] = ineq.sign();
            auto problem = triangle_marginal_problem(cfg.lambda02, u2);
            auto res = lp_feasible(problem);
            report["marginal_lp"] = feasibility_json(problem, res);
            nonlocal = !res.feasible() || ineq.sign() < 0;
            break;
        }
        case Scenario::QutritExample: {
            report["scenario"] = {{"kind", "qutrit-example"}};
            auto dist = cycle_distribution(qutrit_triangle_network<double>(), cfg.cap);
            report["support"] =
                report_json(check_support_constraints(dist, SupportKind::QutritTriangle));
            double min_slack = 1;
            for (double s : finner_slack(dist)) min_slack = std::min(min_slack, s);
            report["finner_min_slack"] = min_slack;
            auto basis = qutrit_example_basis<RadicalSum>();
            // Rebuild the eta matrices from the stored eigenstates.
            Mat<RadicalSum> up(3, 3), down(3, 3);
            for (int i = 0; i < 3; ++i) {
                up(i, 0) = basis.states[3 + i](0, 1);
                up(i, 1) = basis.states[3 + i](0, 2);
                up(i, 2) = basis.states[3 + i](1, 2);
                down(i, 0) = basis.states[6 + i](1, 0);
                down(i, 1) = basis.states[6 + i](2, 0);
                down(i, 2) = basis.states[6 + i](2, 1);
            }
            auto problem = qutrit_marginal_problem(up, down);
            auto res = lp_feasible(problem);
            report["marginal_lp"] = feasibility_json(problem, res);
            auto forced = qutrit_forced_solution(up, down);
            Json fj;
            fj["determined"] = forced.determined;
            if (forced.determined) {
                Json m1 = Json::array(), m2 = Json::array();
                for (int i = 0; i < 3; ++i) {
                    Json r1 = Json::array(), r2 = Json::array();
                    for (int j = 0; j < 3; ++j) {
                        r1.push_back(forced.m1(i, j).str());
                        r2.push_back(forced.m2(i, j).str());
                    }
                    m1.push_back(r1);
                    m2.push_back(r2);
                }
                fj["m1"] = m1;
                fj["m2"] = m2;
                fj["has_negative_entry"] = forced.has_negative();
            }
            report["forced_solution"] = fj;
            nonlocal = !res.feasible();
            break;
        }
        case Scenario::Cycle: {
            Rational u2 = require_u2(cfg);
            if (cfg.cycle_n % 2 == 0)
                throw std::domain_error("cycle certification needs odd N");
            report["scenario"] = {{"kind", "cycle"},
                                  {"n", cfg.cycle_n},
                                  {"u2", to_fraction_string(u2)}};
            std::size_t size = outcome_count(static_cast<std::size_t>(cfg.cycle_n), 2);
            if (size <= cfg.cap) {
                auto dist = cycle_distribution(qubit_cycle_network<double>(cfg.cycle_n, u2), cfg.cap);
                report["support"] =
                    report_json(check_support_constraints(dist, SupportKind::QubitCycle));
            }
            auto problem = cycle_xi_problem(cfg.cycle_n, u2);
            auto res = lp_feasible(problem);
            report["xi_lp"] = feasibility_json(problem, res);
            auto sign = cycle_asymptotic_sign(cfg.cycle_n);
            report["asymptotic"] = {{"A", sign.a.str()},
                                    {"beta_gt_gamma", sign.beta_gt_gamma}};
            nonlocal = !res.feasible();
            break;
        }
        case Scenario::NetworkFile:
            throw std::invalid_argument("certify supports --triangle, --qutrit-example, --cycle");
    }
    report["nonlocality_certified"] = nonlocal;
    report["exit_code"] = nonlocal ? kExitNonlocal : kExitOk;
    OutputFile out(cfg.out_path);
    out.stream << report.dump(2) << "\n";
    log << (nonlocal ? "nonlocality certified" : "consistent with a classical model") << "\n";
    return nonlocal ? kExitNonlocal : kExitOk;
}

inline int cmd_threshold(const RunConfig& cfg, std::ostream& log) {
    if (!(cfg.sweep_min > 0 && cfg.sweep_max < 1 && cfg.sweep_min <= cfg.sweep_max))
        throw std::domain_error("sweep range must satisfy 0 < min <= max < 1");
    if (cfg.sweep_steps < 1) throw std::domain_error("sweep needs at least one step");
    const int rows = cfg.sweep_steps;
    std::vector<double> l02(rows);
    for (int i = 0; i < rows; ++i) {
        Rational frac = rows == 1 ? cfg.sweep_min
                                  : cfg.sweep_min + (cfg.sweep_max - cfg.sweep_min) *
                                                        Rational(i, rows - 1);
        l02[i] = qnet::to_double(frac);
    }
    std::vector<double> u2(rows, -1);
    // Rows are independent; output order is fixed by index, not completion.
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < rows; ++i) {
        auto root = u_threshold(std::sqrt(l02[i]), cfg.tolerance);
        if (root) u2[i] = *root * *root;
    }
    OutputFile out(cfg.out_path);
    out.stream << "lambda02,u_max2\n";
    int found = 0;
    for (int i = 0; i < rows; ++i) {
        out.stream << format_probability(l02[i]) << ",";
        if (u2[i] >= 0) {
            out.stream << format_probability(u2[i]);
            ++found;
        } else {
            out.stream << "NA";
        }
        out.stream << "\n";
    }
    log << "threshold rows: " << rows << ", with threshold: " << found << "\n";
    return kExitOk;
}

inline int cmd_model(const RunConfig& cfg, std::ostream& log) {
    Json report;
    if (cfg.model_kind == ModelKind::UniformChi) {
        auto model = uniform_chi_model();
        auto model_dist = evaluate(model);
        auto quantum = as_rational(cycle_distribution(triangle_network<RadicalSum>(Rational(1, 2))));
        Rational tv = total_variation(model_dist, quantum);
        report["kind"] = "uniform-chi";
        report["u2"] = "1/2";
        report["tv_to_quantum"] = to_fraction_string(tv);
        report["exact_match"] = (tv == 0);
        report["model"] = model_json(model);
        log << "uniform-chi model: TV to quantum = " << to_fraction_string(tv) << "\n";
        if (cfg.n_samples > 0) {
            if (cfg.samples_path.empty())
                throw std::invalid_argument("--samples requires --samples-out");
            auto samples = sample(model, cfg.n_samples, cfg.seed);
            std::ofstream sf(cfg.samples_path);
            if (!sf) throw std::invalid_argument("cannot open samples file: " + cfg.samples_path);
            write_samples_csv(sf, samples, model);
            report["samples"] = {{"count", cfg.n_samples},
                                 {"seed", cfg.seed},
                                 {"path", cfg.samples_path}};
        }
        OutputFile out(cfg.out_path);
        out.stream << report.dump(2) << "\n";
        return kExitOk;
    }

    // Threshold-point model.
    double u;
    if (cfg.u2) {
        Rational u2 = require_u2(cfg);
        u = std::sqrt(qnet::to_double(u2));
    } else {
        auto root = u_threshold(1.0 / std::sqrt(2.0), cfg.tolerance);
        if (!root) throw std::logic_error("no threshold root at lambda0^2 = 1/2");
        u = *root;
    }
    auto params = solve_threshold_params(u);
    if (!params) {
        log << "no sub-strategy parameters reproduce the marginals at u^2 = "
            << format_probability(u * u) << "\n";
        return kExitNoSolution;
    }
    auto model = build_threshold_model(*params);
    auto model_dist = evaluate(model);
    auto quantum = cycle_distribution(triangle_network_from_reals(u, 1.0 / std::sqrt(2.0)));
    double tv = total_variation(model_dist, quantum);
    report["kind"] = "threshold";
    report["u2"] = format_probability(u * u);
    report["params"] = {{"kappa0", format_probability(params->kappa0)},
                        {"kappa1", format_probability(params->kappa1)},
                        {"kappa2", format_probability(params->kappa2)},
                        {"tau0", format_probability(params->tau0)},
                        {"tau1", format_probability(params->tau1)},
                        {"max_residual", params->max_residual}};
    report["tv_to_quantum"] = tv;
    report["model"] = model_json(model);
    log << "threshold model: TV to quantum = " << format_probability(tv) << "\n";
    if (cfg.n_samples > 0) {
        if (cfg.samples_path.empty())
            throw std::invalid_argument("--samples requires --samples-out");
        auto samples = sample(model, cfg.n_samples, cfg.seed);
        std::ofstream sf(cfg.samples_path);
        if (!sf) throw std::invalid_argument("cannot open samples file: " + cfg.samples_path);
        write_samples_csv(sf, samples, model);
        report["samples"] = {{"count", cfg.n_samples}, {"seed", cfg.seed}, {"path", cfg.samples_path}};
    }
    OutputFile out(cfg.out_path);
    out.stream << report.dump(2) << "\n";
    return kExitOk;
}

}  // namespace detail

// Applies QNET_THREADS (parallelism cap) when set.
inline void apply_thread_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("QNET_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

inline int run_command(const RunConfig& cfg, std::ostream& log = std::cerr) {
    try {
        switch (cfg.command) {
            case Command::Distribution: return detail::cmd_distribution(cfg, log);
            case Command::Certify: return detail::cmd_certify(cfg, log);
            case Command::Threshold: return detail::cmd_threshold(cfg, log);
            case Command::Model: return detail::cmd_model(cfg, log);
        }
        return kExitConfig;
    } catch (const ResourceLimitError& e) {
        log << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const Json::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace qnet
