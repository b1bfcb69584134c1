// Command-line interface: environment dumps, single-dataset bootstrap
// inspection, and Monte Carlo coverage studies.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmcboot/cmcboot.hpp"

namespace {

using namespace cmcboot;

MdpInstance resolve_mdp(const std::string& spec) {
    if (spec == "riverswim") return riverswim();
    return load_mdp(spec);
}

/// Policy specs on the command line: uniform | mostly_right | mostly_left |
/// right:<p>.
Policy resolve_policy(const std::string& spec, const StateActionSpace& space) {
    if (spec.rfind("right:", 0) == 0) {
        nlohmann::json doc{{"right_prob", std::stod(spec.substr(6))}};
        return policy_from_spec(doc, space);
    }
    return policy_from_spec(nlohmann::json(spec), space);
}

void print_interval(const std::string& label, double point,
                    const ConfidenceInterval& ci) {
    std::printf("  %-8s %12.6f  [%12.6f, %12.6f]%s\n", label.c_str(), point,
                ci.lower, ci.upper, ci.degenerate ? "  (degenerate)" : "");
}

int run_env_dump(const std::string& name, const std::string& out_path) {
    MdpInstance mdp = resolve_mdp(name);
    if (out_path.empty()) {
        std::cout << mdp_to_json(mdp).dump(2) << '\n';
    } else {
        save_mdp(mdp, out_path);
        std::cout << "wrote " << out_path << '\n';
    }
    return 0;
}

int run_bootstrap_once(const std::string& mdp_spec,
                       const std::string& behavior_spec,
                       const std::string& target_spec, long n, int T, int B,
                       std::uint64_t seed, double level, int start_label,
                       const std::string& data_path,
                       const std::string& dump_path, int parallelism) {
    MdpInstance mdp = resolve_mdp(mdp_spec);
    const StateActionSpace space = mdp.kernel.space();
    Policy behavior = resolve_policy(behavior_spec, space);

    EpisodicDataset data = [&] {
        if (!data_path.empty()) return load_dataset(space, data_path);
        if (n % T != 0) throw ConfigError("n must be divisible by T");
        return generate_dataset(mdp.kernel, behavior, start_label - 1,
                                int(n / T), T, SeedSpec(seed).child(0));
    }();

    EstimatedModel model = estimate(data);
    auto [sim_kernel, sim_policy] = repair_for_simulation(model);
    (void)sim_policy;

    BootstrapConfig config{B, SeedSpec(seed).child(1),
                           BootstrapMethod::ModelBased, parallelism};
    BootstrapEnsemble ensemble = run_ensemble(data, model, config);
    if (!dump_path.empty()) {
        std::ofstream dump(dump_path);
        if (!dump) throw IoError("cannot write " + dump_path);
        for (const EstimatedModel& replicate : ensemble.replicates) {
            nlohmann::json row{{"kernel_rows", nlohmann::json::array()}};
            for (int r = 0; r < replicate.kernel_rows.rows(); ++r) {
                nlohmann::json row_values = nlohmann::json::array();
                for (int t = 0; t < replicate.kernel_rows.cols(); ++t)
                    row_values.push_back(replicate.kernel_rows(r, t));
                row["kernel_rows"].push_back(std::move(row_values));
            }
            dump << row.dump() << '\n';
        }
    }

    const bool optimal = target_spec == "optimal";
    std::optional<Policy> target;
    if (!optimal) target = resolve_policy(target_spec, space);

    TargetOptions options;
    options.solve_optimal = optimal;
    options.parallelism = parallelism;
    BootstrapTargets targets =
        bootstrap_targets(ensemble, mdp.rewards, optimal ? nullptr : &*target,
                          options);

    Eigen::VectorXd point_v, point_q;
    if (optimal) {
        OptimalSolution opt = solve_opr(sim_kernel, mdp.rewards);
        point_v = opt.v_star.v;
        point_q = opt.q_star.q;
    } else {
        auto [v, q] = solve_ope(sim_kernel, *target, mdp.rewards);
        point_v = v.v;
        point_q = q.q;
    }

    long repaired = 0;
    for (bool flag : targets.repaired) repaired += flag;
    const double alpha = 1.0 - level;

    std::printf("dataset: K=%d, T=%d, n=%ld; B=%d replicates; level %.3f\n",
                data.num_episodes(), data.episode_length(), data.n(), B, level);
    std::printf("source estimate repaired: %s; replicate repair rate: %.4f\n",
                model.any_kernel_undefined() ? "yes" : "no",
                double(repaired) / double(B));
    std::printf("%s targets (percentile then pivot):\n",
                optimal ? "OPR" : "OPE");
    for (const ReportEntry& entry : default_entries()) {
        if (entry.s >= space.S || (entry.is_q && entry.a >= space.A)) continue;
        std::vector<double> series = detail::entry_series(
            entry, space, optimal ? targets.v_star : targets.v_pi,
            optimal ? targets.q_star : targets.q_pi);
        const double point = detail::entry_value(entry, space, point_v, point_q);
        print_interval(entry.label(), point, percentile_ci(series, alpha));
        print_interval("", point, pivot_ci(series, point, alpha));
    }
    return 0;
}

int run_coverage_run(const std::string& config_path, const std::string& out,
                     const std::string& format,
                     std::optional<std::uint64_t> seed,
                     std::optional<int> parallelism, std::optional<int> B,
                     std::optional<int> n_reps) {
    ExperimentConfig config = load_config(config_path);
    if (seed) config.seeds = SeedSpec(*seed);
    if (parallelism) config.parallelism = *parallelism;
    if (B) config.B = *B;
    if (n_reps) config.n_reps = *n_reps;
    config.validate();

    CoverageReport report = run_coverage(config);
    const ReportFormat report_format =
        format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    if (out.empty()) {
        if (report_format == ReportFormat::Csv)
            write_csv(report, std::cout);
        else
            std::cout << report_to_json(report).dump(2) << '\n';
    } else {
        emit_report(report, report_format, out);
        std::cout << "wrote " << report.rows.size() << " rows to " << out
                  << '\n';
    }
    if (report.failed_reps > 0)
        std::cerr << "warning: " << report.failed_reps
                  << " Monte Carlo reps failed and were counted as non-covering\n";
    return 0;
}

int run_coverage_table(const std::string& report_path,
                       const std::string& compare_path) {
    auto read = [](const std::string& path) {
        std::ifstream file(path);
        if (!file) throw IoError("cannot open report: " + path);
        return parse_csv(file);
    };
    CoverageReport report = read(report_path);

    std::map<std::string, double> reference;
    if (!compare_path.empty())
        for (const CoverageRow& row : read(compare_path).rows)
            reference[row.method + "|" + row.ci_type + "|" + row.target + "|" +
                      row.entry + "|" + std::to_string(row.n) + "|" +
                      std::to_string(row.T) + "|" +
                      detail::format_double("%.6g", row.nominal)] = row.coverage;

    std::printf("%-12s %-11s %-14s %-8s %7s %5s %8s %9s %9s", "method",
                "ci_type", "target", "entry", "n", "T", "nominal", "coverage",
                "width");
    if (!reference.empty()) std::printf(" %9s %8s", "reference", "delta");
    std::printf("\n");
    for (const CoverageRow& row : report.rows) {
        std::printf("%-12s %-11s %-14s %-8s %7ld %5d %8.3f %9.3f %9.4g",
                    row.method.c_str(), row.ci_type.c_str(), row.target.c_str(),
                    row.entry.c_str(), row.n, row.T, row.nominal, row.coverage,
                    row.mean_width);
        if (!reference.empty()) {
            const std::string key =
                row.method + "|" + row.ci_type + "|" + row.target + "|" +
                row.entry + "|" + std::to_string(row.n) + "|" +
                std::to_string(row.T) + "|" +
                detail::format_double("%.6g", row.nominal);
            auto found = reference.find(key);
            if (found != reference.end())
                std::printf(" %9.3f %+8.3f", found->second,
                            row.coverage - found->second);
            else
                std::printf(" %9s %8s", "-", "-");
        }
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-based bootstrap inference for finite controlled Markov chains"};
    app.require_subcommand(1);

    // env dump
    auto* env = app.add_subcommand("env", "Environment utilities");
    env->require_subcommand(1);
    auto* dump = env->add_subcommand("dump", "Emit an MDP as JSON");
    std::string env_name = "riverswim";
    std::string env_out;
    dump->add_option("name", env_name, "Built-in name or MDP file path");
    dump->add_option("-o,--out", env_out, "Output file (default: stdout)");

    // bootstrap once
    auto* bootstrap = app.add_subcommand("bootstrap", "Bootstrap utilities");
    bootstrap->require_subcommand(1);
    auto* once = bootstrap->add_subcommand(
        "once", "Single dataset -> bootstrap CIs, for interactive inspection");
    std::string once_mdp = "riverswim";
    std::string once_behavior = "mostly_right";
    std::string once_target = "uniform";
    long once_n = 1000;
    int once_T = 50;
    int once_B = 1000;
    std::uint64_t once_seed = 0;
    double once_level = 0.95;
    int once_start = 1;
    std::string once_data;
    std::string once_dump;
    int once_parallelism = 1;
    once->add_option("--mdp", once_mdp, "Built-in name or MDP file path");
    once->add_option("--behavior", once_behavior,
                     "Behavior policy (uniform|mostly_right|mostly_left|right:<p>)");
    once->add_option("--target", once_target,
                     "Target policy, or 'optimal' for OPR");
    once->add_option("--n", once_n, "Total transitions n = K*T");
    once->add_option("--T", once_T, "Episode length");
    once->add_option("--B", once_B, "Bootstrap replicates");
    once->add_option("--seed", once_seed, "Master seed");
    once->add_option("--level", once_level, "Nominal coverage level");
    once->add_option("--start", once_start, "Initial state (1-based)");
    once->add_option("--data", once_data,
                     "Load dataset from JSON Lines instead of simulating");
    once->add_option("--dump-replicates", once_dump,
                     "Write replicate kernels as JSON Lines");
    once->add_option("--parallelism", once_parallelism, "Worker threads");

    // coverage run / table
    auto* coverage = app.add_subcommand("coverage", "Coverage studies");
    coverage->require_subcommand(1);
    auto* run = coverage->add_subcommand("run", "Run a coverage study");
    std::string cfg_path;
    std::string run_out;
    std::string run_format = "csv";
    std::optional<std::uint64_t> run_seed;
    std::optional<int> run_parallelism, run_B, run_reps;
    run->add_option("--config", cfg_path, "Config file (JSON)")->required();
    run->add_option("--out", run_out, "Report path (default: stdout)");
    run->add_option("--format", run_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--seed", run_seed, "Override the config seed");
    run->add_option("--parallelism", run_parallelism, "Override worker threads");
    run->add_option("--B", run_B, "Override bootstrap replicates");
    run->add_option("--n-reps", run_reps, "Override Monte Carlo reps");

    auto* table = coverage->add_subcommand("table", "Pretty-print a report CSV");
    std::string table_path;
    std::string table_compare;
    table->add_option("report", table_path, "Report CSV")->required();
    table->add_option("--compare", table_compare,
                      "Reference CSV to diff coverage against");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dump->parsed()) return run_env_dump(env_name, env_out);
        if (once->parsed())
            return run_bootstrap_once(once_mdp, once_behavior, once_target,
                                      once_n, once_T, once_B, once_seed,
                                      once_level, once_start, once_data,
                                      once_dump, once_parallelism);
        if (run->parsed())
            return run_coverage_run(cfg_path, run_out, run_format, run_seed,
                                    run_parallelism, run_B, run_reps);
        if (table->parsed()) return run_coverage_table(table_path, table_compare);
    } catch (const ConfigError& error) {
        nlohmann::json summary{{"error", "config"}, {"message", error.what()}};
        std::cerr << summary.dump() << '\n';
        return 2;
    } catch (const Error& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 0;
}
