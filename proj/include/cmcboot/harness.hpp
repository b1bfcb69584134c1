#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmcboot/bellman.hpp"
#include "cmcboot/bootstrap.hpp"
#include "cmcboot/counting.hpp"
#include "cmcboot/covariance.hpp"
#include "cmcboot/environments.hpp"
#include "cmcboot/intervals.hpp"
#include "cmcboot/parallel.hpp"
#include "cmcboot/simulate.hpp"

namespace cmcboot {

enum class CoverageMethod {
    ModelBasedPercentile,
    ModelBasedPivot,
    EpisodicPercentile,
    EpisodicPivot,
    Clt,
};

inline const char* method_family(CoverageMethod method) {
    switch (method) {
        case CoverageMethod::ModelBasedPercentile:
        case CoverageMethod::ModelBasedPivot:
            return "model_based";
        case CoverageMethod::EpisodicPercentile:
        case CoverageMethod::EpisodicPivot:
            return "episodic";
        case CoverageMethod::Clt:
            return "clt";
    }
    return "?";
}

inline const char* method_ci_type(CoverageMethod method) {
    switch (method) {
        case CoverageMethod::ModelBasedPercentile:
        case CoverageMethod::EpisodicPercentile:
            return "percentile";
        case CoverageMethod::ModelBasedPivot:
        case CoverageMethod::EpisodicPivot:
            return "pivot";
        case CoverageMethod::Clt:
            return "normal";
    }
    return "?";
}

/// Which plug-in target a row reports on.
struct TargetSpec {
    bool optimal = false;           // OPR when true, OPE otherwise
    std::optional<Policy> policy;   // target policy (OPE only)
    std::string name;               // column value: "ope:<name>" or "opr"

    std::string column() const { return optimal ? "opr" : "ope:" + name; }
};

/// One reported coordinate, stored 0-based; labels print states 1-based.
struct ReportEntry {
    bool is_q = false;
    int s = 0;
    int a = 0;

    std::string label() const {
        if (is_q)
            return "Q(" + std::to_string(s + 1) + "," + std::to_string(a) + ")";
        return "V(" + std::to_string(s + 1) + ")";
    }
};

struct GridPoint {
    long n = 0;
    int T = 0;

    long episodes() const { return n / T; }
};

/**
Declarative description of a Monte Carlo coverage study: environment,
behavior policy, targets, sample-size grid, methods, nominal levels,
reported entries, seed, and parallelism degree.
*/
struct ExperimentConfig {
    MdpInstance mdp;
    Policy behavior;
    std::vector<TargetSpec> targets;
    std::vector<GridPoint> grid;
    int B = 1000;
    int n_reps = 1000;
    std::vector<double> levels = {0.95};
    std::vector<CoverageMethod> methods = {
        CoverageMethod::ModelBasedPercentile, CoverageMethod::ModelBasedPivot,
        CoverageMethod::EpisodicPercentile, CoverageMethod::EpisodicPivot,
        CoverageMethod::Clt};
    std::vector<ReportEntry> entries;
    SeedSpec seeds;
    int parallelism = 1;
    int initial_state = 0;

    ExperimentConfig(MdpInstance mdp_in, Policy behavior_in)
        : mdp(std::move(mdp_in)), behavior(std::move(behavior_in)) {}

    void validate() const {
        const StateActionSpace& space = mdp.kernel.space();
        if (behavior.space() != space)
            throw ConfigError("behavior policy space does not match the MDP");
        if (B < 1) throw ConfigError("B must be >= 1");
        if (n_reps < 1) throw ConfigError("n_reps must be >= 1");
        if (grid.empty()) throw ConfigError("grid must not be empty");
        for (const GridPoint& point : grid) {
            if (point.T < 1 || point.n < 1 || point.n % point.T != 0)
                throw ConfigError("every grid point needs T >= 1 and n divisible by T");
        }
        if (targets.empty()) throw ConfigError("at least one target is required");
        for (const TargetSpec& target : targets) {
            if (!target.optimal && !target.policy)
                throw ConfigError("OPE target needs a policy");
            if (target.policy && target.policy->space() != space)
                throw ConfigError("target policy space does not match the MDP");
        }
        if (methods.empty()) throw ConfigError("at least one method is required");
        if (entries.empty()) throw ConfigError("at least one entry is required");
        for (const ReportEntry& entry : entries) {
            if (entry.s < 0 || entry.s >= space.S ||
                (entry.is_q && (entry.a < 0 || entry.a >= space.A)))
                throw ConfigError("entry " + entry.label() + " is out of range");
        }
        for (double level : levels)
            if (!(level > 0.0 && level < 1.0))
                throw ConfigError("nominal levels must lie in (0,1)");
        if (initial_state < 0 || initial_state >= space.S)
            throw ConfigError("initial state out of range");
    }
};

struct CoverageRow {
    std::string method;
    std::string ci_type;
    std::string target;
    std::string entry;
    long n;
    int T;
    long K;
    double nominal;
    double coverage;
    double mean_width;
    double degenerate_rate;
    double repair_rate;
    int n_reps;
    int B;
    std::uint64_t seed;
};

struct CoverageReport {
    std::vector<CoverageRow> rows;
    long failed_reps = 0;
};

namespace detail {

// Stream-derivation tags; fixed constants so a config is a complete
// description of every random draw in a run.
inline constexpr std::uint64_t kTagData = 0;
inline constexpr std::uint64_t kTagModelBased = 1;
inline constexpr std::uint64_t kTagEpisodic = 2;

struct CellOutcome {
    bool covered = false;
    bool degenerate = false;
    double width = 0.0;
};

struct RepOutcome {
    std::vector<CellOutcome> cells;
    bool repaired = false;
    bool failed = false;
};

inline double entry_value(const ReportEntry& entry, const StateActionSpace& space,
                          const Eigen::VectorXd& v, const Eigen::VectorXd& q) {
    return entry.is_q ? q(sa_index(space, entry.s, entry.a)) : v(entry.s);
}

inline std::vector<double> entry_series(const ReportEntry& entry,
                                        const StateActionSpace& space,
                                        const std::vector<Eigen::VectorXd>& v,
                                        const std::vector<Eigen::VectorXd>& q) {
    const auto& source = entry.is_q ? q : v;
    const int index = entry.is_q ? sa_index(space, entry.s, entry.a) : entry.s;
    std::vector<double> series(source.size());
    for (std::size_t j = 0; j < series.size(); ++j) series[j] = source[j](index);
    return series;
}

}  // namespace detail

/**
Run the Monte Carlo coverage study.

For every grid point: the ground-truth targets are solved once from the true
kernel; each Monte Carlo rep generates a dataset under the behavior policy,
estimates the model, builds the configured bootstrap ensembles and plug-in
covariances, forms CIs for every (target, method, entry, level) cell, and
tallies coverage against the truth. Reps run in parallel; every random draw
comes from a stream indexed by (grid point, rep, purpose), so the report is
identical at every parallelism degree.

A rep whose solver fails is recorded in failed_reps and counts as
non-covering; it never aborts the sweep.
*/
inline CoverageReport run_coverage(const ExperimentConfig& config) {
    config.validate();
    const StateActionSpace& space = config.mdp.kernel.space();
    const RewardTable& rewards = config.mdp.rewards;

    bool want_model_based = false;
    bool want_episodic = false;
    bool want_clt = false;
    for (CoverageMethod method : config.methods) {
        want_model_based |= method == CoverageMethod::ModelBasedPercentile ||
                            method == CoverageMethod::ModelBasedPivot;
        want_episodic |= method == CoverageMethod::EpisodicPercentile ||
                         method == CoverageMethod::EpisodicPivot;
        want_clt |= method == CoverageMethod::Clt;
    }
    bool want_opr = false;
    for (const TargetSpec& target : config.targets) want_opr |= target.optimal;

    const std::size_t cells_per_rep = config.targets.size() *
                                      config.methods.size() *
                                      config.entries.size() *
                                      config.levels.size();

    CoverageReport report;
    for (std::size_t grid_index = 0; grid_index < config.grid.size();
         ++grid_index) {
        const GridPoint point = config.grid[grid_index];
        const long K = point.episodes();
        const SeedSpec grid_seed = config.seeds.child(grid_index);

        // Ground truth from the true kernel, shared by every method.
        std::vector<Eigen::VectorXd> truth_v(config.targets.size());
        std::vector<Eigen::VectorXd> truth_q(config.targets.size());
        for (std::size_t ti = 0; ti < config.targets.size(); ++ti) {
            const TargetSpec& target = config.targets[ti];
            if (target.optimal) {
                OptimalSolution opt = solve_opr(config.mdp.kernel, rewards);
                truth_v[ti] = std::move(opt.v_star.v);
                truth_q[ti] = std::move(opt.q_star.q);
            } else {
                auto [v, q] = solve_ope(config.mdp.kernel, *target.policy, rewards);
                truth_v[ti] = std::move(v.v);
                truth_q[ti] = std::move(q.q);
            }
        }

        std::vector<detail::RepOutcome> outcomes(config.n_reps);
        parallel_for(config.n_reps, config.parallelism, [&](long rep) {
            detail::RepOutcome& outcome = outcomes[rep];
            outcome.cells.resize(cells_per_rep);
            const SeedSpec rep_seed = grid_seed.child(rep);
            try {
                const EpisodicDataset data = generate_dataset(
                    config.mdp.kernel, config.behavior, config.initial_state,
                    int(K), point.T, rep_seed.child(detail::kTagData));
                const EstimatedModel model = estimate(data);
                outcome.repaired = model.any_kernel_undefined();
                auto [sim_kernel, sim_policy] = repair_for_simulation(model);
                (void)sim_policy;

                // Plug-in point estimates per target.
                std::vector<Eigen::VectorXd> point_v(config.targets.size());
                std::vector<Eigen::VectorXd> point_q(config.targets.size());
                for (std::size_t ti = 0; ti < config.targets.size(); ++ti) {
                    const TargetSpec& target = config.targets[ti];
                    if (target.optimal) {
                        OptimalSolution opt = solve_opr(sim_kernel, rewards);
                        point_v[ti] = std::move(opt.v_star.v);
                        point_q[ti] = std::move(opt.q_star.q);
                    } else {
                        auto [v, q] = solve_ope(sim_kernel, *target.policy, rewards);
                        point_v[ti] = std::move(v.v);
                        point_q[ti] = std::move(q.q);
                    }
                }

                // Bootstrap target series per (ensemble, target).
                std::optional<BootstrapEnsemble> mb_ensemble;
                std::optional<BootstrapEnsemble> ep_ensemble;
                if (want_model_based)
                    mb_ensemble = run_ensemble(
                        data, model,
                        BootstrapConfig{config.B,
                                        rep_seed.child(detail::kTagModelBased),
                                        BootstrapMethod::ModelBased, 1});
                if (want_episodic)
                    ep_ensemble = run_ensemble(
                        data, model,
                        BootstrapConfig{config.B,
                                        rep_seed.child(detail::kTagEpisodic),
                                        BootstrapMethod::Episodic, 1});

                auto targets_for = [&](const BootstrapEnsemble& ensemble,
                                       const TargetSpec& target) {
                    TargetOptions options;
                    options.solve_optimal = target.optimal;
                    return bootstrap_targets(
                        ensemble, rewards,
                        target.optimal ? nullptr : &*target.policy, options);
                };
                std::vector<BootstrapTargets> mb_targets;
                std::vector<BootstrapTargets> ep_targets;
                for (const TargetSpec& target : config.targets) {
                    if (mb_ensemble)
                        mb_targets.push_back(targets_for(*mb_ensemble, target));
                    if (ep_ensemble)
                        ep_targets.push_back(targets_for(*ep_ensemble, target));
                }

                // Plug-in covariances for the CLT method.
                std::vector<TargetCovariance> clt_cov;
                if (want_clt) {
                    const Eigen::MatrixXd occupation =
                        occupation_estimate(model.counts);
                    const LambdaBar lambda = lambda_bar(
                        sim_kernel, occupation,
                        OccupationFloor{1.0 / double(point.n)});
                    for (const TargetSpec& target : config.targets)
                        clt_cov.push_back(
                            target.optimal
                                ? sigma_opr(sim_kernel, rewards, lambda)
                                : sigma_ope(sim_kernel, *target.policy, rewards,
                                            lambda));
                }

                std::size_t cell = 0;
                for (std::size_t ti = 0; ti < config.targets.size(); ++ti) {
                    const TargetSpec& target = config.targets[ti];
                    for (CoverageMethod method : config.methods) {
                        const bool model_based =
                            method == CoverageMethod::ModelBasedPercentile ||
                            method == CoverageMethod::ModelBasedPivot;
                        const bool pivot =
                            method == CoverageMethod::ModelBasedPivot ||
                            method == CoverageMethod::EpisodicPivot;
                        for (const ReportEntry& entry : config.entries) {
                            const double truth = detail::entry_value(
                                entry, space, truth_v[ti], truth_q[ti]);
                            const double plug_in = detail::entry_value(
                                entry, space, point_v[ti], point_q[ti]);
                            std::vector<double> series;
                            double variance = 0.0;
                            if (method == CoverageMethod::Clt) {
                                const TargetCovariance& cov = clt_cov[ti];
                                // Clamp covariance-diagonal rounding noise.
                                variance = std::max(
                                    0.0, entry.is_q
                                             ? cov.sigma_q(
                                                   sa_index(space, entry.s, entry.a),
                                                   sa_index(space, entry.s, entry.a))
                                             : cov.sigma_v(entry.s, entry.s));
                            } else {
                                const BootstrapTargets& targets =
                                    model_based ? mb_targets[ti] : ep_targets[ti];
                                series = detail::entry_series(
                                    entry, space,
                                    target.optimal ? targets.v_star : targets.v_pi,
                                    target.optimal ? targets.q_star : targets.q_pi);
                            }
                            for (double level : config.levels) {
                                const double alpha = 1.0 - level;
                                ConfidenceInterval ci =
                                    method == CoverageMethod::Clt
                                        ? clt_interval(plug_in, variance, point.n,
                                                       alpha)
                                        : (pivot ? pivot_ci(series, plug_in, alpha)
                                                 : percentile_ci(series, alpha));
                                outcome.cells[cell++] = detail::CellOutcome{
                                    covers(ci, truth), ci.degenerate, ci.width()};
                            }
                        }
                    }
                }
            } catch (const Error&) {
                outcome.failed = true;
                outcome.cells.assign(cells_per_rep, detail::CellOutcome{});
            }
        });

        // Deterministic sequential reduction over rep index.
        long repaired_reps = 0;
        long failed_here = 0;
        for (const detail::RepOutcome& outcome : outcomes) {
            repaired_reps += outcome.repaired;
            failed_here += outcome.failed;
        }
        report.failed_reps += failed_here;
        const double repair_rate = double(repaired_reps) / config.n_reps;

        std::size_t cell = 0;
        for (std::size_t ti = 0; ti < config.targets.size(); ++ti)
            for (CoverageMethod method : config.methods)
                for (const ReportEntry& entry : config.entries)
                    for (double level : config.levels) {
                        long covered = 0;
                        long degenerate = 0;
                        long successes = 0;
                        double width_sum = 0.0;
                        for (const detail::RepOutcome& outcome : outcomes) {
                            if (outcome.failed) continue;
                            const detail::CellOutcome& c = outcome.cells[cell];
                            covered += c.covered;
                            degenerate += c.degenerate;
                            width_sum += c.width;
                            ++successes;
                        }
                        report.rows.push_back(CoverageRow{
                            method_family(method), method_ci_type(method),
                            config.targets[ti].column(), entry.label(), point.n,
                            point.T, K, level,
                            double(covered) / config.n_reps,
                            successes > 0 ? width_sum / double(successes) : 0.0,
                            double(degenerate) / config.n_reps, repair_rate,
                            config.n_reps, config.B,
                            config.seeds.master_seed});
                        ++cell;
                    }
    }
    return report;
}

namespace detail {

inline std::string format_double(const char* format, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), format, value);
    return buffer;
}

}  // namespace detail

inline const char* kReportHeader =
    "method,ci_type,target,entry,n,T,K,nominal,coverage,mean_width,"
    "degenerate_rate,repair_rate,n_reps,B,seed";

/// Serialize a report as CSV with a fixed, reproducible number format.
inline void write_csv(const CoverageReport& report, std::ostream& out) {
    out << kReportHeader << '\n';
    for (const CoverageRow& row : report.rows) {
        out << row.method << ',' << row.ci_type << ',' << row.target << ','
            << row.entry << ',' << row.n << ',' << row.T << ',' << row.K << ','
            << detail::format_double("%.6g", row.nominal) << ','
            << detail::format_double("%.4f", row.coverage) << ','
            << detail::format_double("%.6g", row.mean_width) << ','
            << detail::format_double("%.4f", row.degenerate_rate) << ','
            << detail::format_double("%.4f", row.repair_rate) << ','
            << row.n_reps << ',' << row.B << ',' << row.seed << '\n';
    }
}

inline nlohmann::json report_to_json(const CoverageReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const CoverageRow& row : report.rows)
        rows.push_back({{"method", row.method},
                        {"ci_type", row.ci_type},
                        {"target", row.target},
                        {"entry", row.entry},
                        {"n", row.n},
                        {"T", row.T},
                        {"K", row.K},
                        {"nominal", row.nominal},
                        {"coverage", row.coverage},
                        {"mean_width", row.mean_width},
                        {"degenerate_rate", row.degenerate_rate},
                        {"repair_rate", row.repair_rate},
                        {"n_reps", row.n_reps},
                        {"B", row.B},
                        {"seed", row.seed}});
    return nlohmann::json{{"rows", std::move(rows)},
                          {"failed_reps", report.failed_reps}};
}

enum class ReportFormat { Csv, Json };

inline void emit_report(const CoverageReport& report, ReportFormat format,
                        const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write report file: " + path);
    if (format == ReportFormat::Csv)
        write_csv(report, file);
    else
        file << report_to_json(report).dump(2) << '\n';
    if (!file) throw IoError("failed while writing report file: " + path);
}

/// Parse a CSV produced by write_csv back into rows.
inline CoverageReport parse_csv(std::istream& in) {
    CoverageReport report;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("report CSV is empty");
    if (line != kReportHeader)
        throw ParseError("unexpected report header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream stream(line);
        std::string field;
        while (std::getline(stream, field, ',')) fields.push_back(field);
        // Entry labels like Q(6,0) contain a comma; every other field is
        // comma-free, so fold the extras back into the entry column.
        while (fields.size() > 15) {
            fields[3] += "," + fields[4];
            fields.erase(fields.begin() + 4);
        }
        if (fields.size() != 15)
            throw ParseError("report row has too few fields: " + line);
        report.rows.push_back(CoverageRow{
            fields[0], fields[1], fields[2], fields[3], std::stol(fields[4]),
            std::stoi(fields[5]), std::stol(fields[6]), std::stod(fields[7]),
            std::stod(fields[8]), std::stod(fields[9]), std::stod(fields[10]),
            std::stod(fields[11]), std::stoi(fields[12]), std::stoi(fields[13]),
            std::stoull(fields[14])});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Declarative config files

/// Policy from a JSON spec: a name, {"right_prob": p}, or an explicit matrix.
inline Policy policy_from_spec(const nlohmann::json& spec,
                               const StateActionSpace& space) {
    auto right_prob = [&](double p) {
        if (space.A != 2)
            throw ConfigError("right_prob policies need exactly 2 actions");
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError("right_prob must lie in [0,1]");
        Eigen::MatrixXd probs(space.S, 2);
        probs.col(0).setConstant(1.0 - p);
        probs.col(1).setConstant(p);
        return Policy(space, std::move(probs));
    };
    if (spec.is_string()) {
        const std::string name = spec.get<std::string>();
        if (name == "uniform") return Policy::uniform(space);
        if (name == "mostly_right") return right_prob(0.8);
        if (name == "mostly_left") return right_prob(0.2);
        throw ConfigError("unknown policy name: " + name);
    }
    if (spec.is_object()) {
        if (spec.contains("right_prob"))
            return right_prob(spec.at("right_prob").get<double>());
        if (spec.contains("matrix")) {
            const auto rows =
                spec.at("matrix").get<std::vector<std::vector<double>>>();
            if (int(rows.size()) != space.S)
                throw ConfigError("policy matrix has wrong state count");
            Eigen::MatrixXd probs(space.S, space.A);
            for (int s = 0; s < space.S; ++s) {
                if (int(rows[s].size()) != space.A)
                    throw ConfigError("policy matrix row has wrong length");
                for (int a = 0; a < space.A; ++a) probs(s, a) = rows[s][a];
            }
            return Policy(space, std::move(probs));
        }
    }
    throw ConfigError("cannot interpret policy spec: " + spec.dump());
}

inline std::string policy_spec_name(const nlohmann::json& spec) {
    if (spec.is_string()) return spec.get<std::string>();
    if (spec.is_object() && spec.contains("right_prob")) {
        std::ostringstream name;
        name << "right" << spec.at("right_prob").get<double>();
        return name.str();
    }
    return "custom";
}

/// Parse "V(s)" / "Q(s,a)" with 1-based state labels, as in the tables.
inline ReportEntry parse_entry(const std::string& text) {
    int s = 0;
    int a = 0;
    if (std::sscanf(text.c_str(), "V(%d)", &s) == 1)
        return ReportEntry{false, s - 1, 0};
    if (std::sscanf(text.c_str(), "Q(%d,%d)", &s, &a) == 2)
        return ReportEntry{true, s - 1, a};
    throw ConfigError("cannot parse entry '" + text +
                      "' (expected V(s) or Q(s,a))");
}

inline CoverageMethod parse_method(const std::string& name) {
    if (name == "model_based_percentile")
        return CoverageMethod::ModelBasedPercentile;
    if (name == "model_based_pivot") return CoverageMethod::ModelBasedPivot;
    if (name == "episodic_percentile") return CoverageMethod::EpisodicPercentile;
    if (name == "episodic_pivot") return CoverageMethod::EpisodicPivot;
    if (name == "clt") return CoverageMethod::Clt;
    throw ConfigError("unknown method: " + name);
}

/// The nine entries reported in the coverage tables.
inline std::vector<ReportEntry> default_entries() {
    std::vector<ReportEntry> entries = {ReportEntry{true, 0, 0},
                                        ReportEntry{true, 2, 1},
                                        ReportEntry{true, 5, 0}};
    for (int s = 0; s < 6; ++s) entries.push_back(ReportEntry{false, s, 0});
    return entries;
}

/**
Build an ExperimentConfig from a JSON document. Supported keys: mdp
("riverswim" or {"path": ...}), behavior_policy, targets, grid, B, n_reps,
levels, methods, entries, seed, parallelism, initial_state (1-based label).
*/
inline ExperimentConfig config_from_json(const nlohmann::json& doc) {
    try {
        MdpInstance mdp = [&] {
            const auto& spec = doc.at("mdp");
            if (spec.is_string()) {
                const std::string name = spec.get<std::string>();
                if (name == "riverswim") return riverswim();
                return load_mdp(name);
            }
            if (spec.is_object() && spec.contains("path"))
                return load_mdp(spec.at("path").get<std::string>());
            throw ConfigError("cannot interpret mdp spec: " + spec.dump());
        }();
        const StateActionSpace space = mdp.kernel.space();

        Policy behavior = policy_from_spec(doc.at("behavior_policy"), space);
        ExperimentConfig config(std::move(mdp), std::move(behavior));

        for (const auto& spec : doc.at("targets")) {
            TargetSpec target;
            const std::string task = spec.at("task").get<std::string>();
            if (task == "opr") {
                target.optimal = true;
                target.name = "opr";
            } else if (task == "ope") {
                target.optimal = false;
                target.policy = policy_from_spec(spec.at("policy"), space);
                target.name = spec.value("name",
                                         policy_spec_name(spec.at("policy")));
            } else {
                throw ConfigError("target task must be 'ope' or 'opr'");
            }
            config.targets.push_back(std::move(target));
        }

        for (const auto& point : doc.at("grid"))
            config.grid.push_back(GridPoint{point.at("n").get<long>(),
                                            point.at("T").get<int>()});

        config.B = doc.value("B", config.B);
        config.n_reps = doc.value("n_reps", config.n_reps);
        if (doc.contains("levels"))
            config.levels = doc.at("levels").get<std::vector<double>>();
        if (doc.contains("methods")) {
            config.methods.clear();
            for (const auto& name : doc.at("methods"))
                config.methods.push_back(parse_method(name.get<std::string>()));
        }
        if (doc.contains("entries")) {
            for (const auto& text : doc.at("entries"))
                config.entries.push_back(parse_entry(text.get<std::string>()));
        } else {
            config.entries = default_entries();
        }
        config.seeds = SeedSpec(doc.value("seed", std::uint64_t(0)));
        config.parallelism = doc.value("parallelism", 1);
        config.initial_state = doc.value("initial_state", 1) - 1;
        config.validate();
        return config;
    } catch (const nlohmann::json::exception& error) {
        throw ConfigError(std::string("config: ") + error.what());
    }
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        file >> doc;
    } catch (const nlohmann::json::exception& error) {
        throw ConfigError(path + ": " + error.what());
    }
    return config_from_json(doc);
}

}  // namespace cmcboot
