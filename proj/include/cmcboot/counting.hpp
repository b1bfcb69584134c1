#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmcboot/types.hpp"

namespace cmcboot {

/**
Visit counts of a dataset: N^(a)_{s,t} transition tallies, with the
marginals N^(a)_s and N_s and the grand total n = K*T.
*/
struct CountStatistics {
    StateActionSpace space;
    std::vector<std::int64_t> n_sat;  // indexed by sat_index
    std::vector<std::int64_t> n_sa;   // indexed by sa_index
    std::vector<std::int64_t> n_s;    // indexed by state
    std::int64_t n_total = 0;

    explicit CountStatistics(const StateActionSpace& sp)
        : space(sp),
          n_sat(sp.sat_count(), 0),
          n_sa(sp.sa_count(), 0),
          n_s(sp.S, 0) {}

    std::int64_t sat(int s, int a, int t) const {
        return n_sat[sat_index(space, s, a, t)];
    }
    std::int64_t sa(int s, int a) const { return n_sa[sa_index(space, s, a)]; }
    std::int64_t state(int s) const { return n_s[s]; }

    void add_transition(int s, int a, int t) {
        ++n_sat[sat_index(space, s, a, t)];
        ++n_sa[sa_index(space, s, a)];
        ++n_s[s];
        ++n_total;
    }
};

/// Tally all K*T transitions of a dataset.
inline CountStatistics count(const EpisodicDataset& dataset) {
    CountStatistics counts(dataset.space());
    for (const Episode& episode : dataset.episodes())
        for (const Step& step : episode)
            counts.add_transition(step.state, step.action, step.next);
    return counts;
}

/**
Count-based empirical model: kernel rows N^(a)_{s,.} / N^(a)_s and policy
rows N_s^(.) / N_s, each defined only where the denominator is positive.
Undefined rows are flagged, never invented.
*/
struct EstimatedModel {
    StateActionSpace space;
    Eigen::MatrixXd kernel_rows;        // SA x S; zero where undefined
    std::vector<bool> kernel_defined;   // per (s,a)
    Eigen::MatrixXd policy_rows;        // S x A; zero where undefined
    std::vector<bool> policy_defined;   // per s
    CountStatistics counts;

    bool fully_defined() const {
        for (bool defined : kernel_defined)
            if (!defined) return false;
        for (bool defined : policy_defined)
            if (!defined) return false;
        return true;
    }

    bool any_kernel_undefined() const {
        for (bool defined : kernel_defined)
            if (!defined) return true;
        return false;
    }
};

/// Form the empirical kernel and behavior policy from counts.
inline EstimatedModel estimate(CountStatistics counts) {
    const StateActionSpace space = counts.space;
    EstimatedModel model{space,
                         Eigen::MatrixXd::Zero(space.sa_count(), space.S),
                         std::vector<bool>(space.sa_count(), false),
                         Eigen::MatrixXd::Zero(space.S, space.A),
                         std::vector<bool>(space.S, false),
                         std::move(counts)};
    for (int s = 0; s < space.S; ++s) {
        for (int a = 0; a < space.A; ++a) {
            const int row = sa_index(space, s, a);
            const std::int64_t denom = model.counts.n_sa[row];
            if (denom == 0) continue;
            model.kernel_defined[row] = true;
            for (int t = 0; t < space.S; ++t)
                model.kernel_rows(row, t) =
                    double(model.counts.n_sat[sat_index(space, s, a, t)]) /
                    double(denom);
        }
        const std::int64_t visits = model.counts.n_s[s];
        if (visits == 0) continue;
        model.policy_defined[s] = true;
        for (int a = 0; a < space.A; ++a)
            model.policy_rows(s, a) =
                double(model.counts.n_sa[sa_index(space, s, a)]) / double(visits);
    }
    return model;
}

/// Convenience: counts plus ratios in one call.
inline EstimatedModel estimate(const EpisodicDataset& dataset) {
    return estimate(count(dataset));
}

/**
Repair an estimated model for simulation: undefined kernel rows become the
point mass at the own state (self-loop), undefined policy rows become
uniform over actions. Defined rows pass through unchanged.
*/
inline std::pair<TransitionKernel, Policy> repair_for_simulation(
    const EstimatedModel& model) {
    const StateActionSpace& space = model.space;
    Eigen::MatrixXd kernel = model.kernel_rows;
    for (int s = 0; s < space.S; ++s)
        for (int a = 0; a < space.A; ++a) {
            const int row = sa_index(space, s, a);
            if (!model.kernel_defined[row]) {
                kernel.row(row).setZero();
                kernel(row, s) = 1.0;
            }
        }
    Eigen::MatrixXd policy = model.policy_rows;
    for (int s = 0; s < space.S; ++s)
        if (!model.policy_defined[s])
            policy.row(s).setConstant(1.0 / space.A);
    return {TransitionKernel(space, std::move(kernel)),
            Policy(space, std::move(policy))};
}

/// Empirical occupation measure N^(a)_s / n as an S x A matrix.
inline Eigen::MatrixXd occupation_estimate(const CountStatistics& counts) {
    if (counts.n_total == 0)
        throw EmptyDatasetError("occupation estimate of an empty dataset");
    const StateActionSpace& space = counts.space;
    Eigen::MatrixXd occupation(space.S, space.A);
    for (int s = 0; s < space.S; ++s)
        for (int a = 0; a < space.A; ++a)
            occupation(s, a) =
                double(counts.n_sa[sa_index(space, s, a)]) / double(counts.n_total);
    return occupation;
}

}  // namespace cmcboot
