#pragma once

#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmcboot/counting.hpp"
#include "cmcboot/types.hpp"

namespace cmcboot {

/**
Reference state-action chain: the Markov chain on S x A pairs with kernel
K((s,a),(t,b)) = M^(a)_{s,t} * pi(b|t). Its stationary distribution is the
ergodic occupation measure of the controlled chain, which makes it the
oracle for visitation frequencies.
*/
struct ReferenceChain {
    StateActionSpace space;
    Eigen::MatrixXd kernel_sa;  // SA x SA, row index sa(s,a)
};

inline ReferenceChain build_reference_chain(const TransitionKernel& kernel,
                                            const Policy& policy) {
    const StateActionSpace& space = kernel.space();
    Eigen::MatrixXd chain(space.sa_count(), space.sa_count());
    for (int s = 0; s < space.S; ++s)
        for (int a = 0; a < space.A; ++a) {
            const int row = sa_index(space, s, a);
            for (int t = 0; t < space.S; ++t)
                for (int b = 0; b < space.A; ++b)
                    chain(row, sa_index(space, t, b)) =
                        kernel.prob(s, a, t) * policy.prob(t, b);
        }
    return ReferenceChain{space, std::move(chain)};
}

namespace detail {

inline std::vector<int> reachable(const Eigen::MatrixXd& kernel, bool forward) {
    const int n = int(kernel.rows());
    std::vector<int> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < n; ++v) {
            const double p = forward ? kernel(u, v) : kernel(v, u);
            if (p > 0.0 && !seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
        }
    }
    return seen;
}

/// Period of a strongly connected chain: gcd of level slacks over all edges.
inline long chain_period(const Eigen::MatrixXd& kernel) {
    const int n = int(kernel.rows());
    std::vector<long> level(n, -1);
    std::vector<int> queue{0};
    level[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        for (int v = 0; v < n; ++v)
            if (kernel(u, v) > 0.0 && level[v] < 0) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
    }
    long period = 0;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (kernel(u, v) > 0.0)
                period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
    return period;
}

}  // namespace detail

/**
Stationary distribution of the reference chain by power iteration, with a
residual certificate: returns p with ||pK - p||_inf <= 1e-12.

The chain must be ergodic; reducibility and periodicity are detected up
front and reported rather than left to a non-converging iteration.
*/
inline Eigen::VectorXd stationary_distribution(const ReferenceChain& chain,
                                               double residual_tol = 1e-12,
                                               long max_iter = 1000000) {
    const Eigen::MatrixXd& kernel = chain.kernel_sa;
    const int n = int(kernel.rows());

    const std::vector<int> forward = detail::reachable(kernel, true);
    const std::vector<int> backward = detail::reachable(kernel, false);
    for (int v = 0; v < n; ++v)
        if (!forward[v] || !backward[v])
            throw ReducibleError("chain is reducible: state " +
                                 std::to_string(v) +
                                 " is not in the recurrent class");
    const long period = detail::chain_period(kernel);
    if (period != 1)
        throw ReducibleError("chain is periodic with period " +
                             std::to_string(period));

    Eigen::RowVectorXd p = Eigen::RowVectorXd::Constant(n, 1.0 / n);
    for (long iter = 0; iter < max_iter; ++iter) {
        Eigen::RowVectorXd next = p * kernel;
        next /= next.sum();
        const double residual = (next - p).cwiseAbs().maxCoeff();
        p = std::move(next);
        if (residual <= residual_tol) return p.transpose();
    }
    throw NoConvergenceError("power iteration did not reach residual " +
                                 std::to_string(residual_tol),
                             max_iter);
}

/**
Episodic data embedded into one single chain: episodes are concatenated and
a pseudo-transition under the dummy reset action (index A) is inserted at
each episode boundary, mapping the final state of episode k to the observed
initial state of episode k+1. Reset steps never enter transition counts.
*/
struct EmbeddedChain {
    StateActionSpace space;          // original space; extended actions = A+1
    std::vector<Step> trajectory;    // length n' = K(T+1) - 1
    Eigen::MatrixXd reset_kernel;    // S x S, strictly positive

    int dagger_action() const { return space.A; }
    long n_prime() const { return long(trajectory.size()); }

    /// Counts over the original action space (reset steps excluded).
    CountStatistics counts_restricted() const {
        CountStatistics counts(space);
        for (const Step& step : trajectory)
            if (step.action < space.A)
                counts.add_transition(step.state, step.action, step.next);
        return counts;
    }

    /// Occupation of real (s,a) pairs with the reset steps in the denominator.
    Eigen::MatrixXd occupation_restricted() const {
        const CountStatistics counts = counts_restricted();
        Eigen::MatrixXd occupation(space.S, space.A);
        for (int s = 0; s < space.S; ++s)
            for (int a = 0; a < space.A; ++a)
                occupation(s, a) =
                    double(counts.sa(s, a)) / double(n_prime());
        return occupation;
    }
};

/// Uniform-over-states reset kernel, the canonical strictly positive choice.
inline Eigen::MatrixXd uniform_reset_kernel(const StateActionSpace& space) {
    return Eigen::MatrixXd::Constant(space.S, space.S, 1.0 / space.S);
}

inline EmbeddedChain embed_episodic(const EpisodicDataset& dataset,
                                    const Eigen::MatrixXd& reset_kernel) {
    const StateActionSpace& space = dataset.space();
    if (reset_kernel.rows() != space.S || reset_kernel.cols() != space.S)
        throw ValidationError("reset kernel must be S x S");
    if (reset_kernel.minCoeff() <= 0.0)
        throw NonPositiveResetKernelError(
            "reset kernel must be strictly positive");
    for (int s = 0; s < space.S; ++s)
        if (std::abs(reset_kernel.row(s).sum() - 1.0) > kRowSumTolerance)
            throw RowSumError(s, space.A, reset_kernel.row(s).sum() - 1.0);

    const int K = dataset.num_episodes();
    const int T = dataset.episode_length();
    std::vector<Step> trajectory;
    trajectory.reserve(std::size_t(K) * (T + 1) - 1);
    for (int k = 0; k < K; ++k) {
        const Episode& episode = dataset.episodes()[k];
        trajectory.insert(trajectory.end(), episode.begin(), episode.end());
        if (k + 1 < K)
            trajectory.push_back(
                Step{episode.back().next, space.A, dataset.start_state(k + 1)});
    }
    return EmbeddedChain{space, std::move(trajectory), reset_kernel};
}

inline EmbeddedChain embed_episodic(const EpisodicDataset& dataset) {
    return embed_episodic(dataset, uniform_reset_kernel(dataset.space()));
}

}  // namespace cmcboot
