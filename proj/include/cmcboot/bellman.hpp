#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmcboot/bootstrap.hpp"
#include "cmcboot/counting.hpp"
#include "cmcboot/parallel.hpp"
#include "cmcboot/types.hpp"

namespace cmcboot {

/// State value function, length S.
struct ValueFunction {
    Eigen::VectorXd v;

    double operator()(int s) const { return v(s); }
};

/// Action value function, length SA in sa order.
struct QFunction {
    StateActionSpace space;
    Eigen::VectorXd q;

    double operator()(int s, int a) const { return q(sa_index(space, s, a)); }
};

namespace detail {

inline void check_value_bound(const Eigen::VectorXd& values,
                              const RewardTable& rewards, const char* label) {
    const double bound =
        rewards.max_abs_reward() / (1.0 - rewards.gamma()) + 1e-6;
    if (!values.allFinite() || values.cwiseAbs().maxCoeff() > bound)
        throw SingularSystemError(std::string(label) +
                                  " exceeds the discounted return bound");
}

}  // namespace detail

/**
Off-policy evaluation by direct linear solve of the Bellman equations

    V = (I - gamma Pi M)^{-1} g,    Q = (I - gamma M Pi)^{-1} r.

Both systems are tiny (at most SA x SA) and nonsingular for any valid
kernel and policy, since the spectral radius of the discounted operator is
gamma < 1; a residual above 1e-9 therefore signals invalid inputs.
*/
inline std::pair<ValueFunction, QFunction> solve_ope(
    const TransitionKernel& kernel, const Policy& policy,
    const RewardTable& rewards) {
    const StateActionSpace& space = kernel.space();
    const double gamma = rewards.gamma();
    const Eigen::MatrixXd pi = policy.policy_matrix();
    const Eigen::MatrixXd& m = kernel.block();

    const Eigen::MatrixXd system_v =
        Eigen::MatrixXd::Identity(space.S, space.S) - gamma * pi * m;
    const Eigen::VectorXd g = rewards.policy_reward(policy);
    Eigen::VectorXd v = system_v.partialPivLu().solve(g);

    const Eigen::MatrixXd system_q =
        Eigen::MatrixXd::Identity(space.sa_count(), space.sa_count()) -
        gamma * m * pi;
    const Eigen::VectorXd r = rewards.reward_vector();
    Eigen::VectorXd q = system_q.partialPivLu().solve(r);

    if ((system_v * v - g).cwiseAbs().maxCoeff() > 1e-9 ||
        (system_q * q - r).cwiseAbs().maxCoeff() > 1e-9)
        throw SingularSystemError("Bellman linear solve residual too large");
    if ((q - (r + gamma * m * v)).cwiseAbs().maxCoeff() > 1e-8)
        throw SingularSystemError("V and Q solutions are inconsistent");
    detail::check_value_bound(v, rewards, "value function");
    detail::check_value_bound(q, rewards, "Q function");

    return {ValueFunction{std::move(v)}, QFunction{space, std::move(q)}};
}

/**
Solution of the optimal Bellman equations: fixed point Q*, greedy value
V*(s) = max_a Q*(s,a), the greedy policy (argmax ties broken by the lowest
action index), and the non-degeneracy gap
min_s min_{a != pi*(s)} ( Q*(s,pi*(s)) - Q*(s,a) ).
*/
struct OptimalSolution {
    QFunction q_star;
    ValueFunction v_star;
    Policy pi_star;
    double gap;
    long iterations;
};

/**
Optimal Bellman solve by value iteration on Q.

Iterates Q <- r + gamma M max_a Q until the sup-norm change drops below
tol*(1-gamma)/(2*gamma), which guarantees ||Q - Q*||_inf <= tol, and leaves
the output with Bellman residual at most tol.
*/
inline OptimalSolution solve_opr(const TransitionKernel& kernel,
                                 const RewardTable& rewards,
                                 double tol = 1e-10, long max_iter = 100000) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    const StateActionSpace& space = kernel.space();
    const double gamma = rewards.gamma();
    const Eigen::MatrixXd& m = kernel.block();
    const Eigen::VectorXd r = rewards.reward_vector();
    const double stop = tol * (1.0 - gamma) / (2.0 * gamma);

    Eigen::VectorXd q = r;
    Eigen::VectorXd greedy(space.S);
    long iter = 0;
    for (;; ++iter) {
        if (iter >= max_iter)
            throw NoConvergenceError(
                "value iteration did not converge in " +
                    std::to_string(max_iter) + " iterations",
                max_iter);
        for (int t = 0; t < space.S; ++t)
            greedy(t) = q.segment(sa_index(space, t, 0), space.A).maxCoeff();
        Eigen::VectorXd next = r + gamma * (m * greedy);
        const double change = (next - q).cwiseAbs().maxCoeff();
        q = std::move(next);
        if (change <= stop) break;
    }

    Eigen::VectorXd v(space.S);
    std::vector<int> best(space.S, 0);
    double gap = std::numeric_limits<double>::infinity();
    for (int s = 0; s < space.S; ++s) {
        double top = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < space.A; ++a) {
            const double value = q(sa_index(space, s, a));
            if (value > top) {
                top = value;
                best[s] = a;
            }
        }
        v(s) = top;
        for (int a = 0; a < space.A; ++a) {
            if (a == best[s]) continue;
            gap = std::min(gap, top - q(sa_index(space, s, a)));
        }
    }
    detail::check_value_bound(q, rewards, "optimal Q function");

    return OptimalSolution{QFunction{space, std::move(q)},
                           ValueFunction{std::move(v)},
                           Policy::deterministic(space, best), gap,
                           iter + 1};
}

/// Per-replicate OPE and OPR targets of a bootstrap ensemble.
struct BootstrapTargets {
    // OPE series, present when a target policy was supplied.
    std::vector<Eigen::VectorXd> v_pi;
    std::vector<Eigen::VectorXd> q_pi;
    // OPR series, present unless disabled.
    std::vector<Eigen::VectorXd> v_star;
    std::vector<Eigen::VectorXd> q_star;
    /// Replicates whose kernel had unvisited rows repaired before solving.
    std::vector<bool> repaired;
};

struct TargetOptions {
    bool solve_optimal = true;
    double opr_tol = 1e-10;
    long opr_max_iter = 100000;
    int parallelism = 1;
};

/**
Solve the plug-in equations on every replicate kernel. Undefined replicate
rows are repaired (self-loop) before solving and the repair is flagged in
the output. Solver failures are rethrown tagged with the replicate index.
*/
inline BootstrapTargets bootstrap_targets(const BootstrapEnsemble& ensemble,
                                          const RewardTable& rewards,
                                          const Policy* target_policy,
                                          const TargetOptions& options = {}) {
    const std::size_t B = ensemble.replicates.size();
    BootstrapTargets targets;
    targets.repaired.assign(B, false);
    if (target_policy) {
        targets.v_pi.resize(B);
        targets.q_pi.resize(B);
    }
    if (options.solve_optimal) {
        targets.v_star.resize(B);
        targets.q_star.resize(B);
    }

    parallel_for(long(B), options.parallelism, [&](long j) {
        const EstimatedModel& replicate = ensemble.replicates[j];
        targets.repaired[j] = replicate.any_kernel_undefined();
        try {
            auto [kernel, policy] = repair_for_simulation(replicate);
            (void)policy;
            if (target_policy) {
                auto [v, q] = solve_ope(kernel, *target_policy, rewards);
                targets.v_pi[j] = std::move(v.v);
                targets.q_pi[j] = std::move(q.q);
            }
            if (options.solve_optimal) {
                OptimalSolution opt =
                    solve_opr(kernel, rewards, options.opr_tol,
                              options.opr_max_iter);
                targets.v_star[j] = std::move(opt.v_star.v);
                targets.q_star[j] = std::move(opt.q_star.q);
            }
        } catch (const Error& error) {
            throw Error("replicate " + std::to_string(j) + ": " + error.what());
        }
    });
    return targets;
}

}  // namespace cmcboot
