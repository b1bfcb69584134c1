#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "cmcboot/bellman.hpp"
#include "cmcboot/intervals.hpp"
#include "cmcboot/types.hpp"

namespace cmcboot {

/**
Floor rule for occupation entries in plug-in covariance evaluation.
An entry below min_mass is replaced by min_mass and flagged; min_mass = 1/n
reproduces the max(N, 1)/n plug-in convention. The default (min_mass = 0)
applies no floor; an exactly zero entry then yields a zero covariance block,
flagged, since a never-visited pair carries no CLT information.
*/
struct OccupationFloor {
    double min_mass = 0.0;
};

/**
Asymptotic covariance of sqrt(n) vec(M_hat - M): block diagonal across
(s,a), with S x S diagonal blocks (diag(row) - row row^T) / p_sa, in the
sat vectorization convention.
*/
struct LambdaBar {
    StateActionSpace space;
    Eigen::MatrixXd matrix;            // SAS x SAS
    std::vector<bool> floored;         // per (s,a): floor rule applied

    int floored_count() const {
        int count = 0;
        for (bool flag : floored) count += flag;
        return count;
    }
};

/// Evaluate the covariance formula entrywise at (kernel, occupation).
inline LambdaBar lambda_bar(const TransitionKernel& kernel,
                            const Eigen::MatrixXd& occupation,
                            const OccupationFloor& floor_rule = {}) {
    const StateActionSpace& space = kernel.space();
    if (occupation.rows() != space.S || occupation.cols() != space.A)
        throw IndexConventionError("occupation must be S x A");
    if (occupation.minCoeff() < 0.0 ||
        std::abs(occupation.sum() - 1.0) > 1e-9)
        throw ValidationError("occupation must be a probability vector");

    LambdaBar lambda{space,
                     Eigen::MatrixXd::Zero(space.sat_count(), space.sat_count()),
                     std::vector<bool>(space.sa_count(), false)};
    for (int s = 0; s < space.S; ++s)
        for (int a = 0; a < space.A; ++a) {
            double mass = occupation(s, a);
            if (mass < floor_rule.min_mass) {
                mass = floor_rule.min_mass;
                lambda.floored[sa_index(space, s, a)] = true;
            }
            if (mass <= 0.0) {
                lambda.floored[sa_index(space, s, a)] = true;
                continue;
            }
            const auto row = kernel.row(s, a);
            const int base = sat_index(space, s, a, 0);
            for (int t = 0; t < space.S; ++t)
                for (int u = 0; u < space.S; ++u)
                    lambda.matrix(base + t, base + u) =
                        ((t == u ? row(t) : 0.0) - row(t) * row(u)) / mass;
        }
    return lambda;
}

/**
Asymptotic covariance matrices of the plug-in OPE targets for one policy:
sigma_v for sqrt(n)(V_hat - V) and sigma_q for sqrt(n)(Q_hat - Q), together
with the policy they refer to. For the optimal-policy case the gap and a
degeneracy warning are recorded as well.
*/
struct TargetCovariance {
    Eigen::MatrixXd sigma_v;  // S x S
    Eigen::MatrixXd sigma_q;  // SA x SA
    Policy policy;
    double gap = std::numeric_limits<double>::infinity();
    bool degeneracy_warning = false;
};

/**
Delta-method covariances in closed Kronecker form,

    Sigma_V = gamma^2 [(I-gamma Pi M)^{-1} Pi (x) V^T] Lambda [...]^T,
    Sigma_Q = gamma^2 [(I-gamma M Pi)^{-1} (x) (Pi Q)^T] Lambda [...]^T,

evaluated under the sat convention: column sa*S + t of the Jacobian factor
carries coefficient(row, sa) * value(t).
*/
inline TargetCovariance sigma_ope(const TransitionKernel& kernel,
                                  const Policy& policy,
                                  const RewardTable& rewards,
                                  const LambdaBar& lambda) {
    const StateActionSpace& space = kernel.space();
    if (lambda.space != space ||
        lambda.matrix.rows() != space.sat_count() ||
        lambda.matrix.cols() != space.sat_count())
        throw IndexConventionError("lambda matrix is not SAS x SAS");

    const double gamma = rewards.gamma();
    const Eigen::MatrixXd pi = policy.policy_matrix();
    const Eigen::MatrixXd& m = kernel.block();
    auto [value, qvalue] = solve_ope(kernel, policy, rewards);

    const Eigen::MatrixXd resolvent_v =
        (Eigen::MatrixXd::Identity(space.S, space.S) - gamma * pi * m)
            .partialPivLu()
            .inverse();
    const Eigen::MatrixXd resolvent_q =
        (Eigen::MatrixXd::Identity(space.sa_count(), space.sa_count()) -
         gamma * m * pi)
            .partialPivLu()
            .inverse();

    const Eigen::MatrixXd coeff_v = resolvent_v * pi;      // S x SA
    const Eigen::VectorXd weight_q = pi * qvalue.q;        // S

    Eigen::MatrixXd jac_v(space.S, space.sat_count());
    Eigen::MatrixXd jac_q(space.sa_count(), space.sat_count());
    for (int sa = 0; sa < space.sa_count(); ++sa)
        for (int t = 0; t < space.S; ++t) {
            const int col = sa * space.S + t;
            jac_v.col(col) = gamma * value.v(t) * coeff_v.col(sa);
            jac_q.col(col) = gamma * weight_q(t) * resolvent_q.col(sa);
        }

    // The sandwich is symmetric in exact arithmetic; average out the
    // floating-point asymmetry of the two matrix products.
    const Eigen::MatrixXd raw_v = jac_v * lambda.matrix * jac_v.transpose();
    const Eigen::MatrixXd raw_q = jac_q * lambda.matrix * jac_q.transpose();
    return TargetCovariance{0.5 * (raw_v + raw_v.transpose()),
                            0.5 * (raw_q + raw_q.transpose()), policy};
}

/**
OPR covariances: solve the optimal Bellman equations, extract the greedy
policy, and evaluate the OPE covariances at that policy. A gap below
gap_threshold raises the degeneracy warning in the output (the asymptotics
require a strictly positive gap).
*/
inline TargetCovariance sigma_opr(const TransitionKernel& kernel,
                                  const RewardTable& rewards,
                                  const LambdaBar& lambda,
                                  double gap_threshold = 1e-8) {
    const OptimalSolution optimal = solve_opr(kernel, rewards);
    TargetCovariance covariance =
        sigma_ope(kernel, optimal.pi_star, rewards, lambda);
    covariance.gap = optimal.gap;
    covariance.degeneracy_warning = optimal.gap < gap_threshold;
    return covariance;
}

/// Quantile of the standard normal, accurate to machine precision.
inline double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

/// Wald interval: estimate +- z_{1-alpha/2} sqrt(variance_entry / n).
inline ConfidenceInterval clt_interval(double estimate, double variance_entry,
                                       long n, double alpha) {
    if (variance_entry < 0.0)
        throw NegativeVarianceError("variance entry is negative: " +
                                    std::to_string(variance_entry));
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("alpha must lie in (0,1)");
    if (n < 1) throw ValidationError("sample size must be >= 1");
    const double half_width =
        normal_quantile(1.0 - alpha / 2.0) * std::sqrt(variance_entry / double(n));
    return ConfidenceInterval{estimate - half_width, estimate + half_width,
                              1.0 - alpha, CiMethod::Clt, half_width == 0.0};
}

}  // namespace cmcboot
