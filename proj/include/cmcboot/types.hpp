#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmcboot/errors.hpp"
#include "cmcboot/indexing.hpp"

namespace cmcboot {

/// Row sums of kernels and policies must equal 1 within this tolerance.
inline constexpr double kRowSumTolerance = 1e-12;

namespace detail {

inline void check_stochastic_rows(const StateActionSpace& space,
                                  const Eigen::MatrixXd& rows,
                                  bool rows_are_state_action) {
    for (int row = 0; row < rows.rows(); ++row) {
        const int s = rows_are_state_action ? row / space.A : row;
        const int a = rows_are_state_action ? row % space.A : -1;
        for (int col = 0; col < rows.cols(); ++col) {
            const double p = rows(row, col);
            if (!(p >= 0.0) || p > 1.0 || !std::isfinite(p))
                throw NegativeEntryError("entry (" + std::to_string(row) + "," +
                                         std::to_string(col) +
                                         ") is not a probability: " +
                                         std::to_string(p));
        }
        const double residual = std::abs(rows.row(row).sum() - 1.0);
        if (residual > kRowSumTolerance) throw RowSumError(s, a, residual);
    }
}

}  // namespace detail

/**
Transition kernel of a finite controlled Markov chain, stored as the
SA x S block matrix with row sa(s,a) and column t. Every row is a
probability distribution over next states; validated at construction.
*/
class TransitionKernel {
  public:
    TransitionKernel(StateActionSpace space, Eigen::MatrixXd block)
        : space_(space), block_(std::move(block)) {
        if (block_.rows() != space_.sa_count() || block_.cols() != space_.S)
            throw ValidationError("kernel block must be SA x S");
        detail::check_stochastic_rows(space_, block_, true);
    }

    const StateActionSpace& space() const { return space_; }
    /// The block matrix M (SA x S).
    const Eigen::MatrixXd& block() const { return block_; }

    double prob(int s, int a, int t) const {
        return block_(sa_index(space_, s, a), t);
    }
    Eigen::MatrixXd::ConstRowXpr row(int s, int a) const {
        return block_.row(sa_index(space_, s, a));
    }

  private:
    StateActionSpace space_;
    Eigen::MatrixXd block_;
};

/// Validate an S x A x S probability array and build the kernel.
inline TransitionKernel validate_kernel(
    const StateActionSpace& space,
    const std::vector<std::vector<std::vector<double>>>& probs) {
    if (int(probs.size()) != space.S)
        throw ValidationError("kernel array has wrong state count");
    Eigen::MatrixXd block(space.sa_count(), space.S);
    for (int s = 0; s < space.S; ++s) {
        if (int(probs[s].size()) != space.A)
            throw ValidationError("kernel array has wrong action count at state " +
                                  std::to_string(s));
        for (int a = 0; a < space.A; ++a) {
            if (int(probs[s][a].size()) != space.S)
                throw ValidationError("kernel row (" + std::to_string(s) + "," +
                                      std::to_string(a) + ") has wrong length");
            for (int t = 0; t < space.S; ++t)
                block(sa_index(space, s, a), t) = probs[s][a][t];
        }
    }
    return TransitionKernel(space, std::move(block));
}

/**
Stationary stochastic policy: S x A matrix of action probabilities,
one distribution per state.
*/
class Policy {
  public:
    Policy(StateActionSpace space, Eigen::MatrixXd probs)
        : space_(space), probs_(std::move(probs)) {
        if (probs_.rows() != space_.S || probs_.cols() != space_.A)
            throw ValidationError("policy must be S x A");
        detail::check_stochastic_rows(space_, probs_, false);
    }

    /// Uniform policy over actions.
    static Policy uniform(const StateActionSpace& space) {
        return Policy(space, Eigen::MatrixXd::Constant(space.S, space.A,
                                                       1.0 / space.A));
    }

    /// Deterministic policy from one action index per state.
    static Policy deterministic(const StateActionSpace& space,
                                const std::vector<int>& actions) {
        if (int(actions.size()) != space.S)
            throw ValidationError("need one action per state");
        Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(space.S, space.A);
        for (int s = 0; s < space.S; ++s) {
            if (actions[s] < 0 || actions[s] >= space.A)
                throw ValidationError("action index out of range");
            probs(s, actions[s]) = 1.0;
        }
        return Policy(space, std::move(probs));
    }

    const StateActionSpace& space() const { return space_; }
    const Eigen::MatrixXd& probs() const { return probs_; }
    double prob(int s, int a) const { return probs_(s, a); }
    Eigen::MatrixXd::ConstRowXpr row(int s) const { return probs_.row(s); }

    /// The S x SA block-diagonal policy matrix with rows pi_s.
    Eigen::MatrixXd policy_matrix() const {
        Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(space_.S, space_.sa_count());
        for (int s = 0; s < space_.S; ++s)
            for (int a = 0; a < space_.A; ++a)
                pi(s, sa_index(space_, s, a)) = probs_(s, a);
        return pi;
    }

  private:
    StateActionSpace space_;
    Eigen::MatrixXd probs_;
};

/// Known reward function r(s,a) with discount factor gamma in (0,1).
class RewardTable {
  public:
    RewardTable(StateActionSpace space, Eigen::MatrixXd rewards, double gamma)
        : space_(space), rewards_(std::move(rewards)), gamma_(gamma) {
        if (rewards_.rows() != space_.S || rewards_.cols() != space_.A)
            throw ValidationError("reward table must be S x A");
        if (!(gamma_ > 0.0 && gamma_ < 1.0))
            throw ValidationError("discount factor must lie in (0,1)");
        if (!rewards_.allFinite())
            throw ValidationError("rewards must be finite");
    }

    const StateActionSpace& space() const { return space_; }
    const Eigen::MatrixXd& table() const { return rewards_; }
    double reward(int s, int a) const { return rewards_(s, a); }
    double gamma() const { return gamma_; }
    double max_abs_reward() const { return rewards_.cwiseAbs().maxCoeff(); }

    /// Rewards as the SA vector in sa order (the r of Q = (I - gamma M Pi)^{-1} r).
    Eigen::VectorXd reward_vector() const {
        Eigen::VectorXd r(space_.sa_count());
        for (int s = 0; s < space_.S; ++s)
            for (int a = 0; a < space_.A; ++a)
                r(sa_index(space_, s, a)) = rewards_(s, a);
        return r;
    }

    /// Policy-averaged rewards g(s) = sum_a pi(a|s) r(s,a).
    Eigen::VectorXd policy_reward(const Policy& pi) const {
        Eigen::VectorXd g(space_.S);
        for (int s = 0; s < space_.S; ++s)
            g(s) = pi.row(s).dot(rewards_.row(s));
        return g;
    }

  private:
    StateActionSpace space_;
    Eigen::MatrixXd rewards_;
    double gamma_;
};

/// One observed transition.
struct Step {
    int state;
    int action;
    int next;

    bool operator==(const Step&) const = default;
};

using Episode = std::vector<Step>;

/**
Offline dataset of K episodes of equal length T. Consecutive steps within
an episode chain (next state of step i is the state of step i+1); episodes
are independent restarts.
*/
class EpisodicDataset {
  public:
    EpisodicDataset(StateActionSpace space, std::vector<Episode> episodes)
        : space_(space), episodes_(std::move(episodes)) {
        if (episodes_.empty())
            throw EmptyDatasetError("dataset has no episodes");
        const std::size_t T = episodes_.front().size();
        if (T == 0) throw EmptyDatasetError("episodes are empty");
        for (const Episode& episode : episodes_) {
            if (episode.size() != T)
                throw ValidationError("episodes must all have equal length");
            for (std::size_t i = 0; i < episode.size(); ++i) {
                const Step& step = episode[i];
                if (step.state < 0 || step.state >= space_.S ||
                    step.next < 0 || step.next >= space_.S)
                    throw ValidationError("state index out of range");
                if (step.action < 0 || step.action >= space_.A)
                    throw ValidationError("action index out of range");
                if (i + 1 < episode.size() && step.next != episode[i + 1].state)
                    throw ValidationError("episode breaks the chaining invariant");
            }
        }
    }

    const StateActionSpace& space() const { return space_; }
    const std::vector<Episode>& episodes() const { return episodes_; }
    int num_episodes() const { return int(episodes_.size()); }
    int episode_length() const { return int(episodes_.front().size()); }
    /// Total transition count n = K * T.
    long n() const { return long(num_episodes()) * episode_length(); }
    /// Observed initial state of episode k.
    int start_state(int k) const { return episodes_[k].front().state; }

  private:
    StateActionSpace space_;
    std::vector<Episode> episodes_;
};

}  // namespace cmcboot
