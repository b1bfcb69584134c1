#pragma once

#include <Eigen/Dense>

#include "cmcboot/errors.hpp"

namespace cmcboot {

/**
Finite state-action space: S states and A actions, both 0-based dense
integer indices.
*/
struct StateActionSpace {
    int S = 0;
    int A = 0;

    StateActionSpace() = default;
    StateActionSpace(int states, int actions) : S(states), A(actions) {
        if (S < 1 || A < 1)
            throw ValidationError("state and action counts must be >= 1");
    }

    bool operator==(const StateActionSpace&) const = default;

    /// Number of state-action pairs.
    int sa_count() const { return S * A; }
    /// Dimension of the vectorized kernel (one entry per (s,a,t)).
    int sat_count() const { return S * A * S; }
};

// The block transition matrix stacks entries M^(a)_{s,t} into an SA x S
// matrix with row index sa(s,a) and column index t. Vectorizing that matrix
// row by row gives the flat index sat(s,a,t); every covariance computation
// in this library uses this single convention.

/// Row index of pair (s,a) in the SA x S block matrix.
inline int sa_index(const StateActionSpace& space, int s, int a) {
    return s * space.A + a;
}

/// Flat index of (s,a,t) in the vectorized kernel.
inline int sat_index(const StateActionSpace& space, int s, int a, int t) {
    return (s * space.A + a) * space.S + t;
}

/// Vectorize an SA x S block matrix row by row (sat order).
inline Eigen::VectorXd vec_block(const StateActionSpace& space,
                                 const Eigen::MatrixXd& block) {
    if (block.rows() != space.sa_count() || block.cols() != space.S)
        throw IndexConventionError("vec_block: matrix is not SA x S");
    Eigen::VectorXd v(space.sat_count());
    for (int row = 0; row < block.rows(); ++row)
        for (int t = 0; t < space.S; ++t)
            v(row * space.S + t) = block(row, t);
    return v;
}

/// Inverse of vec_block.
inline Eigen::MatrixXd unvec_block(const StateActionSpace& space,
                                   const Eigen::VectorXd& v) {
    if (v.size() != space.sat_count())
        throw IndexConventionError("unvec_block: vector is not length SAS");
    Eigen::MatrixXd block(space.sa_count(), space.S);
    for (int row = 0; row < block.rows(); ++row)
        for (int t = 0; t < space.S; ++t)
            block(row, t) = v(row * space.S + t);
    return block;
}

}  // namespace cmcboot
