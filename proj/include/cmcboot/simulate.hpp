#pragma once

#include <vector>

#include "cmcboot/rng.hpp"
#include "cmcboot/types.hpp"

namespace cmcboot {

/**
Simulate one episode of length T: at each step sample the action from the
policy row of the current state, then the next state from the kernel row of
the (state, action) pair.

\param start_state Initial state of the episode
\param T           Number of transitions to generate
\param rng         Stream owned by this episode
*/
inline Episode simulate_episode(const TransitionKernel& kernel,
                                const Policy& policy, int start_state, int T,
                                RngStream& rng) {
    const StateActionSpace& space = kernel.space();
    if (start_state < 0 || start_state >= space.S)
        throw ValidationError("start state out of range");
    if (T < 1) throw ValidationError("episode length must be >= 1");

    Episode episode;
    episode.reserve(T);
    int state = start_state;
    for (int i = 0; i < T; ++i) {
        const int action = rng.categorical(policy.row(state));
        const int next = rng.categorical(kernel.row(state, action));
        episode.push_back(Step{state, action, next});
        state = next;
    }
    return episode;
}

/**
Generate a dataset of K equal-length episodes, all starting from the given
states. Episode k draws its own stream from `seeds`, so the result does not
depend on generation order.
*/
inline EpisodicDataset generate_dataset(const TransitionKernel& kernel,
                                        const Policy& policy,
                                        const std::vector<int>& start_states,
                                        int T, const SeedSpec& seeds) {
    std::vector<Episode> episodes;
    episodes.reserve(start_states.size());
    for (std::size_t k = 0; k < start_states.size(); ++k) {
        RngStream rng = seeds.stream(k);
        episodes.push_back(
            simulate_episode(kernel, policy, start_states[k], T, rng));
    }
    return EpisodicDataset(kernel.space(), std::move(episodes));
}

/// Same-start convenience: all K episodes begin at `start_state`.
inline EpisodicDataset generate_dataset(const TransitionKernel& kernel,
                                        const Policy& policy, int start_state,
                                        int K, int T, const SeedSpec& seeds) {
    return generate_dataset(kernel, policy, std::vector<int>(K, start_state), T,
                            seeds);
}

}  // namespace cmcboot
