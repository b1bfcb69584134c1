#pragma once

#include <utility>
#include <vector>

#include "cmcboot/counting.hpp"
#include "cmcboot/parallel.hpp"
#include "cmcboot/rng.hpp"
#include "cmcboot/simulate.hpp"
#include "cmcboot/types.hpp"

namespace cmcboot {

enum class BootstrapMethod { ModelBased, Episodic };

struct BootstrapConfig {
    int B = 1000;
    SeedSpec seeds;
    BootstrapMethod method = BootstrapMethod::ModelBased;
    int parallelism = 1;
};

/// B replicate estimators, plus an echo of how they were produced.
struct BootstrapEnsemble {
    std::vector<EstimatedModel> replicates;
    BootstrapConfig config;
};

/**
One model-based bootstrap replicate: simulate K episodes of length T from
the repaired empirical kernel and behavior policy, each episode starting at
the observed initial state of the corresponding source episode, then
re-estimate. The repaired rows are a simulation device only; the replicate's
own definedness flags are computed fresh from the simulated counts.
*/
inline EstimatedModel model_based_replicate(const EpisodicDataset& source,
                                            const TransitionKernel& sim_kernel,
                                            const Policy& sim_policy,
                                            const SeedSpec& seeds) {
    const int K = source.num_episodes();
    const int T = source.episode_length();
    std::vector<Episode> episodes;
    episodes.reserve(K);
    for (int k = 0; k < K; ++k) {
        RngStream rng = seeds.stream(k);
        episodes.push_back(simulate_episode(sim_kernel, sim_policy,
                                            source.start_state(k), T, rng));
    }
    return estimate(EpisodicDataset(source.space(), std::move(episodes)));
}

inline EstimatedModel model_based_replicate(const EpisodicDataset& source,
                                            const EstimatedModel& model,
                                            const SeedSpec& seeds) {
    auto [kernel, policy] = repair_for_simulation(model);
    return model_based_replicate(source, kernel, policy, seeds);
}

/**
One episodic-bootstrap replicate: draw K whole episodes i.i.d. with
replacement from the K observed episodes and re-estimate. With K=1 every
replicate equals the source estimator.
*/
inline EstimatedModel episodic_replicate(const EpisodicDataset& source,
                                         const SeedSpec& seeds) {
    const int K = source.num_episodes();
    RngStream rng = seeds.stream(0);
    std::vector<Episode> episodes;
    episodes.reserve(K);
    for (int k = 0; k < K; ++k)
        episodes.push_back(source.episodes()[rng.uniform_below(K)]);
    return estimate(EpisodicDataset(source.space(), std::move(episodes)));
}

/**
Generate B independent replicates. Replicate j derives its streams from
seeds.child(j), so the ensemble is identical at every parallelism degree
and replicates may be computed in any order.
*/
inline BootstrapEnsemble run_ensemble(const EpisodicDataset& source,
                                      const EstimatedModel& model,
                                      const BootstrapConfig& config) {
    if (config.B < 1) throw ConfigError("bootstrap requires B >= 1");
    BootstrapEnsemble ensemble;
    ensemble.config = config;
    ensemble.replicates.reserve(config.B);
    for (int j = 0; j < config.B; ++j)
        ensemble.replicates.emplace_back(EstimatedModel{
            model.space, {}, {}, {}, {}, CountStatistics(model.space)});

    if (config.method == BootstrapMethod::ModelBased) {
        auto [kernel, policy] = repair_for_simulation(model);
        parallel_for(config.B, config.parallelism, [&](long j) {
            ensemble.replicates[j] =
                model_based_replicate(source, kernel, policy,
                                      config.seeds.child(j));
        });
    } else {
        parallel_for(config.B, config.parallelism, [&](long j) {
            ensemble.replicates[j] =
                episodic_replicate(source, config.seeds.child(j));
        });
    }
    return ensemble;
}

}  // namespace cmcboot
