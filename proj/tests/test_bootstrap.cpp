#include <cmath>
#include <map>

#include <catch2/catch_amalgamated.hpp>

#include "cmcboot/bootstrap.hpp"
#include "cmcboot/covariance.hpp"
#include "cmcboot/environments.hpp"
#include "cmcboot/simulate.hpp"
#include "oracles.hpp"

using namespace cmcboot;

namespace {

Policy mostly_right(const StateActionSpace& space, double p = 0.8) {
    Eigen::MatrixXd probs(space.S, 2);
    probs.col(0).setConstant(1.0 - p);
    probs.col(1).setConstant(p);
    return Policy(space, probs);
}

EpisodicDataset riverswim_data(int K, int T, std::uint64_t seed) {
    const MdpInstance mdp = riverswim();
    return generate_dataset(mdp.kernel, mostly_right(mdp.kernel.space()), 0, K,
                            T, SeedSpec(seed).child(0));
}

}  // namespace

TEST_CASE("deterministic repaired model reproduces itself in replicates") {
    // A cycle chain: the estimated kernel rows are point masses, so the
    // replicate has no randomness on visited rows.
    const StateActionSpace space(3, 1);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(3, 3);
    block(0, 1) = block(1, 2) = block(2, 0) = 1.0;
    const TransitionKernel kernel(space, block);
    const Policy policy = Policy::uniform(space);
    const EpisodicDataset source =
        generate_dataset(kernel, policy, 0, 2, 9, SeedSpec(1).child(0));
    const EstimatedModel model = estimate(source);

    const EstimatedModel replicate =
        model_based_replicate(source, model, SeedSpec(2).child(0));
    auto [repaired, repaired_policy] = repair_for_simulation(model);
    (void)repaired_policy;
    for (int row = 0; row < space.sa_count(); ++row)
        if (replicate.kernel_defined[row])
            REQUIRE(replicate.kernel_rows.row(row) ==
                    repaired.block().row(row));
}

TEST_CASE("K=1, T=1 replicates are a single transition from the source start") {
    const EpisodicDataset source(StateActionSpace(6, 2), {{Step{4, 1, 3}}});
    const EstimatedModel model = estimate(source);
    const EstimatedModel replicate =
        model_based_replicate(source, model, SeedSpec(9).child(0));
    REQUIRE(replicate.counts.n_total == 1);
    REQUIRE(replicate.counts.state(4) == 1);
}

TEST_CASE("episodic bootstrap with one episode has zero variance") {
    const EpisodicDataset source = riverswim_data(1, 50, 77);
    const EstimatedModel model = estimate(source);
    BootstrapConfig config{32, SeedSpec(5), BootstrapMethod::Episodic, 1};
    const BootstrapEnsemble ensemble = run_ensemble(source, model, config);
    for (const EstimatedModel& replicate : ensemble.replicates) {
        REQUIRE(replicate.kernel_rows == model.kernel_rows);
        REQUIRE(replicate.policy_rows == model.policy_rows);
        REQUIRE(replicate.kernel_defined == model.kernel_defined);
    }
}

TEST_CASE("episodic resampling follows the exact multinomial law for K=2") {
    const StateActionSpace space(2, 1);
    const Episode e1 = {Step{0, 0, 0}};
    const Episode e2 = {Step{1, 0, 1}};
    const EpisodicDataset source(space, {e1, e2});

    // Identify the multiset by the count of episode e1 in the replicate:
    // 2, 1, or 0 copies with probabilities 1/4, 1/2, 1/4.
    std::map<std::int64_t, long> histogram;
    const int draws = 100000;
    const SeedSpec seeds(404);
    for (int j = 0; j < draws; ++j) {
        const EstimatedModel replicate =
            episodic_replicate(source, seeds.child(j));
        ++histogram[replicate.counts.sa(0, 0)];
    }
    REQUIRE_THAT(double(histogram[2]) / draws,
                 Catch::Matchers::WithinAbs(0.25, 0.01));
    REQUIRE_THAT(double(histogram[1]) / draws,
                 Catch::Matchers::WithinAbs(0.50, 0.01));
    REQUIRE_THAT(double(histogram[0]) / draws,
                 Catch::Matchers::WithinAbs(0.25, 0.01));
}

TEST_CASE("identical episodes collapse the episodic bootstrap") {
    const StateActionSpace space(2, 1);
    const Episode episode = {Step{0, 0, 1}, Step{1, 0, 0}};
    const EpisodicDataset source(space, {episode, episode, episode});
    const EstimatedModel model = estimate(source);
    const EstimatedModel replicate =
        episodic_replicate(source, SeedSpec(12).child(0));
    REQUIRE(replicate.kernel_rows == model.kernel_rows);
}

TEST_CASE("run_ensemble matches the single-replicate operations at B=1") {
    const EpisodicDataset source = riverswim_data(4, 25, 31);
    const EstimatedModel model = estimate(source);
    const SeedSpec seeds(88);

    BootstrapConfig config{1, seeds, BootstrapMethod::ModelBased, 1};
    const BootstrapEnsemble ensemble = run_ensemble(source, model, config);
    REQUIRE(ensemble.replicates.size() == 1);
    const EstimatedModel direct =
        model_based_replicate(source, model, seeds.child(0));
    REQUIRE(ensemble.replicates[0].kernel_rows == direct.kernel_rows);
    REQUIRE(ensemble.replicates[0].counts.n_sat == direct.counts.n_sat);
}

TEST_CASE("ensembles are deterministic and order-independent") {
    const EpisodicDataset source = riverswim_data(10, 20, 55);
    const EstimatedModel model = estimate(source);

    for (BootstrapMethod method :
         {BootstrapMethod::ModelBased, BootstrapMethod::Episodic}) {
        BootstrapConfig serial{64, SeedSpec(1234), method, 1};
        BootstrapConfig parallel = serial;
        parallel.parallelism = 4;
        const BootstrapEnsemble a = run_ensemble(source, model, serial);
        const BootstrapEnsemble b = run_ensemble(source, model, serial);
        const BootstrapEnsemble c = run_ensemble(source, model, parallel);
        for (int j = 0; j < 64; ++j) {
            REQUIRE(a.replicates[j].counts.n_sat == b.replicates[j].counts.n_sat);
            REQUIRE(a.replicates[j].counts.n_sat == c.replicates[j].counts.n_sat);
        }
    }
}

TEST_CASE("replicate datasets preserve the episodic shape") {
    const EpisodicDataset source = riverswim_data(6, 15, 99);
    const EstimatedModel model = estimate(source);
    BootstrapConfig config{20, SeedSpec(2), BootstrapMethod::ModelBased, 1};
    const BootstrapEnsemble ensemble = run_ensemble(source, model, config);
    for (const EstimatedModel& replicate : ensemble.replicates)
        REQUIRE(replicate.counts.n_total == source.n());
}

TEST_CASE("bootstrap means reproduce the source estimate to first order") {
    const EpisodicDataset source = riverswim_data(20, 50, 321);
    const EstimatedModel model = estimate(source);
    const StateActionSpace space = source.space();

    // Entry M^(1)_{1,2} in the paper's 1-based labels.
    const int row = sa_index(space, 0, 1);
    const int col = 1;
    REQUIRE(model.kernel_defined[row]);

    const int B = 2000;
    BootstrapConfig config{B, SeedSpec(7), BootstrapMethod::ModelBased, 1};
    const BootstrapEnsemble ensemble = run_ensemble(source, model, config);

    std::vector<double> values;
    values.reserve(B);
    for (const EstimatedModel& replicate : ensemble.replicates) {
        REQUIRE(replicate.kernel_defined[row]);
        values.push_back(replicate.kernel_rows(row, col));
    }
    const oracles::SampleMoments moments = oracles::sample_moments(values);
    const double standard_error = std::sqrt(moments.variance / B);
    REQUIRE(std::abs(moments.mean - model.kernel_rows(row, col)) <=
            3.0 * standard_error);
}

TEST_CASE("bootstrap spread matches the asymptotic covariance diagonal") {
    const EpisodicDataset source = riverswim_data(20, 50, 5150);
    const EstimatedModel model = estimate(source);
    const StateActionSpace space = source.space();
    const double n = double(source.n());

    auto [sim_kernel, sim_policy] = repair_for_simulation(model);
    (void)sim_policy;
    const LambdaBar lambda =
        lambda_bar(sim_kernel, occupation_estimate(model.counts),
                   OccupationFloor{1.0 / n});

    const int B = 1000;
    BootstrapConfig config{B, SeedSpec(23), BootstrapMethod::ModelBased, 1};
    const BootstrapEnsemble ensemble = run_ensemble(source, model, config);

    // Well-visited row with interior probabilities: start state, action right.
    const int s = 0, a = 1;
    REQUIRE(model.counts.sa(s, a) >= 200);
    for (int t = 0; t < space.S; ++t) {
        const double estimate_value = model.kernel_rows(sa_index(space, s, a), t);
        if (estimate_value < 0.1 || estimate_value > 0.9) continue;
        std::vector<double> scaled;
        scaled.reserve(B);
        for (const EstimatedModel& replicate : ensemble.replicates)
            scaled.push_back(std::sqrt(n) *
                             (replicate.kernel_rows(sa_index(space, s, a), t) -
                              estimate_value));
        const double bootstrap_sd =
            std::sqrt(oracles::sample_moments(scaled).variance);
        const double asymptotic_sd =
            std::sqrt(lambda.matrix(sat_index(space, s, a, t),
                                    sat_index(space, s, a, t)));
        REQUIRE_THAT(bootstrap_sd / asymptotic_sd,
                     Catch::Matchers::WithinAbs(1.0, 0.1));
    }
}

TEST_CASE("invalid configs are rejected") {
    const EpisodicDataset source = riverswim_data(2, 5, 1);
    const EstimatedModel model = estimate(source);
    BootstrapConfig config{0, SeedSpec(0), BootstrapMethod::ModelBased, 1};
    REQUIRE_THROWS_AS(run_ensemble(source, model, config), ConfigError);
}
