#include <catch2/catch_amalgamated.hpp>

#include "cmcboot/counting.hpp"
#include "cmcboot/environments.hpp"
#include "cmcboot/reference_chain.hpp"
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

}  // namespace

TEST_CASE("counts of a single transition") {
    const StateActionSpace space(2, 1);
    const EpisodicDataset dataset(space, {{Step{0, 0, 1}}});
    const CountStatistics counts = count(dataset);
    REQUIRE(counts.sat(0, 0, 1) == 1);
    REQUIRE(counts.sat(0, 0, 0) == 0);
    REQUIRE(counts.sat(1, 0, 0) == 0);
    REQUIRE(counts.sa(0, 0) == 1);
    REQUIRE(counts.state(0) == 1);
    REQUIRE(counts.n_total == 1);
}

TEST_CASE("counting is linear under episode duplication") {
    const StateActionSpace space(2, 1);
    const Episode episode = {Step{0, 0, 1}, Step{1, 0, 0}};
    const CountStatistics counts =
        count(EpisodicDataset(space, {episode, episode}));
    REQUIRE(counts.sat(0, 0, 1) == 2);
    REQUIRE(counts.sat(1, 0, 0) == 2);
    REQUIRE(counts.n_total == 4);
}

TEST_CASE("counts agree with a naive recount on simulated data") {
    const MdpInstance mdp = riverswim();
    const StateActionSpace space = mdp.kernel.space();
    const EpisodicDataset dataset = generate_dataset(
        mdp.kernel, mostly_right(space), 0, 10, 50, SeedSpec(2024).child(0));
    const CountStatistics counts = count(dataset);
    for (int s = 0; s < space.S; ++s)
        for (int a = 0; a < space.A; ++a)
            for (int t = 0; t < space.S; ++t)
                REQUIRE(counts.sat(s, a, t) ==
                        oracles::naive_triple_count(dataset, s, a, t));
}

TEST_CASE("estimate divides counts where defined and flags the rest") {
    const StateActionSpace space(2, 2);
    CountStatistics counts(space);
    // n_sat[0][0] = (3,1): three 0->0 and one 0->1 transitions under action 0.
    for (int i = 0; i < 3; ++i) counts.add_transition(0, 0, 0);
    counts.add_transition(0, 0, 1);
    const EstimatedModel model = estimate(counts);
    REQUIRE(model.kernel_defined[sa_index(space, 0, 0)]);
    REQUIRE(model.kernel_rows(sa_index(space, 0, 0), 0) == 0.75);
    REQUIRE(model.kernel_rows(sa_index(space, 0, 0), 1) == 0.25);
    REQUIRE_FALSE(model.kernel_defined[sa_index(space, 0, 1)]);
    REQUIRE_FALSE(model.kernel_defined[sa_index(space, 1, 0)]);
    REQUIRE_FALSE(model.policy_defined[1]);
    REQUIRE(model.policy_defined[0]);
    REQUIRE(model.policy_rows(0, 0) == 1.0);
}

TEST_CASE("empirical behavior policy is the action ratio") {
    const StateActionSpace space(1, 2);
    CountStatistics counts(space);
    for (int i = 0; i < 8; ++i) counts.add_transition(0, 0, 0);
    for (int i = 0; i < 2; ++i) counts.add_transition(0, 1, 0);
    const EstimatedModel model = estimate(counts);
    REQUIRE(model.policy_rows(0, 0) == 0.8);
    REQUIRE(model.policy_rows(0, 1) == 0.2);
}

TEST_CASE("repair passes defined rows through and fills the rest") {
    const StateActionSpace space(6, 2);

    SECTION("fully defined models are unchanged") {
        const MdpInstance mdp = riverswim();
        const EpisodicDataset dataset =
            generate_dataset(mdp.kernel, mostly_right(space), 0, 200, 50,
                             SeedSpec(7).child(0));
        const EstimatedModel model = estimate(dataset);
        REQUIRE(model.fully_defined());
        auto [kernel, policy] = repair_for_simulation(model);
        REQUIRE(kernel.block() == model.kernel_rows);
        REQUIRE(policy.probs() == model.policy_rows);
    }

    SECTION("undefined rows become self-loops and uniform actions") {
        CountStatistics counts(space);
        counts.add_transition(0, 0, 0);  // leaves most rows unvisited
        const EstimatedModel model = estimate(counts);
        REQUIRE_FALSE(model.kernel_defined[sa_index(space, 3, 1)]);
        auto [kernel, policy] = repair_for_simulation(model);
        for (int t = 0; t < space.S; ++t)
            REQUIRE(kernel.prob(3, 1, t) == (t == 3 ? 1.0 : 0.0));
        REQUIRE(policy.prob(5, 0) == 0.5);
        REQUIRE(policy.prob(5, 1) == 0.5);
    }
}

TEST_CASE("repaired outputs always satisfy the full invariants") {
    // TransitionKernel / Policy constructors re-validate; surviving
    // construction is the assertion.
    const StateActionSpace space(4, 3);
    RngStream rng = SeedSpec(11).stream(0);
    for (int trial = 0; trial < 20; ++trial) {
        CountStatistics counts(space);
        const int transitions = 1 + int(rng.uniform_below(30));
        for (int i = 0; i < transitions; ++i)
            counts.add_transition(int(rng.uniform_below(4)),
                                  int(rng.uniform_below(3)),
                                  int(rng.uniform_below(4)));
        REQUIRE_NOTHROW(repair_for_simulation(estimate(counts)));
    }
}

TEST_CASE("estimators are invariant under dataset duplication") {
    const MdpInstance mdp = riverswim();
    const StateActionSpace space = mdp.kernel.space();
    const EpisodicDataset dataset = generate_dataset(
        mdp.kernel, mostly_right(space), 0, 5, 30, SeedSpec(3).child(0));
    std::vector<Episode> doubled = dataset.episodes();
    for (const Episode& episode : dataset.episodes())
        doubled.push_back(episode);

    const EstimatedModel once = estimate(dataset);
    const EstimatedModel twice = estimate(EpisodicDataset(space, doubled));
    REQUIRE(once.kernel_rows == twice.kernel_rows);
    REQUIRE(once.policy_rows == twice.policy_rows);
    REQUIRE(once.kernel_defined == twice.kernel_defined);
}

TEST_CASE("defined rows sum to one within a single division's error") {
    const MdpInstance mdp = riverswim();
    const StateActionSpace space = mdp.kernel.space();
    const EstimatedModel model = estimate(
        generate_dataset(mdp.kernel, mostly_right(space), 0, 20, 50,
                         SeedSpec(17).child(0)));
    for (int row = 0; row < space.sa_count(); ++row)
        if (model.kernel_defined[row])
            REQUIRE_THAT(model.kernel_rows.row(row).sum(),
                         Catch::Matchers::WithinAbs(1.0, 1e-12));
    for (int s = 0; s < space.S; ++s)
        if (model.policy_defined[s])
            REQUIRE_THAT(model.policy_rows.row(s).sum(),
                         Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("occupation estimate") {
    const StateActionSpace space(2, 1);

    SECTION("simple ratios") {
        CountStatistics counts(space);
        counts.add_transition(0, 0, 1);
        counts.add_transition(0, 0, 1);
        counts.add_transition(1, 0, 0);
        counts.add_transition(1, 0, 0);
        const Eigen::MatrixXd occupation = occupation_estimate(counts);
        REQUIRE(occupation(0, 0) == 0.5);
        REQUIRE(occupation(1, 0) == 0.5);
    }

    SECTION("all mass at one pair") {
        CountStatistics counts(space);
        counts.add_transition(1, 0, 1);
        const Eigen::MatrixXd occupation = occupation_estimate(counts);
        REQUIRE(occupation(1, 0) == 1.0);
        REQUIRE(occupation(0, 0) == 0.0);
    }

    SECTION("empty counts are an error") {
        REQUIRE_THROWS_AS(occupation_estimate(CountStatistics(space)),
                          EmptyDatasetError);
    }
}

TEST_CASE("occupation of a long chain approaches the reference stationary law") {
    const MdpInstance mdp = riverswim();
    const StateActionSpace space = mdp.kernel.space();
    const Policy behavior = mostly_right(space);

    const EpisodicDataset chain = generate_dataset(
        mdp.kernel, behavior, 0, 1, 1000000, SeedSpec(31).child(0));
    const Eigen::MatrixXd occupation = occupation_estimate(count(chain));
    REQUIRE_THAT(occupation.sum(), Catch::Matchers::WithinAbs(1.0, 1e-12));

    const Eigen::VectorXd stationary =
        stationary_distribution(build_reference_chain(mdp.kernel, behavior));
    for (int s = 0; s < space.S; ++s)
        for (int a = 0; a < space.A; ++a)
            REQUIRE_THAT(occupation(s, a),
                         Catch::Matchers::WithinAbs(
                             stationary(sa_index(space, s, a)), 0.01));
}
