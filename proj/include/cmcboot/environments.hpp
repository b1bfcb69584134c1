#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmcboot/types.hpp"

namespace cmcboot {

/// A complete MDP definition: kernel, rewards, discount, and a name.
struct MdpInstance {
    TransitionKernel kernel;
    RewardTable rewards;
    std::string name;
};

/**
The six-state RiverSwim MDP (actions: 0 = swim left, 1 = swim right).

Swimming left always succeeds; swimming right mostly stays in place and
occasionally advances, so upstream states are rarely visited. Rewards sit at
the two ends: 1 for holding the leftmost state with action 0 and 10 for
pushing right out of the rightmost state. Discount factor 0.95.
*/
inline MdpInstance riverswim() {
    const StateActionSpace space(6, 2);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(space.sa_count(), space.S);
    for (int s = 0; s < 6; ++s) {
        // Action 0: deterministic move left (self-loop at the left bank).
        block(sa_index(space, s, 0), s == 0 ? 0 : s - 1) = 1.0;
        // Action 1: noisy move right.
        const int right = sa_index(space, s, 1);
        if (s == 0) {
            block(right, 0) = 0.7;
            block(right, 1) = 0.3;
        } else if (s == 5) {
            block(right, 4) = 0.7;
            block(right, 5) = 0.3;
        } else {
            block(right, s - 1) = 0.1;
            block(right, s) = 0.6;
            block(right, s + 1) = 0.3;
        }
    }
    Eigen::MatrixXd rewards = Eigen::MatrixXd::Zero(6, 2);
    rewards(0, 0) = 1.0;
    rewards(5, 1) = 10.0;
    return MdpInstance{TransitionKernel(space, std::move(block)),
                       RewardTable(space, std::move(rewards), 0.95),
                       "riverswim"};
}

/// Serialize an MDP to the generic JSON format.
inline nlohmann::json mdp_to_json(const MdpInstance& mdp) {
    const StateActionSpace& space = mdp.kernel.space();
    nlohmann::json kernel = nlohmann::json::array();
    for (int s = 0; s < space.S; ++s) {
        nlohmann::json per_action = nlohmann::json::array();
        for (int a = 0; a < space.A; ++a) {
            nlohmann::json row = nlohmann::json::array();
            for (int t = 0; t < space.S; ++t)
                row.push_back(mdp.kernel.prob(s, a, t));
            per_action.push_back(std::move(row));
        }
        kernel.push_back(std::move(per_action));
    }
    nlohmann::json rewards = nlohmann::json::array();
    for (int s = 0; s < space.S; ++s) {
        nlohmann::json row = nlohmann::json::array();
        for (int a = 0; a < space.A; ++a)
            row.push_back(mdp.rewards.reward(s, a));
        rewards.push_back(std::move(row));
    }
    return nlohmann::json{{"name", mdp.name},
                          {"S", space.S},
                          {"A", space.A},
                          {"kernel", std::move(kernel)},
                          {"rewards", std::move(rewards)},
                          {"gamma", mdp.rewards.gamma()}};
}

inline MdpInstance mdp_from_json(const nlohmann::json& doc,
                                 const std::string& where) {
    try {
        const int S = doc.at("S").get<int>();
        const int A = doc.at("A").get<int>();
        const StateActionSpace space(S, A);
        const auto probs =
            doc.at("kernel").get<std::vector<std::vector<std::vector<double>>>>();
        const auto reward_rows =
            doc.at("rewards").get<std::vector<std::vector<double>>>();
        const double gamma = doc.at("gamma").get<double>();

        TransitionKernel kernel = validate_kernel(space, probs);
        if (int(reward_rows.size()) != S)
            throw ValidationError("rewards array has wrong state count");
        Eigen::MatrixXd rewards(S, A);
        for (int s = 0; s < S; ++s) {
            if (int(reward_rows[s].size()) != A)
                throw ValidationError("rewards row " + std::to_string(s) +
                                      " has wrong length");
            for (int a = 0; a < A; ++a) rewards(s, a) = reward_rows[s][a];
        }
        std::string name = doc.value("name", "mdp");
        return MdpInstance{std::move(kernel),
                           RewardTable(space, std::move(rewards), gamma),
                           std::move(name)};
    } catch (const nlohmann::json::exception& error) {
        throw ParseError(where + ": " + error.what());
    } catch (const Error& error) {
        throw ValidationError(where + ": " + error.what());
    }
}

/// Load and validate an MDP file in the generic JSON format.
inline MdpInstance load_mdp(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open MDP file: " + path);
    nlohmann::json doc;
    try {
        file >> doc;
    } catch (const nlohmann::json::exception& error) {
        throw ParseError(path + ": " + error.what());
    }
    return mdp_from_json(doc, path);
}

inline void save_mdp(const MdpInstance& mdp, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot write MDP file: " + path);
    file << mdp_to_json(mdp).dump(2) << '\n';
}

/// Write a dataset as JSON Lines: one episode per line as [[s,a,s'], ...].
inline void save_dataset(const EpisodicDataset& dataset, std::ostream& out) {
    for (const Episode& episode : dataset.episodes()) {
        nlohmann::json line = nlohmann::json::array();
        for (const Step& step : episode)
            line.push_back({step.state, step.action, step.next});
        out << line.dump() << '\n';
    }
}

inline void save_dataset(const EpisodicDataset& dataset,
                         const std::string& path) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot write dataset file: " + path);
    save_dataset(dataset, file);
}

inline EpisodicDataset load_dataset(const StateActionSpace& space,
                                    std::istream& in) {
    std::vector<Episode> episodes;
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& error) {
            throw ParseError("dataset line " + std::to_string(line_number) +
                             ": " + error.what());
        }
        Episode episode;
        for (const auto& triple : doc) {
            if (!triple.is_array() || triple.size() != 3)
                throw ParseError("dataset line " + std::to_string(line_number) +
                                 ": steps must be [s,a,s'] triples");
            episode.push_back(Step{triple[0].get<int>(), triple[1].get<int>(),
                                   triple[2].get<int>()});
        }
        episodes.push_back(std::move(episode));
    }
    return EpisodicDataset(space, std::move(episodes));
}

inline EpisodicDataset load_dataset(const StateActionSpace& space,
                                    const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open dataset file: " + path);
    return load_dataset(space, file);
}

}  // namespace cmcboot
