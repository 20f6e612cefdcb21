#include "rdrl/agents/agent.hpp"

#include <stdexcept>
#include <string>

#include "rdrl/agents/ddpg.hpp"
#include "rdrl/agents/ppo.hpp"
#include "rdrl/agents/trpo.hpp"

namespace rdrl::agents {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kDdpg: return "ddpg";
    case Algorithm::kPpo: return "ppo";
    case Algorithm::kTrpo: return "trpo";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "ddpg") return Algorithm::kDdpg;
  if (name == "ppo") return Algorithm::kPpo;
  if (name == "trpo") return Algorithm::kTrpo;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::unique_ptr<Agent> make_agent(Algorithm algo, int obs_dim, int action_dim,
                                  const Hyperparams& hp, Rng& init_rng) {
  hp.validate();
  switch (algo) {
    case Algorithm::kDdpg: return std::make_unique<DdpgAgent>(obs_dim, action_dim, hp, init_rng);
    case Algorithm::kPpo: return std::make_unique<PpoAgent>(obs_dim, action_dim, hp, init_rng);
    case Algorithm::kTrpo: return std::make_unique<TrpoAgent>(obs_dim, action_dim, hp, init_rng);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::unique_ptr<Agent> agent_from_checkpoint(const Checkpoint& ckpt) {
  const auto& meta = ckpt.metadata;
  try {
    const Algorithm algo = parse_algorithm(meta.at("algorithm").get<std::string>());
    const int obs_dim = meta.at("observation_size").get<int>();
    const int action_dim = meta.at("action_size").get<int>();
    Hyperparams hp;
    if (meta.contains("hyperparams")) merge_json(meta.at("hyperparams"), hp);
    Rng rng(0);
    auto agent = make_agent(algo, obs_dim, action_dim, hp, rng);
    agent->restore(ckpt);
    return agent;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint metadata incomplete: ") + e.what());
  }
}

}  // namespace rdrl::agents
