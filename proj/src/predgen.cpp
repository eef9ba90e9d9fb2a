#include "bapred/predgen.hpp"

#include <algorithm>
#include <random>

namespace bapred {

namespace {

void check_counts(const Configuration& config, int eta_F, int eta_H) {
  NodeSet honest = config.honest();
  if (eta_F < 0 || eta_H < 0) throw DomainError("error counts must be non-negative");
  if (eta_F > config.f()) throw DomainError("eta_F exceeds the number of faulty nodes");
  if (eta_H > static_cast<int>(honest.size())) throw DomainError("eta_H exceeds the number of honest nodes");
}

/// Lowest ids: drop the first eta_H honest nodes, add the first eta_F faulty nodes.
Prediction lowest_ids(const Configuration& config, int eta_F, int eta_H) {
  check_counts(config, eta_F, eta_H);
  NodeSet honest = config.honest();
  std::vector<NodeId> ids(honest.begin() + eta_H, honest.end());
  ids.insert(ids.end(), config.faulty.begin(), config.faulty.begin() + eta_F);
  return Prediction{NodeSet(std::move(ids))};
}

std::vector<NodeId> sample(const NodeSet& from, int k, std::mt19937_64& rng) {
  std::vector<NodeId> pool(from.begin(), from.end());
  // Partial Fisher-Yates with modulo draws.
  for (int i = 0; i < k; ++i) {
    auto remaining = static_cast<std::uint64_t>(pool.size()) - static_cast<std::uint64_t>(i);
    auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng() % remaining);
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

void check_eta(const Configuration& config, int eta) {
  if (eta < 0 || eta > config.n) throw DomainError("eta must lie in 0..n");
}

}  // namespace

Prediction perfect(const Configuration& config) { return Prediction{config.honest()}; }

Prediction with_error(const Configuration& config, int eta_F, int eta_H, std::uint64_t seed) {
  check_counts(config, eta_F, eta_H);
  std::mt19937_64 rng(seed);
  NodeSet honest = config.honest();
  auto dropped = sample(honest, eta_H, rng);
  auto added = sample(config.faulty, eta_F, rng);
  NodeSet p = honest.minus(NodeSet(dropped)).unite(NodeSet(added));
  return Prediction{std::move(p)};
}

Prediction worst_case(const Configuration& config, int eta) {
  check_eta(config, eta);
  int eta_F = std::min(eta, config.f());
  return lowest_ids(config, eta_F, eta - eta_F);
}

Prediction inverse(const Configuration& config, int eta) {
  check_eta(config, eta);
  int eta_H = std::min(eta, config.n - config.f());
  return lowest_ids(config, eta - eta_H, eta_H);
}

Prediction balanced(const Configuration& config, int eta) {
  check_eta(config, eta);
  int h = config.n - config.f();
  int eta_F = std::min((eta + 1) / 2, config.f());
  int eta_H = eta - eta_F;
  if (eta_H > h) {
    eta_H = h;
    eta_F = eta - h;
  }
  return lowest_ids(config, eta_F, eta_H);
}

std::string_view to_string(PredictionSplit split) {
  switch (split) {
    case PredictionSplit::WorstCase: return "worst_case";
    case PredictionSplit::Inverse: return "inverse";
    case PredictionSplit::Balanced: return "balanced";
  }
  return "unknown";
}

Prediction predict(const Configuration& config, int eta, PredictionSplit split) {
  switch (split) {
    case PredictionSplit::WorstCase: return worst_case(config, eta);
    case PredictionSplit::Inverse: return inverse(config, eta);
    case PredictionSplit::Balanced: return balanced(config, eta);
  }
  throw DomainError("unknown prediction split");
}

Prediction random_prediction(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NodeSet p;
  for (int i = 1; i <= n; ++i) {
    if (rng() & 1U) p.insert(NodeId{i});
  }
  return Prediction{std::move(p)};
}

LocalPrediction local_from_global(const std::vector<Prediction>& preds,
                                  const std::map<NodeId, std::size_t>& assignment) {
  LocalPrediction out;
  int expected = 1;
  for (const auto& [id, idx] : assignment) {
    if (id.value != expected) throw DomainError("assignment must cover 1..n");
    out.per_node.push_back(preds.at(idx).members);
    ++expected;
  }
  return out;
}

LocalPrediction replicate(const NodeSet& pred, int n) {
  return LocalPrediction{std::vector<NodeSet>(static_cast<std::size_t>(n), pred)};
}

}  // namespace bapred
