#pragma once

#include "bapred/core.hpp"

#include <cstdint>
#include <map>

namespace bapred {

/// P = H.
Prediction perfect(const Configuration& config);

/// H minus eta_H seeded-random honest nodes, plus eta_F seeded-random faulty nodes.
Prediction with_error(const Configuration& config, int eta_F, int eta_H, std::uint64_t seed);

/// Error eta with eta_F = min(eta, f); lowest ids first.
Prediction worst_case(const Configuration& config, int eta);

/// Error eta with eta_H = min(eta, |H|); lowest ids first.
Prediction inverse(const Configuration& config, int eta);

/// Error eta split as evenly as feasibility allows (eta_F gets the odd unit).
Prediction balanced(const Configuration& config, int eta);

enum class PredictionSplit : std::uint8_t { WorstCase, Inverse, Balanced };

std::string_view to_string(PredictionSplit split);
Prediction predict(const Configuration& config, int eta, PredictionSplit split);

/// Each node independently included with probability 1/2.
Prediction random_prediction(int n, std::uint64_t seed);

/// per_node[i] = preds[assignment[i]].
LocalPrediction local_from_global(const std::vector<Prediction>& preds, const std::map<NodeId, std::size_t>& assignment);

/// Same prediction for all n nodes.
LocalPrediction replicate(const NodeSet& pred, int n);

}  // namespace bapred
