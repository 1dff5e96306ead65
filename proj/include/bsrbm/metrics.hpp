#pragma once

#include "bsrbm/types.hpp"

#include <string>
#include <vector>

namespace bsrbm {

/// Overlap of predicted vs planted receptive fields after undoing the two
/// exact invariances of the model: hidden-unit permutation and per-column
/// sign flips.
struct OverlapReport {
    Vector per_hidden_q;           // Q for predicted column mu, after matching
    std::vector<int> permutation;  // predicted column mu matched to planted column permutation[mu]
    std::vector<int> signs;        // gauge sign applied per matched pair
    double mean_q = 0.0;
    Matrix raw_q;  // P x P, raw_q(mu, nu) = (1/N) pred_mu . plant_nu
    std::string method;  // "exhaustive" (P <= 8) or "greedy"
};

OverlapReport matched_overlap(const BinaryWeights& predicted, const BinaryWeights& planted);

/// Raw diagonal overlaps without any matching.
Vector unmatched_overlap(const BinaryWeights& predicted, const BinaryWeights& planted);

std::string overlap_to_json(const OverlapReport& report);

}  // namespace bsrbm
