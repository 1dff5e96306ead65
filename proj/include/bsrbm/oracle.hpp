#pragma once

#include "bsrbm/cavity.hpp"
#include "bsrbm/planted.hpp"
#include "bsrbm/types.hpp"

namespace bsrbm {

// Brute-force references for small systems. State index encoding throughout:
// bit i of the index set means sigma_i = +1.

struct ExactThermo {
    double log_z = 0.0;
    Vector m_vis;  // <sigma_i>
    Vector m_hid;  // <tanh(beta G_mu + beta H_mu)>
    Matrix corr;   // <sigma_i tanh(beta G_mu + beta H_mu)>
};

/// Exact partition function and moments of an equivalent model by summing
/// all 2^N states (N <= 20). Accumulation is done in log space.
ExactThermo enumerate_equivalent(const EquivalentModel& model);

struct ExactPlanted {
    double log_z = 0.0;
    Vector probs;  // 2^N state probabilities
    Vector m_vis;
};

/// Exact Boltzmann distribution of a planted machine (N <= 20).
ExactPlanted enumerate_planted(const PlantedModel& model);

struct ExactPosterior {
    Vector probs;           // 2^(N*P) weight-configuration probabilities
    Matrix marginal_means;  // N x P, <xi_i^mu> under the posterior
};

/// Exact posterior over all weight configurations given a dataset, under a
/// uniform prior. Weight config index encoding: bit (i + N*mu) set means
/// xi_i^mu = +1. Guards: N*P <= 16 and N <= 12.
ExactPosterior exact_posterior(const SpinDataset& data, const ModelShape& shape, double beta);

}  // namespace bsrbm
