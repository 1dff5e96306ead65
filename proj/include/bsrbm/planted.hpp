#pragma once

#include "bsrbm/rng.hpp"
#include "bsrbm/types.hpp"

namespace bsrbm {

/// Ground-truth machine: quenched +-1 weights plus the inverse temperature
/// used to generate data from it.
struct PlantedModel {
    BinaryWeights weights;
    double beta = 1.0;
    double correlation = 0.0;
    std::uint64_t seed = 0;
    bool exact_orthogonal = false;  // set when c=0 used the exact construction
};

struct PlantResult {
    BinaryWeights weights;
    bool exact_orthogonal = false;
};

/// Draw a weight matrix with pairwise column overlap controlled by c.
///
/// c = 0: columns are exactly orthogonal when the next power of two >= P
/// divides N (tiled Sylvester-Hadamard columns, random row sign flips, random
/// row permutation); otherwise falls back to i.i.d. columns and reports
/// exact_orthogonal = false.
/// c > 0: column 0 is uniform; each later column copies column 0 entrywise
/// with probability (1+c)/2, so its expected overlap with column 0 is c.
PlantResult plant_weights(const ModelShape& shape, double c, Rng& rng);

PlantedModel make_planted_model(const ModelShape& shape, double c, double beta, std::uint64_t seed);

/// P(tau_mu = +1 | sigma) for every hidden unit.
Vector hidden_conditional(const PlantedModel& model, const IntVector& sigma);

struct GibbsConfig {
    int burn_in = 1000;  // sweeps discarded before the first kept sample
    int thinning = 100;  // sweeps between kept samples
    int n_samples = 1;

    void validate() const;
};

/// Alternating block Gibbs over (sigma, tau); one sweep updates all hidden
/// units then all visible units.
SpinDataset gibbs_sample(const PlantedModel& model, const GibbsConfig& cfg, Rng& rng);

}  // namespace bsrbm
