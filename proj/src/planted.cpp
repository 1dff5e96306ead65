#include "bsrbm/planted.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <utility>

namespace bsrbm {

void GibbsConfig::validate() const {
    if (burn_in < 0) throw ValidationError("GibbsConfig: burn_in must be >= 0");
    if (thinning < 1) throw ValidationError("GibbsConfig: thinning must be >= 1");
    if (n_samples < 1) throw ValidationError("GibbsConfig: n_samples must be >= 1");
}

namespace {

// Sylvester-Hadamard entry: parity of popcount(r & c).
int hadamard_entry(unsigned r, unsigned c) {
    return (std::popcount(r & c) & 1u) ? -1 : 1;
}

IntMatrix random_sign_matrix(int n, int p, Rng& rng) {
    IntMatrix xi(n, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) xi(i, j) = rng.bernoulli(0.5) ? 1 : -1;
    return xi;
}

}  // namespace

PlantResult plant_weights(const ModelShape& shape, double c, Rng& rng) {
    shape.validate();
    if (c < 0.0 || c >= 1.0)
        throw ValidationError("plant_weights: correlation must be in [0, 1)");
    const int n = shape.n_visible;
    const int p = shape.n_hidden;
    if (p > n) throw ValidationError("plant_weights: requires P <= N");

    if (c > 0.0) {
        IntMatrix xi(n, p);
        for (int i = 0; i < n; ++i) xi(i, 0) = rng.bernoulli(0.5) ? 1 : -1;
        const double copy_prob = 0.5 * (1.0 + c);
        for (int j = 1; j < p; ++j)
            for (int i = 0; i < n; ++i)
                xi(i, j) = rng.bernoulli(copy_prob) ? xi(i, 0) : -xi(i, 0);
        return {BinaryWeights(shape, std::move(xi)), false};
    }

    // c = 0: exact orthogonality via tiled Sylvester-Hadamard columns when the
    // block size divides N; row sign flips and a row permutation keep all
    // pairwise column products at zero while randomizing the ensemble.
    const unsigned block = std::bit_ceil(static_cast<unsigned>(p));
    if (p > 1 && n % static_cast<int>(block) != 0) {
        return {BinaryWeights(shape, random_sign_matrix(n, p, rng)), false};
    }

    IntMatrix xi(n, p);
    for (int i = 0; i < n; ++i) {
        const int flip = rng.bernoulli(0.5) ? -1 : 1;
        const unsigned r = static_cast<unsigned>(i) % block;
        for (int j = 0; j < p; ++j) xi(i, j) = flip * hadamard_entry(r, static_cast<unsigned>(j));
    }
    // Fisher-Yates row shuffle.
    for (int i = n - 1; i > 0; --i) {
        const int k = rng.uniform_int(i + 1);
        if (k != i)
            for (int j = 0; j < p; ++j) std::swap(xi(i, j), xi(k, j));
    }
    return {BinaryWeights(shape, std::move(xi)), true};
}

PlantedModel make_planted_model(const ModelShape& shape, double c, double beta,
                                std::uint64_t seed) {
    if (!(beta > 0)) throw ValidationError("make_planted_model: beta must be > 0");
    Rng rng = Rng(seed).derive("plant");
    PlantResult res = plant_weights(shape, c, rng);
    return PlantedModel{std::move(res.weights), beta, c, seed, res.exact_orthogonal};
}

Vector hidden_conditional(const PlantedModel& model, const IntVector& sigma) {
    const int n = model.weights.shape.n_visible;
    const int p = model.weights.shape.n_hidden;
    if (sigma.size() != n) throw ValidationError("hidden_conditional: sigma length != N");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Vector probs(p);
    for (int mu = 0; mu < p; ++mu) {
        double x = 0.0;
        for (int i = 0; i < n; ++i) x += model.weights.xi(i, mu) * sigma[i];
        x *= scale;
        probs[mu] = 1.0 / (1.0 + std::exp(-2.0 * model.beta * x));
    }
    return probs;
}

SpinDataset gibbs_sample(const PlantedModel& model, const GibbsConfig& cfg, Rng& rng) {
    cfg.validate();
    const int n = model.weights.shape.n_visible;
    const int p = model.weights.shape.n_hidden;
    const double beta = model.beta;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    IntVector sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = rng.bernoulli(0.5) ? 1 : -1;
    IntVector tau(p);

    auto sweep = [&] {
        for (int mu = 0; mu < p; ++mu) {
            double x = 0.0;
            for (int i = 0; i < n; ++i) x += model.weights.xi(i, mu) * sigma[i];
            const double prob = 1.0 / (1.0 + std::exp(-2.0 * beta * scale * x));
            tau[mu] = rng.bernoulli(prob) ? 1 : -1;
        }
        for (int i = 0; i < n; ++i) {
            double field = 0.0;
            for (int mu = 0; mu < p; ++mu) field += tau[mu] * model.weights.xi(i, mu);
            const double prob = 1.0 / (1.0 + std::exp(-2.0 * beta * scale * field));
            sigma[i] = rng.bernoulli(prob) ? 1 : -1;
        }
    };

    for (int t = 0; t < cfg.burn_in; ++t) sweep();

    IntMatrix samples(cfg.n_samples, n);
    for (int a = 0; a < cfg.n_samples; ++a) {
        for (int t = 0; t < cfg.thinning; ++t) sweep();
        samples.row(a) = sigma.transpose();
    }

    DatasetMeta meta;
    meta.source = "planted";
    meta.beta = beta;
    meta.seed = rng.seed();
    meta.burn_in = cfg.burn_in;
    meta.thinning = cfg.thinning;
    return SpinDataset(n, std::move(samples), std::move(meta));
}

}  // namespace bsrbm
