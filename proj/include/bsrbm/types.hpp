#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bsrbm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using IntVector = Eigen::VectorXi;

/// Invalid arguments, dimension mismatches, out-of-range flags. CLI exit code 1.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// File and format failures (bad magic, checksum, version, truncation). CLI exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite values where the math guarantees finiteness. CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Layer sizes of the bipartite machine: N visible units, P hidden units.
struct ModelShape {
    int n_visible = 0;
    int n_hidden = 0;

    void validate() const {
        if (n_visible < 1 || n_hidden < 1)
            throw ValidationError("ModelShape: n_visible and n_hidden must be >= 1");
    }
    bool operator==(const ModelShape&) const = default;
};

/// Mean of each binary synapse under the factorized variational distribution.
/// Entries live in (-1, 1); training clips them to |lambda| <= 1 - eps_clip.
struct VariationalParams {
    ModelShape shape;
    Matrix lambda;  // N x P

    VariationalParams() = default;
    VariationalParams(ModelShape s, Matrix l);
};

/// Per-synapse prior means m_{i,mu}; all-zero means a uniform prior.
struct PriorMeans {
    ModelShape shape;
    Matrix m;  // N x P

    PriorMeans() = default;
    PriorMeans(ModelShape s, Matrix mm);

    static PriorMeans zero(ModelShape s) { return PriorMeans(s, Matrix::Zero(s.n_visible, s.n_hidden)); }
};

/// A concrete +-1 weight matrix (a decoded or planted configuration).
struct BinaryWeights {
    ModelShape shape;
    IntMatrix xi;  // N x P, entries exactly +-1

    BinaryWeights() = default;
    BinaryWeights(ModelShape s, IntMatrix x);
};

struct DatasetMeta {
    std::string source;  // "planted", "mnist", ...
    double beta = 0.0;
    std::uint64_t seed = 0;
    int burn_in = 0;
    int thinning = 0;
    int threshold = -1;  // mnist binarization threshold, -1 when not applicable
};

/// M visible configurations, one per row, entries exactly +-1.
struct SpinDataset {
    int n = 0;
    IntMatrix samples;  // M x n
    DatasetMeta meta;

    SpinDataset() = default;
    SpinDataset(int n_, IntMatrix s, DatasetMeta meta_ = {});

    int size() const { return static_cast<int>(samples.rows()); }
};

/// Message-passing controls for the equivalent-model solver.
struct MpConfig {
    int max_sweeps = 200;
    double tol = 1e-8;
    double damping = 0.0;  // weight on the previous message, in [0, 1)

    void validate() const;
};

struct TrainConfig {
    double beta = 1.0;
    double eta = 0.05;
    int b1 = 1000;  // Monte-Carlo samples for the data term
    int b2 = 1000;  // Monte-Carlo samples for the model term
    int steps = 200;
    std::uint64_t seed = 0;
    MpConfig mp;
    int quad_points = 21;
    double eps_clip = 1e-3;  // |lambda| <= 1 - eps_clip after every update
    double eps_var = 1e-8;   // floor on the per-hidden-unit variance
    int warmup_steps = 0;    // linear learning-rate ramp, 0 disables
    int log_every = 1;
    bool frozen_fields = false;            // reuse step-0 field samples every step (debug)
    bool warm_start_across_steps = false;  // reuse converged messages per sample index

    void validate() const;
};

/// Decode a variational mean matrix to concrete weights, sign(lambda).
/// A zero entry decodes to +1.
BinaryWeights decode_weights(const VariationalParams& vp);

/// Throws ValidationError unless every entry is finite.
void require_finite(const Matrix& m, const char* what);

inline void require_same_shape(const ModelShape& a, const ModelShape& b, const char* what) {
    if (!(a == b))
        throw ValidationError(std::string(what) + ": shape mismatch");
}

}  // namespace bsrbm
