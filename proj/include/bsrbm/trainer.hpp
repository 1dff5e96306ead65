#pragma once

#include "bsrbm/rng.hpp"
#include "bsrbm/types.hpp"

#include <optional>

namespace bsrbm {

/// Per-sample Gaussian statistics of the weighted-sum inputs: means G_mu^a
/// and shared variances Xi_mu^2.
struct GaussianStats {
    Matrix g;       // M x P
    Vector xi_var;  // P
};

GaussianStats gaussian_stats(const VariationalParams& vp, const SpinDataset& data, double eps_var);

/// Exact KL divergence between the factorized variational distribution and
/// the factorized prior. Nonnegative; zero iff lambda == m entrywise.
double kl_regularizer(const VariationalParams& vp, const PriorMeans& prior);

/// `count` i.i.d. standard-normal field vectors, one per row.
Matrix draw_field_samples(int count, int p, Rng& rng);

struct LowerBoundReport {
    double kl_reg = 0.0;
    double data_term = 0.0;
    double model_term = 0.0;
    double lb = 0.0;  // -kl_reg + data_term - model_term
    double per_param_lb = 0.0;
    int mp_nonconverged = 0;
};

struct GradientParts {
    Matrix reg;    // exact prior/regularizer gradient
    Matrix data;   // data term, = data_field - data_stein
    Matrix model;  // equivalent-model term; ascent direction is reg + data - model
    // The two pieces of the data term: the G-coupling part and the
    // variance-derivative part in its Stein form.
    Matrix data_field;
    Matrix data_stein;
    int mp_nonconverged = 0;
};

/// Monte-Carlo lower bound with caller-supplied field samples (rows of
/// fields_b1 / fields_b2). Deterministic given the inputs.
LowerBoundReport lower_bound_with_fields(const VariationalParams& vp, const PriorMeans& prior,
                                         const SpinDataset& data, const Matrix& fields_b1,
                                         const Matrix& fields_b2, const TrainConfig& cfg);

/// Convenience wrapper drawing B1 and B2 field samples from two sub-streams
/// of `rng` ("fields-b1", "fields-b2").
LowerBoundReport lower_bound(const VariationalParams& vp, const PriorMeans& prior,
                             const SpinDataset& data, const TrainConfig& cfg, Rng& rng);

GradientParts gradient(const VariationalParams& vp, const PriorMeans& prior,
                       const SpinDataset& data, const Matrix& fields_b1, const Matrix& fields_b2,
                       const TrainConfig& cfg);

struct StepRecord {
    int step = 0;
    LowerBoundReport report;
    double mean_log_z = 0.0;  // mean ln Z over the step's field samples
};

/// Consumes one record per logged step. Implementations may look at the
/// current parameters (e.g. to compute overlaps with a planted model).
class TrajectorySink {
public:
    virtual ~TrajectorySink() = default;
    virtual void on_step(const StepRecord& record, const VariationalParams& vp) = 0;
};

struct Checkpoint {
    int step = 0;
    VariationalParams lambda;
    PriorMeans prior;
    TrainConfig config;
    LowerBoundReport trajectory_tail;
    // RNG state is (config.seed, step): every stream used by train() is
    // derived from the master seed and the step index.
};

/// Gradient ascent on the lower bound. Evaluates the objective at the
/// current parameters, logs it (step 0 is the initialization), updates
/// lambda with clipping, and repeats for cfg.steps updates.
///
/// Parallelism: the per-field-sample solver runs are distributed over
/// threads (BSRBM_THREADS, default hardware concurrency); results land in
/// per-sample slots and are reduced in sample order, so trajectories are
/// bit-identical for any thread count.
Checkpoint train(const SpinDataset& data, const PriorMeans& prior, const TrainConfig& cfg,
                 const VariationalParams* init = nullptr, TrajectorySink* sink = nullptr);

/// Default initialization: i.i.d. uniform in [-0.01, 0.01] from the seed's
/// "init" sub-stream.
VariationalParams init_params(const ModelShape& shape, std::uint64_t seed);

}  // namespace bsrbm
