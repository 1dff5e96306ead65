#include "bsrbm/types.hpp"

namespace bsrbm {

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite())
        throw ValidationError(std::string(what) + ": non-finite entries");
}

namespace {

void require_dims(const Eigen::Index rows, const Eigen::Index cols, const ModelShape& s,
                  const char* what) {
    if (rows != s.n_visible || cols != s.n_hidden)
        throw ValidationError(std::string(what) + ": matrix does not match shape");
}

void require_signs(const IntMatrix& m, const char* what) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != 1 && m(i, j) != -1)
                throw ValidationError(std::string(what) + ": entries must be +-1");
}

}  // namespace

VariationalParams::VariationalParams(ModelShape s, Matrix l) : shape(s), lambda(std::move(l)) {
    shape.validate();
    require_dims(lambda.rows(), lambda.cols(), shape, "VariationalParams");
    require_finite(lambda, "VariationalParams");
    if (lambda.cwiseAbs().maxCoeff() > 1.0)
        throw ValidationError("VariationalParams: |lambda| must be <= 1");
}

PriorMeans::PriorMeans(ModelShape s, Matrix mm) : shape(s), m(std::move(mm)) {
    shape.validate();
    require_dims(m.rows(), m.cols(), shape, "PriorMeans");
    require_finite(m, "PriorMeans");
    if (m.cwiseAbs().maxCoeff() >= 1.0)
        throw ValidationError("PriorMeans: |m| must be < 1");
}

BinaryWeights::BinaryWeights(ModelShape s, IntMatrix x) : shape(s), xi(std::move(x)) {
    shape.validate();
    require_dims(xi.rows(), xi.cols(), shape, "BinaryWeights");
    require_signs(xi, "BinaryWeights");
}

SpinDataset::SpinDataset(int n_, IntMatrix s, DatasetMeta meta_)
    : n(n_), samples(std::move(s)), meta(std::move(meta_)) {
    if (n < 1) throw ValidationError("SpinDataset: n must be >= 1");
    if (samples.rows() < 1) throw ValidationError("SpinDataset: needs at least one sample");
    if (samples.cols() != n) throw ValidationError("SpinDataset: sample length != n");
    require_signs(samples, "SpinDataset");
}

void MpConfig::validate() const {
    if (max_sweeps < 1) throw ValidationError("MpConfig: max_sweeps must be >= 1");
    if (!(tol > 0)) throw ValidationError("MpConfig: tol must be > 0");
    if (damping < 0 || damping >= 1) throw ValidationError("MpConfig: damping must be in [0, 1)");
}

void TrainConfig::validate() const {
    if (!(beta >= 0)) throw ValidationError("TrainConfig: beta must be >= 0");
    if (!(eta >= 0)) throw ValidationError("TrainConfig: eta must be >= 0");
    if (b1 < 1 || b2 < 1) throw ValidationError("TrainConfig: b1 and b2 must be >= 1");
    if (steps < 0) throw ValidationError("TrainConfig: steps must be >= 0");
    if (quad_points < 1) throw ValidationError("TrainConfig: quad_points must be >= 1");
    if (!(eps_clip > 0 && eps_clip < 1)) throw ValidationError("TrainConfig: eps_clip in (0, 1)");
    if (!(eps_var > 0)) throw ValidationError("TrainConfig: eps_var must be > 0");
    if (warmup_steps < 0) throw ValidationError("TrainConfig: warmup_steps must be >= 0");
    if (log_every < 1) throw ValidationError("TrainConfig: log_every must be >= 1");
    mp.validate();
}

BinaryWeights decode_weights(const VariationalParams& vp) {
    IntMatrix xi(vp.lambda.rows(), vp.lambda.cols());
    for (Eigen::Index j = 0; j < xi.cols(); ++j)
        for (Eigen::Index i = 0; i < xi.rows(); ++i)
            xi(i, j) = vp.lambda(i, j) >= 0.0 ? 1 : -1;
    return BinaryWeights(vp.shape, std::move(xi));
}

}  // namespace bsrbm
