#include "bsrbm/trainer.hpp"

#include "bsrbm/cavity.hpp"
#include "bsrbm/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace bsrbm {

namespace {

int env_thread_count() {
    if (const char* v = std::getenv("BSRBM_THREADS")) {
        const int t = std::atoi(v);
        if (t >= 1) return t;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Run fn(s) for s in [0, count) across threads. Each index is processed by
// exactly one thread; callers keep per-index output slots so results do not
// depend on the partition.
template <class Fn>
void parallel_for_index(int count, Fn&& fn) {
    const int threads = std::min(count, env_thread_count());
    if (threads <= 1) {
        for (int s = 0; s < count; ++s) fn(s);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        const int lo = static_cast<int>(static_cast<long long>(count) * t / threads);
        const int hi = static_cast<int>(static_cast<long long>(count) * (t + 1) / threads);
        pool.emplace_back([lo, hi, &fn] {
            for (int s = lo; s < hi; ++s) fn(s);
        });
    }
    for (auto& th : pool) th.join();
}

Matrix clipped(Matrix lambda, double eps_clip) {
    const double bound = 1.0 - eps_clip;
    return lambda.cwiseMax(-bound).cwiseMin(bound);
}

struct StepEval {
    GradientParts parts;
    LowerBoundReport report;
    double mean_log_z = 0.0;
};

// One full evaluation of the objective and its gradient at fixed field
// samples. sigma_d is the dataset cast to double, one sample per row.
StepEval evaluate_step(const VariationalParams& vp, const PriorMeans& prior,
                       const Matrix& sigma_d, const Matrix& fields_b1, const Matrix& fields_b2,
                       const TrainConfig& cfg, const GaussHermite& quad,
                       std::vector<CavityState>* warm_states) {
    require_same_shape(vp.shape, prior.shape, "evaluate_step");
    const int n = vp.shape.n_visible;
    const int p = vp.shape.n_hidden;
    const int m = static_cast<int>(sigma_d.rows());
    if (sigma_d.cols() != n) throw ValidationError("evaluate_step: dataset length != N");
    if (fields_b1.cols() != p || fields_b2.cols() != p)
        throw ValidationError("evaluate_step: field samples have wrong width");
    const int b1 = static_cast<int>(fields_b1.rows());
    const int b2 = static_cast<int>(fields_b2.rows());
    if (b1 < 1 || b2 < 1) throw ValidationError("evaluate_step: empty field samples");

    const double beta = cfg.beta;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    StepEval ev;
    ev.report.kl_reg = kl_regularizer(vp, prior);
    ev.parts.reg = (prior.m.array().atanh() - vp.lambda.array().atanh()).matrix();

    const Matrix g = sigma_d * vp.lambda * inv_sqrt_n;  // M x P
    const Vector xi_var =
        ((1.0 - vp.lambda.array().square()).colwise().sum().transpose() / n)
            .max(cfg.eps_var)
            .matrix();
    const Vector xi_sd = xi_var.array().sqrt().matrix();

    // Data term: sequential over field samples (cheap next to the solver
    // runs) so results never depend on threading.
    Matrix tanh_sum = Matrix::Zero(m, p);
    Vector sech2_sum = Vector::Zero(p);
    double lncosh_sum = 0.0;
    Matrix args(m, p), tanh_v(m, p);
    const Matrix beta_g = beta * g;
    for (int s = 0; s < b1; ++s) {
        const Eigen::RowVectorXd shift =
            beta * (xi_sd.array() * fields_b1.row(s).transpose().array()).matrix().transpose();
        args = beta_g.rowwise() + shift;
        tanh_v = args.array().tanh().matrix();
        tanh_sum += tanh_v;
        sech2_sum +=
            ((1.0 - tanh_v.array().square()).colwise().sum().transpose()).matrix();
        lncosh_sum +=
            (args.array().abs() + (-2.0 * args.array().abs()).exp().log1p() - M_LN2).sum();
    }
    ev.parts.data_field = (beta / (b1 * std::sqrt(static_cast<double>(n)))) *
                          (sigma_d.transpose() * tanh_sum);
    ev.parts.data_stein =
        (beta * beta / (static_cast<double>(n) * b1)) *
        (vp.lambda * sech2_sum.asDiagonal());
    ev.parts.data = ev.parts.data_field - ev.parts.data_stein;
    ev.report.data_term = lncosh_sum / b1;

    // Model term: one solver run per field sample, in parallel; per-sample
    // slots are reduced in sample order afterwards.
    std::vector<Matrix> grad_slots(b2);
    std::vector<double> log_z(b2);
    std::vector<unsigned char> converged(b2, 1);
    parallel_for_index(b2, [&](int s) {
        const EquivalentModel em =
            EquivalentModel::from_field_sample(vp, beta, fields_b2.row(s).transpose(), cfg.eps_var);
        const CavityState* init = nullptr;
        if (warm_states && (*warm_states)[s].m_msg.size() > 0) init = &(*warm_states)[s];
        CavityState st = run_message_passing(em, cfg.mp, init);
        const Thermodynamics th = thermodynamics(em, st, quad);
        const Vector ratio =
            (fields_b2.row(s).transpose().array() * th.m_hid.array() /
             (std::sqrt(static_cast<double>(n)) * em.xi_var.array().sqrt()))
                .matrix();
        grad_slots[s] = th.corr - em.lambda * ratio.asDiagonal();
        log_z[s] = th.log_z;
        converged[s] = st.converged ? 1 : 0;
        if (warm_states) (*warm_states)[s] = std::move(st);
    });

    Matrix model_sum = Matrix::Zero(n, p);
    double log_z_sum = 0.0;
    int nonconv = 0;
    for (int s = 0; s < b2; ++s) {
        model_sum += grad_slots[s];
        log_z_sum += log_z[s];
        nonconv += converged[s] ? 0 : 1;
    }
    ev.parts.model = (m * beta / (std::sqrt(static_cast<double>(n)) * b2)) * model_sum;
    ev.parts.mp_nonconverged = nonconv;
    ev.mean_log_z = log_z_sum / b2;
    ev.report.model_term = m * ev.mean_log_z;
    ev.report.mp_nonconverged = nonconv;
    ev.report.lb = -ev.report.kl_reg + ev.report.data_term - ev.report.model_term;
    ev.report.per_param_lb = ev.report.lb / (static_cast<double>(n) * p);
    return ev;
}

}  // namespace

GaussianStats gaussian_stats(const VariationalParams& vp, const SpinDataset& data,
                             double eps_var) {
    if (data.n != vp.shape.n_visible)
        throw ValidationError("gaussian_stats: dataset length != N");
    const int n = vp.shape.n_visible;
    GaussianStats gs;
    gs.g = data.samples.cast<double>() * vp.lambda / std::sqrt(static_cast<double>(n));
    gs.xi_var = ((1.0 - vp.lambda.array().square()).colwise().sum().transpose() / n)
                    .max(eps_var)
                    .matrix();
    return gs;
}

double kl_regularizer(const VariationalParams& vp, const PriorMeans& prior) {
    require_same_shape(vp.shape, prior.shape, "kl_regularizer");
    const auto& l = vp.lambda.array();
    const auto& m = prior.m.array();
    // sum over x = +-1 of z ln(z/y), z = (1 + x lambda)/2, y = (1 + x m)/2.
    const auto zp = (1.0 + l) * 0.5;
    const auto zm = (1.0 - l) * 0.5;
    const auto yp = (1.0 + m) * 0.5;
    const auto ym = (1.0 - m) * 0.5;
    double kl = 0.0;
    for (Eigen::Index j = 0; j < vp.lambda.cols(); ++j)
        for (Eigen::Index i = 0; i < vp.lambda.rows(); ++i) {
            const double a = zp(i, j), b = yp(i, j), c = zm(i, j), d = ym(i, j);
            if (a > 0.0) kl += a * std::log(a / b);
            if (c > 0.0) kl += c * std::log(c / d);
        }
    return kl;
}

Matrix draw_field_samples(int count, int p, Rng& rng) {
    if (count < 1) throw ValidationError("draw_field_samples: count must be >= 1");
    if (p < 1) throw ValidationError("draw_field_samples: p must be >= 1");
    Matrix z(count, p);
    for (int s = 0; s < count; ++s)
        for (int mu = 0; mu < p; ++mu) z(s, mu) = rng.normal();
    return z;
}

LowerBoundReport lower_bound_with_fields(const VariationalParams& vp, const PriorMeans& prior,
                                         const SpinDataset& data, const Matrix& fields_b1,
                                         const Matrix& fields_b2, const TrainConfig& cfg) {
    cfg.validate();
    const GaussHermite quad(cfg.quad_points);
    const Matrix sigma_d = data.samples.cast<double>();
    return evaluate_step(vp, prior, sigma_d, fields_b1, fields_b2, cfg, quad, nullptr).report;
}

LowerBoundReport lower_bound(const VariationalParams& vp, const PriorMeans& prior,
                             const SpinDataset& data, const TrainConfig& cfg, Rng& rng) {
    Rng r1 = rng.derive("fields-b1");
    Rng r2 = rng.derive("fields-b2");
    const Matrix fb1 = draw_field_samples(cfg.b1, vp.shape.n_hidden, r1);
    const Matrix fb2 = draw_field_samples(cfg.b2, vp.shape.n_hidden, r2);
    return lower_bound_with_fields(vp, prior, data, fb1, fb2, cfg);
}

GradientParts gradient(const VariationalParams& vp, const PriorMeans& prior,
                       const SpinDataset& data, const Matrix& fields_b1, const Matrix& fields_b2,
                       const TrainConfig& cfg) {
    cfg.validate();
    const GaussHermite quad(cfg.quad_points);
    const Matrix sigma_d = data.samples.cast<double>();
    return evaluate_step(vp, prior, sigma_d, fields_b1, fields_b2, cfg, quad, nullptr).parts;
}

VariationalParams init_params(const ModelShape& shape, std::uint64_t seed) {
    shape.validate();
    Rng rng = Rng(seed).derive("init");
    Matrix lambda(shape.n_visible, shape.n_hidden);
    for (int mu = 0; mu < shape.n_hidden; ++mu)
        for (int i = 0; i < shape.n_visible; ++i) lambda(i, mu) = rng.uniform(-0.01, 0.01);
    return VariationalParams(shape, std::move(lambda));
}

Checkpoint train(const SpinDataset& data, const PriorMeans& prior, const TrainConfig& cfg,
                 const VariationalParams* init, TrajectorySink* sink) {
    cfg.validate();
    const ModelShape shape = prior.shape;
    if (data.n != shape.n_visible) throw ValidationError("train: dataset length != N");

    VariationalParams vp = init ? *init : init_params(shape, cfg.seed);
    require_same_shape(vp.shape, shape, "train");
    vp.lambda = clipped(std::move(vp.lambda), cfg.eps_clip);

    const Rng master(cfg.seed);
    const GaussHermite quad(cfg.quad_points);
    const Matrix sigma_d = data.samples.cast<double>();

    std::vector<CavityState> warm;
    if (cfg.warm_start_across_steps) warm.resize(cfg.b2);

    LowerBoundReport tail;
    for (int t = 0; t <= cfg.steps; ++t) {
        const std::uint64_t field_idx = cfg.frozen_fields ? 0 : static_cast<std::uint64_t>(t);
        Rng r1 = master.derive("fields-b1", field_idx);
        Rng r2 = master.derive("fields-b2", field_idx);
        const Matrix fb1 = draw_field_samples(cfg.b1, shape.n_hidden, r1);
        const Matrix fb2 = draw_field_samples(cfg.b2, shape.n_hidden, r2);

        StepEval ev = evaluate_step(vp, prior, sigma_d, fb1, fb2, cfg,
                                    quad, cfg.warm_start_across_steps ? &warm : nullptr);

        if (t % cfg.log_every == 0 || t == cfg.steps) {
            tail = ev.report;
            if (sink) sink->on_step(StepRecord{t, ev.report, ev.mean_log_z}, vp);
        }
        if (t == cfg.steps) break;

        if (!ev.parts.reg.allFinite())
            throw NumericalError("train: non-finite regularizer gradient at step " +
                                 std::to_string(t + 1));
        if (!ev.parts.data.allFinite())
            throw NumericalError("train: non-finite data gradient at step " +
                                 std::to_string(t + 1));
        if (!ev.parts.model.allFinite())
            throw NumericalError("train: non-finite model gradient at step " +
                                 std::to_string(t + 1));

        double eta_t = cfg.eta;
        if (cfg.warmup_steps > 0 && t < cfg.warmup_steps)
            eta_t = cfg.eta * static_cast<double>(t + 1) / cfg.warmup_steps;

        vp.lambda += eta_t * (ev.parts.reg + ev.parts.data - ev.parts.model);
        if (!vp.lambda.allFinite())
            throw NumericalError("train: non-finite lambda after update at step " +
                                 std::to_string(t + 1));
        vp.lambda = clipped(std::move(vp.lambda), cfg.eps_clip);
    }

    return Checkpoint{cfg.steps, std::move(vp), prior, cfg, tail};
}

}  // namespace bsrbm
