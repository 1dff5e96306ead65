#include "bsrbm/oracle.hpp"

#include <bit>
#include <cmath>
#include <vector>

namespace bsrbm {

namespace {

constexpr int kMaxEnumBits = 20;

// Walk all 2^n states in Gray-code order, keeping the weighted sums
// g_mu = scale * sum_i w(i,mu) sigma_i updated incrementally. visit() is
// called with (state_index, sigma, g) where bit i of state_index set means
// sigma_i = +1.
template <class W, class Visit>
void for_each_state(int n, int p, const W& w, double scale, Visit&& visit) {
    std::vector<int> sigma(n, -1);
    Vector g = Vector::Zero(p);
    for (int i = 0; i < n; ++i)
        for (int mu = 0; mu < p; ++mu) g[mu] -= w(i, mu);
    g *= scale;

    const std::uint64_t total = std::uint64_t{1} << n;
    std::uint64_t gray = 0;
    visit(gray, sigma, g);
    for (std::uint64_t idx = 1; idx < total; ++idx) {
        const int bit = std::countr_zero(idx);
        const std::uint64_t next = gray ^ (std::uint64_t{1} << bit);
        sigma[bit] = -sigma[bit];
        for (int mu = 0; mu < p; ++mu) g[mu] += 2.0 * scale * sigma[bit] * w(bit, mu);
        gray = next;
        visit(gray, sigma, g);
    }
}

struct LogSumExp {
    double max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;

    void add(double x) {
        if (x <= max) {
            sum += std::exp(x - max);
        } else {
            sum = sum * std::exp(max - x) + 1.0;
            max = x;
        }
    }
    double value() const { return max + std::log(sum); }
};

void check_enum_size(int n) {
    if (n > kMaxEnumBits)
        throw ValidationError("oracle: enumeration limited to N <= 20");
}

}  // namespace

ExactThermo enumerate_equivalent(const EquivalentModel& model) {
    const int n = model.n();
    const int p = model.p();
    check_enum_size(n);
    const double beta = model.beta;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    auto w = [&](int i, int mu) { return model.lambda(i, mu); };

    LogSumExp lse;
    for_each_state(n, p, w, scale, [&](std::uint64_t, const std::vector<int>&, const Vector& g) {
        double e = 0.0;
        for (int mu = 0; mu < p; ++mu) e += log_cosh(beta * g[mu] + beta * model.h[mu]);
        lse.add(e);
    });
    const double log_z = lse.value();

    ExactThermo out;
    out.log_z = log_z;
    out.m_vis = Vector::Zero(n);
    out.m_hid = Vector::Zero(p);
    out.corr = Matrix::Zero(n, p);
    for_each_state(n, p, w, scale,
                   [&](std::uint64_t, const std::vector<int>& sigma, const Vector& g) {
                       double e = 0.0;
                       Vector t(p);
                       for (int mu = 0; mu < p; ++mu) {
                           const double arg = beta * g[mu] + beta * model.h[mu];
                           e += log_cosh(arg);
                           t[mu] = std::tanh(arg);
                       }
                       const double prob = std::exp(e - log_z);
                       for (int i = 0; i < n; ++i) out.m_vis[i] += prob * sigma[i];
                       out.m_hid += prob * t;
                       for (int mu = 0; mu < p; ++mu)
                           for (int i = 0; i < n; ++i) out.corr(i, mu) += prob * sigma[i] * t[mu];
                   });
    return out;
}

ExactPlanted enumerate_planted(const PlantedModel& model) {
    const int n = model.weights.shape.n_visible;
    const int p = model.weights.shape.n_hidden;
    check_enum_size(n);
    const double beta = model.beta;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    auto w = [&](int i, int mu) { return static_cast<double>(model.weights.xi(i, mu)); };

    const std::uint64_t total = std::uint64_t{1} << n;
    Vector log_weight(total);
    LogSumExp lse;
    for_each_state(n, p, w, scale,
                   [&](std::uint64_t idx, const std::vector<int>&, const Vector& g) {
                       double e = 0.0;
                       for (int mu = 0; mu < p; ++mu) e += log_cosh(beta * g[mu]);
                       log_weight[idx] = e;
                       lse.add(e);
                   });

    ExactPlanted out;
    out.log_z = lse.value();
    out.probs = (log_weight.array() - out.log_z).exp().matrix();
    out.m_vis = Vector::Zero(n);
    for (std::uint64_t idx = 0; idx < total; ++idx)
        for (int i = 0; i < n; ++i)
            out.m_vis[i] += out.probs[idx] * ((idx >> i) & 1 ? 1.0 : -1.0);
    return out;
}

ExactPosterior exact_posterior(const SpinDataset& data, const ModelShape& shape, double beta) {
    shape.validate();
    const int n = shape.n_visible;
    const int p = shape.n_hidden;
    if (data.n != n) throw ValidationError("exact_posterior: dataset length != N");
    if (n * p > 16 || n > 12)
        throw ValidationError("exact_posterior: limited to N*P <= 16 and N <= 12");

    const int m = data.size();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const std::uint64_t n_weights = std::uint64_t{1} << (n * p);

    Vector log_post(n_weights);
    LogSumExp lse;
    IntMatrix xi(n, p);
    for (std::uint64_t wi = 0; wi < n_weights; ++wi) {
        for (int mu = 0; mu < p; ++mu)
            for (int i = 0; i < n; ++i)
                xi(i, mu) = (wi >> (i + n * mu)) & 1 ? 1 : -1;

        // ln Z(xi) by enumeration over states.
        auto w = [&](int i, int mu) { return static_cast<double>(xi(i, mu)); };
        LogSumExp z_lse;
        for_each_state(n, p, w, scale,
                       [&](std::uint64_t, const std::vector<int>&, const Vector& g) {
                           double e = 0.0;
                           for (int mu = 0; mu < p; ++mu) e += log_cosh(beta * g[mu]);
                           z_lse.add(e);
                       });

        double data_fit = 0.0;
        for (int a = 0; a < m; ++a)
            for (int mu = 0; mu < p; ++mu) {
                double x = 0.0;
                for (int i = 0; i < n; ++i) x += xi(i, mu) * data.samples(a, i);
                data_fit += log_cosh(beta * scale * x);
            }

        log_post[wi] = data_fit - m * z_lse.value();
        lse.add(log_post[wi]);
    }

    ExactPosterior out;
    const double log_norm = lse.value();
    out.probs = (log_post.array() - log_norm).exp().matrix();
    out.marginal_means = Matrix::Zero(n, p);
    for (std::uint64_t wi = 0; wi < n_weights; ++wi)
        for (int mu = 0; mu < p; ++mu)
            for (int i = 0; i < n; ++i)
                out.marginal_means(i, mu) +=
                    out.probs[wi] * ((wi >> (i + n * mu)) & 1 ? 1.0 : -1.0);
    return out;
}

}  // namespace bsrbm
