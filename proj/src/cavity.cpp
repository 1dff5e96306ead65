#include "bsrbm/cavity.hpp"

#include <cmath>
#include <utility>

namespace bsrbm {

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

EquivalentModel::EquivalentModel(Matrix lambda_, double beta_, Vector h_, Vector xi_var_)
    : lambda(std::move(lambda_)), beta(beta_), h(std::move(h_)), xi_var(std::move(xi_var_)) {
    if (lambda.rows() < 1 || lambda.cols() < 1)
        throw ValidationError("EquivalentModel: empty lambda");
    if (h.size() != lambda.cols() || xi_var.size() != lambda.cols())
        throw ValidationError("EquivalentModel: h/xi_var length != P");
    require_finite(lambda, "EquivalentModel.lambda");
    if (!h.allFinite() || !xi_var.allFinite())
        throw ValidationError("EquivalentModel: non-finite fields");
    if (xi_var.minCoeff() <= 0.0)
        throw ValidationError("EquivalentModel: xi_var must be > 0");
}

EquivalentModel EquivalentModel::from_field_sample(const VariationalParams& vp, double beta,
                                                   const Vector& z, double eps_var) {
    const int n = vp.shape.n_visible;
    const int p = vp.shape.n_hidden;
    if (z.size() != p) throw ValidationError("from_field_sample: z length != P");
    Vector xi_var =
        ((1.0 - vp.lambda.array().square()).colwise().sum().transpose() / n).max(eps_var).matrix();
    Vector h = (xi_var.array().sqrt() * z.array()).matrix();
    return EquivalentModel(vp.lambda, beta, std::move(h), std::move(xi_var));
}

CavityState run_message_passing(const EquivalentModel& model, const MpConfig& cfg,
                                const CavityState* init) {
    cfg.validate();
    const int n = model.n();
    const int p = model.p();
    const double beta = model.beta;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    CavityState st;
    if (init) {
        if (init->m_msg.rows() != n || init->m_msg.cols() != p)
            throw ValidationError("run_message_passing: init state has wrong dimensions");
        st = *init;
        st.converged = false;
    } else {
        st.m_msg = Matrix::Zero(n, p);
        st.u_msg = Matrix::Zero(n, p);
    }

    // tanh(beta lambda / sqrt(N)) is fixed across sweeps.
    const Matrix tanh_w = (beta * inv_sqrt_n * model.lambda).array().tanh().matrix();
    const Eigen::RowVectorXd beta_h = beta * model.h.transpose();

    Matrix chi_cav(n, p), u_new(n, p), m_new(n, p);
    const double keep = cfg.damping;

    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        // u phase: full chi per hidden unit, then subtract each message's own
        // contribution to get the cavity field.
        st.chi_full =
            ((model.lambda.array() * st.m_msg.array()).colwise().sum().transpose() * inv_sqrt_n)
                .matrix();
        chi_cav = -inv_sqrt_n * (model.lambda.array() * st.m_msg.array()).matrix();
        chi_cav.rowwise() += st.chi_full.transpose();

        u_new = (((beta * chi_cav).rowwise() + beta_h).array().tanh() * tanh_w.array())
                    .atanh()
                    .matrix();
        if (keep > 0.0) u_new = keep * st.u_msg + (1.0 - keep) * u_new;
        double residual = (u_new - st.u_msg).cwiseAbs().maxCoeff();
        st.u_msg.swap(u_new);

        // m phase: row sums of u minus the receiving unit's own message.
        m_new = (-st.u_msg).colwise() + st.u_msg.rowwise().sum();
        m_new = m_new.array().tanh().matrix();
        if (keep > 0.0) m_new = keep * st.m_msg + (1.0 - keep) * m_new;
        residual = std::max(residual, (m_new - st.m_msg).cwiseAbs().maxCoeff());
        st.m_msg.swap(m_new);

        st.sweeps_used = sweep;
        st.residual = residual;
        if (residual < cfg.tol) {
            st.converged = true;
            break;
        }
    }

    st.chi_full =
        ((model.lambda.array() * st.m_msg.array()).colwise().sum().transpose() * inv_sqrt_n)
            .matrix();
    return st;
}

double bethe_free_energy(const EquivalentModel& model, const CavityState& state) {
    const int n = model.n();
    const int p = model.p();
    if (state.m_msg.rows() != n || state.m_msg.cols() != p)
        throw ValidationError("bethe_free_energy: state does not match model");
    const double beta = model.beta;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    // Per-hidden-unit Gaussian widths from the cavity messages.
    const Matrix lam2_terms =
        (model.lambda.array().square() * (1.0 - state.m_msg.array().square())).matrix() /
        static_cast<double>(n);
    const Eigen::RowVectorXd lam2_full = lam2_terms.colwise().sum();

    // Hidden-unit contributions.
    double f_mu_sum = 0.0;
    for (int mu = 0; mu < p; ++mu)
        f_mu_sum += 0.5 * beta * beta * lam2_full[mu] +
                    log_cosh(beta * state.chi_full[mu] + beta * model.h[mu]);

    // Visible-unit contributions.
    Matrix chi_cav = -inv_sqrt_n * (model.lambda.array() * state.m_msg.array()).matrix();
    chi_cav.rowwise() += state.chi_full.transpose();
    Matrix lam2_cav = -lam2_terms;
    lam2_cav.rowwise() += lam2_full;

    double f_i_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double fi = 0.0;
        for (int mu = 0; mu < p; ++mu) {
            const double arg =
                beta * chi_cav(i, mu) + beta * model.h[mu] + beta * inv_sqrt_n * model.lambda(i, mu);
            fi += 0.5 * beta * beta * lam2_cav(i, mu) + log_cosh(arg);
        }
        fi += softplus(-2.0 * state.u_msg.row(i).sum());
        f_i_sum += fi;
    }

    return f_i_sum - (n - 1) * f_mu_sum;
}

Thermodynamics thermodynamics(const EquivalentModel& model, const CavityState& state,
                              const GaussHermite& quad) {
    const int n = model.n();
    const int p = model.p();
    if (state.m_msg.rows() != n || state.m_msg.cols() != p)
        throw ValidationError("thermodynamics: state does not match model");
    const double beta = model.beta;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    Thermodynamics th;
    th.m_vis = state.u_msg.rowwise().sum().array().tanh().matrix();

    const Vector one_minus_m2 = (1.0 - th.m_vis.array().square()).matrix();
    th.chi_tilde = model.lambda.transpose() * th.m_vis * inv_sqrt_n;
    th.lambda_tilde_sq = ((model.lambda.array().square().colwise() * one_minus_m2.array())
                              .colwise()
                              .sum()
                              .transpose() /
                          static_cast<double>(n))
                             .matrix();

    th.m_hid.resize(p);
    th.a_mu.resize(p);
    for (int mu = 0; mu < p; ++mu) {
        const double center = beta * th.chi_tilde[mu] + beta * model.h[mu];
        const double width = beta * std::sqrt(std::max(0.0, th.lambda_tilde_sq[mu]));
        double mean_t = 0.0, mean_t2 = 0.0;
        for (int k = 0; k < quad.size(); ++k) {
            const double t = std::tanh(center + width * quad.nodes()[k]);
            mean_t += quad.weights()[k] * t;
            mean_t2 += quad.weights()[k] * t * t;
        }
        th.m_hid[mu] = mean_t;
        th.a_mu[mu] = 1.0 - mean_t2;
    }

    const Vector col_scale = (beta * inv_sqrt_n) * th.a_mu;
    th.corr = th.m_vis * th.m_hid.transpose() +
              one_minus_m2.asDiagonal() * model.lambda * col_scale.asDiagonal();

    th.log_z = bethe_free_energy(model, state);
    return th;
}

}  // namespace bsrbm
