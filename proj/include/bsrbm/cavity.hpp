#pragma once

#include "bsrbm/quadrature.hpp"
#include "bsrbm/types.hpp"

namespace bsrbm {

/// The machine obtained by replacing binary weights with their variational
/// means lambda/sqrt(N) and adding one quenched random field per hidden unit,
/// H_mu = Xi_mu * z_mu for a fixed normal draw z.
struct EquivalentModel {
    Matrix lambda;  // N x P
    double beta = 1.0;
    Vector h;       // P, quenched fields
    Vector xi_var;  // P, per-hidden-unit variance Xi_mu^2, floored above 0

    EquivalentModel() = default;
    EquivalentModel(Matrix lambda_, double beta_, Vector h_, Vector xi_var_);

    /// Build from a field draw z: Xi_mu^2 = max(eps_var, mean_i(1 - lambda^2)),
    /// H_mu = Xi_mu z_mu.
    static EquivalentModel from_field_sample(const VariationalParams& vp, double beta,
                                             const Vector& z, double eps_var);

    int n() const { return static_cast<int>(lambda.rows()); }
    int p() const { return static_cast<int>(lambda.cols()); }
};

/// Cavity messages for one quenched-field realization. m_msg holds the
/// visible-to-hidden magnetizations m_{i->mu}, u_msg the hidden-to-visible
/// biases u_{mu->i}.
struct CavityState {
    Matrix m_msg;     // N x P
    Matrix u_msg;     // N x P
    Vector chi_full;  // P, chi_mu = (1/sqrt(N)) sum_i lambda_{i,mu} m_{i->mu}
    bool converged = false;
    int sweeps_used = 0;
    double residual = 0.0;  // max absolute message change of the last sweep
};

/// Iterate the cavity equations to a fixed point.
///
/// Each sweep updates all u messages from the current m messages, then all m
/// messages from the new u; new messages are mixed with the old ones with
/// weight cfg.damping on the old value. Stops when the residual drops below
/// cfg.tol or after cfg.max_sweeps; non-convergence is reported through the
/// flag, never thrown. Cold starts use all-zero messages; pass `init` to warm
/// start.
CavityState run_message_passing(const EquivalentModel& model, const MpConfig& cfg,
                                const CavityState* init = nullptr);

/// Bethe estimate of ln Z from a message fixed point.
double bethe_free_energy(const EquivalentModel& model, const CavityState& state);

struct Thermodynamics {
    double log_z = 0.0;
    Vector m_vis;            // N, visible magnetizations
    Vector m_hid;            // P, mean hidden activity under the quenched field
    Matrix corr;             // N x P, visible-hidden correlation C_{i,mu}
    Vector a_mu;             // P, 1 - E_z[tanh^2(..)]
    Vector chi_tilde;        // P
    Vector lambda_tilde_sq;  // P
};

/// Magnetizations, hidden means, and correlations at the fixed point; the
/// Gaussian expectations use the supplied quadrature rule.
Thermodynamics thermodynamics(const EquivalentModel& model, const CavityState& state,
                              const GaussHermite& quad);

/// ln cosh with the large-|x| branch, finite for all x.
double log_cosh(double x);

/// ln(1 + e^x) without overflow.
double softplus(double x);

}  // namespace bsrbm
