#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <qherald/statespace.hpp>

namespace qherald {

// Rates are in units of the cavity field decay rate; time in units of its
// inverse. hbar = 1.

/// Rates of one Lambda-atom / one-sided-cavity system.
struct SystemParams
{
    double lambda_L = 10.0; ///< coupling of |g_l> <-> |e> to the V mode
    double lambda_R = 10.0; ///< coupling of |g_r> <-> |e> to the H mode
    double kappa = 1.0;     ///< cavity field decay; photons leak at 2*kappa
    double gamma_l = 0.0;   ///< spontaneous emission to |g_l> occurs at 2*gamma_l
    double gamma_r = 0.0;

    /// Throws PreconditionError unless all rates are >= 0, kappa > 0 and at
    /// least one coupling is nonzero.
    void validate() const;

    bool operator==(const SystemParams &) const = default;
};

struct DerivedRates
{
    double Omega = 0.0; ///< sqrt(lambda_L^2 + lambda_R^2)
    double Gamma = 0.0; ///< gamma_l + gamma_r + kappa
    double Delta = 0.0; ///< kappa - gamma_l - gamma_r
    /// Omega^2 - Delta^2/4. Negative in the overdamped regime.
    double omega_k_squared = 0.0;
    /// sqrt(|omega_k_squared|): the oscillation frequency when underdamped,
    /// the magnitude of the imaginary frequency when overdamped.
    double Omega_k = 0.0;

    bool overdamped() const { return omega_k_squared < 0.0; }
};

/// {"lambda_L", "lambda_R", "kappa", "gamma_l", "gamma_r"}; unknown keys are
/// rejected by params_from_json, missing keys keep the value from `base`.
nlohmann::json to_json(const SystemParams &p);
SystemParams params_from_json(const nlohmann::json &j, const SystemParams &base = {});

DerivedRates derive_rates(const SystemParams &p);

/// Unnormalized no-jump amplitudes on {|e,0>, |g_l,V>, |g_r,H>}.
struct NoJumpAmplitudes
{
    Complex x; ///< |e,0>
    Complex y; ///< |g_l,V>
    Complex z; ///< |g_r,H>
    double t = 0.0;

    double squared_norm() const { return std::norm(x) + std::norm(y) + std::norm(z); }
};

/// Closed-form amplitudes; continues analytically through the critically
/// damped point into the overdamped regime.
NoJumpAmplitudes no_jump_amplitudes(const SystemParams &p, double t);

/// Effective non-Hermitian Hamiltonian on {|e,0>, |g_l,V>, |g_r,H>}.
Eigen::Matrix3cd effective_hamiltonian(const SystemParams &p);

/**
 * Integrates i d|psi>/dt = H_eff |psi> from |e,0> with classical RK4.
 * `dt` is the largest permitted step; the actual step is t / ceil(t / dt)
 * so that the final time is hit exactly.
 */
NoJumpAmplitudes propagate_numeric(const SystemParams &p, double t, double dt);

/// Same integration, sampled at each of the (non-decreasing) `times`.
std::vector<NoJumpAmplitudes> propagate_numeric_series(const SystemParams &p,
                                                       std::span<const double> times,
                                                       double dt);

/// Probability that no photon has leaked and no spontaneous emission has
/// happened by time t: |x|^2 + |y|^2 + |z|^2 in closed form.
double survival_probability(const SystemParams &p, double t);

/// |y|^2 + |z|^2 in closed form: the weight of the one-photon branch at t.
double photon_branch_probability(const SystemParams &p, double t);

// Level alphabets shared by every module that builds protocol kets.
inline const std::vector<std::string> kAtomLevels = {"e", "gl", "gr"};
inline const std::vector<std::string> kPhotonLevels = {"vac", "V", "H", "consumed"};

Subsystem atom_subsystem(const std::string &system_id);
/// Cavity photon subsystem of a system; its id is `<system_id>.photon`.
Subsystem photon_subsystem(const std::string &system_id);
std::string photon_id(const std::string &system_id);

/// (lambda_L |g_l,V> + lambda_R |g_r,H>) / Omega for one system. Throws
/// DegenerateStateError when both couplings vanish.
Ket emission_state(const SystemParams &p, const std::string &system_id = "S");

} // namespace qherald
