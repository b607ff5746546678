#include <qherald/atom_cavity.hpp>

#include <cmath>
#include <string>

#include <qherald/error.hpp>

namespace qherald {

namespace {

void require_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw PreconditionError("time must be finite and non-negative, got " +
                                std::to_string(t));
    }
}

// exp(-Gamma t / 2) * cos(Omega_k t) and exp(-Gamma t / 2) * sin(Omega_k t) / Omega_k,
// continued to cosh/sinh when Omega_k is imaginary and to their series near
// Omega_k = 0.
struct DampedOscillation
{
    double c = 1.0;
    double s = 0.0;
};

DampedOscillation damped_oscillation(const DerivedRates &r, double t)
{
    const double q = r.omega_k_squared;
    const double half_gamma = 0.5 * r.Gamma;
    DampedOscillation out;
    if (std::abs(q) * t * t < 1e-6) {
        // cos(wt) = sum (-q t^2)^n / (2n)!, sin(wt)/w = t sum (-q t^2)^n / (2n+1)!
        const double u = -q * t * t;
        const double damp = std::exp(-half_gamma * t);
        out.c = damp * (1.0 + u / 2.0 + u * u / 24.0 + u * u * u / 720.0);
        out.s = damp * t * (1.0 + u / 6.0 + u * u / 120.0 + u * u * u / 5040.0);
    } else if (q > 0.0) {
        const double damp = std::exp(-half_gamma * t);
        out.c = damp * std::cos(r.Omega_k * t);
        out.s = damp * std::sin(r.Omega_k * t) / r.Omega_k;
    } else {
        const double w = r.Omega_k;
        const double grow = std::exp((w - half_gamma) * t);
        const double fall = std::exp(-(w + half_gamma) * t);
        out.c = 0.5 * (grow + fall);
        out.s = 0.5 * (grow - fall) / w;
    }
    return out;
}

using Vec3 = Eigen::Vector3cd;

Vec3 rk4_step(const Eigen::Matrix3cd &generator, const Vec3 &psi, double h)
{
    const Vec3 k1 = generator * psi;
    const Vec3 k2 = generator * (psi + 0.5 * h * k1);
    const Vec3 k3 = generator * (psi + 0.5 * h * k2);
    const Vec3 k4 = generator * (psi + h * k3);
    return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

void SystemParams::validate() const
{
    const bool finite = std::isfinite(lambda_L) && std::isfinite(lambda_R) &&
                        std::isfinite(kappa) && std::isfinite(gamma_l) &&
                        std::isfinite(gamma_r);
    if (!finite) {
        throw PreconditionError("system parameters must be finite");
    }
    if (lambda_L < 0.0 || lambda_R < 0.0 || gamma_l < 0.0 || gamma_r < 0.0) {
        throw PreconditionError("rates must be non-negative");
    }
    if (!(kappa > 0.0)) {
        throw PreconditionError("kappa must be positive");
    }
    if (lambda_L * lambda_L + lambda_R * lambda_R <= 0.0) {
        throw PreconditionError("at least one coupling must be nonzero");
    }
}

nlohmann::json to_json(const SystemParams &p)
{
    return {{"lambda_L", p.lambda_L}, {"lambda_R", p.lambda_R}, {"kappa", p.kappa},
            {"gamma_l", p.gamma_l},   {"gamma_r", p.gamma_r}};
}

SystemParams params_from_json(const nlohmann::json &j, const SystemParams &base)
{
    if (!j.is_object()) {
        throw PreconditionError("system parameters must be a JSON object");
    }
    SystemParams p = base;
    for (const auto &[key, value] : j.items()) {
        if (!value.is_number()) {
            throw PreconditionError("parameter '" + key + "' must be a number");
        }
        const double v = value.get<double>();
        if (key == "lambda_L") {
            p.lambda_L = v;
        } else if (key == "lambda_R") {
            p.lambda_R = v;
        } else if (key == "kappa") {
            p.kappa = v;
        } else if (key == "gamma_l") {
            p.gamma_l = v;
        } else if (key == "gamma_r") {
            p.gamma_r = v;
        } else {
            throw PreconditionError("unknown parameter '" + key + "'");
        }
    }
    p.validate();
    return p;
}

DerivedRates derive_rates(const SystemParams &p)
{
    p.validate();
    DerivedRates r;
    const double omega_sq = p.lambda_L * p.lambda_L + p.lambda_R * p.lambda_R;
    r.Omega = std::sqrt(omega_sq);
    r.Gamma = p.gamma_l + p.gamma_r + p.kappa;
    r.Delta = p.kappa - p.gamma_l - p.gamma_r;
    r.omega_k_squared = omega_sq - r.Delta * r.Delta / 4.0;
    r.Omega_k = std::sqrt(std::abs(r.omega_k_squared));
    return r;
}

NoJumpAmplitudes no_jump_amplitudes(const SystemParams &p, double t)
{
    require_time(t);
    const DerivedRates r = derive_rates(p);
    const DampedOscillation d = damped_oscillation(r, t);
    const Complex minus_i(0.0, -1.0);
    NoJumpAmplitudes a;
    a.t = t;
    a.x = d.c + 0.5 * r.Delta * d.s;
    a.y = minus_i * d.s * p.lambda_L;
    a.z = minus_i * d.s * p.lambda_R;
    return a;
}

Eigen::Matrix3cd effective_hamiltonian(const SystemParams &p)
{
    p.validate();
    const Complex i(0.0, 1.0);
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 0) = -i * (p.gamma_l + p.gamma_r);
    h(1, 1) = -i * p.kappa;
    h(2, 2) = -i * p.kappa;
    h(0, 1) = h(1, 0) = p.lambda_L;
    h(0, 2) = h(2, 0) = p.lambda_R;
    return h;
}

std::vector<NoJumpAmplitudes> propagate_numeric_series(const SystemParams &p,
                                                       std::span<const double> times,
                                                       double dt)
{
    if (!(dt > 0.0)) {
        throw PreconditionError("integration step must be positive");
    }
    const Eigen::Matrix3cd generator = Complex(0.0, -1.0) * effective_hamiltonian(p);

    std::vector<NoJumpAmplitudes> out;
    out.reserve(times.size());
    Vec3 psi(1.0, 0.0, 0.0);
    double now = 0.0;
    for (double target : times) {
        require_time(target);
        if (target < now) {
            throw PreconditionError("sample times must be non-decreasing");
        }
        const double span = target - now;
        if (span > 0.0) {
            const auto steps = static_cast<long>(std::ceil(span / dt));
            const double h = span / static_cast<double>(steps);
            for (long n = 0; n < steps; ++n) {
                psi = rk4_step(generator, psi, h);
            }
            now = target;
        }
        out.push_back({psi(0), psi(1), psi(2), target});
    }
    return out;
}

NoJumpAmplitudes propagate_numeric(const SystemParams &p, double t, double dt)
{
    const double times[] = {t};
    return propagate_numeric_series(p, times, dt).front();
}

double survival_probability(const SystemParams &p, double t)
{
    require_time(t);
    const DerivedRates r = derive_rates(p);
    const DampedOscillation d = damped_oscillation(r, t);
    const double coherent = d.c + 0.5 * r.Delta * d.s;
    return coherent * coherent + d.s * d.s * r.Omega * r.Omega;
}

double photon_branch_probability(const SystemParams &p, double t)
{
    require_time(t);
    const DerivedRates r = derive_rates(p);
    const DampedOscillation d = damped_oscillation(r, t);
    return d.s * d.s * r.Omega * r.Omega;
}

Subsystem atom_subsystem(const std::string &system_id)
{
    return {system_id, kAtomLevels};
}

std::string photon_id(const std::string &system_id) { return system_id + ".photon"; }

Subsystem photon_subsystem(const std::string &system_id)
{
    return {photon_id(system_id), kPhotonLevels};
}

Ket emission_state(const SystemParams &p, const std::string &system_id)
{
    const double omega = std::hypot(p.lambda_L, p.lambda_R);
    if (!(omega > 0.0)) {
        throw DegenerateStateError("emission state undefined when both couplings vanish");
    }
    Space space({atom_subsystem(system_id), photon_subsystem(system_id)});
    Ket k(space);
    const std::string ph = photon_id(system_id);
    k.add({{system_id, "gl"}, {ph, "V"}}, p.lambda_L / omega);
    k.add({{system_id, "gr"}, {ph, "H"}}, p.lambda_R / omega);
    return k;
}

} // namespace qherald
