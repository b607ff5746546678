#include <qherald/trajectories.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <string>

#include <qherald/error.hpp>

#include "parallel.hpp"

namespace qherald {

namespace {

constexpr int idx(CavityState s) { return static_cast<int>(s); }

using Matrix5 = Eigen::Matrix<Complex, kCavityStates, kCavityStates>;

// Uniform double in the open interval (0, 1) from the top 53 bits.
double uniform_open(std::mt19937_64 &gen)
{
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

StateVector5 rk4_step(const Matrix5 &generator, const StateVector5 &psi, double h)
{
    const StateVector5 k1 = generator * psi;
    const StateVector5 k2 = generator * (psi + 0.5 * h * k1);
    const StateVector5 k3 = generator * (psi + 0.5 * h * k2);
    const StateVector5 k4 = generator * (psi + h * k3);
    return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Jumps leave the state in span{gl0, gr0}, where H_eff vanishes and no
// channel can fire again.
bool is_dark(const StateVector5 &psi)
{
    return psi(idx(CavityState::e0)) == Complex{} && psi(idx(CavityState::glV)) == Complex{} &&
           psi(idx(CavityState::grH)) == Complex{};
}

DensityMatrix lindblad_rhs(const Matrix5 &h_eff, const std::array<JumpChannelInfo, 4> &channels,
                           const DensityMatrix &rho)
{
    const Complex i(0.0, 1.0);
    DensityMatrix out = -i * (h_eff * rho - rho * h_eff.adjoint());
    for (const auto &c : channels) {
        if (c.rate > 0.0) {
            // C rho C^dagger for C = sqrt(rate) |to><from|
            out(idx(c.to), idx(c.to)) += c.rate * rho(idx(c.from), idx(c.from));
        }
    }
    return out;
}

void check_density_matrix(const DensityMatrix &rho)
{
    if (!rho.allFinite()) {
        throw AccuracyError("master-equation integration diverged; reduce the step");
    }
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > 1e-6) {
        throw AccuracyError("trace drifted to " + std::to_string(trace) + "; reduce the step");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-6) {
        throw AccuracyError("density matrix lost hermiticity; reduce the step");
    }
    Eigen::SelfAdjointEigenSolver<DensityMatrix> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-6) {
        throw AccuracyError("density matrix lost positivity; reduce the step");
    }
}

} // namespace

std::string_view to_string(CavityState s)
{
    switch (s) {
    case CavityState::e0: return "e0";
    case CavityState::glV: return "glV";
    case CavityState::grH: return "grH";
    case CavityState::gl0: return "gl0";
    case CavityState::gr0: return "gr0";
    }
    return "?";
}

std::string_view to_string(JumpChannel c)
{
    switch (c) {
    case JumpChannel::CavityLeakL: return "CavityLeakL";
    case JumpChannel::CavityLeakR: return "CavityLeakR";
    case JumpChannel::SpontEmitL: return "SpontEmitL";
    case JumpChannel::SpontEmitR: return "SpontEmitR";
    }
    return "?";
}

std::array<JumpChannelInfo, 4> jump_channels(const SystemParams &p)
{
    return {{
        {JumpChannel::CavityLeakL, 2.0 * p.kappa, CavityState::glV, CavityState::gl0},
        {JumpChannel::CavityLeakR, 2.0 * p.kappa, CavityState::grH, CavityState::gr0},
        {JumpChannel::SpontEmitL, 2.0 * p.gamma_l, CavityState::e0, CavityState::gl0},
        {JumpChannel::SpontEmitR, 2.0 * p.gamma_r, CavityState::e0, CavityState::gr0},
    }};
}

Matrix5 effective_hamiltonian5(const SystemParams &p)
{
    Matrix5 h = Matrix5::Zero();
    h.topLeftCorner<3, 3>() = effective_hamiltonian(p);
    return h;
}

bool TrajectoryRecord::protocol_failure() const
{
    for (const auto &e : events) {
        if (e.channel == JumpChannel::SpontEmitL || e.channel == JumpChannel::SpontEmitR) {
            return true;
        }
    }
    return false;
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

TrajectoryRecord simulate_trajectory(const SystemParams &p, double t_max, std::uint64_t seed,
                                     const TrajectoryOptions &options)
{
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw PreconditionError("t_max must be positive and finite");
    }
    if (!(options.max_step > 0.0) || !(options.time_tolerance > 0.0)) {
        throw PreconditionError("trajectory step and tolerance must be positive");
    }
    const Matrix5 generator = Complex(0.0, -1.0) * effective_hamiltonian5(p);
    const auto channels = jump_channels(p);

    std::mt19937_64 gen(seed);
    TrajectoryRecord rec;
    rec.seed = seed;

    StateVector5 psi = StateVector5::Zero();
    psi(idx(CavityState::e0)) = 1.0;
    double threshold = uniform_open(gen);
    double t = 0.0;

    while (t < t_max && !is_dark(psi)) {
        const double h = std::min(options.max_step, t_max - t);
        StateVector5 next = rk4_step(generator, psi, h);
        if (next.squaredNorm() > threshold) {
            psi = next;
            t = (h == t_max - t) ? t_max : t + h;
            continue;
        }

        // Squared norm crosses the threshold inside (t, t + h].
        double lo = 0.0;
        double hi = h;
        while (hi - lo > options.time_tolerance) {
            const double mid = 0.5 * (lo + hi);
            if (rk4_step(generator, psi, mid).squaredNorm() > threshold) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const StateVector5 at_jump = rk4_step(generator, psi, hi);
        const double jump_time = t + hi;

        std::array<double, 4> weights{};
        double total = 0.0;
        for (std::size_t c = 0; c < channels.size(); ++c) {
            weights[c] = channels[c].rate * std::norm(at_jump(idx(channels[c].from)));
            total += weights[c];
        }
        if (!(total > 0.0)) {
            throw AccuracyError("jump detected with no active channel");
        }
        double pick = uniform_open(gen) * total;
        std::size_t chosen = 0;
        for (std::size_t c = 0; c < channels.size(); ++c) {
            if (weights[c] == 0.0) {
                continue;
            }
            chosen = c;
            if (pick < weights[c]) {
                break;
            }
            pick -= weights[c];
        }

        const auto &ch = channels[chosen];
        rec.events.push_back({jump_time, ch.id});
        if (ch.id == JumpChannel::CavityLeakL) {
            rec.leaked_photon = Polarization::V;
        } else if (ch.id == JumpChannel::CavityLeakR) {
            rec.leaked_photon = Polarization::H;
        }
        psi.setZero();
        psi(idx(ch.to)) = 1.0;
        t = jump_time;
        threshold = uniform_open(gen);
    }

    rec.final_state = psi.normalized();
    Eigen::Index dominant = 0;
    rec.final_state.cwiseAbs2().maxCoeff(&dominant);
    rec.final_label = static_cast<CavityState>(dominant);
    if (rec.events.empty()) {
        rec.survived_no_jump_until = t_max;
    }
    return rec;
}

std::vector<TrajectoryRecord> simulate_ensemble(const SystemParams &p, double t_max,
                                                std::size_t n, std::uint64_t master_seed,
                                                const EnsembleOptions &options)
{
    p.validate();
    std::vector<TrajectoryRecord> out(n);
    detail::parallel_for(n, options.workers, [&](std::size_t i) {
        out[i] = simulate_trajectory(p, t_max, trajectory_seed(master_seed, i),
                                     options.trajectory);
    });
    return out;
}

FractionEstimate no_jump_fraction(const SystemParams &p, double t, std::size_t n,
                                  std::uint64_t master_seed, const EnsembleOptions &options)
{
    if (n < 1000) {
        throw PreconditionError("no_jump_fraction needs at least 1000 trajectories");
    }
    if (!(t >= 0.0)) {
        throw PreconditionError("time must be non-negative");
    }
    p.validate();
    if (t == 0.0) {
        return {1.0, 0.0, n};
    }
    const auto records = simulate_ensemble(p, t, n, master_seed, options);
    std::size_t survived = 0;
    for (const auto &r : records) {
        survived += r.events.empty() ? 1 : 0;
    }
    const double f = static_cast<double>(survived) / static_cast<double>(n);
    return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(n)), n};
}

EnsembleDensity ensemble_density(std::span<const TrajectoryRecord> records)
{
    using Real5 = Eigen::Matrix<double, kCavityStates, kCavityStates>;
    EnsembleDensity out;
    out.samples = records.size();
    out.mean.setZero();
    out.stderr_re.setZero();
    out.stderr_im.setZero();
    if (records.empty()) {
        return out;
    }
    Real5 sum_re = Real5::Zero(), sum_im = Real5::Zero();
    Real5 sq_re = Real5::Zero(), sq_im = Real5::Zero();
    for (const auto &r : records) {
        const DensityMatrix outer = r.final_state * r.final_state.adjoint();
        const Real5 re = outer.real();
        const Real5 im = outer.imag();
        sum_re += re;
        sum_im += im;
        sq_re += re.cwiseAbs2();
        sq_im += im.cwiseAbs2();
    }
    const double n = static_cast<double>(records.size());
    const Real5 mean_re = sum_re / n;
    const Real5 mean_im = sum_im / n;
    out.mean.real() = mean_re;
    out.mean.imag() = mean_im;
    if (records.size() > 1) {
        const Real5 var_re = ((sq_re / n) - mean_re.cwiseAbs2()).cwiseMax(0.0) * (n / (n - 1.0));
        const Real5 var_im = ((sq_im / n) - mean_im.cwiseAbs2()).cwiseMax(0.0) * (n / (n - 1.0));
        out.stderr_re = (var_re / n).cwiseSqrt();
        out.stderr_im = (var_im / n).cwiseSqrt();
    }
    return out;
}

EnsembleDensity ensemble_density_matrix(const SystemParams &p, double t, std::size_t n,
                                        std::uint64_t master_seed,
                                        const EnsembleOptions &options)
{
    const auto records = simulate_ensemble(p, t, n, master_seed, options);
    return ensemble_density(records);
}

std::vector<DensityMatrix> integrate_master_equation_series(const SystemParams &p,
                                                            std::span<const double> times,
                                                            double dt)
{
    if (!(dt > 0.0)) {
        throw PreconditionError("integration step must be positive");
    }
    const Matrix5 h_eff = effective_hamiltonian5(p);
    const auto channels = jump_channels(p);
    auto rhs = [&](const DensityMatrix &rho) { return lindblad_rhs(h_eff, channels, rho); };

    DensityMatrix rho = DensityMatrix::Zero();
    rho(idx(CavityState::e0), idx(CavityState::e0)) = 1.0;
    double now = 0.0;
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    for (double target : times) {
        if (!(target >= 0.0) || !std::isfinite(target)) {
            throw PreconditionError("time must be finite and non-negative");
        }
        if (target < now) {
            throw PreconditionError("sample times must be non-decreasing");
        }
        const double span = target - now;
        if (span > 0.0) {
            const auto steps = static_cast<long>(std::ceil(span / dt));
            const double h = span / static_cast<double>(steps);
            for (long n = 0; n < steps; ++n) {
                const DensityMatrix k1 = rhs(rho);
                const DensityMatrix k2 = rhs(rho + 0.5 * h * k1);
                const DensityMatrix k3 = rhs(rho + 0.5 * h * k2);
                const DensityMatrix k4 = rhs(rho + h * k3);
                rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if (!rho.allFinite()) {
                    break;
                }
            }
            now = target;
        }
        check_density_matrix(rho);
        out.push_back(rho);
    }
    return out;
}

DensityMatrix integrate_master_equation(const SystemParams &p, double t, double dt)
{
    const double times[] = {t};
    return integrate_master_equation_series(p, times, dt).front();
}

void write_trajectory_csv(std::ostream &os, std::span<const TrajectoryRecord> records)
{
    os << "index,first_jump_time,channel,survived\n";
    const auto old_precision = os.precision();
    os << std::setprecision(12);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        os << i << ',';
        if (r.events.empty()) {
            os << ",none,1\n";
        } else {
            os << r.events.front().time << ',' << to_string(r.events.front().channel) << ",0\n";
        }
    }
    os.precision(old_precision);
}

} // namespace qherald
