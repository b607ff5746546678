#pragma once

// Reference computations used by the tests. Nothing here calls into the
// library's physics; the formulas are re-derived directly.

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <qherald/atom_cavity.hpp>
#include <qherald/statespace.hpp>

namespace oracle {

using cd = std::complex<double>;

// Closed-form no-jump amplitudes with a complex frequency, so the same
// expression covers both the oscillating and the overdamped regime.
struct Amps
{
    cd x, y, z;
};

inline Amps closed_form(const qherald::SystemParams &p, double t)
{
    const double omega2 = p.lambda_L * p.lambda_L + p.lambda_R * p.lambda_R;
    const double gamma = p.gamma_l + p.gamma_r + p.kappa;
    const double delta = p.kappa - p.gamma_l - p.gamma_r;
    const cd wk = std::sqrt(cd(omega2 - delta * delta / 4.0, 0.0));
    const double env = std::exp(-gamma * t / 2.0);
    const cd s = std::sin(wk * t) / wk;
    const cd c = std::cos(wk * t);
    const cd i(0.0, 1.0);
    return {env * (c + delta / 2.0 * s), -i * env * s * p.lambda_L, -i * env * s * p.lambda_R};
}

// Survival probability written out term by term.
inline double survival(const qherald::SystemParams &p, double t)
{
    const double omega2 = p.lambda_L * p.lambda_L + p.lambda_R * p.lambda_R;
    const double gamma = p.gamma_l + p.gamma_r + p.kappa;
    const double delta = p.kappa - p.gamma_l - p.gamma_r;
    const double wk = std::sqrt(omega2 - delta * delta / 4.0);
    const double c = std::cos(wk * t), s = std::sin(wk * t);
    const double a = c + delta / (2.0 * wk) * s;
    return std::exp(-gamma * t) * (a * a + s * s * omega2 / (wk * wk));
}

inline double emission_factor(const qherald::SystemParams &p, double t)
{
    const double omega2 = p.lambda_L * p.lambda_L + p.lambda_R * p.lambda_R;
    const double gamma = p.gamma_l + p.gamma_r + p.kappa;
    const double delta = p.kappa - p.gamma_l - p.gamma_r;
    const double wk2 = omega2 - delta * delta / 4.0;
    const double s = std::sin(std::sqrt(wk2) * t);
    return std::exp(-gamma * t) * s * s * omega2 / wk2;
}

// ---------------------------------------------------------------------------
// Four-system collapse chain written as explicit sums of product states.
//
// Each system A1, A2, B1, B2 carries one of four local states:
//   0 = gl with V photon, 1 = gr with H photon,
//   2 = gl with photon detected, 3 = gr with photon detected.

using Local = std::array<cd, 4>;
using Dense = std::array<cd, 256>;

inline int dense_index(int a1, int a2, int b1, int b2)
{
    return ((a1 * 4 + a2) * 4 + b1) * 4 + b2;
}

struct ChainBuilder
{
    double lL, lR, omega;
    Local phi() const { return {lL / omega, lR / omega, 0.0, 0.0}; }
    static Local gl() { return {0.0, 0.0, 1.0, 0.0}; }
    static Local gr() { return {0.0, 0.0, 0.0, 1.0}; }

    Dense out{};

    void add(cd coeff, const Local &a1, const Local &a2, const Local &b1, const Local &b2)
    {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l)
                        out[dense_index(i, j, k, l)] += coeff * a1[i] * a2[j] * b1[k] * b2[l];
    }
};

// Unnormalized states after m = 1..4 clicks of Da_F, Db_F, Da_S, Db_S.
inline Dense collapse_chain(int m, double lL, double lR, double theta)
{
    ChainBuilder b{lL, lR, std::sqrt(lL * lL + lR * lR)};
    const double c = std::cos(theta), s = std::sin(theta), c2 = std::cos(2 * theta);
    const double r2 = std::sqrt(2.0);
    const double W = b.omega;
    const Local gl = ChainBuilder::gl(), gr = ChainBuilder::gr(), phi = b.phi();
    // |1> on one party, (|gl gr> + |gr gl>)/sqrt2
    auto one = [&](cd k, bool partyA, const Local &o1, const Local &o2) {
        if (partyA) {
            b.add(k / r2, gl, gr, o1, o2);
            b.add(k / r2, gr, gl, o1, o2);
        } else {
            b.add(k / r2, o1, o2, gl, gr);
            b.add(k / r2, o1, o2, gr, gl);
        }
    };
    switch (m) {
    case 1:
        b.add(c * lL / W, gl, phi, phi, phi);
        b.add(c * lL / W, phi, gl, phi, phi);
        b.add(s * lR / W, phi, phi, gr, phi);
        b.add(s * lR / W, phi, phi, phi, gr);
        break;
    case 2: {
        const double k = 1.0 / (W * W);
        one(k * r2 * c * s * lL * lR, true, phi, phi);
        for (auto [a1, a2] : {std::pair{gl, phi}, std::pair{phi, gl}})
            for (auto [b1, b2] : {std::pair{gl, phi}, std::pair{phi, gl}})
                b.add(k * c * c * lL * lL, a1, a2, b1, b2);
        for (auto [a1, a2] : {std::pair{gr, phi}, std::pair{phi, gr}})
            for (auto [b1, b2] : {std::pair{gr, phi}, std::pair{phi, gr}})
                b.add(k * s * s * lR * lR, a1, a2, b1, b2);
        one(k * r2 * s * c * lR * lL, false, phi, phi);
        break;
    }
    case 3: {
        const double k = 1.0 / (W * W * W);
        for (auto [b1, b2] : {std::pair{gl, phi}, std::pair{phi, gl}})
            b.add(k * 2 * c * c * s * lL * lL * lL, gl, gl, b1, b2);
        for (auto [b1, b2] : {std::pair{gr, phi}, std::pair{phi, gr}})
            one(-k * r2 * lL * lR * lR * s * c2, true, b1, b2);
        for (auto [a1, a2] : {std::pair{gl, phi}, std::pair{phi, gl}})
            one(-k * r2 * lR * lL * lL * c * c2, false, a1, a2);
        for (auto [a1, a2] : {std::pair{gr, phi}, std::pair{phi, gr}})
            b.add(-k * 2 * s * s * c * lR * lR * lR, a1, a2, gr, gr);
        break;
    }
    case 4: {
        const double k = 1.0 / (W * W * W * W);
        const double s2 = std::sin(2 * theta);
        b.add(k * s2 * s2 * std::pow(lL, 4), gl, gl, gl, gl);
        b.add(k * s2 * s2 * std::pow(lR, 4), gr, gr, gr, gr);
        const double k11 = k * 2 * c2 * c2 * lL * lL * lR * lR / 2.0;
        for (auto [a1, a2] : {std::pair{gl, gr}, std::pair{gr, gl}})
            for (auto [b1, b2] : {std::pair{gl, gr}, std::pair{gr, gl}})
                b.add(k11, a1, a2, b1, b2);
        break;
    }
    default:
        break;
    }
    return b.out;
}

// The library Ket projected onto the same dense layout; `outside` receives
// the squared weight of any amplitude that does not fit the layout.
inline Dense to_dense(const qherald::Ket &k, double &outside)
{
    static const char *atom[4] = {"gl", "gr", "gl", "gr"};
    static const char *photon[4] = {"V", "H", "consumed", "consumed"};
    static const char *ids[4] = {"A1", "A2", "B1", "B2"};
    Dense d{};
    double inside = 0.0;
    for (int idx = 0; idx < 256; ++idx) {
        int local[4] = {idx >> 6 & 3, idx >> 4 & 3, idx >> 2 & 3, idx & 3};
        qherald::LevelAssignment levels;
        for (int j = 0; j < 4; ++j) {
            levels.emplace_back(ids[j], atom[local[j]]);
            levels.emplace_back(std::string(ids[j]) + ".photon", photon[local[j]]);
        }
        d[idx] = k.amplitude(levels);
        inside += std::norm(d[idx]);
    }
    outside = k.squared_norm() - inside;
    return d;
}

inline double dense_norm2(const Dense &d)
{
    double n = 0;
    for (const auto &v : d) n += std::norm(v);
    return n;
}

// Max amplitude deviation after normalizing both and removing global phase.
inline double normalized_deviation(const Dense &a, const Dense &b)
{
    cd overlap = 0;
    for (int i = 0; i < 256; ++i) overlap += std::conj(a[i]) * b[i];
    const double na = std::sqrt(dense_norm2(a)), nb = std::sqrt(dense_norm2(b));
    const cd phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cd(1.0);
    double worst = 0;
    for (int i = 0; i < 256; ++i) {
        worst = std::max(worst, std::abs(a[i] / na * phase - b[i] / nb));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Fidelity of the final four-click state with the maximally entangled qutrit
// pair, from the final-state amplitudes on |00>, |11>, |22>.
inline double final_state_fidelity(double lL, double lR, double theta)
{
    const double s2 = std::pow(std::sin(2 * theta), 2);
    const double c2 = std::pow(std::cos(2 * theta), 2);
    const double a0 = s2 * std::pow(lL, 4), a1 = 2 * c2 * lL * lL * lR * lR,
                 a2 = s2 * std::pow(lR, 4);
    const double sum = a0 + a1 + a2;
    return sum * sum / (3.0 * (a0 * a0 + a1 * a1 + a2 * a2));
}

inline double cascade_probability(double lL, double lR, double theta)
{
    const double s2 = std::pow(std::sin(2 * theta), 2);
    const double c2 = std::pow(std::cos(2 * theta), 2);
    const double w8 = std::pow(lL * lL + lR * lR, 4);
    return (s2 * s2 * (std::pow(lL, 8) + std::pow(lR, 8)) +
            4 * c2 * c2 * std::pow(lL * lR, 4)) / w8;
}

inline double canonical_theta()
{
    return 0.5 * std::atan(std::sqrt(2.0));
}

// ---------------------------------------------------------------------------
// Brute-force detector statistics for four independent photons.
//
// Each system emits V (amplitude lL/W, atom gl) or H (lR/W, atom gr). Photon
// routes: Alice V, Bob H -> path a; Alice H, Bob V -> path b. On each path
// V -> cos F + sin S, H -> sin F - cos S. A detector occupation pattern
// with counts n_d has probability sum over atomic configurations of
// |sum over assignments of product amplitudes|^2 * prod n_d!.

inline std::map<std::array<int, 4>, double> pattern_probabilities(double lL, double lR,
                                                                 double theta)
{
    const double W = std::sqrt(lL * lL + lR * lR);
    const double c = std::cos(theta), s = std::sin(theta);
    // detector order: Da_F, Da_S, Db_F, Db_S
    std::map<std::pair<int, std::array<int, 4>>, double> amp; // (atoms, counts)
    for (int pol = 0; pol < 16; ++pol) {
        double emit = 1.0;
        std::array<std::array<double, 4>, 4> det{}; // per system, detector amplitudes
        for (int j = 0; j < 4; ++j) {
            const bool h = pol >> j & 1;
            const bool alice = j < 2;
            emit *= h ? lR / W : lL / W;
            const bool path_a = alice ? !h : h;
            const double f = h ? s : c, sp = h ? -c : s;
            det[j] = path_a ? std::array<double, 4>{f, sp, 0, 0}
                            : std::array<double, 4>{0, 0, f, sp};
        }
        for (int assign = 0; assign < 256; ++assign) {
            std::array<int, 4> counts{};
            double a = emit;
            for (int j = 0; j < 4; ++j) {
                const int d = assign >> (2 * j) & 3;
                a *= det[j][d];
                counts[d]++;
            }
            amp[{pol, counts}] += a;
        }
    }
    std::map<std::array<int, 4>, double> prob;
    for (const auto &[key, a] : amp) {
        double fact = 1.0;
        for (int n : key.second) fact *= std::tgamma(n + 1.0);
        prob[key.second] += a * a * fact;
    }
    return prob;
}

inline qherald::SystemParams random_params(std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> lam(0.5, 20.0), gam(0.0, 0.5);
    return {lam(rng), lam(rng), 1.0, gam(rng), gam(rng)};
}

} // namespace oracle
