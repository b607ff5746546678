#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <qherald/atom_cavity.hpp>
#include <qherald/error.hpp>
#include <qherald/trajectories.hpp>

using namespace qherald;

namespace {

const SystemParams kLam10{10.0, 10.0, 1.0, 0.1, 0.1};

int idx(CavityState s)
{
    return static_cast<int>(s);
}

} // namespace

TEST(JumpChannels, RatesAndActions)
{
    const SystemParams p{3, 4, 1.5, 0.2, 0.3};
    const auto ch = jump_channels(p);
    EXPECT_EQ(ch[0].id, JumpChannel::CavityLeakL);
    EXPECT_DOUBLE_EQ(ch[0].rate, 3.0);
    EXPECT_EQ(ch[0].from, CavityState::glV);
    EXPECT_EQ(ch[0].to, CavityState::gl0);
    EXPECT_DOUBLE_EQ(ch[1].rate, 3.0);
    EXPECT_EQ(ch[1].from, CavityState::grH);
    EXPECT_EQ(ch[1].to, CavityState::gr0);
    EXPECT_DOUBLE_EQ(ch[2].rate, 0.4);
    EXPECT_EQ(ch[2].from, CavityState::e0);
    EXPECT_EQ(ch[2].to, CavityState::gl0);
    EXPECT_DOUBLE_EQ(ch[3].rate, 0.6);
    EXPECT_EQ(ch[3].to, CavityState::gr0);
}

TEST(Trajectory, Deterministic)
{
    for (std::uint64_t seed : {1ull, 42ull, 12345ull}) {
        const auto a = simulate_trajectory(kLam10, 2.0, seed);
        const auto b = simulate_trajectory(kLam10, 2.0, seed);
        EXPECT_EQ(a.events, b.events);
        EXPECT_EQ(a.final_state, b.final_state);
        EXPECT_EQ(a.final_label, b.final_label);
    }
}

TEST(Trajectory, NoSpontaneousEventsWhenDisabled)
{
    const SystemParams p{10, 10, 1, 0, 0};
    const auto recs = simulate_ensemble(p, 5.0, 2000, 9);
    for (const auto &r : recs) {
        for (const auto &e : r.events) {
            EXPECT_TRUE(e.channel == JumpChannel::CavityLeakL || e.channel == JumpChannel::CavityLeakR);
        }
        EXPECT_FALSE(r.protocol_failure());
    }
}

TEST(Trajectory, EventStructure)
{
    const auto recs = simulate_ensemble({2, 3, 1, 0.5, 0.4}, 10.0, 2000, 5);
    for (const auto &r : recs) {
        int leaks = 0, spont = 0;
        double prev = 0.0;
        for (const auto &e : r.events) {
            EXPECT_GE(e.time, prev);
            prev = e.time;
            const bool leak = e.channel == JumpChannel::CavityLeakL || e.channel == JumpChannel::CavityLeakR;
            (leak ? leaks : spont)++;
        }
        EXPECT_LE(leaks, 1);
        EXPECT_LE(spont, 1);
        EXPECT_EQ(r.protocol_failure(), spont > 0);
        EXPECT_EQ(r.leaked_photon.has_value(), leaks > 0);
        EXPECT_EQ(r.survived_no_jump_until.has_value(), r.events.empty());
        EXPECT_NEAR(r.final_state.norm(), 1.0, 1e-12);
    }
}

TEST(Trajectory, LeakedPolarizationsBalanced)
{
    const auto recs = simulate_ensemble({10, 10, 1, 0.1, 0.1}, 3.0, 100000, 77);
    double v = 0, h = 0;
    for (const auto &r : recs) {
        if (r.leaked_photon) {
            (*r.leaked_photon == Polarization::V ? v : h) += 1;
        }
    }
    const double n = v + h;
    const double sigma = std::sqrt(n * 0.25);
    EXPECT_LT(std::abs(v - n / 2), 3 * sigma);
}

TEST(Trajectory, RejectsBadArguments)
{
    EXPECT_THROW(simulate_trajectory(kLam10, 0.0, 1), PreconditionError);
    EXPECT_THROW(no_jump_fraction(kLam10, 0.1, 999, 1), PreconditionError);
}

TEST(Ensemble, IndependentOfWorkerCount)
{
    EnsembleOptions one;
    one.workers = 1;
    EnsembleOptions many;
    many.workers = 7;
    const auto a = simulate_ensemble(kLam10, 0.5, 3001, 99, one);
    const auto b = simulate_ensemble(kLam10, 0.5, 3001, 99, many);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].events, b[i].events);
        EXPECT_EQ(a[i].seed, b[i].seed);
    }
    const auto da = ensemble_density(a), db = ensemble_density(b);
    EXPECT_EQ(da.mean, db.mean);
}

TEST(Ensemble, SeedStreamsDistinct)
{
    EXPECT_NE(trajectory_seed(1, 0), trajectory_seed(1, 1));
    EXPECT_NE(trajectory_seed(1, 0), trajectory_seed(2, 0));
    EXPECT_EQ(trajectory_seed(5, 3), trajectory_seed(5, 3));
}

TEST(NoJumpFraction, TrivialLimits)
{
    const auto f0 = no_jump_fraction(kLam10, 0.0, 1000, 3);
    EXPECT_EQ(f0.value, 1.0);
    const auto fl = no_jump_fraction(kLam10, 40.0 / 1.2, 10000, 3);
    EXPECT_EQ(fl.value, 0.0);
}

TEST(NoJumpFraction, AgreesWithSurvivalProbability)
{
    const double t = 0.1081;
    const auto f = no_jump_fraction(kLam10, t, 100000, 2024);
    const double p = survival_probability(kLam10, t);
    const double sigma = std::sqrt(p * (1 - p) / f.samples);
    EXPECT_LT(std::abs(f.value - p), 3 * sigma);
}

TEST(MasterEquation, InitialState)
{
    const DensityMatrix r = integrate_master_equation(kLam10, 0.0, 1e-3);
    DensityMatrix expected = DensityMatrix::Zero();
    expected(0, 0) = 1.0;
    EXPECT_EQ(r, expected);
}

TEST(MasterEquation, ExcitedPopulationMatchesAmplitude)
{
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) times.push_back(0.05 * i);
    const auto rhos = integrate_master_equation_series(kLam10, times, 1e-4);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto a = no_jump_amplitudes(kLam10, times[i]);
        EXPECT_NEAR(rhos[i](idx(CavityState::e0), idx(CavityState::e0)).real(), std::norm(a.x), 1e-8);
        EXPECT_NEAR(rhos[i](idx(CavityState::glV), idx(CavityState::glV)).real(), std::norm(a.y), 1e-8);
    }
}

TEST(MasterEquation, DensityMatrixInvariants)
{
    for (double t : {0.05, 0.5, 3.0}) {
        const DensityMatrix r = integrate_master_equation({3, 1, 1, 0.4, 0.2}, t, 1e-3);
        EXPECT_NEAR(r.trace().real(), 1.0, 1e-8);
        EXPECT_LT((r - r.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        Eigen::SelfAdjointEigenSolver<DensityMatrix> es(r);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    }
}

TEST(MasterEquation, StepTooLargeIsReported)
{
    EXPECT_THROW(integrate_master_equation({200, 200, 1, 0, 0}, 5.0, 0.5), AccuracyError);
    EXPECT_THROW(integrate_master_equation(kLam10, 1.0, 0.0), PreconditionError);
}

TEST(MasterEquation, SpontaneousAndLeakRoutesSeparate)
{
    // Terminal gl0 population = leak route (2 kappa integral of |y|^2) plus
    // spontaneous route (2 gamma_l integral of |x|^2).
    const SystemParams p{2, 1, 1, 0.3, 0.1};
    const double T = 30.0;
    const DensityMatrix r = integrate_master_equation(p, T, 1e-3);
    const int n = 60000;
    double iy = 0, ix = 0;
    for (int k = 0; k <= n; ++k) {
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        const auto a = no_jump_amplitudes(p, T * k / n);
        iy += w * std::norm(a.y);
        ix += w * std::norm(a.x);
    }
    iy *= T / n;
    ix *= T / n;
    EXPECT_NEAR(r(idx(CavityState::gl0), idx(CavityState::gl0)).real(),
                2 * p.kappa * iy + 2 * p.gamma_l * ix, 1e-6);
}

TEST(Ensemble, ConvergesToMasterEquation)
{
    const double t = 0.1;
    const DensityMatrix rho = integrate_master_equation(kLam10, t, 1e-4);
    double prev_err = 0;
    for (std::size_t n : {10000u, 100000u}) {
        const auto ens = ensemble_density_matrix(kLam10, t, n, 31);
        double worst_z = 0, err = 0;
        for (int i = 0; i < kCavityStates; ++i) {
            for (int j = 0; j < kCavityStates; ++j) {
                const Complex d = ens.mean(i, j) - rho(i, j);
                err = std::max(err, std::abs(d));
                if (ens.stderr_re(i, j) > 0)
                    worst_z = std::max(worst_z, std::abs(d.real()) / ens.stderr_re(i, j));
                else
                    EXPECT_LT(std::abs(d.real()), 1e-12);
                if (ens.stderr_im(i, j) > 0)
                    worst_z = std::max(worst_z, std::abs(d.imag()) / ens.stderr_im(i, j));
                else
                    EXPECT_LT(std::abs(d.imag()), 1e-12);
            }
        }
        EXPECT_LT(worst_z, 5.0) << "n=" << n;
        if (prev_err > 0) {
            EXPECT_LT(err, prev_err);
        }
        prev_err = err;
    }
}

TEST(TrajectoryCsv, Format)
{
    const auto recs = simulate_ensemble(kLam10, 1.0, 3, 4);
    std::ostringstream os;
    write_trajectory_csv(os, recs);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "index,first_jump_time,channel,survived");
    int rows = 0;
    while (std::getline(is, line)) {
        EXPECT_EQ(line.rfind(std::to_string(rows) + ",", 0), 0u);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}
