#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include <qherald/atom_cavity.hpp>
#include <qherald/polarization.hpp>

namespace qherald {

/// Basis of one atom-cavity system once jumps are allowed: the coherent
/// single-excitation states plus the two dark ground states left behind by a
/// jump.
enum class CavityState : std::uint8_t { e0 = 0, glV, grH, gl0, gr0 };
inline constexpr int kCavityStates = 5;

std::string_view to_string(CavityState s);

enum class JumpChannel : std::uint8_t { CavityLeakL, CavityLeakR, SpontEmitL, SpontEmitR };

std::string_view to_string(JumpChannel c);

/// Collapse operator sqrt(rate) |to><from|.
struct JumpChannelInfo
{
    JumpChannel id;
    double rate = 0.0; ///< 2 kappa, 2 kappa, 2 gamma_l, 2 gamma_r
    CavityState from;
    CavityState to;
};

/// All four channels, including disabled (zero-rate) ones.
std::array<JumpChannelInfo, 4> jump_channels(const SystemParams &p);

using StateVector5 = Eigen::Matrix<Complex, kCavityStates, 1>;
using DensityMatrix = Eigen::Matrix<Complex, kCavityStates, kCavityStates>;

Eigen::Matrix<Complex, kCavityStates, kCavityStates>
effective_hamiltonian5(const SystemParams &p);

struct JumpEvent
{
    double time = 0.0;
    JumpChannel channel = JumpChannel::CavityLeakL;

    bool operator==(const JumpEvent &) const = default;
};

struct TrajectoryRecord
{
    std::uint64_t seed = 0;
    std::vector<JumpEvent> events;
    StateVector5 final_state;          ///< normalized, at t_max
    CavityState final_label = CavityState::e0; ///< dominant basis state at t_max
    /// Set to t_max when the trajectory never jumped.
    std::optional<double> survived_no_jump_until;
    std::optional<Polarization> leaked_photon;

    /// True when a spontaneous-emission photon was lost to free space.
    bool protocol_failure() const;
};

struct TrajectoryOptions
{
    double max_step = 1e-3;        ///< coarse RK4 step
    double time_tolerance = 1e-10; ///< bisection tolerance on jump times
};

/**
 * First-order quantum-jump unravelling of one atom-cavity system started in
 * |e,0>. The unnormalized state evolves under H_eff until its squared norm
 * drops below a uniform draw; the crossing time is refined by bisection, a
 * channel is drawn with weight rate * |<from|psi>|^2, and the state jumps.
 */
TrajectoryRecord simulate_trajectory(const SystemParams &p, double t_max, std::uint64_t seed,
                                     const TrajectoryOptions &options = {});

/// Per-trajectory seed derived from (master_seed, index) only.
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

struct EnsembleOptions
{
    unsigned workers = 0; ///< 0 selects std::thread::hardware_concurrency()
    TrajectoryOptions trajectory;
};

/// Trajectories 0..n-1; the result does not depend on the worker count.
std::vector<TrajectoryRecord> simulate_ensemble(const SystemParams &p, double t_max,
                                                std::size_t n, std::uint64_t master_seed,
                                                const EnsembleOptions &options = {});

struct FractionEstimate
{
    double value = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

/// Fraction of trajectories without any jump before t. Requires n >= 1000.
FractionEstimate no_jump_fraction(const SystemParams &p, double t, std::size_t n,
                                  std::uint64_t master_seed,
                                  const EnsembleOptions &options = {});

/// Summary of an ensemble of final states: mean of |psi><psi| with the
/// standard error of the real and imaginary part of each entry.
struct EnsembleDensity
{
    DensityMatrix mean;
    Eigen::Matrix<double, kCavityStates, kCavityStates> stderr_re;
    Eigen::Matrix<double, kCavityStates, kCavityStates> stderr_im;
    std::size_t samples = 0;
};

EnsembleDensity ensemble_density(std::span<const TrajectoryRecord> records);

EnsembleDensity ensemble_density_matrix(const SystemParams &p, double t, std::size_t n,
                                        std::uint64_t master_seed,
                                        const EnsembleOptions &options = {});

/**
 * Fixed-step RK4 integration of the master equation from |e,0><e,0|. Throws
 * AccuracyError if the result is not a density matrix (trace drift above
 * 1e-6, loss of hermiticity or positivity, non-finite entries).
 */
DensityMatrix integrate_master_equation(const SystemParams &p, double t, double dt);

std::vector<DensityMatrix> integrate_master_equation_series(const SystemParams &p,
                                                            std::span<const double> times,
                                                            double dt);

/// CSV with columns index,first_jump_time,channel,survived.
void write_trajectory_csv(std::ostream &os, std::span<const TrajectoryRecord> records);

} // namespace qherald
