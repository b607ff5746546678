#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include <qherald/atom_cavity.hpp>
#include <qherald/optics.hpp>
#include <qherald/protocol.hpp>

namespace qherald {

/// Inclusive linear grid: `count` points from `start` to `stop`.
struct Grid
{
    double start = 0.0;
    double stop = 0.5;
    std::size_t count = 1000;

    /// Throws PreconditionError on an empty or non-increasing grid.
    void validate() const;
    std::vector<double> points() const;
    double step() const;

    /// Parses "start:stop:count".
    static Grid parse(std::string_view text);

    bool operator==(const Grid &) const = default;
};

/// One (x, y) curve with enough metadata to reproduce it.
struct SweepSeries
{
    std::string axis;       ///< e.g. "kappa_tau"
    std::string axis_unit;  ///< e.g. "dimensionless"
    std::string value;      ///< e.g. "P_total"
    std::vector<std::pair<double, double>> points;
    nlohmann::json params_echo = nlohmann::json::object();
    std::vector<std::string> notes; ///< e.g. omitted grid points
};

nlohmann::json to_json(const SweepSeries &s);

/// P_total(tau) with all four systems sharing the same tau.
SweepSeries sweep_ptotal(const SystemParams &p, SplitterAngle angle, const Grid &tau_grid);

/// arctan(2 Omega_k / Gamma) / Omega_k; throws DomainError when overdamped.
double optimal_tau(const SystemParams &p);

/// Closed-form optimum next to the grid maximum of a P_total sweep.
struct PeakReport
{
    std::optional<double> tau_closed_form; ///< empty when overdamped
    std::optional<double> p_at_closed_form;
    double tau_grid_argmax = 0.0;
    double p_grid_max = 0.0;
    double grid_step = 0.0;
    /// False when the two optima are more than one grid step apart.
    bool consistent = true;
};

PeakReport peak_report(const SystemParams &p, SplitterAngle angle, const SweepSeries &sweep);

/// Fidelity of the decoded golden-sequence state against the target, over
/// splitter angles. Angles with zero herald probability are omitted and
/// listed in `notes`.
SweepSeries fidelity_vs_theta(const SystemParams &p, const Grid &theta_grid);

/// Same, over lambda_L / lambda_R with lambda_R taken from `base`.
SweepSeries fidelity_vs_lambda_ratio(SplitterAngle angle, const Grid &ratio_grid,
                                     const SystemParams &base = {});

struct EfficiencyEffect
{
    double probability = 0.0;
    double fidelity = 0.0;
};

/// Each of the four clicks is registered with probability `eta`.
EfficiencyEffect detector_efficiency_effect(const SystemParams &p, SplitterAngle angle,
                                            const FourTimes &taus, double eta);

} // namespace qherald
