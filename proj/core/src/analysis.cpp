#include <qherald/analysis.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include <qherald/error.hpp>

namespace qherald {

void Grid::validate() const
{
    if (count == 0) {
        throw PreconditionError("grid must contain at least one point");
    }
    if (!std::isfinite(start) || !std::isfinite(stop)) {
        throw PreconditionError("grid bounds must be finite");
    }
    if (count > 1 && !(stop > start)) {
        throw PreconditionError("grid stop must exceed start");
    }
}

std::vector<double> Grid::points() const
{
    validate();
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = start;
        return out;
    }
    const double h = step();
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = start + h * static_cast<double>(i);
    }
    out.back() = stop;
    return out;
}

double Grid::step() const
{
    return count > 1 ? (stop - start) / static_cast<double>(count - 1) : 0.0;
}

Grid Grid::parse(std::string_view text)
{
    const auto first = text.find(':');
    const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
    if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
        throw PreconditionError("grid must look like start:stop:count");
    }
    auto parse_double = [](std::string_view s) {
        std::string tmp(s);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tmp, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != tmp.size()) {
            throw PreconditionError("invalid number '" + tmp + "' in grid");
        }
        return v;
    };
    Grid g;
    g.start = parse_double(text.substr(0, first));
    g.stop = parse_double(text.substr(first + 1, second - first - 1));
    const auto count_text = text.substr(second + 1);
    std::size_t count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc{} || ptr != count_text.data() + count_text.size()) {
        throw PreconditionError("invalid point count in grid");
    }
    g.count = count;
    g.validate();
    return g;
}

nlohmann::json to_json(const SweepSeries &s)
{
    nlohmann::json pts = nlohmann::json::array();
    for (const auto &[x, y] : s.points) {
        pts.push_back({x, y});
    }
    return {{"axis", s.axis},   {"axis_unit", s.axis_unit}, {"value", s.value},
            {"points", pts},    {"params_echo", s.params_echo}, {"notes", s.notes}};
}

SweepSeries sweep_ptotal(const SystemParams &p, SplitterAngle angle, const Grid &tau_grid)
{
    const auto taus = tau_grid.points();
    for (double tau : taus) {
        if (tau < 0.0) {
            throw PreconditionError("tau grid must be non-negative");
        }
    }
    // The cascade probability does not depend on tau.
    const double p3 = run_cascade(p, angle, ClickSequence::golden()).probability;

    SweepSeries s;
    s.axis = "kappa_tau";
    s.axis_unit = "dimensionless";
    s.value = "P_total";
    s.params_echo = {{"params", to_json(p)}, {"theta", angle.theta()}};
    s.points.reserve(taus.size());
    for (double tau : taus) {
        const double kappa_tau = p.kappa * tau;
        s.points.emplace_back(kappa_tau, p3 * emission_probability_P2(p, {tau, tau, tau, tau}));
    }
    return s;
}

double optimal_tau(const SystemParams &p)
{
    const DerivedRates r = derive_rates(p);
    if (r.overdamped() || r.Omega_k == 0.0) {
        throw DomainError("no oscillatory optimum: Omega^2 <= Delta^2/4 (overdamped); "
                          "locate the maximum with a tau sweep instead");
    }
    // atan2 keeps the angle in (0, pi) for any Gamma >= 0.
    return std::atan2(2.0 * r.Omega_k, r.Gamma) / r.Omega_k;
}

PeakReport peak_report(const SystemParams &p, SplitterAngle angle, const SweepSeries &sweep)
{
    if (sweep.points.empty()) {
        throw PreconditionError("empty sweep");
    }
    PeakReport rep;
    auto best = std::max_element(sweep.points.begin(), sweep.points.end(),
                                 [](const auto &a, const auto &b) { return a.second < b.second; });
    rep.tau_grid_argmax = best->first / p.kappa;
    rep.p_grid_max = best->second;
    rep.grid_step = sweep.points.size() > 1
                        ? (sweep.points.back().first - sweep.points.front().first) /
                              static_cast<double>(sweep.points.size() - 1) / p.kappa
                        : 0.0;
    try {
        const double tau = optimal_tau(p);
        rep.tau_closed_form = tau;
        rep.p_at_closed_form = total_probability(p, angle, {tau, tau, tau, tau});
        rep.consistent = std::abs(tau - rep.tau_grid_argmax) <= rep.grid_step * (1.0 + 1e-9);
    } catch (const DomainError &) {
        rep.consistent = true;
    }
    return rep;
}

SweepSeries fidelity_vs_theta(const SystemParams &p, const Grid &theta_grid)
{
    SweepSeries s;
    s.axis = "theta";
    s.axis_unit = "rad";
    s.value = "fidelity";
    s.params_echo = {{"params", to_json(p)}};
    const QutritPairState target = target_state();
    for (double theta : theta_grid.points()) {
        const CascadeResult r = run_cascade(p, SplitterAngle(theta), ClickSequence::golden());
        if (!r.decoded || r.probability <= 0.0) {
            std::ostringstream note;
            note.precision(12);
            note << "theta=" << theta << " omitted: zero herald probability";
            s.notes.push_back(note.str());
            continue;
        }
        s.points.emplace_back(theta, fidelity(*r.decoded, target));
    }
    return s;
}

SweepSeries fidelity_vs_lambda_ratio(SplitterAngle angle, const Grid &ratio_grid,
                                     const SystemParams &base)
{
    SweepSeries s;
    s.axis = "lambda_ratio";
    s.axis_unit = "dimensionless";
    s.value = "fidelity";
    s.params_echo = {{"params", to_json(base)}, {"theta", angle.theta()}};
    const QutritPairState target = target_state();
    for (double ratio : ratio_grid.points()) {
        if (!(ratio > 0.0)) {
            throw PreconditionError("lambda ratio must be positive");
        }
        SystemParams p = base;
        p.lambda_L = ratio * base.lambda_R;
        const CascadeResult r = run_cascade(p, angle, ClickSequence::golden());
        if (!r.decoded || r.probability <= 0.0) {
            std::ostringstream note;
            note.precision(12);
            note << "ratio=" << ratio << " omitted: zero herald probability";
            s.notes.push_back(note.str());
            continue;
        }
        s.points.emplace_back(ratio, fidelity(*r.decoded, target));
    }
    return s;
}

EfficiencyEffect detector_efficiency_effect(const SystemParams &p, SplitterAngle angle,
                                            const FourTimes &taus, double eta)
{
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw PreconditionError("detector efficiency must lie in [0, 1]");
    }
    const CascadeResult r = run_cascade(p, angle, ClickSequence::golden());
    EfficiencyEffect out;
    // A missed click discards the run; registered runs are post-selected on
    // the same projection, so the heralded state is unchanged.
    out.probability = std::pow(eta, 4) * r.probability * emission_probability_P2(p, taus);
    out.fidelity = r.decoded ? fidelity(*r.decoded, target_state()) : 0.0;
    return out;
}

} // namespace qherald
