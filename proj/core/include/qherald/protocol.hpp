#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <qherald/atom_cavity.hpp>
#include <qherald/optics.hpp>
#include <qherald/statespace.hpp>

namespace qherald {

/// Ids of the four atom-cavity systems: Alice's A1, A2 and Bob's B1, B2.
inline const std::array<std::string, 4> kSystemIds = {"A1", "A2", "B1", "B2"};

/// Photon source (party, cavity index) for one of kSystemIds.
PhotonSource photon_source(const std::string &system_id, Polarization pol);

using FourTimes = std::array<double, 4>;

/// Two qutrits A and B; amplitude (a, b) multiplies |a>_A |b>_B.
class QutritPairState
{
public:
    QutritPairState() = default;
    explicit QutritPairState(const std::array<Complex, 9> &amplitudes) : amps_(amplitudes) {}

    Complex operator()(int a, int b) const { return amps_.at(3 * a + b); }
    Complex &operator()(int a, int b) { return amps_.at(3 * a + b); }

    const std::array<Complex, 9> &amplitudes() const { return amps_; }
    double norm() const;

    /// Ket over subsystems "A" and "B" with levels "0", "1", "2".
    Ket to_ket() const;

    /// Diagonal of Alice's reduced density matrix.
    std::array<double, 3> reduced_populations_A() const;
    std::array<double, 3> reduced_populations_B() const;

private:
    std::array<Complex, 9> amps_{};
};

/// (|00> + |11> + |22>) / sqrt(3).
QutritPairState target_state();

double fidelity(const QutritPairState &a, const QutritPairState &b);

nlohmann::json to_json(const QutritPairState &q);

/// Ordered detector clicks; optional click times must be non-decreasing.
struct ClickSequence
{
    std::vector<Detector> clicks;
    std::optional<std::vector<double>> times;

    void validate() const;

    /// Da_F -> Db_F -> Da_S -> Db_S.
    static ClickSequence golden();
};

/**
 * Outcome of applying a click sequence to the joint emission state.
 *
 * `raw` and the intermediate states are unnormalized; the k-th click on a
 * detector that already fired k-1 times is divided by sqrt(k), so that the
 * squared norm of `raw` is the probability of the detector occupation
 * pattern the sequence realizes.
 */
struct CascadeResult
{
    ClickSequence sequence;
    Ket raw;
    double probability = 0.0;
    std::optional<QutritPairState> decoded;
    std::vector<Ket> intermediate_states;
    /// Squared-norm ratio contributed by each click.
    std::vector<double> click_factors;
};

nlohmann::json to_json(const CascadeResult &r);

/// Tensor product over A1, A2, B1, B2 of the single-system emission states.
Ket joint_emission_state(const SystemParams &p);

/// Per-system parameters in kSystemIds order; used for mismatched systems.
Ket joint_emission_state(const std::array<SystemParams, 4> &per_system);

/// Probability that every system holds its photon at its own tau_j.
double emission_probability_P2(const SystemParams &p, const FourTimes &taus);

/// Probability that no system has jumped by its tau_j.
double survival_probability_P1(const SystemParams &p, const FourTimes &taus);

/**
 * Annihilates one photon at `det`: the coherent sum, over every undetected
 * photon that can reach the detector, of its transfer amplitude times the
 * state with that photon marked consumed. Returns the zero ket if no photon
 * can reach `det`.
 */
Ket apply_click(const Ket &state, Detector det, SplitterAngle angle);

CascadeResult run_cascade(const SystemParams &p, SplitterAngle angle,
                          const ClickSequence &sequence);

/// Same fold starting from an arbitrary (normalized) emission state.
CascadeResult run_cascade_from(const Ket &initial, SplitterAngle angle,
                               const ClickSequence &sequence);

/**
 * Decodes a four-atom state into the qutrit pair code
 * |0> = |g_l g_l>, |1> = (|g_l g_r> + |g_r g_l>)/sqrt(2), |2> = |g_r g_r>
 * per party, and normalizes. Throws DomainError on residual excited-atom or
 * photon amplitude and EncodingLeakError if the antisymmetric pair
 * component carries more than `leak_tolerance` of the squared norm.
 */
QutritPairState encode_qutrits(const Ket &atomic, double leak_tolerance = 1e-10);

/// P_3 (golden sequence probability) times P_2.
double total_probability(const SystemParams &p, SplitterAngle angle, const FourTimes &taus);

/// Photon counts per detector in kDetectors order.
using OccupationPattern = std::array<int, 4>;

struct OutcomePattern
{
    OccupationPattern counts{};
    double probability = 0.0;
    /// Conditional four-atom state, scaled so that its squared norm equals
    /// `probability`.
    Ket atomic_state;
};

/// Brute-force distribution of the four photons over the detectors; one
/// entry per occupation pattern (35 in total), in lexicographic order.
std::vector<OutcomePattern> enumerate_outcomes(const SystemParams &p, SplitterAngle angle);

} // namespace qherald
