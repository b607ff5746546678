#include <qherald/protocol.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <qherald/error.hpp>

namespace qherald {

namespace {

const std::string kPhotonSuffix = ".photon";

struct PhotonSlot
{
    std::size_t position;
    std::string system_id;
};

std::vector<PhotonSlot> photon_slots(const Space &space)
{
    std::vector<PhotonSlot> out;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const std::string &id = space.subsystems()[i].id;
        if (id.size() > kPhotonSuffix.size() && id.ends_with(kPhotonSuffix)) {
            out.push_back({i, id.substr(0, id.size() - kPhotonSuffix.size())});
        }
    }
    return out;
}

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

} // namespace

PhotonSource photon_source(const std::string &system_id, Polarization pol)
{
    if (system_id.size() != 2 || (system_id[0] != 'A' && system_id[0] != 'B') ||
        (system_id[1] != '1' && system_id[1] != '2')) {
        throw PreconditionError("unknown system id '" + system_id + "'");
    }
    return {system_id[0] == 'A' ? Party::Alice : Party::Bob, system_id[1] - '0', pol};
}

double QutritPairState::norm() const
{
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

Ket QutritPairState::to_ket() const
{
    const std::vector<std::string> levels = {"0", "1", "2"};
    Ket k(Space({{"A", levels}, {"B", levels}}));
    for (std::uint8_t a = 0; a < 3; ++a) {
        for (std::uint8_t b = 0; b < 3; ++b) {
            k.add(Label{a, b}, (*this)(a, b));
        }
    }
    return k;
}

std::array<double, 3> QutritPairState::reduced_populations_A() const
{
    std::array<double, 3> pops{};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            pops[a] += std::norm((*this)(a, b));
        }
    }
    return pops;
}

std::array<double, 3> QutritPairState::reduced_populations_B() const
{
    std::array<double, 3> pops{};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            pops[b] += std::norm((*this)(a, b));
        }
    }
    return pops;
}

QutritPairState target_state()
{
    QutritPairState q;
    const double amp = 1.0 / std::numbers::sqrt3;
    for (int k = 0; k < 3; ++k) {
        q(k, k) = amp;
    }
    return q;
}

double fidelity(const QutritPairState &a, const QutritPairState &b)
{
    return fidelity(a.to_ket(), b.to_ket());
}

nlohmann::json to_json(const QutritPairState &q)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int a = 0; a < 3; ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (int b = 0; b < 3; ++b) {
            row.push_back({{"re", q(a, b).real()}, {"im", q(a, b).imag()}});
        }
        rows.push_back(row);
    }
    return rows;
}

void ClickSequence::validate() const
{
    if (times) {
        if (times->size() != clicks.size()) {
            throw PreconditionError("click times must match the number of clicks");
        }
        if (!std::is_sorted(times->begin(), times->end())) {
            throw PreconditionError("click times must be non-decreasing");
        }
    }
}

ClickSequence ClickSequence::golden()
{
    return {{Detector::Da_F, Detector::Db_F, Detector::Da_S, Detector::Db_S}, std::nullopt};
}

nlohmann::json to_json(const CascadeResult &r)
{
    nlohmann::json seq = nlohmann::json::array();
    for (Detector d : r.sequence.clicks) {
        seq.push_back(std::string(to_string(d)));
    }
    nlohmann::json intermediate = nlohmann::json::array();
    for (const auto &k : r.intermediate_states) {
        intermediate.push_back(to_json(k));
    }
    nlohmann::json j = {
        {"sequence", seq},
        {"times", r.sequence.times ? nlohmann::json(*r.sequence.times) : nlohmann::json(nullptr)},
        {"probability", r.probability},
        {"click_factors", r.click_factors},
        {"raw", to_json(r.raw)},
        {"intermediate_states", intermediate},
        {"decoded", r.decoded ? to_json(*r.decoded) : nlohmann::json(nullptr)},
    };
    return j;
}

Ket joint_emission_state(const SystemParams &p)
{
    return joint_emission_state(std::array<SystemParams, 4>{p, p, p, p});
}

Ket joint_emission_state(const std::array<SystemParams, 4> &per_system)
{
    Ket joint = emission_state(per_system[0], kSystemIds[0]);
    for (std::size_t j = 1; j < kSystemIds.size(); ++j) {
        joint = tensor_product(joint, emission_state(per_system[j], kSystemIds[j]));
    }
    return joint;
}

double emission_probability_P2(const SystemParams &p, const FourTimes &taus)
{
    double prod = 1.0;
    for (double tau : taus) {
        prod *= photon_branch_probability(p, tau);
    }
    return prod;
}

double survival_probability_P1(const SystemParams &p, const FourTimes &taus)
{
    double prod = 1.0;
    for (double tau : taus) {
        prod *= survival_probability(p, tau);
    }
    return prod;
}

Ket apply_click(const Ket &state, Detector det, SplitterAngle angle)
{
    const Space &space = state.space();
    const auto slots = photon_slots(space);

    struct Route
    {
        std::size_t position;
        std::uint8_t v, h, consumed;
        Complex amp_v, amp_h;
    };
    std::vector<Route> routes;
    routes.reserve(slots.size());
    for (const auto &slot : slots) {
        Route r;
        r.position = slot.position;
        r.v = space.level_index(slot.position, "V");
        r.h = space.level_index(slot.position, "H");
        r.consumed = space.level_index(slot.position, "consumed");
        r.amp_v = detector_amplitude(photon_source(slot.system_id, Polarization::V), det, angle);
        r.amp_h = detector_amplitude(photon_source(slot.system_id, Polarization::H), det, angle);
        routes.push_back(r);
    }

    Ket out(space);
    bool any_photon = false;
    for (const auto &[label, amp] : state.amplitudes()) {
        for (const auto &r : routes) {
            const std::uint8_t level = label[r.position];
            if (level != r.v && level != r.h) {
                continue;
            }
            any_photon = true;
            const Complex route_amp = level == r.v ? r.amp_v : r.amp_h;
            if (route_amp == Complex{}) {
                continue;
            }
            Label next = label;
            next[r.position] = r.consumed;
            out.add(next, route_amp * amp);
        }
    }
    if (!state.empty() && !any_photon) {
        throw PreconditionError("no undetected photon left to click on");
    }
    return out.pruned();
}

CascadeResult run_cascade(const SystemParams &p, SplitterAngle angle,
                          const ClickSequence &sequence)
{
    return run_cascade_from(joint_emission_state(p), angle, sequence);
}

CascadeResult run_cascade_from(const Ket &initial, SplitterAngle angle,
                               const ClickSequence &sequence)
{
    sequence.validate();
    if (sequence.clicks.size() != 4) {
        throw PreconditionError("a cascade needs exactly four clicks");
    }
    const double initial_sq = initial.squared_norm();
    if (!(initial_sq > 0.0)) {
        throw DegenerateStateError("cascade input state is zero");
    }

    CascadeResult result;
    result.sequence = sequence;
    std::map<Detector, int> fired;
    Ket current = initial;
    double current_sq = initial_sq;
    for (Detector det : sequence.clicks) {
        const int k = ++fired[det];
        Ket next = apply_click(current, det, angle);
        if (k > 1) {
            next = next.scaled(1.0 / std::sqrt(static_cast<double>(k)));
        }
        const double next_sq = next.squared_norm();
        result.click_factors.push_back(current_sq > 0.0 ? next_sq / current_sq : 0.0);
        result.intermediate_states.push_back(next);
        current = std::move(next);
        current_sq = next_sq;
    }
    result.raw = current;
    result.probability = std::clamp(current_sq / initial_sq, 0.0, 1.0);
    if (current.norm() > kZeroNormThreshold * std::sqrt(initial_sq)) {
        try {
            result.decoded = encode_qutrits(current);
        } catch (const EncodingLeakError &) {
            // Mismatched systems can populate the antisymmetric pair state,
            // which has no qutrit image.
            result.decoded = std::nullopt;
        }
    }
    return result;
}

QutritPairState encode_qutrits(const Ket &atomic, double leak_tolerance)
{
    const Space &space = atomic.space();
    std::array<std::size_t, 4> atom_pos{};
    for (std::size_t j = 0; j < kSystemIds.size(); ++j) {
        auto pos = space.position(kSystemIds[j]);
        if (!pos) {
            throw DomainError("state lacks atom '" + kSystemIds[j] + "'");
        }
        atom_pos[j] = *pos;
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        const std::string &id = space.subsystems()[i].id;
        const bool is_atom = std::find(kSystemIds.begin(), kSystemIds.end(), id) != kSystemIds.end();
        const bool is_photon = id.ends_with(kPhotonSuffix);
        if (!is_atom && !is_photon) {
            throw DomainError("unexpected subsystem '" + id + "' in atomic state");
        }
    }

    // Pair basis per party: 0 = gl gl, 1 = symmetric, 2 = gr gr, 3 = antisymmetric.
    // Entries map (first atom gr?, second atom gr?) to (pair index, coefficient).
    const double r = 1.0 / std::numbers::sqrt2;
    struct PairTerm
    {
        int first;
        double c_first;
        int second; ///< -1 if the pair state maps to a single code word
        double c_second;
    };
    const PairTerm pair_terms[2][2] = {
        {{0, 1.0, -1, 0.0}, {1, r, 3, r}},
        {{1, r, 3, -r}, {2, 1.0, -1, 0.0}},
    };

    std::array<std::array<Complex, 4>, 4> coded{};
    for (const auto &[label, amp] : atomic.amplitudes()) {
        std::array<int, 4> is_right{};
        for (std::size_t j = 0; j < 4; ++j) {
            const std::string &level = space.level_name(atom_pos[j], label[atom_pos[j]]);
            if (level == "gl") {
                is_right[j] = 0;
            } else if (level == "gr") {
                is_right[j] = 1;
            } else {
                throw DomainError("atom '" + kSystemIds[j] + "' is not in a ground state");
            }
        }
        for (std::size_t i = 0; i < space.size(); ++i) {
            if (space.subsystems()[i].id.ends_with(kPhotonSuffix) &&
                space.level_name(i, label[i]) != "consumed") {
                throw DomainError("photon in '" + space.subsystems()[i].id +
                                  "' has not been detected");
            }
        }
        const PairTerm &ta = pair_terms[is_right[0]][is_right[1]];
        const PairTerm &tb = pair_terms[is_right[2]][is_right[3]];
        for (int ia = 0; ia < 2; ++ia) {
            const int qa = ia == 0 ? ta.first : ta.second;
            const double ca = ia == 0 ? ta.c_first : ta.c_second;
            if (qa < 0) {
                continue;
            }
            for (int ib = 0; ib < 2; ++ib) {
                const int qb = ib == 0 ? tb.first : tb.second;
                const double cb = ib == 0 ? tb.c_first : tb.c_second;
                if (qb < 0) {
                    continue;
                }
                coded[qa][qb] += ca * cb * amp;
            }
        }
    }

    double total = 0.0;
    double leak = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const double w = std::norm(coded[a][b]);
            total += w;
            if (a == 3 || b == 3) {
                leak += w;
            }
        }
    }
    if (!(total > kZeroNormThreshold * kZeroNormThreshold)) {
        throw DegenerateStateError("cannot decode a zero state");
    }
    if (leak > leak_tolerance * total) {
        throw EncodingLeakError("antisymmetric pair component carries weight " +
                                std::to_string(leak / total));
    }
    QutritPairState q;
    const double scale = 1.0 / std::sqrt(total - leak);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            q(a, b) = coded[a][b] * scale;
        }
    }
    return q;
}

double total_probability(const SystemParams &p, SplitterAngle angle, const FourTimes &taus)
{
    const double p3 = run_cascade(p, angle, ClickSequence::golden()).probability;
    return p3 * emission_probability_P2(p, taus);
}

std::vector<OutcomePattern> enumerate_outcomes(const SystemParams &p, SplitterAngle angle)
{
    p.validate();
    const double omega = std::hypot(p.lambda_L, p.lambda_R);
    const Space atoms({atom_subsystem(kSystemIds[0]), atom_subsystem(kSystemIds[1]),
                       atom_subsystem(kSystemIds[2]), atom_subsystem(kSystemIds[3])});
    const std::uint8_t gl = atoms.level_index(0, "gl");
    const std::uint8_t gr = atoms.level_index(0, "gr");

    std::map<OccupationPattern, Ket> by_pattern;
    for (int n0 = 0; n0 <= 4; ++n0) {
        for (int n1 = 0; n0 + n1 <= 4; ++n1) {
            for (int n2 = 0; n0 + n1 + n2 <= 4; ++n2) {
                by_pattern.emplace(OccupationPattern{n0, n1, n2, 4 - n0 - n1 - n2}, Ket(atoms));
            }
        }
    }

    // Each system emits V (atom left in g_l) or H (g_r); each photon lands in
    // one of the four detectors.
    for (int pol_bits = 0; pol_bits < 16; ++pol_bits) {
        Label atom_label(4);
        std::array<Polarization, 4> pols{};
        double emission_amp = 1.0;
        for (int j = 0; j < 4; ++j) {
            const bool horizontal = (pol_bits >> j) & 1;
            pols[j] = horizontal ? Polarization::H : Polarization::V;
            atom_label[*atoms.position(kSystemIds[j])] = horizontal ? gr : gl;
            emission_amp *= (horizontal ? p.lambda_R : p.lambda_L) / omega;
        }
        if (emission_amp == 0.0) {
            continue;
        }
        for (int det_code = 0; det_code < 256; ++det_code) {
            OccupationPattern counts{};
            Complex amp = emission_amp;
            for (int j = 0; j < 4 && amp != Complex{}; ++j) {
                const int d = (det_code >> (2 * j)) & 3;
                amp *= detector_amplitude(photon_source(kSystemIds[j], pols[j]), kDetectors[d],
                                          angle);
                ++counts[d];
            }
            if (amp == Complex{}) {
                continue;
            }
            by_pattern.at(counts).add(atom_label, amp);
        }
    }

    std::vector<OutcomePattern> out;
    out.reserve(by_pattern.size());
    for (auto &[counts, ket] : by_pattern) {
        // Bosonic amplitude of |n_1 .. n_4>: sqrt(prod n_d!) times the sum
        // over photon-to-detector assignments.
        int multiplicity = 1;
        for (int n : counts) {
            multiplicity *= factorial(n);
        }
        OutcomePattern o;
        o.counts = counts;
        o.atomic_state = ket.scaled(std::sqrt(static_cast<double>(multiplicity))).pruned();
        o.probability = o.atomic_state.squared_norm();
        out.push_back(std::move(o));
    }
    return out;
}

} // namespace qherald
