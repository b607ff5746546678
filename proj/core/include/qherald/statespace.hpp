#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qherald {

using Complex = std::complex<double>;

inline constexpr double kPruneThreshold = 1e-15;
inline constexpr double kZeroNormThreshold = 1e-14;

/// One tensor factor: a named subsystem with a finite level alphabet.
struct Subsystem
{
    std::string id;
    std::vector<std::string> levels;

    bool operator==(const Subsystem &) const = default;
};

/**
 * Ordered collection of subsystems. Subsystems are kept sorted by id, which
 * fixes the position of each factor inside a Label.
 */
class Space
{
public:
    Space() = default;
    explicit Space(std::vector<Subsystem> subsystems);

    const std::vector<Subsystem> &subsystems() const { return subsystems_; }
    std::size_t size() const { return subsystems_.size(); }

    std::optional<std::size_t> position(std::string_view id) const;
    std::uint8_t level_index(std::size_t position, std::string_view level) const;
    const std::string &level_name(std::size_t position, std::uint8_t index) const;

    /// Disjoint union; throws CompositionError if any id is shared.
    Space joined(const Space &other) const;

    bool operator==(const Space &) const = default;

private:
    std::vector<Subsystem> subsystems_;
};

/// Level index per subsystem, in the canonical order of the owning Space.
using Label = std::vector<std::uint8_t>;

/// (subsystem id, level) pairs; order does not matter.
using LevelAssignment = std::vector<std::pair<std::string, std::string>>;

/**
 * Sparse state vector over a labelled tensor-product basis.
 *
 * Only nonzero amplitudes are stored. A Ket is a plain value: the add()
 * builders exist for construction, and every free function below returns a
 * new Ket.
 */
class Ket
{
public:
    using AmplitudeMap = std::map<Label, Complex>;

    Ket() = default;
    explicit Ket(Space space);
    Ket(Space space, AmplitudeMap amplitudes);

    /// Unit-amplitude basis ket.
    static Ket basis(Space space, const LevelAssignment &levels);

    const Space &space() const { return space_; }
    const AmplitudeMap &amplitudes() const { return amps_; }
    bool empty() const { return amps_.empty(); }

    Complex amplitude(const Label &label) const;
    Complex amplitude(const LevelAssignment &levels) const;

    Label label(const LevelAssignment &levels) const;
    std::string label_string(const Label &label) const;

    double squared_norm() const;
    double norm() const;

    Ket &add(const Label &label, Complex amplitude);
    Ket &add(const LevelAssignment &levels, Complex amplitude);

    /// Drops amplitudes whose magnitude is below `threshold`.
    Ket pruned(double threshold = kPruneThreshold) const;
    Ket scaled(Complex factor) const;

private:
    void check_label(const Label &label) const;

    Space space_;
    AmplitudeMap amps_;
};

Ket operator+(const Ket &a, const Ket &b);
Ket operator-(const Ket &a, const Ket &b);
Ket operator*(Complex factor, const Ket &k);

/// Single-subsystem ket with the given level amplitudes.
Ket single_system_ket(const Subsystem &subsystem,
                      const std::vector<std::pair<std::string, Complex>> &terms);

Ket tensor_product(const Ket &a, const Ket &b);

/// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const Ket &a, const Ket &b);

struct NormalizedKet
{
    Ket ket;
    double norm = 0.0;
};

/// Throws DegenerateStateError when the norm is below `zero_threshold`.
NormalizedKet normalize(const Ket &k, double zero_threshold = kZeroNormThreshold);

/// |<a|b>|^2 for normalized kets; throws PreconditionError otherwise.
double fidelity(const Ket &a, const Ket &b, double tolerance = 1e-10);

/// {"space": [{"id", "levels"}], "amps": [{"label": {id: level}, "re", "im"}]}
nlohmann::json to_json(const Ket &k);
Ket ket_from_json(const nlohmann::json &j);

} // namespace qherald
