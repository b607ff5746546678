#include <qherald/statespace.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <qherald/error.hpp>

namespace qherald {

Space::Space(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems))
{
    std::sort(subsystems_.begin(), subsystems_.end(),
              [](const Subsystem &a, const Subsystem &b) { return a.id < b.id; });
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        const auto &s = subsystems_[i];
        if (s.id.empty()) {
            throw CompositionError("subsystem id must not be empty");
        }
        if (i > 0 && subsystems_[i - 1].id == s.id) {
            throw CompositionError("duplicate subsystem id '" + s.id + "'");
        }
        if (s.levels.empty() ||
            s.levels.size() > std::numeric_limits<std::uint8_t>::max()) {
            throw CompositionError("subsystem '" + s.id + "' has an invalid alphabet");
        }
        std::set<std::string> unique(s.levels.begin(), s.levels.end());
        if (unique.size() != s.levels.size()) {
            throw CompositionError("subsystem '" + s.id + "' repeats a level name");
        }
    }
}

std::optional<std::size_t> Space::position(std::string_view id) const
{
    auto it = std::lower_bound(
        subsystems_.begin(), subsystems_.end(), id,
        [](const Subsystem &s, std::string_view key) { return s.id < key; });
    if (it == subsystems_.end() || it->id != id) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - subsystems_.begin());
}

std::uint8_t Space::level_index(std::size_t position, std::string_view level) const
{
    const auto &levels = subsystems_.at(position).levels;
    auto it = std::find(levels.begin(), levels.end(), level);
    if (it == levels.end()) {
        throw PreconditionError("level '" + std::string(level) +
                                "' is not registered for subsystem '" +
                                subsystems_[position].id + "'");
    }
    return static_cast<std::uint8_t>(it - levels.begin());
}

const std::string &Space::level_name(std::size_t position, std::uint8_t index) const
{
    return subsystems_.at(position).levels.at(index);
}

Space Space::joined(const Space &other) const
{
    for (const auto &s : other.subsystems_) {
        if (position(s.id)) {
            throw CompositionError("subsystem '" + s.id + "' appears in both operands");
        }
    }
    std::vector<Subsystem> all = subsystems_;
    all.insert(all.end(), other.subsystems_.begin(), other.subsystems_.end());
    return Space(std::move(all));
}

Ket::Ket(Space space) : space_(std::move(space)) {}

Ket::Ket(Space space, AmplitudeMap amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes))
{
    for (const auto &[label, amp] : amps_) {
        check_label(label);
    }
    std::erase_if(amps_, [](const auto &kv) { return kv.second == Complex{}; });
}

Ket Ket::basis(Space space, const LevelAssignment &levels)
{
    Ket k(std::move(space));
    k.add(levels, 1.0);
    return k;
}

void Ket::check_label(const Label &label) const
{
    if (label.size() != space_.size()) {
        throw CompositionError("label arity does not match the space");
    }
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (label[i] >= space_.subsystems()[i].levels.size()) {
            throw CompositionError("level index out of range for subsystem '" +
                                   space_.subsystems()[i].id + "'");
        }
    }
}

Label Ket::label(const LevelAssignment &levels) const
{
    if (levels.size() != space_.size()) {
        throw PreconditionError("level assignment must name every subsystem exactly once");
    }
    Label out(space_.size(), 0);
    std::vector<bool> seen(space_.size(), false);
    for (const auto &[id, level] : levels) {
        auto pos = space_.position(id);
        if (!pos) {
            throw PreconditionError("unknown subsystem '" + id + "'");
        }
        if (seen[*pos]) {
            throw PreconditionError("subsystem '" + id + "' assigned twice");
        }
        seen[*pos] = true;
        out[*pos] = space_.level_index(*pos, level);
    }
    return out;
}

std::string Ket::label_string(const Label &label) const
{
    std::string out = "|";
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += space_.subsystems()[i].id;
        out += '=';
        out += space_.level_name(i, label[i]);
    }
    out += '>';
    return out;
}

Complex Ket::amplitude(const Label &label) const
{
    auto it = amps_.find(label);
    return it == amps_.end() ? Complex{} : it->second;
}

Complex Ket::amplitude(const LevelAssignment &levels) const
{
    return amplitude(label(levels));
}

double Ket::squared_norm() const
{
    double s = 0.0;
    for (const auto &[label, amp] : amps_) {
        s += std::norm(amp);
    }
    return s;
}

double Ket::norm() const { return std::sqrt(squared_norm()); }

Ket &Ket::add(const Label &label, Complex amplitude)
{
    check_label(label);
    if (amplitude == Complex{}) {
        return *this;
    }
    auto [it, inserted] = amps_.try_emplace(label, amplitude);
    if (!inserted) {
        it->second += amplitude;
        if (it->second == Complex{}) {
            amps_.erase(it);
        }
    }
    return *this;
}

Ket &Ket::add(const LevelAssignment &levels, Complex amplitude)
{
    return add(label(levels), amplitude);
}

Ket Ket::pruned(double threshold) const
{
    Ket out(space_);
    for (const auto &[label, amp] : amps_) {
        if (std::abs(amp) >= threshold) {
            out.amps_.emplace_hint(out.amps_.end(), label, amp);
        }
    }
    return out;
}

Ket Ket::scaled(Complex factor) const
{
    Ket out(space_);
    if (factor == Complex{}) {
        return out;
    }
    for (const auto &[label, amp] : amps_) {
        out.amps_.emplace_hint(out.amps_.end(), label, factor * amp);
    }
    return out;
}

Ket operator+(const Ket &a, const Ket &b)
{
    if (!(a.space() == b.space())) {
        throw CompositionError("cannot add kets over different spaces");
    }
    Ket out = a;
    for (const auto &[label, amp] : b.amplitudes()) {
        out.add(label, amp);
    }
    return out;
}

Ket operator-(const Ket &a, const Ket &b) { return a + b.scaled(-1.0); }

Ket operator*(Complex factor, const Ket &k) { return k.scaled(factor); }

Ket single_system_ket(const Subsystem &subsystem,
                      const std::vector<std::pair<std::string, Complex>> &terms)
{
    Ket k(Space({subsystem}));
    for (const auto &[level, amp] : terms) {
        k.add({{subsystem.id, level}}, amp);
    }
    return k;
}

Ket tensor_product(const Ket &a, const Ket &b)
{
    Space joint = a.space().joined(b.space());

    // Position of each factor of a and b inside the joint label.
    std::vector<std::size_t> pos_a, pos_b;
    for (const auto &s : a.space().subsystems()) {
        pos_a.push_back(*joint.position(s.id));
    }
    for (const auto &s : b.space().subsystems()) {
        pos_b.push_back(*joint.position(s.id));
    }

    Ket out(joint);
    Label label(joint.size(), 0);
    for (const auto &[la, amp_a] : a.amplitudes()) {
        for (std::size_t i = 0; i < la.size(); ++i) {
            label[pos_a[i]] = la[i];
        }
        for (const auto &[lb, amp_b] : b.amplitudes()) {
            for (std::size_t i = 0; i < lb.size(); ++i) {
                label[pos_b[i]] = lb[i];
            }
            out.add(label, amp_a * amp_b);
        }
    }
    return out;
}

Complex inner_product(const Ket &a, const Ket &b)
{
    if (!(a.space() == b.space())) {
        throw CompositionError("inner product of kets over different spaces");
    }
    const auto &small = a.amplitudes().size() <= b.amplitudes().size() ? a : b;
    const auto &large = &small == &a ? b : a;
    Complex s{};
    for (const auto &[label, amp] : small.amplitudes()) {
        auto it = large.amplitudes().find(label);
        if (it == large.amplitudes().end()) {
            continue;
        }
        const Complex &amp_a = (&small == &a) ? amp : it->second;
        const Complex &amp_b = (&small == &a) ? it->second : amp;
        s += std::conj(amp_a) * amp_b;
    }
    return s;
}

NormalizedKet normalize(const Ket &k, double zero_threshold)
{
    const double n = k.norm();
    if (!(n > zero_threshold)) {
        throw DegenerateStateError("cannot normalize a ket with norm " + std::to_string(n));
    }
    return {k.scaled(1.0 / n), n};
}

double fidelity(const Ket &a, const Ket &b, double tolerance)
{
    if (std::abs(a.norm() - 1.0) > tolerance || std::abs(b.norm() - 1.0) > tolerance) {
        throw PreconditionError("fidelity requires normalized kets");
    }
    const double f = std::norm(inner_product(a, b));
    return std::clamp(f, 0.0, 1.0);
}

nlohmann::json to_json(const Ket &k)
{
    nlohmann::json space = nlohmann::json::array();
    for (const auto &s : k.space().subsystems()) {
        space.push_back({{"id", s.id}, {"levels", s.levels}});
    }
    nlohmann::json amps = nlohmann::json::array();
    for (const auto &[label, amp] : k.amplitudes()) {
        nlohmann::json named = nlohmann::json::object();
        for (std::size_t i = 0; i < label.size(); ++i) {
            named[k.space().subsystems()[i].id] = k.space().level_name(i, label[i]);
        }
        amps.push_back({{"label", named}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    return {{"space", space}, {"amps", amps}};
}

Ket ket_from_json(const nlohmann::json &j)
{
    std::vector<Subsystem> subsystems;
    for (const auto &s : j.at("space")) {
        subsystems.push_back({s.at("id").get<std::string>(),
                              s.at("levels").get<std::vector<std::string>>()});
    }
    Ket k{Space(std::move(subsystems))};
    for (const auto &a : j.at("amps")) {
        LevelAssignment levels;
        for (const auto &[id, level] : a.at("label").items()) {
            levels.emplace_back(id, level.get<std::string>());
        }
        k.add(levels, Complex(a.at("re").get<double>(), a.at("im").get<double>()));
    }
    return k;
}

} // namespace qherald
