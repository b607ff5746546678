#include <qherald/optics.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include <qherald/error.hpp>

namespace qherald {

std::string_view to_string(Detector d)
{
    switch (d) {
    case Detector::Da_F: return "Da_F";
    case Detector::Da_S: return "Da_S";
    case Detector::Db_F: return "Db_F";
    case Detector::Db_S: return "Db_S";
    }
    return "?";
}

std::optional<Detector> parse_detector(std::string_view name)
{
    for (Detector d : kDetectors) {
        if (to_string(d) == name) {
            return d;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Party p) { return p == Party::Alice ? "Alice" : "Bob"; }

Path detector_path(Detector d)
{
    return (d == Detector::Da_F || d == Detector::Da_S) ? Path::a : Path::b;
}

SplitterPort detector_port(Detector d)
{
    return (d == Detector::Da_F || d == Detector::Db_F) ? SplitterPort::F : SplitterPort::S;
}

SplitterAngle::SplitterAngle(double theta) : theta_(theta)
{
    if (!(theta >= 0.0 && theta < std::numbers::pi / 2.0)) {
        throw PreconditionError("splitter angle must lie in [0, pi/2), got " +
                                std::to_string(theta));
    }
}

SplitterAngle SplitterAngle::canonical()
{
    return SplitterAngle(0.5 * std::atan(std::numbers::sqrt2));
}

Polarization qwp_map(Circular c) { return c == Circular::L ? Polarization::V : Polarization::H; }

Circular qwp_inverse(Polarization p) { return p == Polarization::V ? Circular::L : Circular::R; }

Path route(Party party, Polarization pol)
{
    // Alice's V and Bob's H share path a; Alice's H and Bob's V share path b.
    const bool alice = party == Party::Alice;
    const bool vertical = pol == Polarization::V;
    return alice == vertical ? Path::a : Path::b;
}

PortAmplitudes fs_pbs_amplitudes(Polarization pol, SplitterAngle angle)
{
    const double c = std::cos(angle.theta());
    const double s = std::sin(angle.theta());
    if (pol == Polarization::V) {
        return {c, s};
    }
    return {s, -c};
}

Complex detector_amplitude(const PhotonSource &src, Detector det, SplitterAngle angle)
{
    if (src.cavity_index != 1 && src.cavity_index != 2) {
        throw PreconditionError("cavity index must be 1 or 2");
    }
    if (route(src.party, src.polarization) != detector_path(det)) {
        return 0.0;
    }
    const PortAmplitudes ports = fs_pbs_amplitudes(src.polarization, angle);
    return detector_port(det) == SplitterPort::F ? ports.F : ports.S;
}

Eigen::Matrix4d transfer_matrix(SplitterAngle angle)
{
    const std::array<PhotonSource, 4> sources = {{
        {Party::Alice, 1, Polarization::V},
        {Party::Alice, 1, Polarization::H},
        {Party::Bob, 1, Polarization::V},
        {Party::Bob, 1, Polarization::H},
    }};
    Eigen::Matrix4d m;
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            m(row, col) = detector_amplitude(sources[row], kDetectors[col], angle).real();
        }
    }
    return m;
}

} // namespace qherald
