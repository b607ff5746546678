#pragma once

#include <array>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include <qherald/polarization.hpp>
#include <qherald/statespace.hpp>

namespace qherald {

/// The four detectors behind the rotated splitters. F is the transmitted
/// port, S the reflected port; a and b are the two merged paths.
enum class Detector { Da_F, Da_S, Db_F, Db_S };

inline constexpr std::array<Detector, 4> kDetectors = {Detector::Da_F, Detector::Da_S,
                                                       Detector::Db_F, Detector::Db_S};

std::string_view to_string(Detector d);
std::optional<Detector> parse_detector(std::string_view name);

enum class Party { Alice, Bob };
enum class Path { a, b };
enum class SplitterPort { F, S };

std::string_view to_string(Party p);

Path detector_path(Detector d);
SplitterPort detector_port(Detector d);

struct PhotonSource
{
    Party party = Party::Alice;
    int cavity_index = 1; ///< 1 or 2
    Polarization polarization = Polarization::V;
};

/// Rotation angle of the FS splitters, in [0, pi/2).
class SplitterAngle
{
public:
    explicit SplitterAngle(double theta);

    /// The angle with tan^2(2 theta) = 2 and 2 theta in the first quadrant.
    static SplitterAngle canonical();

    double theta() const { return theta_; }

private:
    double theta_;
};

/// L -> V, R -> H.
Polarization qwp_map(Circular c);
Circular qwp_inverse(Polarization p);

/// Which merged path a photon from `party` with polarization `pol` takes.
Path route(Party party, Polarization pol);

struct PortAmplitudes
{
    double F = 0.0;
    double S = 0.0;
};

/// V -> cos(theta) F + sin(theta) S, H -> sin(theta) F - cos(theta) S.
PortAmplitudes fs_pbs_amplitudes(Polarization pol, SplitterAngle angle);

/// Amplitude for a photon from `src` to reach `det`; zero off-path.
Complex detector_amplitude(const PhotonSource &src, Detector det, SplitterAngle angle);

/// Rows: Alice-V, Alice-H, Bob-V, Bob-H. Columns: detectors in kDetectors order.
Eigen::Matrix4d transfer_matrix(SplitterAngle angle);

} // namespace qherald
