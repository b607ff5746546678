#include <cmath>

#include <gtest/gtest.h>

#include <qherald/error.hpp>
#include <qherald/optics.hpp>

using namespace qherald;

TEST(Qwp, MapsCircularToLinear)
{
    EXPECT_EQ(qwp_map(Circular::L), Polarization::V);
    EXPECT_EQ(qwp_map(Circular::R), Polarization::H);
    for (Circular c : {Circular::L, Circular::R}) {
        EXPECT_EQ(qwp_inverse(qwp_map(c)), c);
    }
}

TEST(Route, Table)
{
    EXPECT_EQ(route(Party::Alice, Polarization::V), Path::a);
    EXPECT_EQ(route(Party::Alice, Polarization::H), Path::b);
    EXPECT_EQ(route(Party::Bob, Polarization::V), Path::b);
    EXPECT_EQ(route(Party::Bob, Polarization::H), Path::a);
}

TEST(SplitterAngle, CanonicalAndRange)
{
    const double th = SplitterAngle::canonical().theta();
    EXPECT_NEAR(th, 0.477658, 1e-6);
    EXPECT_NEAR(std::pow(std::tan(2 * th), 2), 2.0, 1e-13);
    EXPECT_THROW(SplitterAngle(-0.1), PreconditionError);
    EXPECT_THROW(SplitterAngle(M_PI / 2), PreconditionError);
    EXPECT_NO_THROW(SplitterAngle(0.0));
}

TEST(FsPbs, Amplitudes)
{
    const auto v0 = fs_pbs_amplitudes(Polarization::V, SplitterAngle(0.0));
    const auto h0 = fs_pbs_amplitudes(Polarization::H, SplitterAngle(0.0));
    EXPECT_EQ(v0.F, 1.0);
    EXPECT_EQ(v0.S, 0.0);
    EXPECT_EQ(h0.F, 0.0);
    EXPECT_EQ(h0.S, -1.0);

    const SplitterAngle can = SplitterAngle::canonical();
    const auto v = fs_pbs_amplitudes(Polarization::V, can);
    EXPECT_NEAR(v.F * v.F - v.S * v.S, 1.0 / std::sqrt(3.0), 1e-15);

    for (double th = 0; th < 1.57; th += 0.01) {
        for (Polarization p : {Polarization::V, Polarization::H}) {
            const auto a = fs_pbs_amplitudes(p, SplitterAngle(th));
            EXPECT_NEAR(a.F * a.F + a.S * a.S, 1.0, 1e-15);
        }
        const auto a = fs_pbs_amplitudes(Polarization::V, SplitterAngle(th));
        const auto b = fs_pbs_amplitudes(Polarization::H, SplitterAngle(th));
        EXPECT_NEAR(a.F * b.F + a.S * b.S, 0.0, 1e-15);
    }
}

TEST(DetectorAmplitude, Examples)
{
    const SplitterAngle can = SplitterAngle::canonical();
    const double c = std::cos(can.theta());
    EXPECT_DOUBLE_EQ(detector_amplitude({Party::Alice, 1, Polarization::V}, Detector::Da_F, can).real(), c);
    EXPECT_EQ(detector_amplitude({Party::Alice, 1, Polarization::V}, Detector::Db_F, can), Complex(0.0));
    EXPECT_DOUBLE_EQ(detector_amplitude({Party::Bob, 2, Polarization::H}, Detector::Da_S, can).real(), -c);
    EXPECT_THROW(detector_amplitude({Party::Bob, 3, Polarization::H}, Detector::Da_S, can), PreconditionError);
}

TEST(DetectorAmplitude, CompletenessAndIndexIndependence)
{
    for (double th = 0; th < 1.57; th += 0.05) {
        const SplitterAngle a(th);
        for (Party party : {Party::Alice, Party::Bob}) {
            for (Polarization pol : {Polarization::V, Polarization::H}) {
                double total = 0;
                for (Detector d : kDetectors) {
                    const Complex c1 = detector_amplitude({party, 1, pol}, d, a);
                    const Complex c2 = detector_amplitude({party, 2, pol}, d, a);
                    EXPECT_EQ(c1, c2);
                    total += std::norm(c1);
                }
                EXPECT_NEAR(total, 1.0, 1e-15);
            }
        }
    }
}

TEST(TransferMatrix, OrthogonalAtCanonicalAngle)
{
    const auto m = transfer_matrix(SplitterAngle::canonical());
    EXPECT_LT((m * m.transpose() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Detector, NamesRoundTrip)
{
    for (Detector d : kDetectors) {
        EXPECT_EQ(parse_detector(to_string(d)), d);
    }
    EXPECT_FALSE(parse_detector("Dc_F").has_value());
    EXPECT_EQ(detector_path(Detector::Db_S), Path::b);
    EXPECT_EQ(detector_port(Detector::Db_S), SplitterPort::S);
}
