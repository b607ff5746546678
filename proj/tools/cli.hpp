#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <qherald/analysis.hpp>
#include <qherald/atom_cavity.hpp>
#include <qherald/error.hpp>
#include <qherald/optics.hpp>
#include <qherald/protocol.hpp>

namespace qherald::cli {

/// Invalid configuration or usage; maps to exit code 2.
class ConfigError : public Error
{
public:
    using Error::Error;
};

enum class OutputFormat { csv, json };

struct RunConfig
{
    SystemParams params{10.0, 10.0, 1.0, 0.1, 0.1};
    std::optional<double> theta;     ///< empty: canonical angle
    std::optional<FourTimes> taus;   ///< empty: closed-form optimum
    std::uint64_t seed = 1;
    std::optional<Grid> grid;        ///< empty: per-command default
    std::size_t n_traj = 10000;
    std::optional<double> t_max;     ///< empty: closed-form optimum
    std::vector<Detector> sequence = ClickSequence::golden().clicks;
    std::optional<std::vector<double>> times;
    std::string scan = "theta";      ///< "theta" or "lambda_ratio"
    double eta = 1.0;

    // Output destination; not part of the echoed configuration.
    OutputFormat format = OutputFormat::csv;
    std::string output;              ///< empty: standard output

    /// Throws ConfigError on any invalid field.
    void validate() const;

    /// Every computational field, suitable for re-parsing with from_json.
    nlohmann::json to_json() const;

    /// Strict parse: unknown keys and wrong types raise ConfigError.
    static RunConfig from_json(const nlohmann::json &j);

    SplitterAngle angle() const;

    bool operator==(const RunConfig &) const = default;
};

/// Runs one invocation; returns the process exit code (0 success, 1
/// domain/runtime failure, 2 usage/config error).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace qherald::cli
