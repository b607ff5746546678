#include <qherald/series_io.hpp>

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include <qherald/error.hpp>

namespace qherald {

namespace {

void flatten_into(std::ostream &os, const std::string &prefix, const nlohmann::json &value)
{
    if (value.is_object() && !value.empty()) {
        for (const auto &[key, child] : value.items()) {
            flatten_into(os, prefix.empty() ? key : prefix + "." + key, child);
        }
        return;
    }
    os << "# " << prefix << '=' << value.dump() << '\n';
}

} // namespace

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_echo_comments(std::ostream &os, const nlohmann::json &echo)
{
    flatten_into(os, "", echo);
}

nlohmann::json read_echo_comments(std::istream &is)
{
    nlohmann::json out = nlohmann::json::object();
    std::string line;
    while (is.peek() == '#' && std::getline(is, line)) {
        if (line.rfind("# note:", 0) == 0) {
            continue;
        }
        const auto eq = line.find('=');
        if (line.size() < 2 || line[1] != ' ' || eq == std::string::npos) {
            throw PreconditionError("malformed echo line: " + line);
        }
        const std::string key = line.substr(2, eq - 2);
        nlohmann::json::json_pointer ptr;
        std::size_t begin = 0;
        while (true) {
            const auto dot = key.find('.', begin);
            ptr /= key.substr(begin, dot - begin);
            if (dot == std::string::npos) {
                break;
            }
            begin = dot + 1;
        }
        out[ptr] = nlohmann::json::parse(line.substr(eq + 1));
    }
    return out;
}

void write_series_csv(std::ostream &os, const SweepSeries &series)
{
    write_echo_comments(os, series.params_echo);
    for (const auto &note : series.notes) {
        os << "# note: " << note << '\n';
    }
    os << series.axis << ',' << series.value << '\n';
    for (const auto &[x, y] : series.points) {
        os << format_number(x) << ',' << format_number(y) << '\n';
    }
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw Error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot move output into place: " + ec.message());
    }
}

} // namespace qherald
