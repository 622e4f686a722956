#include "hht/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hht/error.hpp"
#include "json_io.hpp"

namespace hht {

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    if (ec != std::errc{}) throw NumericError("cannot format value");
    return std::string(buf, ptr);
}

void write_imf_csv(std::ostream& out, const ImfSet& set, std::int64_t start_timestamp, std::int64_t interval) {
    out << "timestamp";
    for (std::size_t k = 0; k < set.imfs.size(); ++k) out << ",imf" << (k + 1);
    out << ",residue\n";
    for (std::size_t t = 0; t < set.residue.size(); ++t) {
        out << start_timestamp + static_cast<std::int64_t>(t) * interval;
        for (const auto& imf : set.imfs) out << ',' << format_double(imf.values[t]);
        out << ',' << format_double(set.residue[t]) << '\n';
    }
}

void write_imf_csv(const std::filesystem::path& path, const ImfSet& set, std::int64_t start_timestamp,
                   std::int64_t interval) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    write_imf_csv(out, set, start_timestamp, interval);
}

ImfTable parse_imf_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("IMF CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 2 || header.front() != "timestamp" || header.back() != "residue") {
        throw DataError("IMF CSV header must be timestamp,imf1..imfI,residue");
    }
    const std::size_t imf_count = header.size() - 2;
    for (std::size_t k = 0; k < imf_count; ++k) {
        if (header[k + 1] != "imf" + std::to_string(k + 1)) throw DataError("unexpected IMF column '" + header[k + 1] + "'");
    }

    ImfTable table;
    table.set.imfs.resize(imf_count);
    for (std::size_t k = 0; k < imf_count; ++k) table.set.imfs[k].index = k + 1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> cells;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (cells.size() != header.size()) throw DataError("line " + std::to_string(line_no) + ": wrong field count");
        std::int64_t ts = 0;
        if (std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), ts).ec != std::errc{}) {
            throw DataError("line " + std::to_string(line_no) + ": bad timestamp");
        }
        table.timestamps.push_back(ts);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
            if (ec != std::errc{} || ptr != cells[c].data() + cells[c].size()) {
                throw DataError("line " + std::to_string(line_no) + ": bad value '" + std::string(cells[c]) + "'");
            }
            if (c - 1 < imf_count) {
                table.set.imfs[c - 1].values.push_back(v);
            } else {
                table.set.residue.push_back(v);
            }
        }
    }
    table.set.source_length = table.set.residue.size();
    return table;
}

ImfTable read_imf_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_imf_csv(buf.str());
}

void write_eemd_sidecar(const std::filesystem::path& path, const EemdResult& result) {
    detail::json flags = detail::json::array();
    for (const auto& imf : result.imf_set.imfs) flags.push_back(imf.converged);
    detail::write_json(path, {{"config", detail::to_json(result.config_echo)},
                              {"trial_imf_counts", result.trial_imf_counts},
                              {"imf_count", result.imf_set.imfs.size()},
                              {"imf_converged", std::move(flags)}});
}

EemdConfig read_eemd_sidecar(const std::filesystem::path& path) {
    const auto j = detail::read_json(path);
    if (!j.contains("config")) throw DataError("sidecar has no config block");
    return detail::eemd_config_from_json(j.at("config"));
}

std::string eemd_config_to_json(const EemdConfig& config) {
    return detail::to_json(config).dump(2);
}

EemdConfig eemd_config_from_json(std::string_view text) {
    try {
        return detail::eemd_config_from_json(detail::json::parse(text));
    } catch (const detail::json::exception& e) {
        throw DataError(std::string("bad EEMD config: ") + e.what());
    }
}

}  // namespace hht
