#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hht/data.hpp"
#include "hht/eemd.hpp"
#include "hht/emd.hpp"

namespace hht {

/// Shortest form with 17 significant digits that parses back bit-exactly.
std::string format_double(double value);

/// Header `timestamp,imf1,...,imfI,residue`; one row per sample.
void write_imf_csv(std::ostream& out, const ImfSet& set, std::int64_t start_timestamp, std::int64_t interval);
void write_imf_csv(const std::filesystem::path& path, const ImfSet& set, std::int64_t start_timestamp,
                   std::int64_t interval);

struct ImfTable {
    std::vector<std::int64_t> timestamps;
    ImfSet set;
};

ImfTable read_imf_csv(const std::filesystem::path& path);
ImfTable parse_imf_csv(const std::string& text);

/// JSON record of the decomposition settings and per-trial IMF counts.
void write_eemd_sidecar(const std::filesystem::path& path, const EemdResult& result);
EemdConfig read_eemd_sidecar(const std::filesystem::path& path);

std::string eemd_config_to_json(const EemdConfig& config);
EemdConfig eemd_config_from_json(std::string_view text);

}  // namespace hht
