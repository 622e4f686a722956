#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hht::plot {

struct Line {
    std::string label;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

/// Overlaid lines sharing one y axis, x = sample position.
std::string line_chart(const std::string& title, const std::vector<Line>& lines, int width = 960, int height = 360);

/// One panel per line, stacked vertically, each with its own y range.
std::string stacked_chart(const std::string& title, const std::vector<Line>& panels, int width = 960,
                          int panel_height = 110);

void write_svg(const std::filesystem::path& path, const std::string& svg);

}  // namespace hht::plot
