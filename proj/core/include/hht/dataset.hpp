#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace hht {

/// Supervised (window, target) pairs framed from aligned channel series.
/// Each input is a lookback x channels matrix whose row r is time step
/// index_map[j] - horizon - (lookback - 1) + r.
struct WindowedDataset {
    std::vector<Eigen::MatrixXd> inputs;
    std::vector<Eigen::VectorXd> targets;
    std::size_t lookback = 0;
    std::size_t channels = 0;
    std::size_t horizon = 1;
    std::vector<std::size_t> index_map;  // time index of each target

    std::size_t size() const noexcept { return inputs.size(); }
    bool empty() const noexcept { return inputs.empty(); }
    std::size_t output_size() const noexcept { return targets.empty() ? 0 : static_cast<std::size_t>(targets.front().size()); }

    /// Time index of the first and last input rows of sample j.
    std::size_t first_input_index(std::size_t j) const noexcept { return index_map[j] - horizon - (lookback - 1); }
    std::size_t last_input_index(std::size_t j) const noexcept { return index_map[j] - horizon; }
};

}  // namespace hht
