#include "json_io.hpp"

#include <fstream>

#include "hht/error.hpp"

namespace hht::detail {

namespace {

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string("bad field '") + key + "': " + e.what());
    }
}

template <typename T>
T optional_field(const json& j, const char* key, T fallback) {
    return j.contains(key) ? require<T>(j, key) : fallback;
}

}  // namespace

json tensor_to_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json tensor_to_json(const Eigen::VectorXd& v) {
    return tensor_to_json(Eigen::MatrixXd(v));
}

void tensor_from_json(const json& j, Eigen::MatrixXd& m, const char* name) {
    const auto rows = require<Eigen::Index>(j, "rows");
    const auto cols = require<Eigen::Index>(j, "cols");
    const auto data = require<std::vector<double>>(j, "data");
    if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
        throw DataError(std::string("tensor '") + name + "' has inconsistent size");
    }
    m.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
    }
}

void tensor_from_json(const json& j, Eigen::VectorXd& v, const char* name) {
    Eigen::MatrixXd m;
    tensor_from_json(j, m, name);
    if (m.cols() != 1) throw DimensionError(std::string("tensor '") + name + "' must be a column vector");
    v = m.col(0);
}

json to_json(const LstmDims& d) {
    return {{"input_size", d.input_size}, {"hidden_size", d.hidden_size}, {"output_size", d.output_size}};
}

LstmDims dims_from_json(const json& j) {
    return {require<std::size_t>(j, "input_size"), require<std::size_t>(j, "hidden_size"),
            require<std::size_t>(j, "output_size")};
}

json to_json(const LstmParams& p) {
    json tensors = json::object();
    for_each_tensor([&](const char* name, const auto& t) { tensors[name] = tensor_to_json(t); }, p);
    return {{"dims", to_json(p.dims)}, {"tensors", std::move(tensors)}};
}

LstmParams params_from_json(const json& j) {
    LstmParams p;
    p.dims = dims_from_json(require<json>(j, "dims"));
    const auto tensors = require<json>(j, "tensors");
    for_each_tensor(
        [&](const char* name, auto& t) {
            if (!tensors.contains(name)) throw DataError(std::string("checkpoint is missing tensor '") + name + "'");
            tensor_from_json(tensors.at(name), t, name);
        },
        p);
    p.check_shapes();
    if (!p.all_finite()) throw NumericError("checkpoint contains non-finite parameters");
    return p;
}

json to_json(const TrainConfig& c) {
    return {{"learning_rate", c.learning_rate},       {"rmsprop_decay", c.rmsprop_decay},
            {"rmsprop_epsilon", c.rmsprop_epsilon},   {"epochs", c.epochs},
            {"batch_size", c.batch_size},             {"shuffle_seed", c.shuffle_seed},
            {"early_stop_patience", c.early_stop_patience}, {"max_grad_norm", c.max_grad_norm}};
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig c;
    c.learning_rate = optional_field(j, "learning_rate", c.learning_rate);
    c.rmsprop_decay = optional_field(j, "rmsprop_decay", c.rmsprop_decay);
    c.rmsprop_epsilon = optional_field(j, "rmsprop_epsilon", c.rmsprop_epsilon);
    c.epochs = optional_field(j, "epochs", c.epochs);
    c.batch_size = optional_field(j, "batch_size", c.batch_size);
    c.shuffle_seed = optional_field(j, "shuffle_seed", c.shuffle_seed);
    c.early_stop_patience = optional_field(j, "early_stop_patience", c.early_stop_patience);
    c.max_grad_norm = optional_field(j, "max_grad_norm", c.max_grad_norm);
    return c;
}

json to_json(const ModelCheckpoint& c) {
    return {{"params", to_json(c.params)},
            {"optimizer", {{"steps", c.optimizer.steps}, {"mean_square", to_json(c.optimizer.mean_square)}}},
            {"train_config", to_json(c.config)}};
}

ModelCheckpoint model_from_json(const json& j, const std::optional<LstmDims>& expected) {
    const auto params = require<json>(j, "params");
    const auto dims = dims_from_json(require<json>(params, "dims"));
    if (expected && !(*expected == dims)) {
        throw DimensionError("checkpoint dims (input " + std::to_string(dims.input_size) + ", hidden " +
                             std::to_string(dims.hidden_size) + ", output " + std::to_string(dims.output_size) +
                             ") do not match expected (input " + std::to_string(expected->input_size) + ", hidden " +
                             std::to_string(expected->hidden_size) + ", output " +
                             std::to_string(expected->output_size) + ")");
    }
    ModelCheckpoint c;
    c.params = params_from_json(params);
    const auto opt = require<json>(j, "optimizer");
    c.optimizer.steps = require<std::size_t>(opt, "steps");
    c.optimizer.mean_square = params_from_json(require<json>(opt, "mean_square"));
    if (!(c.optimizer.mean_square.dims == c.params.dims)) throw DimensionError("optimizer state dims differ");
    c.config = train_config_from_json(require<json>(j, "train_config"));
    return c;
}

json to_json(const SiftConfig& c) {
    return {{"max_imfs", c.max_imfs},
            {"max_sift_iterations", c.max_sift_iterations},
            {"sd_threshold", c.sd_threshold},
            {"envelope_tolerance", c.envelope_tolerance},
            {"boundary_policy", std::string(to_string(c.boundary_policy))}};
}

SiftConfig sift_config_from_json(const json& j) {
    SiftConfig c;
    c.max_imfs = optional_field(j, "max_imfs", c.max_imfs);
    c.max_sift_iterations = optional_field(j, "max_sift_iterations", c.max_sift_iterations);
    c.sd_threshold = optional_field(j, "sd_threshold", c.sd_threshold);
    c.envelope_tolerance = optional_field(j, "envelope_tolerance", c.envelope_tolerance);
    c.boundary_policy = parse_boundary_policy(optional_field<std::string>(j, "boundary_policy", "mirror"));
    return c;
}

json to_json(const EemdConfig& c) {
    return {{"noise_amplitude", c.noise_amplitude},
            {"ensemble_size", c.ensemble_size},
            {"seed", c.seed},
            {"alignment_policy", std::string(to_string(c.alignment_policy))},
            {"sift", to_json(c.sift)}};
}

EemdConfig eemd_config_from_json(const json& j) {
    EemdConfig c;
    c.noise_amplitude = optional_field(j, "noise_amplitude", c.noise_amplitude);
    c.ensemble_size = optional_field(j, "ensemble_size", c.ensemble_size);
    c.seed = optional_field(j, "seed", c.seed);
    c.alignment_policy = parse_alignment_policy(optional_field<std::string>(j, "alignment_policy", "pad_with_zeros"));
    if (j.contains("sift")) c.sift = sift_config_from_json(j.at("sift"));
    return c;
}

json to_json(const ScalerState& s) {
    return {{"mean", s.mean}, {"variance", s.variance}, {"mode", std::string(to_string(s.mode))}};
}

ScalerState scaler_from_json(const json& j) {
    ScalerState s;
    s.mean = require<double>(j, "mean");
    s.variance = require<double>(j, "variance");
    s.mode = parse_scaler_mode(require<std::string>(j, "mode"));
    return s;
}

json to_json(const SplitSpec& s) {
    return {{"train", s.train_fraction}, {"validation", s.validation_fraction}, {"test", s.test_fraction}};
}

SplitSpec split_from_json(const json& j) {
    SplitSpec s;
    s.train_fraction = optional_field(j, "train", s.train_fraction);
    s.validation_fraction = optional_field(j, "validation", s.validation_fraction);
    s.test_fraction = optional_field(j, "test", s.test_fraction);
    return s;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

}  // namespace hht::detail

namespace hht {

void save_model(const std::filesystem::path& path, const ModelCheckpoint& checkpoint) {
    auto j = detail::to_json(checkpoint);
    j["format"] = "hht-lstm-checkpoint";
    j["version"] = 1;
    detail::write_json(path, j);
}

ModelCheckpoint load_model(const std::filesystem::path& path, const std::optional<LstmDims>& expected) {
    return detail::model_from_json(detail::read_json(path), expected);
}

}  // namespace hht
