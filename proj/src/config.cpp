#include "fusemot/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fusemot/error.hpp"

namespace fusemot {

namespace {

using nlohmann::json;

struct Field {
    const char* key;
    double RunConfig::* real = nullptr;
    int RunConfig::* integer = nullptr;
};

// One table drives parsing, serialization, and unknown-key rejection.
const Field kFields[] = {
    {"t_o", &RunConfig::t_o, nullptr},
    {"t_m", &RunConfig::t_m, nullptr},
    {"t_c", &RunConfig::t_c, nullptr},
    {"min_area", &RunConfig::min_area, nullptr},
    {"dummy_confidence", &RunConfig::dummy_confidence, nullptr},
    {"histogram_bins", nullptr, &RunConfig::histogram_bins},
    {"alpha", &RunConfig::alpha, nullptr},
    {"beta", &RunConfig::beta, nullptr},
    {"gamma", &RunConfig::gamma, nullptr},
    {"t_d", &RunConfig::t_d, nullptr},
    {"gate", &RunConfig::gate, nullptr},
    {"t_p", &RunConfig::t_p, nullptr},
    {"t_n", nullptr, &RunConfig::t_n},
    {"max_bad_fraction", &RunConfig::max_bad_fraction, nullptr},
    {"min_track_length", nullptr, &RunConfig::min_track_length},
    {"measurement_sigma", &RunConfig::measurement_sigma, nullptr},
    {"process_sigma_pos", &RunConfig::process_sigma_pos, nullptr},
    {"process_sigma_size", &RunConfig::process_sigma_size, nullptr},
    {"initial_velocity_sigma", &RunConfig::initial_velocity_sigma, nullptr},
    {"overlap", &RunConfig::overlap, nullptr},
    {"frame_width", &RunConfig::frame_width, nullptr},
    {"frame_height", &RunConfig::frame_height, nullptr},
};

} // namespace

void RunConfig::validate() const {
    fusion_params().validate();
    kalman_params().validate();
    // Frame dimensions may still be unset here; validate the rest with
    // stand-in dimensions.
    association_params(frame_width > 0 ? frame_width : 1.0,
                       frame_height > 0 ? frame_height : 1.0)
        .validate();
    tracker_params(frame_width > 0 ? frame_width : 1.0,
                   frame_height > 0 ? frame_height : 1.0)
        .validate();
    if (!std::isfinite(overlap) || overlap <= 0.0 || overlap > 1.0)
        throw DataError("evaluation overlap threshold must be in (0, 1]");
    if (frame_width < 0.0 || frame_height < 0.0)
        throw DataError("frame dimensions must be positive (or 0 to infer)");
}

FusionParams RunConfig::fusion_params() const {
    FusionParams params;
    params.t_o = t_o;
    params.t_m = t_m;
    params.t_c = t_c;
    params.min_area = min_area;
    params.dummy_confidence = dummy_confidence;
    params.histogram_bins = histogram_bins;
    return params;
}

KalmanParams RunConfig::kalman_params() const {
    KalmanParams params;
    params.measurement_sigma = measurement_sigma;
    params.process_sigma_pos = process_sigma_pos;
    params.process_sigma_size = process_sigma_size;
    params.initial_velocity_sigma = initial_velocity_sigma;
    return params;
}

AssociationParams RunConfig::association_params(double frame_w, double frame_h) const {
    AssociationParams params;
    params.weights = {alpha, beta, gamma};
    params.t_d = t_d;
    params.gate = gate;
    params.frame_width = frame_w;
    params.frame_height = frame_h;
    return params;
}

TrackerParams RunConfig::tracker_params(double frame_w, double frame_h) const {
    TrackerParams params;
    params.association = association_params(frame_w, frame_h);
    params.kalman = kalman_params();
    params.t_p = t_p;
    params.t_n = t_n;
    params.max_bad_fraction = max_bad_fraction;
    params.min_track_length = min_track_length;
    return params;
}

RunConfig RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();

    const json root = json::parse(buffer.str(), nullptr, false);
    if (root.is_discarded() || !root.is_object())
        throw DataError(path + ": config file must be a JSON object");

    RunConfig config;
    for (const auto& [key, value] : root.items()) {
        const Field* field = nullptr;
        for (const Field& f : kFields) {
            if (key == f.key) {
                field = &f;
                break;
            }
        }
        if (field == nullptr) throw DataError(path + ": unknown config key \"" + key + "\"");
        if (field->integer != nullptr) {
            if (!value.is_number_integer())
                throw DataError(path + ": \"" + key + "\" must be an integer");
            config.*(field->integer) = value.get<int>();
        } else {
            if (!value.is_number())
                throw DataError(path + ": \"" + key + "\" must be a number");
            config.*(field->real) = value.get<double>();
        }
    }
    config.validate();
    return config;
}

void RunConfig::save_file(const std::string& path) const {
    json root = json::object();
    for (const Field& f : kFields) {
        if (f.integer != nullptr)
            root[f.key] = this->*(f.integer);
        else
            root[f.key] = this->*(f.real);
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write config file: " + path);
    out << root.dump(2) << "\n";
    if (!out) throw DataError("failed to write config file: " + path);
}

} // namespace fusemot
