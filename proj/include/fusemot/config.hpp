#pragma once

#include <string>

#include "fusemot/association.hpp"
#include "fusemot/fusion.hpp"
#include "fusemot/kalman.hpp"
#include "fusemot/tracker.hpp"

namespace fusemot {

// Every tunable of the pipeline, serializable as a flat JSON object.
// CLI flags override file values.
struct RunConfig {
    // fusion
    double t_o = 0.05;
    double t_m = 0.5;
    double t_c = 0.5;
    double min_area = 64.0;
    double dummy_confidence = 0.5;
    int histogram_bins = 256;

    // association
    double alpha = 0.6;
    double beta = 0.3;
    double gamma = 0.1;
    double t_d = 0.5;
    double gate = 0.9;

    // tracker
    double t_p = 0.01;
    int t_n = 10;
    double max_bad_fraction = 0.5;
    int min_track_length = 1;

    // motion filter
    double measurement_sigma = 1.0;
    double process_sigma_pos = 1.0;
    double process_sigma_size = 0.1;
    double initial_velocity_sigma = 10.0;

    // evaluation
    double overlap = 0.3;

    // frame dimensions; 0 means infer from frames or detections
    double frame_width = 0.0;
    double frame_height = 0.0;

    void validate() const;

    FusionParams fusion_params() const;
    KalmanParams kalman_params() const;
    AssociationParams association_params(double frame_w, double frame_h) const;
    TrackerParams tracker_params(double frame_w, double frame_h) const;

    static RunConfig load_file(const std::string& path);
    void save_file(const std::string& path) const;
};

} // namespace fusemot
