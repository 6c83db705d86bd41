#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "fusemot/config.hpp"
#include "fusemot/error.hpp"
#include "fusemot/pipeline.hpp"

namespace {

using fusemot::RunConfig;

// Binds parameter flags to a RunConfig so that values from --config are
// overridden only by flags the user actually passed.
class ConfigBinder {
public:
    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path_,
                        "JSON config file; explicit flags override its values "
                        "[implementation extra]");

        real(cmd, "--t-o", &RunConfig::t_o,
             "pairing overlap threshold between the two streams [method parameter]");
        real(cmd, "--t-m", &RunConfig::t_m,
             "minimum fragment/detector overlap for merging [method parameter]");
        real(cmd, "--t-c", &RunConfig::t_c,
             "maximum colour dissimilarity for merging [method parameter]");
        real(cmd, "--min-area", &RunConfig::min_area,
             "foreground boxes below this area are dropped [method parameter, default ours]");
        real(cmd, "--dummy-confidence", &RunConfig::dummy_confidence,
             "confidence stored on unlabelled objects [implementation extra]");
        integer(cmd, "--bins", &RunConfig::histogram_bins,
                "colour histogram bin count [method parameter]");

        real(cmd, "--alpha", &RunConfig::alpha, "spatial cost weight [method parameter]");
        real(cmd, "--beta", &RunConfig::beta, "colour cost weight [method parameter]");
        real(cmd, "--gamma", &RunConfig::gamma, "label cost weight [method parameter]");
        real(cmd, "--t-d", &RunConfig::t_d,
             "spatial distance scale of the association cost [method parameter]");
        real(cmd, "--gate", &RunConfig::gate,
             "reject matches costlier than this [implementation extra]");

        real(cmd, "--t-p", &RunConfig::t_p,
             "prediction-vs-previous-box overlap gate [method parameter]");
        integer(cmd, "--t-n", &RunConfig::t_n,
                "consecutive misses before a track is terminated "
                "[method parameter, default ours]");
        real(cmd, "--max-bad-fraction", &RunConfig::max_bad_fraction,
             "drop tracks with a larger fraction of predicted steps "
             "[method parameter, default ours]");
        integer(cmd, "--min-track-length", &RunConfig::min_track_length,
                "drop shorter tracks at finalization [implementation extra]");

        real(cmd, "--measurement-sigma", &RunConfig::measurement_sigma,
             "box observation noise, px [implementation extra]");
        real(cmd, "--process-sigma-pos", &RunConfig::process_sigma_pos,
             "center acceleration noise, px/frame^2 [implementation extra]");
        real(cmd, "--process-sigma-size", &RunConfig::process_sigma_size,
             "size change noise, px/frame^2 [implementation extra]");
        real(cmd, "--initial-velocity-sigma", &RunConfig::initial_velocity_sigma,
             "velocity prior after a birth, px/frame [implementation extra]");

        real(cmd, "--frame-width", &RunConfig::frame_width,
             "frame width when no images are given; 0 infers from detections "
             "[implementation extra]");
        real(cmd, "--frame-height", &RunConfig::frame_height,
             "frame height when no images are given; 0 infers from detections "
             "[implementation extra]");
    }

    void attach_overlap(CLI::App* cmd) {
        real(cmd, "--overlap", &RunConfig::overlap,
             "minimum overlap for a track/ground-truth match [method parameter]");
    }

    RunConfig resolve() const {
        RunConfig config;
        if (!config_path_.empty()) config = RunConfig::load_file(config_path_);
        for (const auto& [option, copy] : bindings_)
            if (option->count() > 0) copy(config);
        config.validate();
        return config;
    }

private:
    void real(CLI::App* cmd, const std::string& name, double RunConfig::* field,
              const std::string& description) {
        CLI::Option* option =
            cmd->add_option(name, flags_.*field, description)->capture_default_str();
        bindings_.emplace_back(option,
                               [this, field](RunConfig& config) { config.*field = flags_.*field; });
    }
    void integer(CLI::App* cmd, const std::string& name, int RunConfig::* field,
                 const std::string& description) {
        CLI::Option* option =
            cmd->add_option(name, flags_.*field, description)->capture_default_str();
        bindings_.emplace_back(option,
                               [this, field](RunConfig& config) { config.*field = flags_.*field; });
    }

    std::string config_path_;
    RunConfig flags_;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bindings_;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fusemot: two-stream detection fusion, tracking, and evaluation"};
    app.require_subcommand(1);

    // fuse
    auto* fuse_cmd = app.add_subcommand(
        "fuse", "Fuse foreground (imot) and detector (mod) streams into tracker inputs");
    std::string fuse_imot, fuse_mod, fuse_out, fuse_frames;
    int fuse_first = -1;
    fuse_cmd->add_option("--imot", fuse_imot, "foreground detection file (JSON lines)")
        ->required();
    fuse_cmd->add_option("--mod", fuse_mod, "detector detection file (JSON lines)")->required();
    fuse_cmd->add_option("--out", fuse_out, "output fused detection file")->required();
    fuse_cmd->add_option("--frames", fuse_frames,
                         "frame image pattern, e.g. frames/%06d.png (enables colour logic)");
    fuse_cmd->add_option("--first-frame", fuse_first,
                         "first frame index of the pattern (default: first detection frame)");
    ConfigBinder fuse_binder;
    fuse_binder.attach(fuse_cmd);

    // track
    auto* track_cmd =
        app.add_subcommand("track", "Run the full pipeline: fuse the streams, then track");
    std::string track_imot, track_mod, track_fused_in, track_out, track_frames;
    int track_first = -1;
    auto* track_imot_opt = track_cmd->add_option("--imot", track_imot, "foreground detection file");
    auto* track_mod_opt = track_cmd->add_option("--mod", track_mod, "detector detection file");
    track_cmd->add_option("--fused", track_fused_in,
                          "pre-fused detection file (instead of --imot/--mod)")
        ->excludes(track_imot_opt)
        ->excludes(track_mod_opt);
    track_cmd->add_option("--out", track_out, "output track file")->required();
    track_cmd->add_option("--frames", track_frames, "frame image pattern");
    track_cmd->add_option("--first-frame", track_first, "first frame index of the pattern");
    ConfigBinder track_binder;
    track_binder.attach(track_cmd);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Score a track file against ground truth");
    std::string eval_tracks, eval_gt, eval_json;
    eval_cmd->add_option("--tracks", eval_tracks, "track file")->required();
    eval_cmd->add_option("--gt", eval_gt, "ground truth file")->required();
    eval_cmd->add_option("--json", eval_json, "also write the report as JSON to this path");
    ConfigBinder eval_binder;
    eval_binder.attach_overlap(eval_cmd);

    // synth
    auto* synth_cmd = app.add_subcommand(
        "synth", "Generate a synthetic scenario: ground truth, both streams, frames");
    std::string synth_scenario, synth_out;
    bool synth_no_frames = false, synth_no_histograms = false;
    int synth_bins = 256;
    synth_cmd->add_option("--scenario", synth_scenario, "scenario JSON file")->required();
    synth_cmd->add_option("--out", synth_out, "output directory")->required();
    synth_cmd->add_flag("--no-frames", synth_no_frames, "skip writing PNG frames");
    synth_cmd->add_flag("--no-histograms", synth_no_histograms,
                        "skip embedding histograms in the detection files");
    synth_cmd->add_option("--bins", synth_bins, "histogram bin count for embedding")
        ->capture_default_str();

    // overlay
    auto* overlay_cmd =
        app.add_subcommand("overlay", "Draw tracked boxes onto frames, colour-coded by state");
    std::string overlay_tracks, overlay_frames, overlay_out;
    int overlay_first = -1, overlay_last = -1;
    overlay_cmd->add_option("--tracks", overlay_tracks, "track file")->required();
    overlay_cmd->add_option("--frames", overlay_frames, "frame image pattern")->required();
    overlay_cmd->add_option("--out", overlay_out, "output directory")->required();
    overlay_cmd->add_option("--first-frame", overlay_first, "first frame to render");
    overlay_cmd->add_option("--last-frame", overlay_last, "last frame to render");

    // ablate
    auto* ablate_cmd = app.add_subcommand(
        "ablate", "Compare single-cost association runs against the combined cost");
    std::string ablate_imot, ablate_mod, ablate_gt, ablate_frames;
    int ablate_first = -1;
    std::vector<std::string> ablate_select;
    ablate_cmd->add_option("--imot", ablate_imot, "foreground detection file")->required();
    ablate_cmd->add_option("--mod", ablate_mod, "detector detection file")->required();
    ablate_cmd->add_option("--gt", ablate_gt, "ground truth file")->required();
    ablate_cmd->add_option("--frames", ablate_frames, "frame image pattern");
    ablate_cmd->add_option("--first-frame", ablate_first, "first frame index of the pattern");
    ablate_cmd
        ->add_option("--select", ablate_select,
                     "cost selections to run: distance, colour, label, all")
        ->expected(-1);
    ConfigBinder ablate_binder;
    ablate_binder.attach(ablate_cmd);
    ablate_binder.attach_overlap(ablate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(fuse_cmd)) {
            fusemot::run_fuse(fuse_binder.resolve(), fuse_imot, fuse_mod, fuse_out,
                              fuse_frames, fuse_first);
        } else if (app.got_subcommand(track_cmd)) {
            if (track_fused_in.empty() && (track_imot.empty() || track_mod.empty()))
                throw fusemot::DataError(
                    "track needs either --fused or both --imot and --mod");
            fusemot::run_track(track_binder.resolve(), track_imot, track_mod, track_fused_in,
                               track_out, track_frames, track_first);
        } else if (app.got_subcommand(eval_cmd)) {
            const RunConfig config = eval_binder.resolve();
            const fusemot::MotReport report =
                fusemot::run_evaluate(eval_tracks, eval_gt, config.overlap, eval_json);
            std::cout << fusemot::format_report_table(report);
        } else if (app.got_subcommand(synth_cmd)) {
            fusemot::run_synth(synth_scenario, synth_out, !synth_no_frames,
                               !synth_no_histograms, synth_bins);
        } else if (app.got_subcommand(overlay_cmd)) {
            fusemot::run_overlay(overlay_tracks, overlay_frames, overlay_first, overlay_last,
                                 overlay_out);
        } else if (app.got_subcommand(ablate_cmd)) {
            if (ablate_select.empty())
                ablate_select = {"distance", "colour", "label", "all"};
            const auto rows =
                fusemot::run_ablate(ablate_binder.resolve(), ablate_imot, ablate_mod,
                                    ablate_gt, ablate_frames, ablate_first, ablate_select);
            std::cout << fusemot::format_ablation_table(rows);
        }
    } catch (const fusemot::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
