#include "mrpi/cli.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mrpi/error.hpp"
#include "mrpi/image_io.hpp"
#include "mrpi/pipeline.hpp"
#include "mrpi/synthetic.hpp"

namespace fs = std::filesystem;

namespace mrpi {
namespace {

constexpr int kMontageGap = 4;

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Turns `key=value` lines into `--key=value` tokens. Blank lines and lines
/// starting with '#' are skipped.
std::vector<std::string> config_tokens(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    std::vector<std::string> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        }
        auto key = line.substr(0, eq);
        auto value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

/// Splices the contents of `--config FILE` in right after the subcommand name,
/// so that flags given on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::vector<std::string> from_file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw ParameterError("--config requires a file argument");
            auto t = config_tokens(args[++i]);
            from_file.insert(from_file.end(), t.begin(), t.end());
        } else if (a.rfind("--config=", 0) == 0) {
            auto t = config_tokens(a.substr(9));
            from_file.insert(from_file.end(), t.begin(), t.end());
        } else {
            out.push_back(a);
        }
    }
    if (!from_file.empty()) {
        const auto at = std::min<std::size_t>(out.size(), 2);
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), from_file.begin(), from_file.end());
    }
    return out;
}

struct SegmentFlags {
    bool dense_only = false;
    std::string majority_rule = "center-inclusive";
};

void add_segment_options(CLI::App* cmd, RunManifest& m, SegmentFlags& f) {
    auto& s = m.settings;
    auto& r = s.rpi;
    cmd->add_option("--runs", r.m, "Number of RPI runs m")->capture_default_str();
    cmd->add_option("--iters", r.k, "Evolution steps per run k")->capture_default_str();
    cmd->add_option("--sigma", r.sigma, "Std. deviation of the random initial values")->capture_default_str();
    cmd->add_option("--alpha", r.alpha, "Sparse block fraction per axis")->capture_default_str();
    cmd->add_flag("--dense-only", f.dense_only, "Initialize every run densely");
    cmd->add_flag("--first-dense,!--first-sparse", r.first_run_dense, "Initialize run 0 densely")
        ->capture_default_str();
    cmd->add_option("--p-low", s.post.band.p_low, "Lower threshold on the normalized field")
        ->capture_default_str();
    cmd->add_option("--p-high", s.post.band.p_up, "Upper threshold on the normalized field")
        ->capture_default_str();
    cmd->add_option("--mu", r.drlse.mu, "Distance regularization weight")->capture_default_str();
    cmd->add_option("--lambda", r.drlse.lambda, "Edge length weight")->capture_default_str();
    cmd->add_option("--alpha-area", r.drlse.alpha_area, "Area weight")->capture_default_str();
    cmd->add_option("--dt", r.drlse.dt, "Time step")->capture_default_str();
    cmd->add_option("--epsilon", r.drlse.epsilon, "Smoothed Dirac half-width")->capture_default_str();
    cmd->add_option("--sigma-g", r.sigma_g, "Gaussian width of the edge indicator")->capture_default_str();
    cmd->add_option("--thin-iters", s.post.thin_iters, "Maximum thinning iterations")->capture_default_str();
    cmd->add_option("--majority-rule", f.majority_rule, "Majority vote rule")
        ->check(CLI::IsMember({"center-inclusive", "neighbors-tie-clears"}))
        ->capture_default_str();
    cmd->add_flag("--majority-until-stable,!--majority-once", s.post.majority_until_stable,
                  "Repeat the majority pass until nothing changes")
        ->capture_default_str();
    cmd->add_option("--seed", r.seed, "Global random seed")->capture_default_str();
    cmd->add_option("--scale", s.scale, "Bicubic resize factor applied before segmenting")
        ->capture_default_str();
}

void add_canny_options(CLI::App* cmd, CannyParams& c) {
    cmd->add_option("--t-low", c.t_low, "Low hysteresis threshold, fraction of the max gradient")
        ->capture_default_str();
    cmd->add_option("--t-high", c.t_high, "High hysteresis threshold, fraction of the max gradient")
        ->capture_default_str();
    cmd->add_option("--sigma-c", c.sigma_c, "Gaussian width before differentiation")->capture_default_str();
}

void add_common_options(CLI::App* cmd, RunManifest& m, std::string& input, std::string& out_dir,
                        std::string& truth) {
    cmd->add_option("input", input, "Input image (PNG or binary PGM)")->required();
    cmd->add_option("-o,--out-dir", out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--truth", truth, "Ground-truth edge map; enables metrics.json");
    cmd->add_option("--threads", m.threads, "Worker threads for the RPI runs")->capture_default_str();
}

Grid<std::uint8_t> montage(const GrayImage& img, const BinaryEdgeMap& a, const BinaryEdgeMap& b) {
    const int w = img.width();
    const int h = img.height();
    Grid<std::uint8_t> out(3 * w + 2 * kMontageGap, h, 128);
    const std::array<Grid<std::uint8_t>, 3> panels{render_intensity(img), render_edges(a), render_edges(b)};
    for (int p = 0; p < 3; ++p) {
        const int x0 = p * (w + kMontageGap);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) out(x0 + x, y) = panels[p](x, y);
        }
    }
    return out;
}

void check_truth_shape(const BinaryEdgeMap& truth, const GrayImage& img) {
    if (!truth.same_shape(img)) {
        throw ParameterError("truth map is " + std::to_string(truth.width()) + "x" +
                             std::to_string(truth.height()) + " but the processed image is " +
                             std::to_string(img.width()) + "x" + std::to_string(img.height()));
    }
}

/// Runs the command a resolved manifest describes, writes its artifacts and
/// finally the manifest itself.
void execute(RunManifest& m, std::ostream& out) {
    m.settings.validate();
    if (m.canny) m.canny->validate();
    if (m.threads < 1) throw ParameterError("threads must be at least 1");

    const auto img = load_image(m.input);
    std::optional<BinaryEdgeMap> truth;
    if (m.truth) truth = load_edge_map(*m.truth);

    fs::create_directories(m.out_dir);
    m.artifacts.clear();
    auto emit = [&](const std::string& key, const std::string& file, const Grid<std::uint8_t>& px) {
        save_png(m.out_dir / file, px);
        m.artifacts[key] = file;
    };

    if (m.command == "canny") {
        Stopwatch sw;
        const auto scaled = prepare_image(img, m.settings.scale);
        if (truth) check_truth_shape(*truth, scaled);
        const auto edges = canny_edges(scaled, *m.canny);
        TimingReport timings;
        timings.add("canny", sw.seconds());
        timings.total_seconds = sw.seconds();
        emit("canny", "canny.png", render_edges(edges));
        if (truth) {
            const auto metrics = boundary_f1(edges, *truth, 2);
            write_json(m.out_dir / "metrics.json", {{"schema_version", kMetricsSchemaVersion},
                                                    {"methods", {{"canny", to_json(metrics)}}},
                                                    {"timings", to_json(timings)}});
            m.artifacts["metrics"] = "metrics.json";
            out << "canny F1 " << metrics.f1 << '\n';
        }
    } else {
        auto result = segment_image(img, m.settings, m.threads);
        if (truth) check_truth_shape(*truth, result.image);
        emit("edges", "edges.png", render_edges(result.edges()));
        if (m.command == "compare") {
            Stopwatch sw;
            const auto canny = canny_edges(result.image, *m.canny);
            result.timings.add("canny", sw.seconds());
            result.timings.total_seconds += result.timings.stages.back().seconds;
            emit("canny", "canny.png", render_edges(canny));
            emit("montage", "montage.png", montage(result.image, result.edges(), canny));
            write_json(m.out_dir / "metrics.json",
                       compare_report(result.edges(), canny, truth, result.timings));
            m.artifacts["metrics"] = "metrics.json";
        } else if (truth) {
            const auto metrics = boundary_f1(result.edges(), *truth, 2);
            write_json(m.out_dir / "metrics.json", {{"schema_version", kMetricsSchemaVersion},
                                                    {"methods", {{"rpi", to_json(metrics)}}},
                                                    {"timings", to_json(result.timings)}});
            m.artifacts["metrics"] = "metrics.json";
            out << "rpi F1 " << metrics.f1 << '\n';
        }
        if (m.debug_stages) {
            emit("phi_bar", "phi_bar.png", render_stretched(result.phi_bar));
            emit("normalized", "normalized.png", render_stretched(result.post.normalized));
            emit("thresholded", "thresholded.png", render_edges(result.post.thresholded));
            emit("smoothed", "smoothed.png", render_edges(result.post.smoothed));
            emit("thinned", "thinned.png", render_edges(result.post.thinned));
        }
    }

    m.artifacts["manifest"] = "manifest.json";
    write_json(m.out_dir / "manifest.json", to_json(m));
    for (const auto& [key, file] : m.artifacts) out << "wrote " << (m.out_dir / file).string() << '\n';
}

void run_synth_disk(const fs::path& out_dir, int size, double radius, std::ostream& out) {
    if (size < 2) throw ParameterError("size must be at least 2");
    if (!(radius > 0.0)) throw ParameterError("radius must be positive");
    const double c = 0.5 * (size - 1);
    fs::create_directories(out_dir);
    save_png(out_dir / "disk.png", render_intensity(make_disk_image(size, size, c, c, radius)));
    save_png(out_dir / "disk_truth.png", render_edges(circle_truth(size, size, c, c, radius)));
    out << "wrote " << (out_dir / "disk.png").string() << '\n'
        << "wrote " << (out_dir / "disk_truth.png").string() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-run random point initialization level-set edge detection", "mrpi"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.footer("Any command also accepts --config FILE, a key=value file whose keys are flag names "
               "without the leading dashes. Flags given on the command line take precedence.");

    RunManifest m;
    m.threads = default_threads();
    CannyParams canny;
    SegmentFlags flags;
    std::string input;
    std::string out_dir = ".";
    std::string truth;

    auto* segment = app.add_subcommand("segment", "Run m-RPI segmentation and post-processing");
    add_common_options(segment, m, input, out_dir, truth);
    add_segment_options(segment, m, flags);
    segment->add_flag("--debug-stages", m.debug_stages, "Also write every intermediate stage as PNG");

    auto* canny_cmd = app.add_subcommand("canny", "Run the Canny baseline");
    add_common_options(canny_cmd, m, input, out_dir, truth);
    add_canny_options(canny_cmd, canny);
    canny_cmd->add_option("--scale", m.settings.scale, "Bicubic resize factor")->capture_default_str();

    auto* compare = app.add_subcommand("compare", "Run both methods and report metrics");
    add_common_options(compare, m, input, out_dir, truth);
    add_segment_options(compare, m, flags);
    add_canny_options(compare, canny);
    compare->add_flag("--debug-stages", m.debug_stages, "Also write every intermediate stage as PNG");

    std::string manifest_path;
    std::string replay_out;
    unsigned replay_threads = 0;
    auto* replay = app.add_subcommand("replay", "Re-run a previous invocation from its manifest.json");
    replay->add_option("manifest", manifest_path, "Path to manifest.json")->required();
    replay->add_option("-o,--out-dir", replay_out, "Output directory (default: the recorded one)");
    replay->add_option("--threads", replay_threads, "Override the recorded thread count");

    int disk_size = 128;
    double disk_radius = 40.0;
    std::string synth_out = ".";
    auto* synth = app.add_subcommand("synth-disk", "Write the dark-disk test image and its truth map");
    synth->add_option("-o,--out-dir", synth_out, "Output directory")->capture_default_str();
    synth->add_option("--size", disk_size, "Image width and height")->capture_default_str();
    synth->add_option("--radius", disk_radius, "Disk radius in pixels")->capture_default_str();

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*synth) {
            run_synth_disk(synth_out, disk_size, disk_radius, out);
            return 0;
        }
        if (*replay) {
            m = manifest_from_json(read_json(manifest_path));
            if (!replay_out.empty()) m.out_dir = replay_out;
            if (replay_threads > 0) m.threads = replay_threads;
        } else {
            m.command = app.get_subcommands().front()->get_name();
            m.input = fs::absolute(input);
            m.out_dir = out_dir;
            if (!truth.empty()) m.truth = fs::absolute(truth);
            if (flags.dense_only) m.settings.rpi.alpha = 1.0;
            m.settings.post.majority_rule = flags.majority_rule == "center-inclusive"
                                                ? MajorityRule::CenterInclusive
                                                : MajorityRule::NeighborsTieClears;
            if (m.command != "segment") m.canny = canny;
        }
        execute(m, out);
        return 0;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace mrpi
