#include "mrpi/pipeline.hpp"

#include <cmath>
#include <fstream>

#include "mrpi/imaging.hpp"

namespace mrpi {

void SegmentSettings::validate() const {
    rpi.validate();
    post.band.validate();
    if (post.thin_iters < 1) throw ParameterError("thin_iters must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("scale must be positive");
}

GrayImage prepare_image(const GrayImage& img, double scale) {
    return scale == 1.0 ? img : clamp(bicubic_resize(img, scale), 0.0, 255.0);
}

SegmentOutcome segment_image(const GrayImage& img, const SegmentSettings& settings, unsigned threads) {
    settings.validate();
    SegmentOutcome out;
    Stopwatch total;

    Stopwatch sw;
    out.image = prepare_image(img, settings.scale);
    const auto g = edge_indicator(out.image, settings.rpi.sigma_g);
    out.timings.add("prepare", sw.seconds());

    sw = Stopwatch();
    const auto plans = plan_runs(settings.rpi);
    const auto stack = collect_runs(g, settings.rpi, plans, threads);
    out.timings.add("rpi_runs", sw.seconds());

    sw = Stopwatch();
    out.phi_bar = average_runs(stack);
    out.timings.add("average", sw.seconds());

    sw = Stopwatch();
    out.post = postprocess_pipeline(out.phi_bar, settings.post);
    out.timings.add("postprocess", sw.seconds());

    out.timings.total_seconds = total.seconds();
    out.timings.threads = threads;
    return out;
}

namespace {

const char* rule_name(MajorityRule r) {
    return r == MajorityRule::CenterInclusive ? "center-inclusive" : "neighbors-tie-clears";
}

MajorityRule rule_from_name(const std::string& s) {
    if (s == "center-inclusive") return MajorityRule::CenterInclusive;
    if (s == "neighbors-tie-clears") return MajorityRule::NeighborsTieClears;
    throw FormatError("unknown majority rule '" + s + "'");
}

template <class T>
T field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw FormatError(std::string("manifest: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("manifest: bad field '") + key + "': " + e.what());
    }
}

}  // namespace

nlohmann::json to_json(const SegmentSettings& s) {
    const auto& r = s.rpi;
    return {{"runs", r.m},
            {"iters", r.k},
            {"sigma", r.sigma},
            {"alpha", r.alpha},
            {"first_dense", r.first_run_dense},
            {"seed", r.seed},
            {"mu", r.drlse.mu},
            {"lambda", r.drlse.lambda},
            {"alpha_area", r.drlse.alpha_area},
            {"dt", r.drlse.dt},
            {"epsilon", r.drlse.epsilon},
            {"sigma_g", r.sigma_g},
            {"p_low", s.post.band.p_low},
            {"p_high", s.post.band.p_up},
            {"majority_until_stable", s.post.majority_until_stable},
            {"majority_rule", rule_name(s.post.majority_rule)},
            {"thin_iters", s.post.thin_iters},
            {"scale", s.scale}};
}

SegmentSettings segment_settings_from_json(const nlohmann::json& j) {
    SegmentSettings s;
    auto& r = s.rpi;
    r.m = field<int>(j, "runs");
    r.k = field<int>(j, "iters");
    r.sigma = field<double>(j, "sigma");
    r.alpha = field<double>(j, "alpha");
    r.first_run_dense = field<bool>(j, "first_dense");
    r.seed = field<std::uint64_t>(j, "seed");
    r.drlse.mu = field<double>(j, "mu");
    r.drlse.lambda = field<double>(j, "lambda");
    r.drlse.alpha_area = field<double>(j, "alpha_area");
    r.drlse.dt = field<double>(j, "dt");
    r.drlse.epsilon = field<double>(j, "epsilon");
    r.sigma_g = field<double>(j, "sigma_g");
    s.post.band.p_low = field<double>(j, "p_low");
    s.post.band.p_up = field<double>(j, "p_high");
    s.post.majority_until_stable = field<bool>(j, "majority_until_stable");
    s.post.majority_rule = rule_from_name(field<std::string>(j, "majority_rule"));
    s.post.thin_iters = field<int>(j, "thin_iters");
    s.scale = field<double>(j, "scale");
    return s;
}

nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json j = {{"schema_version", kManifestSchemaVersion},
                        {"version", m.version},
                        {"command", m.command},
                        {"input", m.input.string()},
                        {"out_dir", m.out_dir.string()},
                        {"threads", m.threads},
                        {"debug_stages", m.debug_stages},
                        {"config", to_json(m.settings)},
                        {"artifacts", m.artifacts}};
    j["truth"] = m.truth ? nlohmann::json(m.truth->string()) : nlohmann::json(nullptr);
    if (m.canny) {
        j["canny"] = {{"t_low", m.canny->t_low}, {"t_high", m.canny->t_high}, {"sigma_c", m.canny->sigma_c}};
    }
    return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    const int schema = field<int>(j, "schema_version");
    if (schema != kManifestSchemaVersion) {
        throw FormatError("manifest: unsupported schema_version " + std::to_string(schema));
    }
    RunManifest m;
    m.version = field<std::string>(j, "version");
    m.command = field<std::string>(j, "command");
    m.input = field<std::string>(j, "input");
    m.out_dir = field<std::string>(j, "out_dir");
    m.threads = field<unsigned>(j, "threads");
    m.debug_stages = field<bool>(j, "debug_stages");
    m.settings = segment_settings_from_json(field<nlohmann::json>(j, "config"));
    m.artifacts = field<std::map<std::string, std::string>>(j, "artifacts");
    if (j.contains("truth") && !j["truth"].is_null()) m.truth = field<std::string>(j, "truth");
    if (j.contains("canny")) {
        const auto& c = j["canny"];
        m.canny = CannyParams{field<double>(c, "t_low"), field<double>(c, "t_high"),
                              field<double>(c, "sigma_c")};
    }
    return m;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("'" + path.string() + "': " + e.what());
    }
}

}  // namespace mrpi
