#include "biharm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "biharm/anomaly.hpp"
#include "biharm/classify.hpp"
#include "biharm/convolve.hpp"
#include "biharm/error.hpp"
#include "biharm/io.hpp"
#include "biharm/metrics.hpp"
#include "biharm/scene.hpp"
#include "biharm/stencil.hpp"

namespace biharm::cli {

namespace {

const std::vector<std::string> kBoundaries = {"mirror", "replicate", "zero", "wrap"};
const std::vector<std::string> kModes = {"residual", "highpass"};
const std::vector<std::string> kStencils = {"biharmonic", "laplacian"};

struct StencilFlags {
    std::string kind = "biharmonic";
    double lx = 1.0;
    double ly = 1.0;

    Stencil make() const { return kind == "laplacian" ? laplacian_baseline() : biharmonic_stencil(lx, ly); }
};

struct EngineFlags {
    std::string boundary_name = "mirror";
    std::size_t tile_height = 64;
    unsigned workers = 1;

    BoundaryPolicy boundary() const { return *parse_boundary(boundary_name); }
    ConvolveOptions options() const { return {false, {tile_height, workers}}; }
};

void add_stencil_flags(CLI::App* cmd, StencilFlags& f) {
    cmd->add_option("--stencil", f.kind, "biharmonic or laplacian")->check(CLI::IsMember(kStencils));
    cmd->add_option("--lx", f.lx, "grid increment along x (biharmonic)")->check(CLI::PositiveNumber);
    cmd->add_option("--ly", f.ly, "grid increment along y (biharmonic)")->check(CLI::PositiveNumber);
}

void add_engine_flags(CLI::App* cmd, EngineFlags& f) {
    cmd->add_option("--boundary", f.boundary_name, "mirror, replicate, zero or wrap")
        ->check(CLI::IsMember(kBoundaries));
    cmd->add_option("--tile-height", f.tile_height, "rows per tile")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
}

bool is_pgm_path(const std::string& path) {
    auto ext = std::filesystem::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm";
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Raster binarize(const Raster& r) {
    Raster out(r.width(), r.height(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) out.samples()[i] = r.samples()[i] != 0.0 ? 1.0 : 0.0;
    return out;
}

Raster mask_for_display(const Raster& mask) {
    Raster out = mask;
    for (double& v : out.samples()) v = v != 0.0 ? 255.0 : 0.0;
    return out;
}

/// Linear stretch of [min, max] onto [0, 255]; a flat map becomes all 0.
Raster stretch_for_display(const Raster& scores) {
    const auto [lo, hi] = std::minmax_element(scores.samples().begin(), scores.samples().end());
    const double min = *lo;
    const double range = *hi - *lo;
    Raster out(scores.width(), scores.height(), 0.0);
    if (range == 0.0) return out;
    for (std::size_t i = 0; i < scores.size(); ++i) out.samples()[i] = (scores.samples()[i] - min) * 255.0 / range;
    return out;
}

void save_raster_set(const BandSet& set, const std::string& path, int maxval) {
    if (is_pgm_path(path)) {
        if (set.band_count() != 1)
            throw std::invalid_argument("PGM output holds one band, input has " +
                                        std::to_string(set.band_count()));
        save_pgm(set.band(0), path, maxval);
    } else {
        save_bandset(set, path);
    }
}

std::string indexed_path(const std::string& path, std::size_t index, std::size_t count) {
    if (count == 1) return path;
    std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + "_" + std::to_string(index + 1) + p.extension().string()))
        .string();
}

AnomalyMap detect_band(const Raster& band, const std::string& name, ScoreMode mode, const Stencil& s,
                       unsigned iterations, const EngineFlags& engine) {
    if (mode == ScoreMode::HighPass) return anomaly_highpass(band, s, engine.boundary(), engine.options(), name);
    return anomaly_residual(band, smooth_jacobi(band, s, iterations, engine.boundary(), engine.options()), name);
}

std::string real_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- subcommands ----------------------------------------------------------

struct StencilCmd {
    StencilFlags stencil;
    std::string csv;
    bool validate = false;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("stencil", "print or export the biharmonic or baseline stencil");
        add_stencil_flags(cmd, stencil);
        cmd->add_option("--csv", csv, "write CSV to this path ('-' for standard output)");
        cmd->add_flag("--validate", validate, "append the validation report");
    }

    int run(std::ostream& out) const {
        const Stencil s = stencil.make();
        if (csv.empty()) out << stencil_to_text(s);
        else write_text(csv, stencil_to_csv(s), out);
        if (validate) {
            const auto report = validate_stencil(s);
            out << "zero_sum_residual=" << real_text(report.zero_sum_residual) << "\n"
                << "max_symmetry_violation=" << real_text(report.max_symmetry_violation) << "\n"
                << "max_cubic_response=" << real_text(report.max_cubic_response) << "\n";
            for (const auto& r : report.responses)
                out << "response_x" << r.monomial.u << "_y" << r.monomial.v << "=" << real_text(r.value) << "\n";
            out << "passed=" << (report.passed ? 1 : 0) << "\n";
        }
        return kExitOk;
    }
};

struct SmoothCmd {
    std::string in, out_path;
    unsigned iterations = 1;
    StencilFlags stencil;
    EngineFlags engine;
    int maxval = 255;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("smooth", "Jacobi-smooth every band of a raster");
        cmd->add_option("--in", in, "input BFR1 or PGM")->required();
        cmd->add_option("--out", out_path, "output path (.pgm writes PGM, anything else BFR1)")->required();
        cmd->add_option("--iters", iterations, "Jacobi iterations")->check(CLI::PositiveNumber);
        cmd->add_option("--maxval", maxval, "PGM output maxval")->check(CLI::IsMember({255, 65535}));
        add_stencil_flags(cmd, stencil);
        add_engine_flags(cmd, engine);
    }

    int run(std::ostream&) const {
        const Stencil s = stencil.make();
        const BandSet input = load_any(in);
        std::vector<Raster> bands;
        for (const auto& band : input.bands())
            bands.push_back(smooth_jacobi(band, s, iterations, engine.boundary(), engine.options()));
        save_raster_set(BandSet(std::move(bands), input.names()), out_path, maxval);
        return kExitOk;
    }
};

struct DetectCmd {
    std::string in, out_path, mask_out, preview;
    std::string mode_name = "residual";
    unsigned iterations = 1;
    double sigma_k = kCompareSigma;
    StencilFlags stencil;
    EngineFlags engine;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("detect", "per-band anomaly scores and threshold mask");
        cmd->add_option("--in", in, "input BFR1 or PGM")->required();
        cmd->add_option("--out", out_path, "signed scores, BFR1 (one band per input band)")->required();
        cmd->add_option("--mode", mode_name, "residual or highpass")->check(CLI::IsMember(kModes));
        cmd->add_option("--iters", iterations, "Jacobi iterations for residual mode")->check(CLI::PositiveNumber);
        cmd->add_option("--sigma-k", sigma_k, "mask threshold in standard deviations")->check(CLI::PositiveNumber);
        cmd->add_option("--mask-out", mask_out, "PGM mask, 255 where any band is flagged");
        cmd->add_option("--preview", preview, "min-max stretched PGM of the scores");
        add_stencil_flags(cmd, stencil);
        add_engine_flags(cmd, engine);
    }

    int run(std::ostream& out) const {
        const ScoreMode mode = mode_name == "highpass" ? ScoreMode::HighPass : ScoreMode::Residual;
        const Stencil s = stencil.make();
        const BandSet input = load_any(in);
        std::vector<Raster> scores;
        std::vector<std::string> names;
        Raster mask(input.width(), input.height(), 0.0);
        std::size_t flagged = 0;
        for (std::size_t b = 0; b < input.band_count(); ++b) {
            AnomalyMap m = detect_band(input.band(b), input.name(b), mode, s, iterations, engine);
            const Raster band_mask = threshold_mask(m, sigma_k);
            for (std::size_t i = 0; i < mask.size(); ++i)
                if (band_mask.samples()[i] != 0.0) mask.samples()[i] = 1.0;
            names.push_back(input.name(b) + ":" + std::string(to_string(mode)));
            scores.push_back(std::move(m.scores));
        }
        for (double v : mask.samples()) flagged += v != 0.0;

        const BandSet result(std::move(scores), std::move(names));
        save_bandset(result, out_path);
        if (!mask_out.empty()) save_pgm(mask_for_display(mask), mask_out, 255);
        if (!preview.empty())
            for (std::size_t b = 0; b < result.band_count(); ++b)
                save_pgm(stretch_for_display(result.band(b)), indexed_path(preview, b, result.band_count()), 255);
        out << "bands=" << result.band_count() << "\n"
            << "mode=" << to_string(mode) << "\n"
            << "flagged_pixels=" << flagged << "\n";
        return kExitOk;
    }
};

struct CompareCmd {
    std::string in, truth, report, csv;
    std::size_t band = 0;
    unsigned iterations = 1;
    double lx = 1.0, ly = 1.0;
    EngineFlags engine;
    bool reference = false;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("compare", "biharmonic residual vs Laplacian high-pass against truth");
        cmd->add_option("--in", in, "input BFR1 or PGM")->required();
        cmd->add_option("--truth", truth, "truth mask PGM (non-zero = anomaly)")->required();
        cmd->add_option("--report", report, "key=value report path (default standard output)");
        cmd->add_option("--csv", csv, "CSV metrics path");
        cmd->add_option("--band", band, "zero-based band index");
        cmd->add_option("--iters", iterations, "Jacobi iterations for the residual")->check(CLI::PositiveNumber);
        cmd->add_option("--lx", lx, "grid increment along x")->check(CLI::PositiveNumber);
        cmd->add_option("--ly", ly, "grid increment along y")->check(CLI::PositiveNumber);
        cmd->add_flag("--reference", reference, "use the reference convolution engine");
        add_engine_flags(cmd, engine);
    }

    int run(std::ostream& out) const {
        const BandSet input = load_any(in);
        if (band >= input.band_count())
            throw std::invalid_argument("band index " + std::to_string(band) + " out of range");
        const Raster truth_mask = binarize(load_pgm(truth));
        const Raster& r = input.band(band);
        ConvolveOptions opts = engine.options();
        opts.use_reference = reference;

        const auto residual =
            anomaly_residual(r, smooth_jacobi(r, biharmonic_stencil(lx, ly), iterations, engine.boundary(), opts),
                             input.name(band));
        const auto baseline = anomaly_highpass(r, laplacian_baseline(), engine.boundary(), opts, input.name(band));
        const auto [a, b] = compare_detectors(residual, baseline, truth_mask);

        std::string text = "band=" + input.name(band) + "\n" + "detector_a=biharmonic_residual\n" +
                           "detector_b=laplacian_highpass\n" + "k_sigma=" + real_text(kCompareSigma) + "\n";
        text += format_metrics(a, "biharmonic");
        text += format_metrics(b, "laplacian");
        text += std::string("higher_auc=") + (a.auc > b.auc ? "biharmonic" : a.auc < b.auc ? "laplacian" : "tie") +
                "\n";
        write_text(report, text, out);
        if (!csv.empty())
            write_text(csv,
                       metrics_csv_header() + metrics_csv_row(a, "biharmonic_residual") +
                           metrics_csv_row(b, "laplacian_highpass"),
                       out);
        return kExitOk;
    }
};

struct ClassifyCmd {
    std::string in, roi, out_path, truth, report;
    std::vector<int> classes;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("classify", "fit and apply a parallelepiped classifier");
        cmd->add_option("--in", in, "input BFR1 or PGM")->required();
        cmd->add_option("--roi", roi, "training labels PGM (0 = unlabelled)")->required();
        cmd->add_option("--out", out_path, "label map PGM")->required();
        cmd->add_option("--truth", truth, "reference label PGM for overall accuracy");
        cmd->add_option("--classes", classes, "class ids to fit (default: all ROI labels)")
            ->delimiter(',')
            ->check(CLI::PositiveNumber);
        cmd->add_option("--report", report, "key=value report path (default standard output)");
    }

    int run(std::ostream& out) const {
        const BandSet input = load_any(in);
        const Raster roi_labels = load_pgm(roi);
        const ClassModel model =
            classes.empty() ? fit_parallelepiped(input, roi_labels) : fit_parallelepiped(input, roi_labels, classes);
        const Raster labels = classify_parallelepiped(input, model);
        const int top = model.classes().empty() ? 0 : model.classes().back().class_id;
        save_pgm(labels, out_path, top > 255 ? 65535 : 255);

        std::string text = "classes=" + std::to_string(model.classes().size()) + "\n";
        for (const auto& c : model.classes())
            for (std::size_t k = 0; k < c.bands.size(); ++k)
                text += "class_" + std::to_string(c.class_id) + "_" + input.name(k) + "=" +
                        real_text(c.bands[k].lo) + "," + real_text(c.bands[k].hi) + "\n";
        if (!truth.empty()) text += "overall_accuracy=" + real_text(overall_accuracy(labels, load_pgm(truth))) + "\n";
        write_text(report, text, out);
        return kExitOk;
    }
};

struct SynthCmd {
    std::string spec, out_path, truth_out;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("synth", "generate a seeded synthetic scene");
        cmd->add_option("--spec", spec, "scene description file")->required();
        cmd->add_option("--out", out_path, "BFR1 output")->required();
        cmd->add_option("--truth-out", truth_out, "truth mask PGM (255 = anomaly)");
    }

    int run(std::ostream& out) const {
        const Scene scene = synth_scene(load_scene_spec(spec));
        save_bandset(scene.bands, out_path);
        if (!truth_out.empty()) save_pgm(mask_for_display(scene.truth), truth_out, 255);
        std::size_t positives = 0;
        for (double v : scene.truth.samples()) positives += v != 0.0;
        out << "width=" << scene.bands.width() << "\nheight=" << scene.bands.height()
            << "\nbands=" << scene.bands.band_count() << "\ntruth_pixels=" << positives << "\n";
        return kExitOk;
    }
};

struct BenchCmd {
    std::string size = "2048x2048";
    unsigned iterations = 3;
    EngineFlags engine{"mirror", 64, 4};
    std::uint64_t seed = 1;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("bench", "throughput of the reference and tiled engines");
        cmd->add_option("--size", size, "raster size WxH")
            ->check([](const std::string& s) { return parse_size(s) ? std::string() : "expected WxH"; });
        cmd->add_option("--iters", iterations, "repetitions per engine")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "random raster seed");
        add_engine_flags(cmd, engine);
    }

    static std::optional<std::pair<std::size_t, std::size_t>> parse_size(const std::string& s) {
        std::size_t w = 0, h = 0;
        char x = 0, extra = 0;
        std::istringstream is(s);
        if (!(is >> w >> x >> h) || x != 'x' || w == 0 || h == 0 || (is >> extra)) return std::nullopt;
        return std::pair{w, h};
    }

    int run(std::ostream& out) const {
        const auto [w, h] = *parse_size(size);
        Xoshiro256 rng(seed);
        std::vector<double> samples(w * h);
        for (double& v : samples) v = rng.uniform_open0();
        const Raster r(w, h, std::move(samples));
        const Stencil s = biharmonic_stencil(1.0, 1.0);

        using clock = std::chrono::steady_clock;
        auto time = [&](auto&& fn) {
            double best = 1e300;
            Raster result = fn();
            for (unsigned i = 0; i < iterations; ++i) {
                const auto t0 = clock::now();
                result = fn();
                best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
            }
            return std::pair{best, std::move(result)};
        };
        const auto [t_ref, ref] = time([&] { return convolve_reference(r, s, engine.boundary()); });
        const auto [t_tiled, tiled] = time([&] { return convolve(r, s, engine.boundary(), engine.options().tiles); });
        const double pixels = static_cast<double>(w * h);
        out << "size=" << w << "x" << h << "\n"
            << "workers=" << engine.workers << "\n"
            << "tile_height=" << engine.tile_height << "\n"
            << "reference_pixels_per_second=" << pixels / t_ref << "\n"
            << "tiled_pixels_per_second=" << pixels / t_tiled << "\n"
            << "speedup=" << t_ref / t_tiled << "\n"
            << "bit_identical=" << (ref == tiled ? 1 : 0) << "\n";
        return ref == tiled ? kExitOk : kExitRuntime;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Biharmonic smoothing, anomaly detection and parallelepiped classification"};
    app.name("biharm");
    app.require_subcommand(1);

    StencilCmd stencil;
    SmoothCmd smooth;
    DetectCmd detect;
    CompareCmd compare;
    ClassifyCmd classify;
    SynthCmd synth;
    BenchCmd bench;
    stencil.attach(app);
    smooth.attach(app);
    detect.attach(app);
    compare.attach(app);
    classify.attach(app);
    synth.attach(app);
    bench.attach(app);

    std::vector<const char*> argv{"biharm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const auto* cmd = app.get_subcommands().front();
        const std::string& name = cmd->get_name();
        if (name == "stencil") return stencil.run(out);
        if (name == "smooth") return smooth.run(out);
        if (name == "detect") return detect.run(out);
        if (name == "compare") return compare.run(out);
        if (name == "classify") return classify.run(out);
        if (name == "synth") return synth.run(out);
        if (name == "bench") return bench.run(out);
    } catch (const std::exception& e) {
        err << "biharm: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace biharm::cli
