#include "cli.hpp"

#include "emopeak/audio_io.hpp"
#include "emopeak/corpus_synth.hpp"
#include "emopeak/dataset.hpp"
#include "emopeak/error.hpp"
#include "emopeak/eval.hpp"
#include "emopeak/features.hpp"
#include "emopeak/pipeline_config.hpp"
#include "emopeak/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace emopeak::cli {

namespace fs = std::filesystem;

namespace {

struct SynthArgs {
    int subjects = 1;
    int per_emotion = 30;
    std::string emotions = "A,B,C";
    double variability = 0.25;
    std::uint64_t seed = 0;
    int rate = 16000;
    std::string out;
};

struct ExtractArgs {
    std::string manifest;
    std::string out;
    std::string config;
    std::vector<std::string> overrides;
    std::string arff;
    bool no_heart_rate = false;
};

struct ExperimentArgs {
    std::string data;
    std::string fractions = "0.1:0.9:0.1";
    std::size_t reps = 30;
    std::uint64_t seed = 0;
    std::string out;
    bool group_by_subject = false;
    std::string classifiers;
    std::size_t threads = 0;
};

struct PlotArgs {
    std::string report;
    std::string metric = "accuracy";
    std::string out;
    std::string csv;
};

struct InspectArgs {
    std::string wav;
    std::string out_prefix;
    std::string config;
    std::vector<std::string> overrides;
};

std::ofstream open_output(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    return f;
}

void close_output(std::ofstream& f, const fs::path& path)
{
    f.close();
    if (!f)
        throw Error(ErrorCode::IoFailure, "failed writing " + path.string());
}

PipelineConfig build_config(const std::string& file, const std::vector<std::string>& overrides)
{
    PipelineConfig config;
    if (!file.empty())
        config.apply_file(file);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidConfig, "expected key=value, got '" + kv + "'");
        config.set(trim(std::string_view(kv).substr(0, eq)), trim(std::string_view(kv).substr(eq + 1)));
    }
    config.validate();
    return config;
}

std::vector<Emotion> parse_emotion_list(const std::string& text)
{
    std::vector<Emotion> out;
    for (const auto& token : split(text, ',')) {
        const auto e = parse_emotion(trim(token));
        if (!e)
            throw CLI::ValidationError("--emotions", "unknown emotion '" + token + "'");
        out.push_back(*e);
    }
    return out;
}

std::vector<ClassifierSpec> parse_classifier_list(const std::string& text)
{
    auto specs = default_classifier_specs();
    if (text.empty())
        return specs;
    std::vector<ClassifierSpec> chosen;
    for (const auto& token : split(text, ',')) {
        const auto kind = parse_kind(trim(token));
        if (!kind)
            throw CLI::ValidationError("--classifiers", "unknown classifier '" + token + "'");
        for (const auto& s : specs)
            if (s.kind == *kind)
                chosen.push_back(s);
    }
    return chosen;
}

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream&)
{
    CorpusSpec spec;
    spec.n_subjects = a.subjects;
    spec.utterances_per_emotion = a.per_emotion;
    spec.emotions = parse_emotion_list(a.emotions);
    spec.subject_variability_frac = a.variability;
    spec.master_seed = a.seed;
    spec.sample_rate_hz = a.rate;
    try {
        spec.validate();
    } catch (const Error& ex) {
        throw CLI::ValidationError("synth", ex.what());
    }
    const auto manifest = synth_corpus(spec, a.out);
    out << manifest.path.string() << '\n';
    return kExitOk;
}

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err)
{
    const auto config = build_config(a.config, a.overrides);
    const fs::path manifest_path(a.manifest);
    const auto rows = read_manifest(manifest_path);
    const fs::path base = manifest_path.parent_path();

    std::vector<FeatureRecord> records;
    std::size_t skipped = 0;
    for (const auto& row : rows) {
        try {
            const auto audio = load_wav(base / row.wav_path);
            std::optional<double> hr;
            if (!a.no_heart_rate)
                hr = row.heart_rate_bpm;
            records.push_back(extract_record(audio, config, row.subject_id, row.utterance_id, row.emotion, hr));
        } catch (const Error& e) {
            ++skipped;
            err << "skipped " << row.utterance_id << " (" << row.wav_path << "): " << e.what() << '\n';
        }
    }
    if (records.empty())
        throw Error(ErrorCode::EmptyInput, "no utterance in " + a.manifest + " could be extracted");

    auto labels = infer_label_set(records);
    const Dataset dataset(std::move(records), std::move(labels));
    write_csv(dataset, a.out);
    if (!a.arff.empty())
        write_arff(dataset, a.arff);
    out << "records " << dataset.size() << '\n' << "skipped " << skipped << '\n';
    return kExitOk;
}

void print_summary(const EvalReport& report, std::ostream& out)
{
    out << std::fixed << std::setprecision(4);
    for (const auto& c : report.cells)
        out << c.classifier << " f=" << format_double(c.train_fraction) << " acc=" << c.mean_accuracy
            << " auc=" << c.mean_auc << '\n';
    out << std::defaultfloat;
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err)
{
    ExperimentConfig config;
    config.train_fractions = parse_fractions(a.fractions);
    config.repetitions = a.reps;
    config.master_seed = a.seed;
    config.threads = a.threads;
    config.classifier_specs = parse_classifier_list(a.classifiers);
    try {
        config.validate();
    } catch (const Error& ex) {
        throw CLI::ValidationError("experiment", ex.what());
    }

    const auto dataset = read_csv(a.data);
    const fs::path out_path(a.out);

    if (!a.group_by_subject) {
        const auto report = run_experiment(dataset, config);
        write_report_csv(report, out_path);
        print_summary(report, out);
        return kExitOk;
    }

    const auto subjects = split_by_subject(dataset);
    err << "subjects: " << subjects.size() << '\n';
    const auto cmp = compare_individual_vs_group(subjects, config);
    const auto sibling = [&](const char* suffix) {
        return out_path.parent_path() / (out_path.stem().string() + suffix + out_path.extension().string());
    };
    write_report_csv(cmp.individual, sibling("_individual"));
    write_report_csv(cmp.group, sibling("_group"));
    write_delta_csv(cmp.deltas, sibling("_delta"));
    out << "mean_accuracy_delta " << format_double(cmp.mean_accuracy_delta()) << '\n'
        << "mean_auc_delta " << format_double(cmp.mean_auc_delta()) << '\n';
    return kExitOk;
}

// ---- plot ----

struct Series {
    std::string classifier;
    std::vector<ReportRow> points;
};

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
                                    "#7f7f7f", "#bcbd22", "#17becf"};

std::string svg_escape(std::string_view s)
{
    std::string r;
    for (char c : s) {
        switch (c) {
        case '&': r += "&amp;"; break;
        case '<': r += "&lt;"; break;
        case '>': r += "&gt;"; break;
        case '"': r += "&quot;"; break;
        default: r += c;
        }
    }
    return r;
}

std::string fmt(double v)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
}

std::string render_svg(const std::vector<Series>& series, const std::string& metric)
{
    const double width = 820, height = 520;
    const double left = 70, right = 190, top = 40, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double xmin = 1.0, xmax = 0.0;
    for (const auto& s : series)
        for (const auto& p : s.points) {
            lo = std::min(lo, p.mean - p.std);
            hi = std::max(hi, p.mean + p.std);
            xmin = std::min(xmin, p.train_fraction);
            xmax = std::max(xmax, p.train_fraction);
        }
    if (hi - lo < 1e-9) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    if (xmax - xmin < 1e-9) {
        xmin -= 0.05;
        xmax += 0.05;
    }
    const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double y) { return top + (hi - y) / (hi - lo) * ph; };

    const std::string y_label = metric == "accuracy" ? "Accuracy (%)" : "Area under ROC";
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\"/>\n";
    svg << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int t = 0; t <= 5; ++t) {
        const double y = lo + (hi - lo) * t / 5.0;
        svg << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(y) + 4) << "\" text-anchor=\"end\">" << fmt(y)
            << "</text>\n";
    }
    std::vector<double> xs;
    for (const auto& s : series)
        for (const auto& p : s.points)
            xs.push_back(p.train_fraction);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs)
        svg << "<text x=\"" << fmt(px(x)) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
            << format_double(std::round(x * 100.0)) << "%</text>\n";
    svg << "</g>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">Training data</text>\n";
    svg << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
        << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* colour = kPalette[si % std::size(kPalette)];
        svg << "<g class=\"series\" data-classifier=\"" << svg_escape(s.classifier) << "\">\n";
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.points.size(); ++i)
            svg << (i ? " " : "") << fmt(px(s.points[i].train_fraction)) << ',' << fmt(py(s.points[i].mean));
        svg << "\"/>\n";
        for (const auto& p : s.points) {
            const double x = px(p.train_fraction);
            svg << "<line class=\"error-bar\" x1=\"" << fmt(x) << "\" y1=\"" << fmt(py(p.mean - p.std)) << "\" x2=\""
                << fmt(x) << "\" y2=\"" << fmt(py(p.mean + p.std)) << "\" stroke=\"" << colour << "\"/>\n";
        }
        svg << "</g>\n";
    }

    svg << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const double y = top + 10 + 20.0 * static_cast<double>(si);
        const double x = left + pw + 20;
        svg << "<g class=\"legend-entry\"><line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 24 << "\" y2=\""
            << y << "\" stroke=\"" << kPalette[si % std::size(kPalette)] << "\" stroke-width=\"2\"/><text x=\""
            << x + 30 << "\" y=\"" << y + 4 << "\">" << svg_escape(series[si].classifier) << "</text></g>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream&)
{
    if (a.metric != "accuracy" && a.metric != "auc")
        throw Error(ErrorCode::InvalidConfig, "unknown metric '" + a.metric + "' (expected accuracy or auc)");
    const auto rows = read_report_csv(a.report);
    const double scale = a.metric == "accuracy" ? 100.0 : 1.0;

    std::vector<Series> series;
    for (const auto& r : rows) {
        if (r.metric != a.metric)
            continue;
        auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.classifier == r.classifier; });
        if (it == series.end()) {
            series.push_back({r.classifier, {}});
            it = series.end() - 1;
        }
        ReportRow p = r;
        p.mean *= scale;
        p.std *= scale;
        it->points.push_back(p);
    }
    if (series.empty())
        throw Error(ErrorCode::MalformedRow, "report " + a.report + " has no '" + a.metric + "' rows");
    for (auto& s : series)
        std::stable_sort(s.points.begin(), s.points.end(),
                         [](const ReportRow& x, const ReportRow& y) { return x.train_fraction < y.train_fraction; });

    const fs::path svg_path(a.out);
    auto f = open_output(svg_path);
    f << render_svg(series, a.metric);
    close_output(f, svg_path);

    if (!a.csv.empty()) {
        const fs::path csv_path(a.csv);
        auto c = open_output(csv_path);
        c << "classifier,fraction,mean,std\n";
        for (const auto& s : series)
            for (const auto& p : s.points) {
                c << s.classifier << ',' << format_double(p.train_fraction) << ',' << format_double(p.mean) << ','
                  << format_double(p.std) << '\n';
            }
        close_output(c, csv_path);
    }
    out << a.out << '\n';
    return kExitOk;
}

int cmd_inspect(const InspectArgs& a, std::ostream& out, std::ostream&)
{
    const auto config = build_config(a.config, a.overrides);
    const auto audio = load_wav(a.wav);
    const auto an = analyze_utterance(audio, config);

    const std::string prefix = a.out_prefix;
    const fs::path power_path = prefix + "_power.csv";
    const fs::path mfcc_path = prefix + "_mfcc.csv";
    const fs::path contour_path = prefix + "_contour.csv";

    auto p = open_output(power_path);
    p << "frame";
    const std::size_t n_bins = an.n_fft / 2 + 1;
    for (std::size_t k = 0; k < n_bins; ++k)
        p << ',' << format_double(static_cast<double>(k) * audio.sample_rate_hz() / static_cast<double>(an.n_fft));
    p << '\n';
    for (std::size_t t = 0; t < an.power_frames.size(); ++t) {
        p << t;
        for (double v : an.power_frames[t])
            p << ',' << format_double(v);
        p << '\n';
    }
    close_output(p, power_path);

    auto m = open_output(mfcc_path);
    m << "frame";
    for (std::size_t c = 0; c < config.n_coeffs; ++c)
        m << ",c" << c;
    m << '\n';
    for (std::size_t t = 0; t < an.mfcc.coefficients.size(); ++t) {
        m << t;
        for (double v : an.mfcc.coefficients[t])
            m << ',' << format_double(v);
        m << '\n';
    }
    close_output(m, mfcc_path);

    auto c = open_output(contour_path);
    c << "frame,value,is_peak\n";
    std::size_t next_peak = 0;
    for (std::size_t t = 0; t < an.contour.size(); ++t) {
        const bool peak = next_peak < an.peaks.indices.size() && an.peaks.indices[next_peak] == t;
        if (peak)
            ++next_peak;
        c << t << ',' << format_double(an.contour[t]) << ',' << (peak ? 1 : 0) << '\n';
    }
    close_output(c, contour_path);

    out << "frames " << an.contour.size() << '\n' << "peaks " << an.peaks.size() << '\n';
    if (an.peaks.size() >= 2)
        out << "feature_distance_ms " << format_double(peak_distance_feature(an.peaks)) << '\n';
    return kExitOk;
}

}  // namespace

std::vector<double> parse_fractions(const std::string& text)
{
    const auto bad = [&] { return CLI::ValidationError("--fractions", "expected lo:hi:step or a comma list, got '" + text + "'"); };
    const auto round9 = [](double v) { return std::round(v * 1e9) / 1e9; };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw bad();
        const auto lo = parse_double(trim(parts[0]));
        const auto hi = parse_double(trim(parts[1]));
        const auto step = parse_double(trim(parts[2]));
        if (!lo || !hi || !step || !(*step > 0.0) || *hi < *lo)
            throw bad();
        const auto n = static_cast<std::size_t>(std::floor((*hi - *lo) / *step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i)
            out.push_back(round9(*lo + static_cast<double>(i) * *step));
    } else {
        for (const auto& token : split(text, ',')) {
            const auto v = parse_double(trim(token));
            if (!v)
                throw bad();
            out.push_back(round9(*v));
        }
    }
    for (double f : out)
        if (!(f > 0.0 && f < 1.0))
            throw CLI::ValidationError("--fractions", "fractions must lie in (0, 1), got " + format_double(f));
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Speech emotion recognition from energy-peak spacing"};
    app.name("emopeak");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate a synthetic multi-subject corpus (WAVs + manifest.csv)");
    s->add_option("--subjects", synth.subjects, "Number of subjects")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--per-emotion", synth.per_emotion, "Utterances per emotion per subject")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    s->add_option("--emotions", synth.emotions, "Comma list of emotions (A,B,C,D or names)")->capture_default_str();
    s->add_option("--variability", synth.variability, "Subject variability fraction in [0, 1)")->capture_default_str();
    s->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
    s->add_option("--rate", synth.rate, "Sample rate in Hz")->capture_default_str();
    s->add_option("--out", synth.out, "Output directory")->required();

    ExtractArgs extract;
    auto* e = app.add_subcommand("extract", "Extract peak-distance features for every manifest row");
    e->add_option("--manifest", extract.manifest, "Corpus manifest CSV")->required();
    e->add_option("--out", extract.out, "Feature dataset CSV to write")->required();
    e->add_option("--config", extract.config, "Pipeline config file (key=value lines)");
    e->add_option("--set", extract.overrides, "Override one config key (key=value); repeatable, wins over --config");
    e->add_option("--arff", extract.arff, "Also write the dataset as ARFF");
    e->add_flag("--no-heart-rate", extract.no_heart_rate, "Leave heart rate out of the feature set");

    ExperimentArgs experiment;
    auto* x = app.add_subcommand("experiment", "Train/test every classifier over a sweep of training fractions");
    x->add_option("--data", experiment.data, "Feature dataset CSV")->required();
    x->add_option("--fractions", experiment.fractions, "lo:hi:step or comma list of training fractions")
        ->capture_default_str();
    x->add_option("--reps", experiment.reps, "Repetitions per fraction")->capture_default_str()->check(CLI::PositiveNumber);
    x->add_option("--seed", experiment.seed, "Master seed")->capture_default_str();
    x->add_option("--out", experiment.out, "Report CSV (with --group-by-subject: prefix for the three reports)")
        ->required();
    x->add_flag("--group-by-subject", experiment.group_by_subject,
                "Compare per-subject models against one pooled model; writes <out>_individual/_group/_delta.csv");
    x->add_option("--classifiers", experiment.classifiers, "Comma list of classifiers (default: all seven)");
    x->add_option("--threads", experiment.threads, "Worker threads (0 = all cores); output does not depend on it")
        ->capture_default_str();

    PlotArgs plot;
    auto* p = app.add_subcommand("plot", "Render a report as an SVG line chart with std error bars");
    p->add_option("--report", plot.report, "Report CSV")->required();
    p->add_option("--metric", plot.metric, "accuracy or auc")->capture_default_str();
    p->add_option("--out", plot.out, "SVG file to write")->required();
    p->add_option("--csv", plot.csv, "Also write the plotted points as CSV");

    InspectArgs inspect;
    auto* i = app.add_subcommand("inspect", "Dump power spectrum, MFCCs and energy contour of one WAV");
    i->add_option("--wav", inspect.wav, "Input WAV")->required();
    i->add_option("--out-prefix", inspect.out_prefix, "Prefix for <p>_power.csv, <p>_mfcc.csv, <p>_contour.csv")
        ->required();
    i->add_option("--config", inspect.config, "Pipeline config file (key=value lines)");
    i->add_option("--set", inspect.overrides, "Override one config key (key=value); repeatable, wins over --config");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*s)
            return cmd_synth(synth, out, err);
        if (*e)
            return cmd_extract(extract, out, err);
        if (*x)
            return cmd_experiment(experiment, out, err);
        if (*p)
            return cmd_plot(plot, out, err);
        if (*i)
            return cmd_inspect(inspect, out, err);
    } catch (const CLI::ValidationError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace emopeak::cli
