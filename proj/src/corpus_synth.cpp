#include "emopeak/corpus_synth.hpp"

#include "emopeak/error.hpp"
#include "emopeak/random.hpp"
#include "emopeak/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace emopeak {

void EmotionProfile::validate() const
{
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidProfile, what); };
    if (!(f0_hz > 0.0))
        fail("f0_hz must be positive");
    if (!(burst_interval_ms > 0.0))
        fail("burst_interval_ms must be positive");
    if (!(burst_duration_ms > 0.0) || !(burst_duration_ms < burst_interval_ms))
        fail("burst_duration_ms must lie in (0, burst_interval_ms)");
    if (burst_count < 2)
        fail("burst_count must be >= 2");
    if (!(amplitude > 0.0 && amplitude <= 1.0))
        fail("amplitude must lie in (0, 1]");
    if (!(interval_jitter_frac >= 0.0 && interval_jitter_frac < 1.0))
        fail("interval_jitter_frac must lie in [0, 1)");
    if (!(heart_rate_bpm > 0.0))
        fail("heart_rate_bpm must be positive");
    if (!(lead_silence_ms >= 0.0))
        fail("lead_silence_ms must be >= 0");
}

EmotionProfile default_profile(Emotion e)
{
    EmotionProfile p;
    p.emotion = e;
    switch (e) {
    case Emotion::Sadness:
        p.burst_interval_ms = 240.0, p.f0_hz = 180.0, p.amplitude = 0.4, p.heart_rate_bpm = 62.0;
        break;
    case Emotion::Neutral:
        p.burst_interval_ms = 180.0, p.f0_hz = 200.0, p.amplitude = 0.5, p.heart_rate_bpm = 72.0;
        break;
    case Emotion::Anger:
        p.burst_interval_ms = 140.0, p.f0_hz = 240.0, p.amplitude = 0.8, p.heart_rate_bpm = 95.0;
        break;
    case Emotion::Joy:
        p.burst_interval_ms = 100.0, p.f0_hz = 260.0, p.amplitude = 0.7, p.heart_rate_bpm = 88.0;
        break;
    }
    p.burst_count = 3;
    p.burst_duration_ms = 0.5 * p.burst_interval_ms;
    p.interval_jitter_frac = 0.05;
    p.lead_silence_ms = p.burst_interval_ms - p.burst_duration_ms;
    return p;
}

EmotionProfile CorpusSpec::profile_for(Emotion e) const
{
    if (auto it = profile_overrides.find(e); it != profile_overrides.end())
        return it->second;
    return default_profile(e);
}

void CorpusSpec::validate() const
{
    if (n_subjects < 1)
        throw Error(ErrorCode::InvalidProfile, "n_subjects must be >= 1");
    if (utterances_per_emotion < 2)
        throw Error(ErrorCode::InvalidProfile, "utterances_per_emotion must be >= 2");
    if (emotions.empty())
        throw Error(ErrorCode::InvalidProfile, "no emotions requested");
    if (!(subject_variability_frac >= 0.0 && subject_variability_frac < 1.0))
        throw Error(ErrorCode::InvalidProfile, "subject_variability_frac must lie in [0, 1)");
    if (sample_rate_hz <= 0)
        throw Error(ErrorCode::InvalidProfile, "sample rate must be positive");
    for (Emotion e : emotions)
        profile_for(e).validate();
}

std::vector<double> burst_onsets_s(const EmotionProfile& profile, std::uint64_t seed)
{
    profile.validate();
    Rng rng(seed);
    std::vector<double> onsets(static_cast<std::size_t>(profile.burst_count));
    for (int k = 0; k < profile.burst_count; ++k) {
        const double jitter = rng.uniform(-profile.interval_jitter_frac, profile.interval_jitter_frac);
        onsets[static_cast<std::size_t>(k)] = k * profile.burst_interval_ms * (1.0 + jitter) / 1000.0;
    }
    return onsets;
}

AudioBuffer synth_utterance(const EmotionProfile& profile, int sample_rate_hz, std::uint64_t seed)
{
    if (sample_rate_hz <= 0)
        throw Error(ErrorCode::InvalidProfile, "sample rate must be positive");
    const auto onsets = burst_onsets_s(profile, seed);
    const double rate = sample_rate_hz;

    const double lead_s = profile.lead_silence_ms / 1000.0;
    const double total_s = lead_s + onsets.back() + profile.burst_interval_ms / 1000.0;
    std::vector<double> signal(static_cast<std::size_t>(std::ceil(total_s * rate)), 0.0);

    const auto burst_len = static_cast<std::size_t>(std::llround(profile.burst_duration_ms * rate / 1000.0));
    const double two_pi = 2.0 * std::numbers::pi;
    for (double onset : onsets) {
        const auto start = static_cast<std::size_t>(std::llround((lead_s + onset) * rate));
        for (std::size_t n = 0; n < burst_len && start + n < signal.size(); ++n) {
            const double t = static_cast<double>(n) / rate;
            const double envelope = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(n) / burst_len));
            const double tone = std::sin(two_pi * profile.f0_hz * t) + 0.5 * std::sin(two_pi * 2.0 * profile.f0_hz * t) +
                                0.25 * std::sin(two_pi * 3.0 * profile.f0_hz * t);
            signal[start + n] += envelope * tone;
        }
    }

    double peak = 0.0;
    for (double s : signal)
        peak = std::max(peak, std::abs(s));
    const double gain = peak > 0.0 ? profile.amplitude / peak : 0.0;
    for (double& s : signal)
        s = std::clamp(s * gain, -1.0, 1.0);
    return AudioBuffer(std::move(signal), sample_rate_hz);
}

double subject_factor(const CorpusSpec& spec, int subject_index)
{
    Rng rng(derive_seed(spec.master_seed, {0, static_cast<std::uint64_t>(subject_index)}));
    return 1.0 + rng.uniform(-1.0, 1.0) * spec.subject_variability_frac;
}

EmotionProfile subject_profile(const CorpusSpec& spec, int subject_index, Emotion e)
{
    const double factor = subject_factor(spec, subject_index);
    EmotionProfile p = spec.profile_for(e);
    p.burst_interval_ms *= factor;
    p.burst_duration_ms *= factor;
    p.f0_hz *= factor;
    p.heart_rate_bpm *= factor;
    p.lead_silence_ms *= factor;
    return p;
}

namespace {

std::string subject_name(int s)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%02d", s + 1);
    return buf;
}

}  // namespace

std::vector<SynthUtterance> generate_corpus(const CorpusSpec& spec)
{
    spec.validate();
    std::vector<SynthUtterance> out;
    for (int s = 0; s < spec.n_subjects; ++s) {
        const std::string subject = subject_name(s);
        for (Emotion e : spec.emotions) {
            const EmotionProfile profile = subject_profile(spec, s, e);
            for (int k = 0; k < spec.utterances_per_emotion; ++k) {
                const std::uint64_t seed = derive_seed(
                    spec.master_seed, {1, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(e),
                                       static_cast<std::uint64_t>(k)});
                Rng hr_rng(derive_seed(seed, {2}));
                char id[64];
                std::snprintf(id, sizeof id, "%s_%c_%02d", subject.c_str(), label_letter(e), k + 1);

                ManifestRow row;
                row.subject_id = subject;
                row.utterance_id = id;
                row.emotion = e;
                row.wav_path = subject + "/" + id + ".wav";
                row.heart_rate_bpm =
                    profile.heart_rate_bpm *
                    (1.0 + hr_rng.uniform(-profile.interval_jitter_frac, profile.interval_jitter_frac));
                row.true_interval_ms = profile.burst_interval_ms;
                out.push_back({std::move(row), synth_utterance(profile, spec.sample_rate_hz, seed)});
            }
        }
    }
    return out;
}

CorpusManifest synth_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir)
{
    const auto corpus = generate_corpus(spec);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());

    CorpusManifest manifest;
    manifest.path = out_dir / "manifest.csv";
    for (const auto& utt : corpus) {
        const auto wav = out_dir / utt.row.wav_path;
        std::filesystem::create_directories(wav.parent_path(), ec);
        if (ec)
            throw Error(ErrorCode::IoFailure, "cannot create " + wav.parent_path().string());
        write_wav(utt.audio, wav);
        manifest.rows.push_back(utt.row);
    }
    write_manifest(manifest.rows, manifest.path);
    return manifest;
}

void write_manifest(const std::vector<ManifestRow>& rows, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << kManifestHeader << '\n';
    for (const auto& r : rows)
        out << r.subject_id << ',' << r.utterance_id << ',' << label_letter(r.emotion) << ',' << r.wav_path << ','
            << format_double(r.heart_rate_bpm) << ',' << format_double(r.true_interval_ms) << '\n';
    if (!out)
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open manifest " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != kManifestHeader)
        throw Error(ErrorCode::SchemaMismatch, "manifest header must be: " + std::string(kManifestHeader));

    std::vector<ManifestRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto f = split(trim(line), ',');
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (f.size() != 6)
            throw Error(ErrorCode::MalformedRow, where + ": expected 6 fields");
        ManifestRow r;
        r.subject_id = f[0];
        r.utterance_id = f[1];
        const auto e = parse_emotion(f[2]);
        if (!e)
            throw Error(ErrorCode::UnknownLabel, where + ": label '" + f[2] + "'");
        r.emotion = *e;
        r.wav_path = f[3];
        const auto hr = parse_double(f[4]);
        const auto interval = parse_double(f[5]);
        if (!hr || !interval)
            throw Error(ErrorCode::MalformedRow, where + ": non-numeric field");
        r.heart_rate_bpm = *hr;
        r.true_interval_ms = *interval;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace emopeak
