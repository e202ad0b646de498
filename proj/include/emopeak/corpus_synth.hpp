#pragma once

#include "emopeak/audio_io.hpp"
#include "emopeak/emotion.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace emopeak {

/// Timing and voicing parameters of one synthetic emotion. Each utterance is
/// `burst_count` harmonic tone bursts whose spacing is the quantity the
/// extraction pipeline is expected to recover.
struct EmotionProfile {
    Emotion emotion = Emotion::Neutral;
    double f0_hz = 200.0;
    double burst_interval_ms = 180.0;
    int burst_count = 3;
    double burst_duration_ms = 90.0;
    double amplitude = 0.5;
    double interval_jitter_frac = 0.05;
    double heart_rate_bpm = 72.0;
    /// Silence before the first burst so its energy hump is fully inside the
    /// utterance.
    double lead_silence_ms = 90.0;

    /// Throws Error(InvalidProfile).
    void validate() const;
};

/// Built-in profile for each emotion. Intervals are ordered
/// sadness > neutral > anger > joy.
EmotionProfile default_profile(Emotion e);

struct CorpusSpec {
    int n_subjects = 1;
    int utterances_per_emotion = 30;
    std::vector<Emotion> emotions = classification_labels();
    double subject_variability_frac = 0.25;
    std::uint64_t master_seed = 0;
    int sample_rate_hz = 16000;
    std::map<Emotion, EmotionProfile> profile_overrides;

    EmotionProfile profile_for(Emotion e) const;
    void validate() const;
};

/// Burst onsets in seconds, relative to the first burst. synth_utterance()
/// places burst k at lead_silence_ms + onsets[k].
std::vector<double> burst_onsets_s(const EmotionProfile& profile, std::uint64_t seed);

AudioBuffer synth_utterance(const EmotionProfile& profile, int sample_rate_hz, std::uint64_t seed);

struct ManifestRow {
    std::string subject_id;
    std::string utterance_id;
    Emotion emotion = Emotion::Neutral;
    std::string wav_path;  // relative to the manifest's directory
    double heart_rate_bpm = 0.0;
    double true_interval_ms = 0.0;
};

struct SynthUtterance {
    ManifestRow row;
    AudioBuffer audio;
};

/// Subject multiplier 1 + u * variability, u uniform in [-1, 1].
double subject_factor(const CorpusSpec& spec, int subject_index);

/// Subject s's profile: timing, pitch and heart rate scaled by the subject factor.
EmotionProfile subject_profile(const CorpusSpec& spec, int subject_index, Emotion e);

/// Generates the whole corpus in memory, subject-major then emotion then index.
std::vector<SynthUtterance> generate_corpus(const CorpusSpec& spec);

inline constexpr const char* kManifestHeader = "subject_id,utterance_id,emotion,wav_path,heart_rate_bpm,true_interval_ms";

struct CorpusManifest {
    std::filesystem::path path;
    std::vector<ManifestRow> rows;
};

/// Writes every WAV under out_dir, then manifest.csv.
CorpusManifest synth_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir);

void write_manifest(const std::vector<ManifestRow>& rows, const std::filesystem::path& path);
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

}  // namespace emopeak
