#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace emopeak {

/// Class labels A/B/C/D for neutral, anger, joy, sadness.
enum class Emotion { Neutral, Anger, Joy, Sadness };

char label_letter(Emotion e) noexcept;
std::string_view emotion_name(Emotion e) noexcept;
std::optional<Emotion> emotion_from_letter(std::string_view letter) noexcept;
/// Accepts either the letter or the lower-case name ("anger").
std::optional<Emotion> parse_emotion(std::string_view text) noexcept;

/// A/B/C: the classification label set.
std::vector<Emotion> classification_labels();
/// A/B/C/D: the exploratory label set that adds sadness.
std::vector<Emotion> exploratory_labels();

}  // namespace emopeak
