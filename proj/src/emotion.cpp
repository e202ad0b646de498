#include "emopeak/emotion.hpp"

namespace emopeak {

char label_letter(Emotion e) noexcept
{
    switch (e) {
    case Emotion::Neutral: return 'A';
    case Emotion::Anger: return 'B';
    case Emotion::Joy: return 'C';
    case Emotion::Sadness: return 'D';
    }
    return '?';
}

std::string_view emotion_name(Emotion e) noexcept
{
    switch (e) {
    case Emotion::Neutral: return "neutral";
    case Emotion::Anger: return "anger";
    case Emotion::Joy: return "joy";
    case Emotion::Sadness: return "sadness";
    }
    return "unknown";
}

std::optional<Emotion> emotion_from_letter(std::string_view letter) noexcept
{
    if (letter == "A") return Emotion::Neutral;
    if (letter == "B") return Emotion::Anger;
    if (letter == "C") return Emotion::Joy;
    if (letter == "D") return Emotion::Sadness;
    return std::nullopt;
}

std::optional<Emotion> parse_emotion(std::string_view text) noexcept
{
    if (auto e = emotion_from_letter(text))
        return e;
    for (Emotion e : exploratory_labels())
        if (text == emotion_name(e))
            return e;
    return std::nullopt;
}

std::vector<Emotion> classification_labels()
{
    return {Emotion::Neutral, Emotion::Anger, Emotion::Joy};
}

std::vector<Emotion> exploratory_labels()
{
    return {Emotion::Neutral, Emotion::Anger, Emotion::Joy, Emotion::Sadness};
}

}  // namespace emopeak
