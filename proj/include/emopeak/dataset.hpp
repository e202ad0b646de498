#pragma once

#include "emopeak/emotion.hpp"
#include "emopeak/features.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace emopeak {

using Matrix = std::vector<std::vector<double>>;

/// Labeled feature records sharing one schema: heart rate is either present
/// on every record or on none.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<FeatureRecord> records, std::vector<Emotion> label_set);

    const std::vector<FeatureRecord>& records() const noexcept { return records_; }
    const std::vector<Emotion>& label_set() const noexcept { return label_set_; }
    bool has_heart_rate() const noexcept { return has_heart_rate_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    std::vector<std::string> feature_names() const;
    std::size_t n_features() const noexcept { return has_heart_rate_ ? 2 : 1; }

    /// Row-major numeric features in feature_names() order.
    Matrix features() const;
    /// Index of each record's label within label_set().
    std::vector<std::size_t> label_indices() const;
    std::size_t count(Emotion e) const;

    /// Subset keeping the label set.
    Dataset select(const std::vector<std::size_t>& indices) const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<FeatureRecord> records_;
    std::vector<Emotion> label_set_;
    bool has_heart_rate_ = false;
};

/// Smallest standard label set (A/B/C or A/B/C/D) covering the records.
std::vector<Emotion> infer_label_set(const std::vector<FeatureRecord>& records);

inline constexpr const char* kDatasetCsvHeader = "subject_id,utterance_id,emotion,feature_distance_ms,heart_rate_bpm";

void write_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Without an explicit label set the standard set covering the file is used.
Dataset read_csv(const std::filesystem::path& path, std::optional<std::vector<Emotion>> label_set = std::nullopt);

void write_arff(const Dataset& dataset, const std::filesystem::path& path);
std::string to_arff(const Dataset& dataset);

struct SplitPair {
    Dataset train;
    Dataset test;
    /// Classes whose records all landed in train (test has none of them).
    std::vector<Emotion> degenerate_classes;
};

/// Per-class shuffle and cut: max(1, round(fraction * n_class)) records of
/// each class go to train. Deterministic in (dataset, fraction, seed).
SplitPair stratified_split(const Dataset& dataset, double train_fraction, std::uint64_t seed);

/// Number of training records stratified_split() takes from a class of n.
std::size_t train_count(std::size_t n_class, double train_fraction);

struct MinMaxScaler {
    std::vector<double> mins;
    std::vector<double> maxs;

    std::vector<double> transform(const std::vector<double>& row) const;
    Matrix transform(const Matrix& rows) const;
};

MinMaxScaler fit_min_max(const Matrix& train);

struct MinMaxResult {
    Matrix train;
    Matrix test;
    MinMaxScaler scaler;
};

/// Scales each column to [0, 1] using train statistics only; constant
/// columns map to 0.5.
MinMaxResult min_max_fit_transform(const Matrix& train, const Matrix& test);

}  // namespace emopeak
