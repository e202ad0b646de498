#include "emopeak/dataset.hpp"

#include "emopeak/error.hpp"
#include "emopeak/random.hpp"
#include "emopeak/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace emopeak {

Dataset::Dataset(std::vector<FeatureRecord> records, std::vector<Emotion> label_set)
    : records_(std::move(records)), label_set_(std::move(label_set))
{
    if (label_set_.empty())
        throw Error(ErrorCode::SchemaMismatch, "empty label set");
    has_heart_rate_ = !records_.empty() && records_.front().heart_rate_bpm.has_value();
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (r.heart_rate_bpm.has_value() != has_heart_rate_)
            throw Error(ErrorCode::SchemaMismatch,
                        "record " + std::to_string(i) + " disagrees with the heart-rate schema of record 0");
        if (std::find(label_set_.begin(), label_set_.end(), r.label) == label_set_.end())
            throw Error(ErrorCode::UnknownLabel,
                        "record " + std::to_string(i) + " has label " + std::string(1, label_letter(r.label)));
    }
}

std::vector<std::string> Dataset::feature_names() const
{
    if (has_heart_rate_)
        return {"feature_distance_ms", "heart_rate_bpm"};
    return {"feature_distance_ms"};
}

Matrix Dataset::features() const
{
    Matrix x;
    x.reserve(records_.size());
    for (const auto& r : records_) {
        if (has_heart_rate_)
            x.push_back({r.feature_distance_ms, *r.heart_rate_bpm});
        else
            x.push_back({r.feature_distance_ms});
    }
    return x;
}

std::vector<std::size_t> Dataset::label_indices() const
{
    std::vector<std::size_t> y;
    y.reserve(records_.size());
    for (const auto& r : records_)
        y.push_back(static_cast<std::size_t>(
            std::find(label_set_.begin(), label_set_.end(), r.label) - label_set_.begin()));
    return y;
}

std::size_t Dataset::count(Emotion e) const
{
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [e](const FeatureRecord& r) { return r.label == e; }));
}

Dataset Dataset::select(const std::vector<std::size_t>& indices) const
{
    std::vector<FeatureRecord> subset;
    subset.reserve(indices.size());
    for (std::size_t i : indices)
        subset.push_back(records_.at(i));
    return Dataset(std::move(subset), label_set_);
}

std::vector<Emotion> infer_label_set(const std::vector<FeatureRecord>& records)
{
    const bool has_d = std::any_of(records.begin(), records.end(),
                                   [](const FeatureRecord& r) { return r.label == Emotion::Sadness; });
    return has_d ? exploratory_labels() : classification_labels();
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << kDatasetCsvHeader << '\n';
    for (const auto& r : dataset.records()) {
        out << r.subject_id << ',' << r.utterance_id << ',' << label_letter(r.label) << ','
            << format_double(r.feature_distance_ms) << ',';
        if (r.heart_rate_bpm)
            out << format_double(*r.heart_rate_bpm);
        out << '\n';
    }
    if (!out)
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

Dataset read_csv(const std::filesystem::path& path, std::optional<std::vector<Emotion>> label_set)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != kDatasetCsvHeader)
        throw Error(ErrorCode::SchemaMismatch, path.string() + ": header must be: " + kDatasetCsvHeader);

    const auto allowed = label_set.value_or(exploratory_labels());
    std::vector<FeatureRecord> records;
    int row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        ++row;
        const std::string where = path.string() + " row " + std::to_string(row);
        const auto f = split(trim(line), ',');
        if (f.size() != 5)
            throw Error(ErrorCode::MalformedRow, where + ": expected 5 fields, got " + std::to_string(f.size()));
        const auto label = emotion_from_letter(f[2]);
        if (!label || std::find(allowed.begin(), allowed.end(), *label) == allowed.end())
            throw Error(ErrorCode::UnknownLabel, where + ": label '" + f[2] + "'");
        const auto distance = parse_double(f[3]);
        if (!distance || !std::isfinite(*distance) || *distance <= 0.0)
            throw Error(ErrorCode::MalformedRow, where + ": feature_distance_ms must be a positive number");
        FeatureRecord r;
        r.subject_id = f[0];
        r.utterance_id = f[1];
        r.label = *label;
        r.feature_distance_ms = *distance;
        if (!trim(f[4]).empty()) {
            const auto hr = parse_double(f[4]);
            if (!hr || !std::isfinite(*hr))
                throw Error(ErrorCode::MalformedRow, where + ": heart_rate_bpm is not a number");
            r.heart_rate_bpm = *hr;
        }
        if (!records.empty() && records.front().heart_rate_bpm.has_value() != r.heart_rate_bpm.has_value())
            throw Error(ErrorCode::SchemaMismatch, where + ": heart_rate_bpm present on some rows only");
        records.push_back(std::move(r));
    }
    auto labels = label_set ? *label_set : infer_label_set(records);
    return Dataset(std::move(records), std::move(labels));
}

std::string to_arff(const Dataset& dataset)
{
    std::ostringstream out;
    out << "@relation emotion\n\n";
    out << "@attribute featuredistance numeric\n";
    if (dataset.has_heart_rate())
        out << "@attribute heartrate numeric\n";
    out << "@attribute class {";
    for (std::size_t i = 0; i < dataset.label_set().size(); ++i)
        out << (i ? "," : "") << label_letter(dataset.label_set()[i]);
    out << "}\n\n@data\n";
    for (const auto& r : dataset.records()) {
        out << format_decimal(r.feature_distance_ms) << ',';
        if (r.heart_rate_bpm)
            out << format_decimal(*r.heart_rate_bpm) << ',';
        out << label_letter(r.label) << '\n';
    }
    return out.str();
}

void write_arff(const Dataset& dataset, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << to_arff(dataset);
    if (!out)
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::size_t train_count(std::size_t n_class, double train_fraction)
{
    const auto n = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n_class)));
    return std::max<std::size_t>(1, n);
}

SplitPair stratified_split(const Dataset& dataset, double train_fraction, std::uint64_t seed)
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(ErrorCode::InvalidConfig, "train fraction must lie in (0, 1)");

    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    SplitPair out;
    for (Emotion e : dataset.label_set()) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (dataset.records()[i].label == e)
                members.push_back(i);
        if (members.size() < 2)
            throw Error(ErrorCode::ClassTooSmall, "class " + std::string(1, label_letter(e)) + " (" +
                                                      std::string(emotion_name(e)) + ") has " +
                                                      std::to_string(members.size()) + " record(s), need 2");
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(e)}));
        rng.shuffle(std::span<std::size_t>(members));
        const std::size_t n_train = std::min(train_count(members.size(), train_fraction), members.size());
        if (n_train == members.size())
            out.degenerate_classes.push_back(e);
        train_idx.insert(train_idx.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
        test_idx.insert(test_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    out.train = dataset.select(train_idx);
    out.test = dataset.select(test_idx);
    return out;
}

std::vector<double> MinMaxScaler::transform(const std::vector<double>& row) const
{
    if (row.size() != mins.size())
        throw Error(ErrorCode::DimensionMismatch, "scaler fitted on " + std::to_string(mins.size()) + " features");
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        const double range = maxs[j] - mins[j];
        out[j] = range > 0.0 ? (row[j] - mins[j]) / range : 0.5;
    }
    return out;
}

Matrix MinMaxScaler::transform(const Matrix& rows) const
{
    Matrix out;
    out.reserve(rows.size());
    for (const auto& r : rows)
        out.push_back(transform(r));
    return out;
}

MinMaxScaler fit_min_max(const Matrix& train)
{
    if (train.empty())
        throw Error(ErrorCode::EmptyTrain, "cannot fit a scaler on zero rows");
    MinMaxScaler s;
    s.mins = train.front();
    s.maxs = train.front();
    for (const auto& row : train) {
        if (row.size() != s.mins.size())
            throw Error(ErrorCode::DimensionMismatch, "ragged feature matrix");
        for (std::size_t j = 0; j < row.size(); ++j) {
            s.mins[j] = std::min(s.mins[j], row[j]);
            s.maxs[j] = std::max(s.maxs[j], row[j]);
        }
    }
    return s;
}

MinMaxResult min_max_fit_transform(const Matrix& train, const Matrix& test)
{
    MinMaxResult r;
    r.scaler = fit_min_max(train);
    r.train = r.scaler.transform(train);
    r.test = r.scaler.transform(test);
    return r;
}

}  // namespace emopeak
