#include "emopeak/classifiers.hpp"

#include "emopeak/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace emopeak {

namespace {

struct ParamRange {
    const char* key;
    double fallback;
    double min;
    double max;
    bool integral;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<ParamRange> params_for(ClassifierKind kind)
{
    const std::vector<ParamRange> softmax = {
        {"ridge", 1e-8, 0.0, kInf, false},
        {"iterations", 2000, 1, 1e7, true},
        {"step", 0.1, 1e-12, 100.0, false},
        {"tolerance", 1e-6, 0.0, kInf, false},
    };
    switch (kind) {
    case ClassifierKind::NaiveBayes:
        return {{"variance_floor", 1e-6, 1e-300, kInf, false}};
    case ClassifierKind::NearestNeighbor1:
        return {};
    case ClassifierKind::Logistic:
        return softmax;
    case ClassifierKind::RbfNetwork: {
        auto p = softmax;
        p.push_back({"clusters_per_class", 2, 1, 1e6, true});
        p.push_back({"kmeans_iterations", 100, 1, 1e7, true});
        p.push_back({"min_width", 1e-3, 1e-300, kInf, false});
        return p;
    }
    case ClassifierKind::AdaBoostM1:
        return {{"rounds", 10, 1, 1e6, true}};
    case ClassifierKind::Bagging:
        return {{"bags", 10, 1, 1e6, true}, {"max_depth", 20, 0, 1e4, true}};
    case ClassifierKind::RandomTree:
        return {{"max_depth", 20, 0, 1e4, true}, {"k_features", 0, 0, 1e6, true}};
    }
    return {};
}

void check_finite(const Matrix& x)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        for (double v : x[i])
            if (!std::isfinite(v))
                throw Error(ErrorCode::NonFiniteFeature, "row " + std::to_string(i) + " has a non-finite value");
}

std::vector<std::vector<std::size_t>> rows_by_class(const TrainingData& data)
{
    std::vector<std::vector<std::size_t>> by_class(data.n_classes);
    for (std::size_t i = 0; i < data.size(); ++i)
        by_class[data.y[i]].push_back(i);
    return by_class;
}

NaiveBayesModel train_naive_bayes(const TrainingData& data, double variance_floor)
{
    const std::size_t d = data.n_features();
    NaiveBayesModel m;
    m.log_priors.assign(data.n_classes, -kInf);
    m.means.assign(data.n_classes, std::vector<double>(d, 0.0));
    m.variances.assign(data.n_classes, std::vector<double>(d, variance_floor));
    const auto by_class = rows_by_class(data);
    for (std::size_t c = 0; c < data.n_classes; ++c) {
        const auto& rows = by_class[c];
        if (rows.empty())
            continue;
        const double n = static_cast<double>(rows.size());
        m.log_priors[c] = std::log(n / static_cast<double>(data.size()));
        for (std::size_t j = 0; j < d; ++j) {
            double mean = 0.0;
            for (std::size_t i : rows)
                mean += data.x[i][j];
            mean /= n;
            double var = 0.0;
            for (std::size_t i : rows)
                var += (data.x[i][j] - mean) * (data.x[i][j] - mean);
            m.means[c][j] = mean;
            m.variances[c][j] = std::max(var / n, variance_floor);
        }
    }
    return m;
}

NearestNeighborModel train_nearest_neighbor(const TrainingData& data)
{
    NearestNeighborModel m;
    m.scaler = fit_min_max(data.x);
    m.stored = m.scaler.transform(data.x);
    m.labels = data.y;
    m.n_classes = data.n_classes;
    return m;
}

/// Turns per-class log scores into a normalized distribution.
std::vector<double> softmax_from_logs(const std::vector<double>& logs)
{
    const double top = *std::max_element(logs.begin(), logs.end());
    std::vector<double> p(logs.size(), 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < logs.size(); ++c) {
        p[c] = std::isfinite(logs[c]) ? std::exp(logs[c] - top) : 0.0;
        total += p[c];
    }
    for (double& v : p)
        v /= total;
    return p;
}

}  // namespace

// Defined in the sibling translation units.
LogisticModel train_logistic(const TrainingData& data, const ClassifierSpec& spec);
RbfNetworkModel train_rbf_network(const TrainingData& data, const ClassifierSpec& spec);
AdaBoostModel train_adaboost(const TrainingData& data, const ClassifierSpec& spec);
BaggingModel train_bagging(const TrainingData& data, const ClassifierSpec& spec);
RandomTreeModel train_random_tree_classifier(const TrainingData& data, const ClassifierSpec& spec);

std::string_view kind_name(ClassifierKind kind) noexcept
{
    switch (kind) {
    case ClassifierKind::NaiveBayes: return "NaiveBayes";
    case ClassifierKind::NearestNeighbor1: return "NearestNeighbor1";
    case ClassifierKind::RbfNetwork: return "RbfNetwork";
    case ClassifierKind::Logistic: return "Logistic";
    case ClassifierKind::AdaBoostM1: return "AdaBoostM1";
    case ClassifierKind::Bagging: return "Bagging";
    case ClassifierKind::RandomTree: return "RandomTree";
    }
    return "Unknown";
}

std::optional<ClassifierKind> parse_kind(std::string_view name) noexcept
{
    for (ClassifierKind k : kAllClassifierKinds)
        if (kind_name(k) == name)
            return k;
    return std::nullopt;
}

double ClassifierSpec::param(std::string_view key) const
{
    if (auto it = hyperparameters.find(std::string(key)); it != hyperparameters.end())
        return it->second;
    for (const auto& p : params_for(kind))
        if (key == p.key)
            return p.fallback;
    throw Error(ErrorCode::InvalidHyperparameter,
                std::string(kind_name(kind)) + " has no hyperparameter '" + std::string(key) + "'");
}

void ClassifierSpec::validate() const
{
    const auto known = params_for(kind);
    for (const auto& [key, value] : hyperparameters) {
        auto it = std::find_if(known.begin(), known.end(), [&](const ParamRange& p) { return key == p.key; });
        if (it == known.end())
            throw Error(ErrorCode::InvalidHyperparameter,
                        std::string(kind_name(kind)) + " has no hyperparameter '" + key + "'");
        if (!(value >= it->min && value <= it->max) || (it->integral && value != std::floor(value)))
            throw Error(ErrorCode::InvalidHyperparameter,
                        std::string(kind_name(kind)) + "." + key + " out of range");
    }
}

std::vector<ClassifierSpec> default_classifier_specs()
{
    std::vector<ClassifierSpec> specs;
    for (ClassifierKind k : kAllClassifierKinds)
        specs.push_back(ClassifierSpec{k, {}, 0});
    return specs;
}

TrainingData to_training_data(const Dataset& dataset)
{
    return TrainingData{dataset.features(), dataset.label_indices(), dataset.label_set().size()};
}

Standardizer Standardizer::fit(const Matrix& x)
{
    Standardizer s;
    const std::size_t d = x.front().size();
    const double n = static_cast<double>(x.size());
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    for (const auto& row : x)
        for (std::size_t j = 0; j < d; ++j)
            s.mean[j] += row[j];
    for (double& m : s.mean)
        m /= n;
    for (std::size_t j = 0; j < d; ++j) {
        double var = 0.0;
        for (const auto& row : x)
            var += (row[j] - s.mean[j]) * (row[j] - s.mean[j]);
        const double sd = std::sqrt(var / n);
        s.scale[j] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const
{
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
        out[j] = (row[j] - mean[j]) / scale[j];
    return out;
}

std::vector<double> NaiveBayesModel::predict_proba(std::span<const double> x) const
{
    std::vector<double> logs(log_priors.size());
    for (std::size_t c = 0; c < logs.size(); ++c) {
        if (!std::isfinite(log_priors[c])) {
            logs[c] = -kInf;
            continue;
        }
        double acc = log_priors[c];
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double var = variances[c][j];
            const double diff = x[j] - means[c][j];
            acc += -0.5 * std::log(2.0 * std::numbers::pi * var) - diff * diff / (2.0 * var);
        }
        logs[c] = acc;
    }
    return softmax_from_logs(logs);
}

std::vector<double> NearestNeighborModel::predict_proba(std::span<const double> x) const
{
    const auto q = scaler.transform(std::vector<double>(x.begin(), x.end()));
    std::size_t best = 0;
    double best_dist = kInf;
    for (std::size_t i = 0; i < stored.size(); ++i) {
        double dist = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j)
            dist += (stored[i][j] - q[j]) * (stored[i][j] - q[j]);
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    std::vector<double> p(n_classes, 0.0);
    p[labels[best]] = 1.0;
    return p;
}

TrainedModel::TrainedModel(ClassifierKind kind, Variant model, std::vector<Emotion> label_set, std::size_t n_features)
    : kind_(kind), model_(std::move(model)), label_set_(std::move(label_set)), n_features_(n_features)
{
}

std::vector<double> TrainedModel::predict_proba(std::span<const double> features) const
{
    if (features.size() != n_features_)
        throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(n_features_) + " features, got " +
                                                      std::to_string(features.size()));
    return std::visit([&](const auto& m) { return m.predict_proba(features); }, model_);
}

std::size_t TrainedModel::predict(std::span<const double> features) const
{
    return argmax(predict_proba(features));
}

std::size_t argmax(std::span<const double> values)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best])
            best = i;
    return best;
}

TrainedModel train(const ClassifierSpec& spec, const Dataset& train_set)
{
    return train(spec, to_training_data(train_set), train_set.label_set());
}

TrainedModel train(const ClassifierSpec& spec, const TrainingData& data, std::vector<Emotion> label_set)
{
    spec.validate();
    if (data.size() == 0)
        throw Error(ErrorCode::EmptyTrain, "training set is empty");
    if (!label_set.empty() && label_set.size() != data.n_classes)
        throw Error(ErrorCode::DimensionMismatch, "label set size differs from class count");
    const std::size_t d = data.n_features();
    for (const auto& row : data.x)
        if (row.size() != d || d == 0)
            throw Error(ErrorCode::DimensionMismatch, "ragged or empty feature rows");
    for (std::size_t label : data.y)
        if (label >= data.n_classes)
            throw Error(ErrorCode::DimensionMismatch, "class index out of range");
    check_finite(data.x);
    const std::set<std::size_t> present(data.y.begin(), data.y.end());
    if (present.size() < 2)
        throw Error(ErrorCode::SingleClassTraining, "training data holds a single class");

    TrainedModel::Variant model = [&]() -> TrainedModel::Variant {
        switch (spec.kind) {
        case ClassifierKind::NaiveBayes: return train_naive_bayes(data, spec.param("variance_floor"));
        case ClassifierKind::NearestNeighbor1: return train_nearest_neighbor(data);
        case ClassifierKind::RbfNetwork: return train_rbf_network(data, spec);
        case ClassifierKind::Logistic: return train_logistic(data, spec);
        case ClassifierKind::AdaBoostM1: return train_adaboost(data, spec);
        case ClassifierKind::Bagging: return train_bagging(data, spec);
        case ClassifierKind::RandomTree: return train_random_tree_classifier(data, spec);
        }
        throw Error(ErrorCode::InvalidHyperparameter, "unknown classifier kind");
    }();
    return TrainedModel(spec.kind, std::move(model), std::move(label_set), d);
}

}  // namespace emopeak
