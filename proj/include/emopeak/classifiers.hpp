#pragma once

#include "emopeak/dataset.hpp"
#include "emopeak/emotion.hpp"
#include "emopeak/random.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace emopeak {

enum class ClassifierKind { NaiveBayes, NearestNeighbor1, RbfNetwork, Logistic, AdaBoostM1, Bagging, RandomTree };

inline constexpr std::array<ClassifierKind, 7> kAllClassifierKinds = {
    ClassifierKind::NaiveBayes, ClassifierKind::NearestNeighbor1, ClassifierKind::RbfNetwork,
    ClassifierKind::Logistic,   ClassifierKind::AdaBoostM1,       ClassifierKind::Bagging,
    ClassifierKind::RandomTree,
};

std::string_view kind_name(ClassifierKind kind) noexcept;
std::optional<ClassifierKind> parse_kind(std::string_view name) noexcept;

/// Which classifier to train, hyperparameter overrides and the seed for any
/// randomized step. Unset hyperparameters take the per-kind defaults:
///
///   NaiveBayes        variance_floor=1e-6
///   Logistic          ridge=1e-8 iterations=2000 step=0.1 tolerance=1e-6
///   RbfNetwork        clusters_per_class=2 kmeans_iterations=100 min_width=1e-3
///                     ridge=1e-8 iterations=2000 step=0.1 tolerance=1e-6
///   AdaBoostM1        rounds=10
///   Bagging           bags=10 max_depth=20
///   RandomTree        max_depth=20 k_features=0 (0 = 1 + floor(log2 d))
struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::NaiveBayes;
    std::map<std::string, double> hyperparameters;
    std::uint64_t seed = 0;

    double param(std::string_view key) const;
    /// Throws Error(InvalidHyperparameter) for unknown keys or out-of-range values.
    void validate() const;
};

/// Default spec for every kind, in kAllClassifierKinds order.
std::vector<ClassifierSpec> default_classifier_specs();

/// Numeric view of a dataset: rows, class indices and the class count.
struct TrainingData {
    Matrix x;
    std::vector<std::size_t> y;
    std::size_t n_classes = 0;

    std::size_t size() const noexcept { return x.size(); }
    std::size_t n_features() const noexcept { return x.empty() ? 0 : x.front().size(); }
};

TrainingData to_training_data(const Dataset& dataset);

// --- fitted models ----------------------------------------------------------

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const Matrix& x);
    std::vector<double> apply(std::span<const double> row) const;
};

struct NaiveBayesModel {
    std::vector<double> log_priors;  // -inf for classes without records
    Matrix means;
    Matrix variances;

    std::vector<double> predict_proba(std::span<const double> x) const;
};

struct NearestNeighborModel {
    MinMaxScaler scaler;
    Matrix stored;
    std::vector<std::size_t> labels;
    std::size_t n_classes = 0;

    std::vector<double> predict_proba(std::span<const double> x) const;
};

/// Multinomial logistic output layer: weights[c] = bias followed by one
/// coefficient per input.
struct SoftmaxLayer {
    Matrix weights;
    std::size_t iterations_run = 0;

    std::vector<double> predict_proba(std::span<const double> input) const;
};

struct SoftmaxFitOptions {
    double ridge = 1e-8;
    std::size_t iterations = 2000;
    double step = 0.1;
    double tolerance = 1e-6;
};

/// Full-batch gradient descent on mean negative log-likelihood plus
/// ridge/2 * |W|^2 (bias excluded).
SoftmaxLayer fit_softmax(const Matrix& inputs, const std::vector<std::size_t>& y, std::size_t n_classes,
                         const SoftmaxFitOptions& options);

struct LogisticModel {
    Standardizer standardizer;
    SoftmaxLayer layer;

    std::vector<double> predict_proba(std::span<const double> x) const;
};

struct KMeansResult {
    Matrix centers;
    std::vector<std::size_t> assignment;
};

/// Lloyd iterations from k distinct seeded records; an empty cluster is
/// re-seeded with the point farthest from its current center.
KMeansResult kmeans(const Matrix& points, std::size_t k, std::size_t max_iterations, Rng& rng);

struct RbfNetworkModel {
    Standardizer standardizer;
    Matrix centers;
    std::vector<double> widths;
    SoftmaxLayer layer;

    std::vector<double> activations(std::span<const double> x) const;
    std::vector<double> predict_proba(std::span<const double> x) const;
};

struct DecisionStump {
    std::size_t feature = 0;
    double threshold = 0.0;  // x[feature] <= threshold goes left
    std::size_t left_class = 0;
    std::size_t right_class = 0;
    double weighted_error = 0.0;

    std::size_t predict(std::span<const double> x) const;
};

/// Exhaustive search over every feature and every midpoint between
/// consecutive distinct values; leaves predict their weighted-majority
/// class. Ties: lowest feature, then lowest threshold, then lowest class.
DecisionStump train_decision_stump(const Matrix& x, const std::vector<std::size_t>& y, std::span<const double> weights,
                                   std::size_t n_classes);

struct AdaBoostModel {
    std::vector<DecisionStump> stumps;
    std::vector<double> alphas;
    std::size_t n_classes = 0;

    std::vector<double> predict_proba(std::span<const double> x) const;
};

struct TreeNode {
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;  // child indices; both 0 for a leaf
    std::size_t right = 0;
    std::vector<double> distribution;  // leaves only

    bool is_leaf() const noexcept { return left == 0 && right == 0; }
};

struct RandomTreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    std::vector<double> predict_proba(std::span<const double> x) const;
    std::size_t depth() const;
};

struct RandomTreeOptions {
    std::size_t max_depth = 20;
    std::size_t k_features = 0;  // 0 = min(1 + floor(log2 d), d)
};

/// Grows a tree on the records listed in `sample` (repeats allowed, as in a
/// bootstrap). Works on single-class samples, unlike train().
RandomTreeModel train_random_tree(const TrainingData& data, std::span<const std::size_t> sample,
                                  const RandomTreeOptions& options, Rng& rng);

struct BaggingModel {
    std::vector<RandomTreeModel> members;

    std::vector<double> predict_proba(std::span<const double> x) const;
};

/// n draws with replacement from [0, n).
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

/// Seeds bagging member `index` uses for its resample and its tree.
std::uint64_t bag_resample_seed(std::uint64_t spec_seed, std::size_t index);
std::uint64_t bag_tree_seed(std::uint64_t spec_seed, std::size_t index);

// --- trained model ----------------------------------------------------------

/// Any of the seven fitted classifiers. Immutable; safe to share across threads.
class TrainedModel {
public:
    using Variant = std::variant<NaiveBayesModel, NearestNeighborModel, RbfNetworkModel, LogisticModel, AdaBoostModel,
                                 BaggingModel, RandomTreeModel>;

    TrainedModel(ClassifierKind kind, Variant model, std::vector<Emotion> label_set, std::size_t n_features);

    ClassifierKind kind() const noexcept { return kind_; }
    const std::vector<Emotion>& label_set() const noexcept { return label_set_; }
    std::size_t n_features() const noexcept { return n_features_; }
    const Variant& model() const noexcept { return model_; }

    /// Distribution over label_set(); non-negative, sums to 1.
    std::vector<double> predict_proba(std::span<const double> features) const;
    /// Index into label_set() of the most probable class (ties: lowest index).
    std::size_t predict(std::span<const double> features) const;

private:
    ClassifierKind kind_;
    Variant model_;
    std::vector<Emotion> label_set_;
    std::size_t n_features_;
};

TrainedModel train(const ClassifierSpec& spec, const Dataset& train_set);

/// Core trainer on numeric data; label_set only tags the result and must
/// have n_classes entries (or be empty).
TrainedModel train(const ClassifierSpec& spec, const TrainingData& data, std::vector<Emotion> label_set = {});

std::size_t argmax(std::span<const double> values);

}  // namespace emopeak
