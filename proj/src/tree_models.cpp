#include "emopeak/classifiers.hpp"
#include "emopeak/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace emopeak {

namespace {

double midpoint(double lo, double hi)
{
    const double mid = lo + (hi - lo) / 2.0;
    return mid < hi ? mid : lo;
}

double entropy(std::span<const double> counts, double total)
{
    double h = 0.0;
    for (double c : counts)
        if (c > 0.0)
            h -= (c / total) * std::log2(c / total);
    return h;
}

class TreeBuilder {
public:
    TreeBuilder(const TrainingData& data, const RandomTreeOptions& options, Rng& rng)
        : data_(data), options_(options), rng_(rng)
    {
        const std::size_t d = data.n_features();
        k_features_ = options.k_features != 0
                          ? std::min(options.k_features, d)
                          : std::min<std::size_t>(1 + static_cast<std::size_t>(std::floor(std::log2(double(d)))), d);
    }

    RandomTreeModel build(std::vector<std::size_t> sample)
    {
        RandomTreeModel tree;
        tree.nodes.emplace_back();
        grow(tree, 0, std::move(sample), 0);
        return tree;
    }

private:
    struct Split {
        std::size_t feature = 0;
        double threshold = 0.0;
        double gain = 0.0;
        bool found = false;
    };

    std::vector<double> class_counts(const std::vector<std::size_t>& sample) const
    {
        std::vector<double> counts(data_.n_classes, 0.0);
        for (std::size_t i : sample)
            counts[data_.y[i]] += 1.0;
        return counts;
    }

    Split best_split(const std::vector<std::size_t>& sample, const std::vector<double>& counts)
    {
        std::vector<std::size_t> features(data_.n_features());
        std::iota(features.begin(), features.end(), 0);
        rng_.shuffle(std::span<std::size_t>(features));
        features.resize(k_features_);

        const double n = static_cast<double>(sample.size());
        const double parent = entropy(counts, n);
        Split best;
        std::vector<std::size_t> order = sample;
        std::vector<double> left(data_.n_classes);
        std::vector<double> right(data_.n_classes);
        for (std::size_t f : features) {
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return data_.x[a][f] < data_.x[b][f]; });
            std::fill(left.begin(), left.end(), 0.0);
            for (std::size_t p = 0; p + 1 < order.size(); ++p) {
                left[data_.y[order[p]]] += 1.0;
                const double lo = data_.x[order[p]][f];
                const double hi = data_.x[order[p + 1]][f];
                if (!(lo < hi))
                    continue;
                const double n_left = static_cast<double>(p + 1);
                const double n_right = n - n_left;
                for (std::size_t c = 0; c < right.size(); ++c)
                    right[c] = counts[c] - left[c];
                const double gain =
                    parent - (n_left / n) * entropy(left, n_left) - (n_right / n) * entropy(right, n_right);
                if (gain > best.gain + 1e-12) {
                    best = {f, midpoint(lo, hi), gain, true};
                }
            }
        }
        return best;
    }

    void make_leaf(RandomTreeModel& tree, std::size_t node, const std::vector<double>& counts, double n)
    {
        auto& dist = tree.nodes[node].distribution;
        dist.resize(counts.size());
        const double denom = n + static_cast<double>(counts.size());
        for (std::size_t c = 0; c < counts.size(); ++c)
            dist[c] = (counts[c] + 1.0) / denom;
    }

    void grow(RandomTreeModel& tree, std::size_t node, std::vector<std::size_t> sample, std::size_t depth)
    {
        const auto counts = class_counts(sample);
        const double n = static_cast<double>(sample.size());
        const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
        if (pure || depth >= options_.max_depth || sample.size() < 2) {
            make_leaf(tree, node, counts, n);
            return;
        }
        const Split split = best_split(sample, counts);
        if (!split.found) {
            make_leaf(tree, node, counts, n);
            return;
        }

        std::vector<std::size_t> left_sample;
        std::vector<std::size_t> right_sample;
        for (std::size_t i : sample)
            (data_.x[i][split.feature] <= split.threshold ? left_sample : right_sample).push_back(i);

        const std::size_t left = tree.nodes.size();
        tree.nodes.emplace_back();
        const std::size_t right = tree.nodes.size();
        tree.nodes.emplace_back();
        tree.nodes[node].feature = split.feature;
        tree.nodes[node].threshold = split.threshold;
        tree.nodes[node].left = left;
        tree.nodes[node].right = right;
        grow(tree, left, std::move(left_sample), depth + 1);
        grow(tree, right, std::move(right_sample), depth + 1);
    }

    const TrainingData& data_;
    RandomTreeOptions options_;
    Rng& rng_;
    std::size_t k_features_ = 1;
};

}  // namespace

std::size_t DecisionStump::predict(std::span<const double> x) const
{
    return x[feature] <= threshold ? left_class : right_class;
}

namespace {

double misclassified(const std::vector<double>& class_weight, std::size_t predicted)
{
    double err = 0.0;
    for (std::size_t c = 0; c < class_weight.size(); ++c)
        if (c != predicted)
            err += class_weight[c];
    return err;
}

}  // namespace

DecisionStump train_decision_stump(const Matrix& x, const std::vector<std::size_t>& y, std::span<const double> weights,
                                   std::size_t n_classes)
{
    if (x.empty())
        throw Error(ErrorCode::EmptyInput, "decision stump needs at least one record");
    const std::size_t n = x.size();
    const std::size_t d = x.front().size();

    std::vector<double> total(n_classes, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        total[y[i]] += weights[i];
    const double total_weight = std::accumulate(total.begin(), total.end(), 0.0);

    DecisionStump best;
    best.threshold = std::numeric_limits<double>::infinity();
    best.left_class = best.right_class = argmax(total);
    best.weighted_error = misclassified(total, best.left_class);
    // Rounding noise must not beat an earlier (lower feature/threshold) split.
    const double tie_tolerance = 1e-12 * total_weight;

    std::vector<std::size_t> order(n);
    std::vector<double> left(n_classes);
    std::vector<double> right(n_classes);
    for (std::size_t f = 0; f < d; ++f) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a][f] < x[b][f]; });
        std::fill(left.begin(), left.end(), 0.0);
        for (std::size_t p = 0; p + 1 < n; ++p) {
            left[y[order[p]]] += weights[order[p]];
            const double lo = x[order[p]][f];
            const double hi = x[order[p + 1]][f];
            if (!(lo < hi))
                continue;
            for (std::size_t c = 0; c < n_classes; ++c)
                right[c] = total[c] - left[c];
            const std::size_t lc = argmax(left);
            const std::size_t rc = argmax(right);
            const double err = misclassified(left, lc) + misclassified(right, rc);
            if (err < best.weighted_error - tie_tolerance) {
                best.feature = f;
                best.threshold = midpoint(lo, hi);
                best.left_class = lc;
                best.right_class = rc;
                best.weighted_error = err;
            }
        }
    }
    return best;
}

AdaBoostModel train_adaboost(const TrainingData& data, const ClassifierSpec& spec)
{
    const auto rounds = static_cast<std::size_t>(spec.param("rounds"));
    const std::size_t n = data.size();
    AdaBoostModel m;
    m.n_classes = data.n_classes;
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    const double max_alpha = std::log(1e10);

    for (std::size_t t = 0; t < rounds; ++t) {
        const DecisionStump stump = train_decision_stump(data.x, data.y, w, data.n_classes);
        std::vector<bool> wrong(n);
        double eps = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wrong[i] = stump.predict(data.x[i]) != data.y[i];
            if (wrong[i])
                eps += w[i];
        }
        if (eps <= 0.0) {
            m.stumps.push_back(stump);
            m.alphas.push_back(max_alpha);
            break;
        }
        if (eps >= 0.5) {
            // A first round is kept regardless so the ensemble is never empty.
            if (m.stumps.empty()) {
                m.stumps.push_back(stump);
                m.alphas.push_back(1.0);
            }
            break;
        }
        const double alpha = std::log((1.0 - eps) / eps);
        m.stumps.push_back(stump);
        m.alphas.push_back(alpha);

        const double boost = (1.0 - eps) / eps;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (wrong[i])
                w[i] *= boost;
            sum += w[i];
        }
        for (double& wi : w)
            wi /= sum;
    }
    return m;
}

std::vector<double> AdaBoostModel::predict_proba(std::span<const double> x) const
{
    std::vector<double> votes(n_classes, 0.0);
    for (std::size_t t = 0; t < stumps.size(); ++t)
        votes[stumps[t].predict(x)] += alphas[t];
    const double total = std::accumulate(votes.begin(), votes.end(), 0.0);
    for (double& v : votes)
        v /= total;
    return votes;
}

RandomTreeModel train_random_tree(const TrainingData& data, std::span<const std::size_t> sample,
                                  const RandomTreeOptions& options, Rng& rng)
{
    if (sample.empty() || data.size() == 0)
        throw Error(ErrorCode::EmptyTrain, "random tree needs at least one record");
    TreeBuilder builder(data, options, rng);
    return builder.build(std::vector<std::size_t>(sample.begin(), sample.end()));
}

std::vector<double> RandomTreeModel::predict_proba(std::span<const double> x) const
{
    std::size_t node = 0;
    while (!nodes[node].is_leaf())
        node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left : nodes[node].right;
    return nodes[node].distribution;
}

std::size_t RandomTreeModel::depth() const
{
    std::vector<std::size_t> depth_of(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].is_leaf())
            continue;
        depth_of[nodes[i].left] = depth_of[nodes[i].right] = depth_of[i] + 1;
        deepest = std::max(deepest, depth_of[i] + 1);
    }
    return deepest;
}

RandomTreeModel train_random_tree_classifier(const TrainingData& data, const ClassifierSpec& spec)
{
    RandomTreeOptions options;
    options.max_depth = static_cast<std::size_t>(spec.param("max_depth"));
    options.k_features = static_cast<std::size_t>(spec.param("k_features"));
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), 0);
    Rng rng(spec.seed);
    return train_random_tree(data, all, options, rng);
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<std::size_t> out(n);
    for (auto& i : out)
        i = rng.below(n);
    return out;
}

std::uint64_t bag_resample_seed(std::uint64_t spec_seed, std::size_t index)
{
    return derive_seed(spec_seed, {index, 0});
}

std::uint64_t bag_tree_seed(std::uint64_t spec_seed, std::size_t index)
{
    return derive_seed(spec_seed, {index, 1});
}

BaggingModel train_bagging(const TrainingData& data, const ClassifierSpec& spec)
{
    const auto bags = static_cast<std::size_t>(spec.param("bags"));
    RandomTreeOptions options;
    options.max_depth = static_cast<std::size_t>(spec.param("max_depth"));
    BaggingModel m;
    for (std::size_t b = 0; b < bags; ++b) {
        const auto sample = bootstrap_indices(data.size(), bag_resample_seed(spec.seed, b));
        Rng rng(bag_tree_seed(spec.seed, b));
        m.members.push_back(train_random_tree(data, sample, options, rng));
    }
    return m;
}

std::vector<double> BaggingModel::predict_proba(std::span<const double> x) const
{
    std::vector<double> avg;
    for (const auto& tree : members) {
        const auto p = tree.predict_proba(x);
        if (avg.empty())
            avg.assign(p.size(), 0.0);
        for (std::size_t c = 0; c < p.size(); ++c)
            avg[c] += p[c];
    }
    for (double& v : avg)
        v /= static_cast<double>(members.size());
    return avg;
}

}  // namespace emopeak
