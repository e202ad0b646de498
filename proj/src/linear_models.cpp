#include "emopeak/classifiers.hpp"
#include "emopeak/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace emopeak {

namespace {

void softmax_inplace(std::vector<double>& z)
{
    const double top = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - top);
        total += v;
    }
    for (double& v : z)
        v /= total;
}

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        d += (a[j] - b[j]) * (a[j] - b[j]);
    return d;
}

SoftmaxFitOptions softmax_options(const ClassifierSpec& spec)
{
    SoftmaxFitOptions o;
    o.ridge = spec.param("ridge");
    o.iterations = static_cast<std::size_t>(spec.param("iterations"));
    o.step = spec.param("step");
    o.tolerance = spec.param("tolerance");
    return o;
}

}  // namespace

std::vector<double> SoftmaxLayer::predict_proba(std::span<const double> input) const
{
    std::vector<double> z(weights.size());
    for (std::size_t c = 0; c < weights.size(); ++c) {
        double acc = weights[c][0];
        for (std::size_t j = 0; j < input.size(); ++j)
            acc += weights[c][j + 1] * input[j];
        z[c] = acc;
    }
    softmax_inplace(z);
    return z;
}

LogisticModel train_logistic(const TrainingData& data, const ClassifierSpec& spec)
{
    LogisticModel m;
    m.standardizer = Standardizer::fit(data.x);
    Matrix z;
    z.reserve(data.size());
    for (const auto& row : data.x)
        z.push_back(m.standardizer.apply(row));
    m.layer = fit_softmax(z, data.y, data.n_classes, softmax_options(spec));
    return m;
}

std::vector<double> LogisticModel::predict_proba(std::span<const double> x) const
{
    return layer.predict_proba(standardizer.apply(x));
}

KMeansResult kmeans(const Matrix& points, std::size_t k, std::size_t max_iterations, Rng& rng)
{
    const std::size_t n = points.size();
    if (n == 0 || k == 0)
        throw Error(ErrorCode::EmptyInput, "k-means needs points and k >= 1");
    k = std::min(k, n);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));

    KMeansResult r;
    for (std::size_t c = 0; c < k; ++c)
        r.centers.push_back(points[order[c]]);
    r.assignment.assign(n, std::numeric_limits<std::size_t>::max());

    const std::size_t d = points.front().size();
    for (std::size_t it = 0; it < max_iterations; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = squared_distance(points[i], r.centers[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double dist = squared_distance(points[i], r.centers[c]);
                if (dist < best_d) {
                    best_d = dist;
                    best = c;
                }
            }
            if (r.assignment[i] != best) {
                r.assignment[i] = best;
                changed = true;
            }
        }

        std::vector<std::size_t> counts(k, 0);
        Matrix sums(k, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[r.assignment[i]];
            for (std::size_t j = 0; j < d; ++j)
                sums[r.assignment[i]][j] += points[i][j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t j = 0; j < d; ++j)
                    r.centers[c][j] = sums[c][j] / static_cast<double>(counts[c]);
                continue;
            }
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dist = squared_distance(points[i], r.centers[r.assignment[i]]);
                if (dist > far_d) {
                    far_d = dist;
                    far = i;
                }
            }
            r.centers[c] = points[far];
            r.assignment[far] = c;
            changed = true;
        }
        if (!changed)
            break;
    }
    return r;
}

RbfNetworkModel train_rbf_network(const TrainingData& data, const ClassifierSpec& spec)
{
    const auto per_class = static_cast<std::size_t>(spec.param("clusters_per_class"));
    const auto max_iter = static_cast<std::size_t>(spec.param("kmeans_iterations"));
    const double min_width = spec.param("min_width");

    RbfNetworkModel m;
    m.standardizer = Standardizer::fit(data.x);
    Matrix z;
    z.reserve(data.size());
    for (const auto& row : data.x)
        z.push_back(m.standardizer.apply(row));

    for (std::size_t c = 0; c < data.n_classes; ++c) {
        Matrix members;
        std::size_t first = data.size();
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.y[i] == c) {
                first = std::min(first, i);
                members.push_back(z[i]);
            }
        if (members.empty())
            continue;
        // Keyed on the class's first row rather than its index so renaming
        // classes does not change the clustering.
        Rng rng(derive_seed(spec.seed, {first}));
        const auto km = kmeans(members, per_class, max_iter, rng);
        for (std::size_t k = 0; k < km.centers.size(); ++k) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (km.assignment[i] != k)
                    continue;
                sum += squared_distance(members[i], km.centers[k]);
                ++count;
            }
            const double rms = count > 0 ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
            m.centers.push_back(km.centers[k]);
            m.widths.push_back(std::max(rms, min_width));
        }
    }

    Matrix activations;
    activations.reserve(z.size());
    for (const auto& row : data.x)
        activations.push_back(m.activations(row));
    m.layer = fit_softmax(activations, data.y, data.n_classes, softmax_options(spec));
    return m;
}

std::vector<double> RbfNetworkModel::activations(std::span<const double> x) const
{
    const auto z = standardizer.apply(x);
    std::vector<double> a(centers.size());
    for (std::size_t k = 0; k < centers.size(); ++k)
        a[k] = std::exp(-squared_distance(z, centers[k]) / (2.0 * widths[k] * widths[k]));
    return a;
}

std::vector<double> RbfNetworkModel::predict_proba(std::span<const double> x) const
{
    return layer.predict_proba(activations(x));
}

}  // namespace emopeak
