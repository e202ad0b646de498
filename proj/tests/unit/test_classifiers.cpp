#include "emopeak/classifiers.hpp"
#include "emopeak/error.hpp"

#include "../oracles.hpp"
#include "../smoke.hpp"
#include "../support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace emopeak;

namespace {

ClassifierSpec spec_for(ClassifierKind k, std::uint64_t seed = 7)
{
    ClassifierSpec s;
    s.kind = k;
    s.seed = seed;
    return s;
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoFailure;
}

// Overlapping Gaussian-ish blobs with unequal class sizes.
TrainingData noisy_dataset(std::uint64_t seed, std::size_t n_features = 2)
{
    Rng rng(seed);
    TrainingData d;
    d.n_classes = 3;
    const std::size_t sizes[] = {13, 17, 23};
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < sizes[c]; ++i) {
            std::vector<double> row;
            for (std::size_t j = 0; j < n_features; ++j)
                row.push_back(3.0 * static_cast<double>(c) * (j % 2 ? -1.0 : 1.0) + rng.uniform(-4.0, 4.0));
            d.x.push_back(row);
            d.y.push_back(c);
        }
    return d;
}

std::vector<std::vector<double>> queries(Rng& rng, std::size_t n, std::size_t d)
{
    std::vector<std::vector<double>> q;
    for (std::size_t i = 0; i < n; ++i)
        q.push_back(testing::random_vector(rng, d, -12.0, 20.0));
    return q;
}

}  // namespace

TEST_SUITE("classifiers") {

TEST_CASE("kind names round trip")
{
    for (auto k : kAllClassifierKinds)
        CHECK(parse_kind(kind_name(k)) == k);
    CHECK_FALSE(parse_kind("SVM").has_value());
    CHECK(default_classifier_specs().size() == 7);
}

TEST_CASE("hyperparameter validation")
{
    auto s = spec_for(ClassifierKind::Logistic);
    s.hyperparameters["depth"] = 3;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidHyperparameter);
    s.hyperparameters = {{"step", -1.0}};
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidHyperparameter);
    CHECK(spec_for(ClassifierKind::AdaBoostM1).param("rounds") == 10);
}

TEST_CASE("naive Bayes posterior against hand-evaluated densities")
{
    TrainingData d;
    d.n_classes = 2;
    d.x = {{1.0}, {2.0}, {4.0}, {6.0}};
    d.y = {0, 0, 1, 1};
    const auto m = train(spec_for(ClassifierKind::NaiveBayes), d);
    const auto p = m.predict_proba(std::vector<double>{2.5});
    // N(2.5; 1.5, 0.25) = 0.1079819330263761, N(2.5; 5.0, 1.0) = 0.01752830049356854
    const double pa = 0.1079819330263761039, pb = 0.0175283004935685374;
    CHECK(std::abs(p[0] - pa / (pa + pb)) < 1e-9);
    CHECK(std::abs(p[0] - 0.860343654840040261) < 1e-9);
    CHECK(std::abs(p[0] - oracle::gaussian_pdf(2.5, 1.5, 0.25) /
                              (oracle::gaussian_pdf(2.5, 1.5, 0.25) + oracle::gaussian_pdf(2.5, 5.0, 1.0))) < 1e-12);
    CHECK(std::abs(p[1] - (1.0 - p[0])) < 1e-12);
}

TEST_CASE("naive Bayes: mirror classes give even odds at the midpoint")
{
    TrainingData d;
    d.n_classes = 2;
    d.x = {{-2.0}, {-1.0}, {-0.5}, {0.5}, {1.0}, {2.0}};
    d.y = {0, 0, 0, 1, 1, 1};
    const auto p = train(spec_for(ClassifierKind::NaiveBayes), d).predict_proba(std::vector<double>{0.0});
    CHECK(std::abs(p[0] - 0.5) < 1e-9);
    CHECK(std::abs(p[1] - 0.5) < 1e-9);
}

TEST_CASE("naive Bayes variance floor")
{
    TrainingData d;
    d.n_classes = 2;
    d.x = {{1.0}, {1.0}, {3.0}, {5.0}};
    d.y = {0, 0, 1, 1};
    const auto m = train(spec_for(ClassifierKind::NaiveBayes), d);
    const auto& nb = std::get<NaiveBayesModel>(m.model());
    CHECK(nb.variances[0][0] == 1e-6);
    CHECK(nb.variances[1][0] == 1.0);
    CHECK(m.predict(std::vector<double>{1.0}) == 0);
}

TEST_CASE("1-NN: exact match wins with certainty")
{
    const auto d = noisy_dataset(3);
    const auto m = train(spec_for(ClassifierKind::NearestNeighbor1), d);
    for (std::size_t i = 0; i < d.size(); i += 5) {
        const auto p = m.predict_proba(d.x[i]);
        CHECK(p[d.y[i]] == 1.0);
    }
}

TEST_CASE("1-NN: equidistant neighbours resolve to the lowest stored index")
{
    TrainingData d;
    d.n_classes = 2;
    d.x = {{0.0}, {2.0}, {4.0}};
    d.y = {1, 0, 0};
    const auto m = train(spec_for(ClassifierKind::NearestNeighbor1), d);
    CHECK(m.predict(std::vector<double>{1.0}) == 1);
    CHECK(m.predict(std::vector<double>{3.0}) == 0);
}

TEST_CASE("logistic separates separable 1-D data")
{
    TrainingData d;
    d.n_classes = 2;
    d.x = {{0.0}, {1.0}, {10.0}, {11.0}};
    d.y = {0, 0, 1, 1};
    const auto m = train(spec_for(ClassifierKind::Logistic), d);
    CHECK(testing::training_accuracy(m, d) == 1.0);
}

TEST_CASE("softmax fit stops early once the gradient vanishes")
{
    // Balanced labels on identical inputs: the optimum is w = 0 from the start.
    const Matrix x{{1.0}, {1.0}};
    const auto layer = fit_softmax(x, {0, 1}, 2, SoftmaxFitOptions{});
    CHECK(layer.iterations_run == 0);
}

TEST_CASE("k-means recovers two well separated clusters")
{
    Matrix pts;
    Rng gen(1);
    for (int i = 0; i < 20; ++i)
        pts.push_back({gen.uniform(-0.1, 0.1), gen.uniform(-0.1, 0.1)});
    for (int i = 0; i < 20; ++i)
        pts.push_back({5.0 + gen.uniform(-0.1, 0.1), 5.0 + gen.uniform(-0.1, 0.1)});
    Rng rng(3);
    const auto km = kmeans(pts, 2, 100, rng);
    REQUIRE(km.centers.size() == 2);
    for (int i = 1; i < 20; ++i) {
        CHECK(km.assignment[i] == km.assignment[0]);
        CHECK(km.assignment[20 + i] == km.assignment[20]);
    }
    CHECK(km.assignment[0] != km.assignment[20]);
}

TEST_CASE("decision stump: separable, constant and brute-force cases")
{
    SUBCASE("threshold-separable")
    {
        const Matrix x{{1.0}, {2.0}, {3.0}, {7.0}, {8.0}};
        const std::vector<std::size_t> y{0, 0, 0, 1, 1};
        const std::vector<double> w(5, 0.2);
        const auto s = train_decision_stump(x, y, w, 2);
        CHECK(s.weighted_error == 0.0);
        CHECK(s.threshold == 5.0);
        CHECK(s.predict(std::vector<double>{2.5}) == 0);
        CHECK(s.predict(std::vector<double>{7.5}) == 1);
    }
    SUBCASE("constant features")
    {
        const Matrix x(6, std::vector<double>{4.0, 4.0});
        const std::vector<std::size_t> y{0, 1, 1, 2, 2, 2};
        const std::vector<double> w{0.3, 0.1, 0.1, 0.1, 0.2, 0.2};
        const auto s = train_decision_stump(x, y, w, 3);
        for (double q : {-100.0, 4.0, 100.0})
            CHECK(s.predict(std::vector<double>{q, q}) == 2);
    }
    SUBCASE("random weighted sets match exhaustive enumeration")
    {
        Rng rng(77);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t d = 1 + rng.below(3), k = 2 + rng.below(3);
            Matrix x;
            std::vector<std::size_t> y;
            std::vector<double> w;
            for (int i = 0; i < 20; ++i) {
                std::vector<double> row;
                for (std::size_t j = 0; j < d; ++j)
                    row.push_back(static_cast<double>(rng.below(8)));  // coarse grid forces repeated values
                x.push_back(row);
                y.push_back(rng.below(k));
                w.push_back(rng.uniform(0.01, 1.0));
            }
            const double total = std::accumulate(w.begin(), w.end(), 0.0);
            for (double& v : w)
                v /= total;
            const auto s = train_decision_stump(x, y, w, k);
            const double best = oracle::best_stump_error(x, y, w, k);
            REQUIRE(std::abs(s.weighted_error - best) < 1e-12);
            double realised = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (s.predict(x[i]) != y[i])
                    realised += w[i];
            REQUIRE(std::abs(realised - s.weighted_error) < 1e-12);
        }
    }
}

TEST_CASE("AdaBoost with one round is its stump")
{
    const auto d = noisy_dataset(5);
    auto spec = spec_for(ClassifierKind::AdaBoostM1);
    spec.hyperparameters["rounds"] = 1;
    const auto m = train(spec, d);
    const std::vector<double> w(d.size(), 1.0 / static_cast<double>(d.size()));
    const auto stump = train_decision_stump(d.x, d.y, w, 3);
    Rng rng(6);
    for (const auto& q : queries(rng, 200, 2))
        CHECK(m.predict(q) == stump.predict(q));
}

TEST_CASE("AdaBoost stops at a perfect stump")
{
    TrainingData d;
    d.n_classes = 2;
    d.x = {{0.0}, {1.0}, {5.0}, {6.0}};
    d.y = {0, 0, 1, 1};
    const auto m = train(spec_for(ClassifierKind::AdaBoostM1), d);
    const auto& ab = std::get<AdaBoostModel>(m.model());
    REQUIRE(ab.stumps.size() == 1);
    CHECK(ab.alphas[0] == doctest::Approx(std::log(1e10)));
}

TEST_CASE("bagging with one bag is its member tree")
{
    const auto d = noisy_dataset(8);
    auto spec = spec_for(ClassifierKind::Bagging, 99);
    spec.hyperparameters["bags"] = 1;
    const auto m = train(spec, d);

    const auto sample = bootstrap_indices(d.size(), bag_resample_seed(spec.seed, 0));
    Rng rng(bag_tree_seed(spec.seed, 0));
    const auto tree = train_random_tree(d, sample, RandomTreeOptions{}, rng);
    Rng q(2);
    for (const auto& x : queries(q, 200, 2))
        CHECK(m.predict_proba(x) == tree.predict_proba(x));
}

TEST_CASE("random tree on one class")
{
    TrainingData d;
    d.n_classes = 3;
    d.x = {{1.0, 2.0}, {3.0, 1.0}, {2.0, 2.0}, {5.0, 0.0}};
    d.y = {1, 1, 1, 1};
    std::vector<std::size_t> all{0, 1, 2, 3};
    Rng rng(4);
    const auto tree = train_random_tree(d, all, RandomTreeOptions{}, rng);
    CHECK(tree.nodes.size() == 1);
    Rng q(5);
    for (const auto& x : queries(q, 50, 2)) {
        const auto p = tree.predict_proba(x);
        CHECK(p[1] == doctest::Approx(5.0 / 7.0));
        CHECK(p[0] == doctest::Approx(1.0 / 7.0));
        CHECK(p[2] == doctest::Approx(1.0 / 7.0));
    }
}

TEST_CASE("random tree respects the depth cap")
{
    const auto d = noisy_dataset(9, 3);
    auto spec = spec_for(ClassifierKind::RandomTree);
    spec.hyperparameters["max_depth"] = 2;
    const auto m = train(spec, d);
    CHECK(std::get<RandomTreeModel>(m.model()).depth() <= 2);
}

TEST_CASE("every classifier fits the smoke dataset")
{
    const auto d = testing::smoke_dataset();
    for (auto k : kAllClassifierKinds) {
        CAPTURE(kind_name(k));
        CHECK(testing::training_accuracy(train(spec_for(k), d), d) >= 0.95);
    }
}

TEST_CASE("probability contract on fuzzed inputs")
{
    Rng rng(10);
    for (auto k : kAllClassifierKinds) {
        CAPTURE(kind_name(k));
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto d = noisy_dataset(100 + seed, 1 + seed);
            const auto m = train(spec_for(k, seed), d);
            for (const auto& q : queries(rng, 100, d.n_features())) {
                const auto p = m.predict_proba(q);
                REQUIRE(p.size() == 3);
                double sum = 0.0;
                for (double v : p) {
                    REQUIRE(v >= 0.0);
                    REQUIRE(std::isfinite(v));
                    sum += v;
                }
                REQUIRE(std::abs(sum - 1.0) < 1e-9);
            }
        }
    }
}

TEST_CASE("training is deterministic")
{
    const auto d = noisy_dataset(12);
    Rng rng(13);
    const auto qs = queries(rng, 100, 2);
    for (auto k : kAllClassifierKinds) {
        CAPTURE(kind_name(k));
        const auto a = train(spec_for(k, 5), d);
        const auto b = train(spec_for(k, 5), d);
        for (const auto& q : qs)
            REQUIRE(a.predict_proba(q) == b.predict_proba(q));
    }
}

TEST_CASE("renaming classes permutes the predictions")
{
    const auto d = noisy_dataset(14);
    const std::size_t perm[] = {2, 0, 1};
    auto renamed = d;
    for (auto& y : renamed.y)
        y = perm[y];
    Rng rng(15);
    const auto qs = queries(rng, 200, 2);
    for (auto k : kAllClassifierKinds) {
        CAPTURE(kind_name(k));
        const auto a = train(spec_for(k, 21), d);
        const auto b = train(spec_for(k, 21), renamed);
        for (const auto& q : qs) {
            const auto pa = a.predict_proba(q);
            const auto pb = b.predict_proba(q);
            for (std::size_t c = 0; c < 3; ++c)
                REQUIRE(std::abs(pb[perm[c]] - pa[c]) < 1e-9);
            const std::size_t ia = a.predict(q);
            if (std::abs(pa[ia] - *std::max_element(pa.begin(), pa.end())) == 0.0 &&
                std::count(pa.begin(), pa.end(), pa[ia]) == 1)
                REQUIRE(b.predict(q) == perm[ia]);
        }
    }
}

TEST_CASE("training preconditions")
{
    TrainingData one;
    one.n_classes = 3;
    one.x = {{1.0}, {2.0}};
    one.y = {0, 0};
    CHECK(code_of([&] { train(spec_for(ClassifierKind::Logistic), one); }) == ErrorCode::SingleClassTraining);

    TrainingData empty;
    empty.n_classes = 3;
    CHECK(code_of([&] { train(spec_for(ClassifierKind::NaiveBayes), empty); }) == ErrorCode::EmptyTrain);

    TrainingData bad;
    bad.n_classes = 2;
    bad.x = {{1.0}, {std::nan("")}};
    bad.y = {0, 1};
    CHECK(code_of([&] { train(spec_for(ClassifierKind::NaiveBayes), bad); }) == ErrorCode::NonFiniteFeature);

    const auto m = train(spec_for(ClassifierKind::NaiveBayes), testing::smoke_dataset());
    CHECK(code_of([&] { m.predict_proba(std::vector<double>{1.0}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("argmax takes the first maximum")
{
    CHECK(argmax(std::vector<double>{0.2, 0.4, 0.4}) == 1);
    CHECK(argmax(std::vector<double>{1.0}) == 0);
}

}  // TEST_SUITE
