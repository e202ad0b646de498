#include "emopeak/error.hpp"
#include "emopeak/eval.hpp"

#include "../oracles.hpp"
#include "../support.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace emopeak;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoFailure;
}

double auc_of(const std::vector<double>& s, const std::vector<bool>& pos)
{
    const auto flags = std::make_unique<bool[]>(pos.size());
    std::copy(pos.begin(), pos.end(), flags.get());
    return auc_binary(s, std::span<const bool>(flags.get(), pos.size()));
}

ExperimentConfig quick_config(std::vector<ClassifierKind> kinds, std::size_t reps)
{
    ExperimentConfig c;
    c.repetitions = reps;
    c.classifier_specs.clear();
    for (auto k : kinds) {
        ClassifierSpec s;
        s.kind = k;
        c.classifier_specs.push_back(s);
    }
    return c;
}

Dataset blob_dataset(std::uint64_t seed, std::size_t per_class, const std::string& subject = "s01", double shift = 0.0)
{
    Rng rng(seed);
    std::vector<FeatureRecord> r;
    for (Emotion e : classification_labels())
        for (std::size_t i = 0; i < per_class; ++i) {
            const double centre = 100.0 + 40.0 * static_cast<double>(e) + shift;
            r.push_back({subject, subject + "_" + std::string(1, label_letter(e)) + std::to_string(i),
                         centre + rng.uniform(-25.0, 25.0), std::nullopt, e});
        }
    return {std::move(r), classification_labels()};
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("accuracy")
{
    const std::vector<std::size_t> truth{0, 1, 1, 0};
    CHECK(accuracy(truth, truth) == 1.0);
    CHECK(accuracy(std::vector<std::size_t>{0, 1, 1, 1}, truth) == 0.75);
    CHECK(accuracy(std::vector<std::size_t>{1, 0, 0, 1}, truth) == 0.0);
    CHECK(code_of([&] { accuracy(std::vector<std::size_t>{0}, truth); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("binary AUC edge cases")
{
    CHECK(auc_of({0.9, 0.8, 0.1, 0.2}, {true, true, false, false}) == 1.0);
    CHECK(auc_of({0.1, 0.2, 0.9, 0.8}, {true, true, false, false}) == 0.0);
    CHECK(auc_of({0.5, 0.5, 0.5, 0.5, 0.5}, {true, false, true, false, false}) == 0.5);
    CHECK(code_of([] { auc_of({0.1, 0.2}, {true, true}); }) == ErrorCode::DegenerateClasses);
}

TEST_CASE("rank AUC equals the trapezoidal ROC area")
{
    Rng rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.below(60);
        std::vector<double> s(n);
        std::vector<bool> pos(n);
        const bool coarse = rng.below(2) == 0;  // coarse grid -> many ties
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = coarse ? static_cast<double>(rng.below(5)) / 4.0 : rng.uniform();
            pos[i] = rng.below(2) == 0;
        }
        pos[0] = true;
        pos[1] = false;
        REQUIRE(std::abs(auc_of(s, pos) - oracle::trapezoid_auc(s, pos)) <= 1e-12);
    }
}

TEST_CASE("AUC ignores strictly increasing score transforms")
{
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> s(30), t(30);
        std::vector<bool> pos(30);
        for (std::size_t i = 0; i < 30; ++i) {
            s[i] = static_cast<double>(rng.below(10));
            t[i] = s[i] * s[i] * s[i] + 2.0 * s[i] - 7.0;
            pos[i] = i % 3 == 0;
        }
        REQUIRE(auc_of(s, pos) == auc_of(t, pos));
    }
}

TEST_CASE("macro AUC")
{
    const std::vector<std::size_t> labels{0, 1, 2, 0, 1, 2};
    Matrix perfect, uniform;
    for (auto y : labels) {
        std::vector<double> p(3, 0.0);
        p[y] = 1.0;
        perfect.push_back(p);
        uniform.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    }
    CHECK(auc_macro(perfect, labels) == 1.0);
    CHECK(auc_macro(uniform, labels) == 0.5);

    Rng rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix probs;
        std::vector<std::size_t> y;
        for (std::size_t i = 0; i < 40; ++i) {
            auto v = testing::random_vector(rng, 3, 0.0, 1.0);
            const double sum = v[0] + v[1] + v[2];
            for (double& x : v)
                x /= sum;
            probs.push_back(v);
            y.push_back(i < 3 ? i : rng.below(3));
        }
        double expected = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            std::vector<double> s;
            std::vector<bool> pos;
            for (std::size_t i = 0; i < y.size(); ++i) {
                s.push_back(probs[i][c]);
                pos.push_back(y[i] == c);
            }
            expected += oracle::trapezoid_auc(s, pos) / 3.0;
        }
        REQUIRE(std::abs(auc_macro(probs, y) - expected) < 1e-12);
    }
}

TEST_CASE("macro AUC skips absent classes")
{
    const Matrix probs{{0.7, 0.2, 0.1}, {0.2, 0.7, 0.1}, {0.6, 0.3, 0.1}};
    const std::vector<std::size_t> y{0, 1, 0};
    CHECK(auc_macro(probs, y) == 1.0);
}

TEST_CASE("relabelling classes permutes one-vs-rest AUCs and keeps accuracy")
{
    Rng rng(44);
    Matrix probs;
    std::vector<std::size_t> y;
    for (std::size_t i = 0; i < 50; ++i) {
        probs.push_back(testing::random_vector(rng, 3, 0.0, 1.0));
        y.push_back(i < 3 ? i : rng.below(3));
    }
    const std::size_t perm[] = {1, 2, 0};
    Matrix pprobs;
    std::vector<std::size_t> py, pred, ppred;
    for (std::size_t i = 0; i < y.size(); ++i) {
        std::vector<double> p(3);
        for (std::size_t c = 0; c < 3; ++c)
            p[perm[c]] = probs[i][c];
        pprobs.push_back(p);
        py.push_back(perm[y[i]]);
        pred.push_back(argmax(probs[i]));
        ppred.push_back(argmax(p));
    }
    CHECK(accuracy(pred, y) == accuracy(ppred, py));
    CHECK(auc_macro(probs, y) == doctest::Approx(auc_macro(pprobs, py)).epsilon(1e-15));
}

TEST_CASE("mean and sample std")
{
    const auto c = mean_std(std::vector<double>(7, 0.3));
    CHECK(c.mean == doctest::Approx(0.3));
    CHECK(c.std == 0.0);
    CHECK(mean_std(std::vector<double>{5.0}).std == 0.0);
    const auto m = mean_std(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.std == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("default config shape")
{
    const auto f = default_train_fractions();
    REQUIRE(f.size() == 9);
    CHECK(f.front() == doctest::Approx(0.1));
    CHECK(f.back() == doctest::Approx(0.9));
    ExperimentConfig c;
    CHECK(c.classifier_specs.size() == 7);
    CHECK(c.repetitions == 30);
    c.train_fractions = {0.5, 0.3};
    CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("experiment report: shape, order and reproducibility")
{
    const auto d = blob_dataset(1, 12);
    auto config = quick_config({ClassifierKind::NaiveBayes, ClassifierKind::NearestNeighbor1,
                                ClassifierKind::AdaBoostM1, ClassifierKind::RandomTree, ClassifierKind::Bagging,
                                ClassifierKind::Logistic, ClassifierKind::RbfNetwork},
                               2);
    const auto a = run_experiment(d, config);
    REQUIRE(a.cells.size() == 63);
    for (std::size_t k = 0; k < 7; ++k)
        for (std::size_t f = 0; f < 9; ++f) {
            const auto& cell = a.cells[k * 9 + f];
            CHECK(cell.classifier == kind_name(config.classifier_specs[k].kind));
            CHECK(cell.train_fraction == config.train_fractions[f]);
            CHECK(cell.repetitions + cell.skipped == 2);
        }
    config.threads = 3;
    const auto b = run_experiment(d, config);
    CHECK(a == b);
    CHECK(report_to_csv(a) == report_to_csv(b));
}

TEST_CASE("constant predictor scores the class-A share of each test split")
{
    // A single constant feature and balanced classes: naive Bayes sees equal
    // priors and identical likelihoods, so it always answers the first class.
    std::vector<FeatureRecord> r;
    for (Emotion e : classification_labels())
        for (int i = 0; i < 10; ++i)
            r.push_back({"s01", std::string(1, label_letter(e)) + std::to_string(i), 120.0, std::nullopt, e});
    const Dataset d(r, classification_labels());
    auto config = quick_config({ClassifierKind::NaiveBayes}, 5);
    config.master_seed = 77;
    const auto report = run_experiment(d, config);

    for (std::size_t f = 0; f < config.train_fractions.size(); ++f) {
        std::vector<double> shares;
        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
            const auto split = stratified_split(d, config.train_fractions[f], split_seed(77, f, rep));
            if (!split.degenerate_classes.empty())
                continue;
            shares.push_back(static_cast<double>(split.test.count(Emotion::Neutral)) /
                             static_cast<double>(split.test.size()));
        }
        REQUIRE(!shares.empty());
        double mean = 0.0;
        for (double s : shares)
            mean += s / static_cast<double>(shares.size());
        CHECK(report.cells[f].mean_accuracy == doctest::Approx(mean).epsilon(1e-12));
        CHECK(report.cells[f].mean_auc == 0.5);
    }
}

TEST_CASE("degenerate splits are skipped and counted")
{
    // Two records per class: at fraction 0.9 every class goes wholly to train.
    std::vector<FeatureRecord> r;
    for (Emotion e : classification_labels())
        for (int i = 0; i < 2; ++i)
            r.push_back({"s01", std::string(1, label_letter(e)) + std::to_string(i), 100.0 + 10.0 * i, std::nullopt, e});
    const Dataset d(r, classification_labels());
    auto config = quick_config({ClassifierKind::NaiveBayes}, 3);
    config.train_fractions = {0.5, 0.9};
    CHECK(code_of([&] { run_experiment(d, config); }) == ErrorCode::InsufficientRepetitions);
    config.train_fractions = {0.5};
    const auto ok = run_experiment(d, config);
    CHECK(ok.cells[0].skipped == 0);
}

TEST_CASE("no skips with thirty records per class")
{
    const auto d = blob_dataset(2, 30);
    const auto report = run_experiment(d, quick_config({ClassifierKind::NaiveBayes}, 30));
    for (const auto& c : report.cells)
        CHECK(c.skipped == 0);
}

TEST_CASE("class too small surfaces from the experiment")
{
    auto r = blob_dataset(3, 5).records();
    r.erase(std::remove_if(r.begin(), r.end(), [](const FeatureRecord& x) { return x.label == Emotion::Joy; }),
            r.end());
    r.push_back({"s01", "lonely", 150.0, std::nullopt, Emotion::Joy});
    const Dataset d(r, classification_labels());
    try {
        run_experiment(d, quick_config({ClassifierKind::NaiveBayes}, 1));
        FAIL("expected ClassTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ClassTooSmall);
        CHECK(std::string(e.what()).find("class C") != std::string::npos);
    }
}

TEST_CASE("subjects split and pool back")
{
    const auto a = blob_dataset(4, 6, "s02");
    const auto b = blob_dataset(5, 6, "s01");
    const auto pooled = pool({a, b});
    CHECK(pooled.size() == 36);
    const auto parts = split_by_subject(pooled);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == b);
    CHECK(parts[1] == a);
}

TEST_CASE("individual vs group comparison")
{
    const auto s1 = blob_dataset(6, 10, "s01");
    const auto s2 = blob_dataset(6, 10, "s02");
    const auto config = quick_config({ClassifierKind::NaiveBayes, ClassifierKind::NearestNeighbor1}, 3);
    const auto cmp = compare_individual_vs_group({s1, s2}, config);
    REQUIRE(cmp.per_subject.size() == 2);
    REQUIRE(cmp.individual.cells.size() == 18);
    REQUIRE(cmp.group.cells.size() == 18);
    REQUIRE(cmp.deltas.size() == 18);
    double sum = 0.0;
    for (std::size_t i = 0; i < 18; ++i) {
        const auto& ind = cmp.individual.cells[i];
        CHECK(ind.mean_accuracy ==
              doctest::Approx((cmp.per_subject[0].cells[i].mean_accuracy + cmp.per_subject[1].cells[i].mean_accuracy) / 2));
        CHECK(cmp.deltas[i].accuracy_delta() == ind.mean_accuracy - cmp.group.cells[i].mean_accuracy);
        CHECK(cmp.deltas[i].classifier == ind.classifier);
        sum += cmp.deltas[i].accuracy_delta();
    }
    CHECK(cmp.mean_accuracy_delta() == doctest::Approx(sum / 18));
    CHECK(code_of([&] { compare_individual_vs_group({s1}, config); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("report CSV round trip")
{
    testing::TempDir dir("eval");
    const auto report = run_experiment(blob_dataset(7, 10), quick_config({ClassifierKind::NaiveBayes}, 1));
    write_report_csv(report, dir / "r.csv");
    const auto lines = testing::read_lines(dir / "r.csv");
    CHECK(lines.front() == kReportCsvHeader);
    CHECK(lines.size() == 1 + 18);
    const auto rows = read_report_csv(dir / "r.csv");
    REQUIRE(rows.size() == 18);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(rows[2 * i].metric == "accuracy");
        CHECK(rows[2 * i].mean == report.cells[i].mean_accuracy);
        CHECK(rows[2 * i].std == 0.0);
        CHECK(rows[2 * i + 1].metric == "auc");
        CHECK(rows[2 * i + 1].mean == report.cells[i].mean_auc);
    }
}

}  // TEST_SUITE
