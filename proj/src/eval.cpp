#include "emopeak/eval.hpp"

#include "emopeak/error.hpp"
#include "emopeak/random.hpp"
#include "emopeak/text.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace emopeak {

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> truth)
{
    if (predicted.size() != truth.size())
        throw Error(ErrorCode::LengthMismatch, "prediction and truth lengths differ");
    if (truth.empty())
        throw Error(ErrorCode::EmptyInput, "accuracy of zero predictions");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double auc_binary(std::span<const double> scores, std::span<const bool> positive)
{
    if (scores.size() != positive.size())
        throw Error(ErrorCode::LengthMismatch, "score and label lengths differ");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum = 0.0;
    double n_pos = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]])
            ++j;
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (positive[order[k]]) {
                rank_sum += mid_rank;
                n_pos += 1.0;
            }
        i = j;
    }
    const double n_neg = static_cast<double>(n) - n_pos;
    if (n_pos == 0.0 || n_neg == 0.0)
        throw Error(ErrorCode::DegenerateClasses, "AUC needs at least one positive and one negative");
    return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double auc_macro(const Matrix& probabilities, std::span<const std::size_t> labels)
{
    if (probabilities.size() != labels.size())
        throw Error(ErrorCode::LengthMismatch, "probability and label counts differ");
    if (labels.empty())
        throw Error(ErrorCode::EmptyInput, "AUC of zero records");
    std::vector<std::size_t> present(labels.begin(), labels.end());
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    if (present.size() < 2)
        throw Error(ErrorCode::DegenerateClasses, "multiclass AUC needs at least two classes present");

    std::vector<double> scores(labels.size());
    const auto pos = std::make_unique<bool[]>(labels.size());
    double total = 0.0;
    for (std::size_t c : present) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (c >= probabilities[i].size())
                throw Error(ErrorCode::DimensionMismatch, "label index beyond probability vector");
            scores[i] = probabilities[i][c];
            pos[i] = labels[i] == c;
        }
        total += auc_binary(scores, std::span<const bool>(pos.get(), labels.size()));
    }
    return total / static_cast<double>(present.size());
}

MeanStd mean_std(std::span<const double> values)
{
    MeanStd r;
    if (values.empty())
        return r;
    const double n = static_cast<double>(values.size());
    r.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - r.mean) * (v - r.mean);
        r.std = std::sqrt(ss / (n - 1.0));
    }
    return r;
}

std::vector<double> default_train_fractions()
{
    return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

void ExperimentConfig::validate() const
{
    if (train_fractions.empty())
        throw Error(ErrorCode::InvalidConfig, "no train fractions");
    for (std::size_t i = 0; i < train_fractions.size(); ++i) {
        const double f = train_fractions[i];
        if (!(f > 0.0 && f < 1.0))
            throw Error(ErrorCode::InvalidConfig, "train fraction " + format_double(f) + " outside (0, 1)");
        if (i > 0 && !(f > train_fractions[i - 1]))
            throw Error(ErrorCode::InvalidConfig, "train fractions must be strictly increasing");
    }
    if (repetitions < 1)
        throw Error(ErrorCode::InvalidConfig, "repetitions must be >= 1");
    if (classifier_specs.empty())
        throw Error(ErrorCode::InvalidConfig, "no classifiers");
    for (const auto& s : classifier_specs)
        s.validate();
}

std::uint64_t split_seed(std::uint64_t master_seed, std::size_t fraction_index, std::size_t repetition)
{
    return derive_seed(master_seed, {fraction_index, repetition});
}

namespace {

struct RepetitionResult {
    bool skipped = false;
    std::vector<double> accuracy;  // per classifier
    std::vector<double> auc;
};

RepetitionResult run_repetition(const Dataset& dataset, const ExperimentConfig& config, std::size_t fraction_index,
                                std::size_t repetition)
{
    RepetitionResult r;
    const std::uint64_t seed = split_seed(config.master_seed, fraction_index, repetition);
    const SplitPair split = stratified_split(dataset, config.train_fractions[fraction_index], seed);
    if (!split.degenerate_classes.empty()) {
        r.skipped = true;
        return r;
    }
    const TrainingData train_data = to_training_data(split.train);
    const Matrix test_x = split.test.features();
    const std::vector<std::size_t> test_y = split.test.label_indices();

    for (std::size_t k = 0; k < config.classifier_specs.size(); ++k) {
        ClassifierSpec spec = config.classifier_specs[k];
        spec.seed = derive_seed(spec.seed, {seed, k});
        const TrainedModel model = train(spec, train_data, dataset.label_set());
        Matrix probs;
        std::vector<std::size_t> predicted;
        probs.reserve(test_x.size());
        predicted.reserve(test_x.size());
        for (const auto& row : test_x) {
            probs.push_back(model.predict_proba(row));
            predicted.push_back(argmax(probs.back()));
        }
        r.accuracy.push_back(accuracy(predicted, test_y));
        r.auc.push_back(auc_macro(probs, test_y));
    }
    return r;
}

/// Runs task(i) for i in [0, n) on `threads` workers; the first exception
/// is rethrown after all workers stop.
template <typename Task>
void parallel_for(std::size_t n, std::size_t threads, Task task)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace

EvalReport run_experiment(const Dataset& dataset, const ExperimentConfig& config)
{
    config.validate();
    const std::size_t n_fractions = config.train_fractions.size();
    const std::size_t n_reps = config.repetitions;
    const std::size_t n_classifiers = config.classifier_specs.size();

    std::vector<RepetitionResult> results(n_fractions * n_reps);
    parallel_for(results.size(), config.threads, [&](std::size_t task) {
        results[task] = run_repetition(dataset, config, task / n_reps, task % n_reps);
    });

    EvalReport report;
    for (std::size_t k = 0; k < n_classifiers; ++k) {
        for (std::size_t f = 0; f < n_fractions; ++f) {
            EvalCell cell;
            cell.classifier = std::string(kind_name(config.classifier_specs[k].kind));
            cell.train_fraction = config.train_fractions[f];
            std::vector<double> accs;
            std::vector<double> aucs;
            for (std::size_t r = 0; r < n_reps; ++r) {
                const auto& res = results[f * n_reps + r];
                if (res.skipped) {
                    ++cell.skipped;
                    continue;
                }
                accs.push_back(res.accuracy[k]);
                aucs.push_back(res.auc[k]);
            }
            if (accs.empty())
                throw Error(ErrorCode::InsufficientRepetitions,
                            cell.classifier + " at fraction " + format_double(cell.train_fraction) +
                                ": every repetition was skipped");
            cell.repetitions = accs.size();
            const auto a = mean_std(accs);
            const auto u = mean_std(aucs);
            cell.mean_accuracy = a.mean;
            cell.std_accuracy = a.std;
            cell.mean_auc = u.mean;
            cell.std_auc = u.std;
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

std::vector<Dataset> split_by_subject(const Dataset& dataset)
{
    std::map<std::string, std::vector<std::size_t>> by_subject;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        by_subject[dataset.records()[i].subject_id].push_back(i);
    std::vector<Dataset> out;
    for (const auto& [subject, rows] : by_subject)
        out.push_back(dataset.select(rows));
    return out;
}

Dataset pool(const std::vector<Dataset>& datasets)
{
    if (datasets.empty())
        throw Error(ErrorCode::EmptyInput, "nothing to pool");
    std::vector<FeatureRecord> all;
    for (const auto& d : datasets) {
        if (d.label_set() != datasets.front().label_set())
            throw Error(ErrorCode::SchemaMismatch, "subject datasets use different label sets");
        all.insert(all.end(), d.records().begin(), d.records().end());
    }
    return Dataset(std::move(all), datasets.front().label_set());
}

double IndividualGroupComparison::mean_accuracy_delta() const
{
    double sum = 0.0;
    for (const auto& d : deltas)
        sum += d.accuracy_delta();
    return deltas.empty() ? 0.0 : sum / static_cast<double>(deltas.size());
}

double IndividualGroupComparison::mean_auc_delta() const
{
    double sum = 0.0;
    for (const auto& d : deltas)
        sum += d.auc_delta();
    return deltas.empty() ? 0.0 : sum / static_cast<double>(deltas.size());
}

IndividualGroupComparison compare_individual_vs_group(const std::vector<Dataset>& per_subject,
                                                      const ExperimentConfig& config)
{
    if (per_subject.size() < 2)
        throw Error(ErrorCode::InvalidConfig, "individual-vs-group comparison needs at least two subjects");

    IndividualGroupComparison out;
    for (const auto& subject : per_subject)
        out.per_subject.push_back(run_experiment(subject, config));
    out.group = run_experiment(pool(per_subject), config);

    const double n = static_cast<double>(per_subject.size());
    out.individual = out.per_subject.front();
    for (std::size_t c = 0; c < out.individual.cells.size(); ++c) {
        EvalCell& cell = out.individual.cells[c];
        cell.mean_accuracy = cell.std_accuracy = cell.mean_auc = cell.std_auc = 0.0;
        cell.repetitions = cell.skipped = 0;
        for (const auto& report : out.per_subject) {
            const EvalCell& s = report.cells[c];
            cell.mean_accuracy += s.mean_accuracy / n;
            cell.std_accuracy += s.std_accuracy / n;
            cell.mean_auc += s.mean_auc / n;
            cell.std_auc += s.std_auc / n;
            cell.repetitions += s.repetitions;
            cell.skipped += s.skipped;
        }
    }
    for (std::size_t c = 0; c < out.group.cells.size(); ++c) {
        const EvalCell& ind = out.individual.cells[c];
        const EvalCell& grp = out.group.cells[c];
        out.deltas.push_back(DeltaCell{ind.classifier, ind.train_fraction, ind.mean_accuracy, grp.mean_accuracy,
                                       ind.mean_auc, grp.mean_auc});
    }
    return out;
}

std::string report_to_csv(const EvalReport& report)
{
    std::ostringstream out;
    out << kReportCsvHeader << '\n';
    for (const auto& c : report.cells) {
        out << c.classifier << ',' << format_double(c.train_fraction) << ",accuracy," << format_double(c.mean_accuracy)
            << ',' << format_double(c.std_accuracy) << ',' << c.repetitions << ',' << c.skipped << '\n';
        out << c.classifier << ',' << format_double(c.train_fraction) << ",auc," << format_double(c.mean_auc) << ','
            << format_double(c.std_auc) << ',' << c.repetitions << ',' << c.skipped << '\n';
    }
    return out.str();
}

void write_report_csv(const EvalReport& report, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << report_to_csv(report);
    if (!out)
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

void write_delta_csv(const std::vector<DeltaCell>& deltas, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << kDeltaCsvHeader << '\n';
    for (const auto& d : deltas) {
        out << d.classifier << ',' << format_double(d.train_fraction) << ",accuracy,"
            << format_double(d.individual_accuracy) << ',' << format_double(d.group_accuracy) << ','
            << format_double(d.accuracy_delta()) << '\n';
        out << d.classifier << ',' << format_double(d.train_fraction) << ",auc," << format_double(d.individual_auc)
            << ',' << format_double(d.group_auc) << ',' << format_double(d.auc_delta()) << '\n';
    }
    if (!out)
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::vector<ReportRow> read_report_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != kReportCsvHeader)
        throw Error(ErrorCode::SchemaMismatch, path.string() + ": header must be: " + kReportCsvHeader);
    std::vector<ReportRow> rows;
    int row_no = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        ++row_no;
        const std::string where = path.string() + " row " + std::to_string(row_no);
        const auto f = split(trim(line), ',');
        if (f.size() != 7)
            throw Error(ErrorCode::MalformedRow, where + ": expected 7 fields");
        ReportRow r;
        r.classifier = f[0];
        r.metric = f[2];
        const auto frac = parse_double(f[1]);
        const auto mean = parse_double(f[3]);
        const auto sd = parse_double(f[4]);
        const auto reps = parse_size(f[5]);
        const auto skipped = parse_size(f[6]);
        if (!frac || !mean || !sd || !reps || !skipped)
            throw Error(ErrorCode::MalformedRow, where + ": non-numeric field");
        r.train_fraction = *frac;
        r.mean = *mean;
        r.std = *sd;
        r.repetitions = *reps;
        r.skipped = *skipped;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace emopeak
