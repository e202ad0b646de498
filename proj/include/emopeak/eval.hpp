#pragma once

#include "emopeak/classifiers.hpp"
#include "emopeak/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace emopeak {

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> truth);

/// Mann-Whitney form of the ROC area: P(score_pos > score_neg) with ties
/// counted half. Computed from mid-ranks, so it is exact under any strictly
/// increasing transform of the scores.
double auc_binary(std::span<const double> scores, std::span<const bool> positive);

/// Unweighted mean of one-vs-rest AUCs over the classes present in
/// `labels`, scoring class c by probabilities[i][c].
double auc_macro(const Matrix& probabilities, std::span<const std::size_t> labels);

/// Mean and sample (n-1) standard deviation; a single value has std 0.
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};
MeanStd mean_std(std::span<const double> values);

/// Nine fractions 0.1..0.9.
std::vector<double> default_train_fractions();

struct ExperimentConfig {
    std::vector<double> train_fractions = default_train_fractions();
    std::size_t repetitions = 30;
    std::vector<ClassifierSpec> classifier_specs = default_classifier_specs();
    std::uint64_t master_seed = 0;
    /// Worker threads; 0 uses the hardware concurrency. Results do not
    /// depend on this value.
    std::size_t threads = 0;

    void validate() const;
};

struct EvalCell {
    std::string classifier;
    double train_fraction = 0.0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    double mean_auc = 0.0;
    double std_auc = 0.0;
    std::size_t repetitions = 0;  // repetitions that contributed
    std::size_t skipped = 0;      // repetitions whose test split lacked a class

    bool operator==(const EvalCell&) const = default;
};

/// Cells are ordered classifier-major, then by train fraction.
struct EvalReport {
    std::vector<EvalCell> cells;

    bool operator==(const EvalReport&) const = default;
};

/// Split seed for fraction `fraction_index`, repetition `repetition`.
std::uint64_t split_seed(std::uint64_t master_seed, std::size_t fraction_index, std::size_t repetition);

EvalReport run_experiment(const Dataset& dataset, const ExperimentConfig& config);

struct DeltaCell {
    std::string classifier;
    double train_fraction = 0.0;
    double individual_accuracy = 0.0;
    double group_accuracy = 0.0;
    double individual_auc = 0.0;
    double group_auc = 0.0;

    double accuracy_delta() const noexcept { return individual_accuracy - group_accuracy; }
    double auc_delta() const noexcept { return individual_auc - group_auc; }
};

struct IndividualGroupComparison {
    std::vector<EvalReport> per_subject;
    /// Across-subject means of per_subject (std likewise averaged).
    EvalReport individual;
    EvalReport group;
    std::vector<DeltaCell> deltas;

    double mean_accuracy_delta() const;
    double mean_auc_delta() const;
};

/// Splits a dataset into one dataset per subject, ordered by subject id.
std::vector<Dataset> split_by_subject(const Dataset& dataset);

Dataset pool(const std::vector<Dataset>& datasets);

IndividualGroupComparison compare_individual_vs_group(const std::vector<Dataset>& per_subject,
                                                      const ExperimentConfig& config);

inline constexpr const char* kReportCsvHeader = "classifier,train_fraction,metric,mean,std,repetitions,skipped";
inline constexpr const char* kDeltaCsvHeader = "classifier,train_fraction,metric,individual_mean,group_mean,delta";

std::string report_to_csv(const EvalReport& report);
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);
void write_delta_csv(const std::vector<DeltaCell>& deltas, const std::filesystem::path& path);

/// One row of a report CSV.
struct ReportRow {
    std::string classifier;
    double train_fraction = 0.0;
    std::string metric;
    double mean = 0.0;
    double std = 0.0;
    std::size_t repetitions = 0;
    std::size_t skipped = 0;
};

std::vector<ReportRow> read_report_csv(const std::filesystem::path& path);

}  // namespace emopeak
