#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace pdd {

enum class Label { NonMember = 0, Member = 1 };

struct LabeledExample {
    std::string doc_id;
    std::string text;
    Label label = Label::NonMember;
    std::string source;
    std::optional<std::int64_t> length;  // words

    friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

enum class BenchmarkFormat {
    Native,   // {"doc_id", "text", "label", "source", "length"}
    WikiMia,  // {"input", "label"}; doc ids are <source>-<line>
};

BenchmarkFormat parse_benchmark_format(std::string_view name);

struct Benchmark {
    std::vector<LabeledExample> examples;
    std::size_t members = 0;
    std::size_t non_members = 0;
};

// `source` names the benchmark for formats that do not carry one; it
// defaults to the file stem.
Benchmark load_benchmark(const std::filesystem::path& path, BenchmarkFormat format = BenchmarkFormat::Native,
                         std::string source = {});
void write_benchmark(const std::filesystem::path& path, std::span<const LabeledExample> examples);

struct ScoredLabel {
    double value = 0.0;
    bool member = false;
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;

    friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

// Mann-Whitney estimate with half credit for ties; one sort. Throws
// DegenerateLabels unless both classes are present.
double auc(std::span<const ScoredLabel> scores);

// Operating points from the strictest threshold down, one per distinct score
// value, framed by (0,0) and (1,1).
std::vector<RocPoint> roc_curve(std::span<const ScoredLabel> scores);

// Highest TPR among thresholds (distinct score values, member iff
// value >= threshold) whose FPR does not exceed target_fpr.
double tpr_at_fpr(std::span<const ScoredLabel> scores, double target_fpr = 0.05);

struct EvalReport {
    std::string method;
    double auc = 0.0;
    std::map<double, double> tpr_at_fpr;
    std::vector<RocPoint> roc_points;
    std::size_t n_members = 0;
    std::size_t n_nonmembers = 0;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

EvalReport evaluate(std::string method, std::span<const ScoredLabel> scores,
                    std::span<const double> fpr_targets = {});

// Trapezoidal area under a ROC polyline.
double trapezoid_area(std::span<const RocPoint> roc);

enum class ReportFormat { Json, Csv, RocCsv };

ReportFormat parse_report_format(std::string_view name);
std::string emit_report(const EvalReport& report, ReportFormat format);
nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

// Two methods scored on the same examples, aligned by doc id.
struct PairedScores {
    std::vector<std::string> doc_ids;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<bool> member;
};

// Throws ExampleSetMismatch unless a, b and labels cover the same doc ids.
PairedScores pair_scores(const std::map<std::string, double>& a, const std::map<std::string, double>& b,
                         const std::map<std::string, Label>& labels);

struct Comparison {
    double auc_a = 0.0;
    double auc_b = 0.0;
    double delta_auc = 0.0;  // auc_a - auc_b
    double p_value = 1.0;    // two-sided, paired bootstrap
    std::size_t resamples = 0;
    std::size_t degenerate_resamples = 0;  // single-class draws, skipped
    std::uint64_t seed = 0;
};

// Paired example-level bootstrap of the AUC difference. Resample r draws
// from its own generator seeded from (seed, r), so the outcome does not
// depend on `jobs`.
Comparison compare_methods(const PairedScores& scores, std::size_t resamples, std::uint64_t seed,
                           unsigned jobs = 1);

}  // namespace pdd
