#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdd/error.hpp"
#include "pdd/eval.hpp"
#include "pdd/scoring.hpp"
#include "pdd/tokenizer.hpp"

// Command implementations behind tools/pdd. Each returns the process exit
// code: 0 success, 1 partial failure, 2 configuration or input error.
namespace pdd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitInput = 2;

using Path = std::filesystem::path;

int exit_code_for(ErrorKind kind) noexcept;

// Hyperparameters shared by the commands. Filled from defaults, then the
// --config file, then explicit flags.
struct RunConfig {
    std::vector<Method> methods = {Method::DcPdd, Method::MinK};
    double clip_bound = kDefaultClipBound;
    double k_percent = kDefaultKPercent;
    std::optional<double> threshold;
    std::vector<double> fpr_targets = {0.05};
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::optional<Path> freq_table;
    std::optional<nlohmann::json> api;  // ApiConfig object
};

// Overlays the keys present in a JSON config file onto `cfg`.
void apply_config_file(RunConfig& cfg, const Path& path);

struct BuildFreqOptions {
    Path corpus;
    Path vocab;
    Scheme scheme = Scheme::Whitespace;
    Path out;
};

int cmd_build_freq(const BuildFreqOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct ScoreOptions {
    // Exactly one provider.
    std::optional<Path> dump;
    std::optional<Path> oracle;
    bool api = false;

    std::optional<Path> texts;  // benchmark JSONL; required for oracle/api, lowercase, compression
    std::optional<Path> lower_dump;
    std::optional<Path> ref_dump;
    std::optional<Path> ref_oracle;
    Scheme scheme = Scheme::Whitespace;  // oracle tokenization
    Path out = "-";
    std::optional<Path> dump_out;  // persist acquired records
};

int cmd_score(const ScoreOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct EvalOptions {
    Path scores;
    Path benchmark;
    BenchmarkFormat format = BenchmarkFormat::Native;
    std::optional<Path> out_dir;
    // "a:b" pairs for paired-bootstrap comparison.
    std::vector<std::string> compare;
    std::size_t resamples = 1000;
};

int cmd_eval(const EvalOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct OracleTrainOptions {
    Path corpus;  // benchmark JSONL
    unsigned order = 2;
    std::optional<Path> vocab;
    Scheme scheme = Scheme::Whitespace;
    bool members_only = true;
    Path out;
};

int cmd_oracle_train(const OracleTrainOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct OracleExperimentOptions {
    std::size_t members = 500;
    std::size_t non_members = 500;
    std::size_t reference_docs = 2000;
    unsigned order = 2;
    std::optional<Path> out_dir;
};

struct MethodSummary {
    EvalReport report;
    double member_mean = 0.0;
    double non_member_mean = 0.0;
    std::size_t failures = 0;
};

struct ExperimentResult {
    std::map<Method, MethodSummary> methods;
    std::vector<std::string> warnings;
};

// Synthetic corpus -> member/holdout split -> n-gram oracle trained on the
// members -> every method scored and evaluated.
ExperimentResult run_oracle_experiment(const OracleExperimentOptions& opts, const RunConfig& cfg);
nlohmann::json experiment_to_json(const ExperimentResult& result, const OracleExperimentOptions& opts,
                                  const RunConfig& cfg);

int cmd_oracle_experiment(const OracleExperimentOptions& opts, const RunConfig& cfg, std::ostream& out,
                          std::ostream& err);

// One score JSONL line.
nlohmann::json score_to_json(const DetectionScore& score, std::optional<double> threshold);

}  // namespace pdd::cli
