// pdd: pretraining data detection toolkit.

#include <iostream>

#include <CLI11.hpp>

#include "pdd/cli.hpp"
#include "pdd/error.hpp"

namespace {

using namespace pdd;
using namespace pdd::cli;

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names) out.push_back(parse_method(n));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Black-box pretraining data detection: DC-PDD and baseline scores, frequency tables, evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    // Hyperparameters shared by several subcommands.
    std::vector<std::string> methods;
    double clip_bound = kDefaultClipBound, k_percent = kDefaultKPercent, tau = 0.0;
    std::string freq_path;
    std::vector<double> fpr_targets;
    auto add_hyper = [&](CLI::App* sub) {
        sub->add_option("--a", clip_bound, "DC-PDD clip bound a")->check(CLI::PositiveNumber);
        sub->add_option("--k", k_percent, "Min-K% / Min-K%++ percentage")->check(CLI::Range(0.0, 100.0));
    };

    auto* build_freq = app.add_subcommand("build-freq", "count token frequencies of a reference corpus");
    BuildFreqOptions bf;
    std::string bf_scheme = "whitespace";
    build_freq->add_option("--corpus", bf.corpus, "newline-delimited UTF-8 corpus")->required();
    build_freq->add_option("--vocab", bf.vocab, "vocabulary file")->required();
    build_freq->add_option("--scheme", bf_scheme, "whitespace | byte | external-map");
    build_freq->add_option("--out", bf.out, "output table (.fqt)")->required();

    auto* score = app.add_subcommand("score", "score records with one or more detection methods");
    ScoreOptions so;
    std::string so_scheme = "whitespace", dump, oracle, texts, lower_dump, ref_dump, ref_oracle, dump_out, out = "-";
    score->add_option("--dump", dump, "logprob dump (JSONL)");
    score->add_option("--oracle", oracle, "n-gram oracle model");
    score->add_flag("--api", so.api, "query the endpoint in the config file's \"api\" section");
    score->add_option("--texts", texts, "benchmark JSONL supplying raw texts");
    score->add_option("--lower-dump", lower_dump, "dump for the lowercased texts (lowercase method)");
    score->add_option("--ref-dump", ref_dump, "dump from the reference model (small_ref method)");
    score->add_option("--ref-oracle", ref_oracle, "reference n-gram model (small_ref method)");
    score->add_option("--scheme", so_scheme, "oracle tokenization scheme");
    score->add_option("--methods", methods, "dcpdd ppl lowercase compression small_ref mink minkpp")->delimiter(',');
    score->add_option("--freq", freq_path, "frequency table for dcpdd");
    score->add_option("--tau", tau, "decision threshold; adds is_member to each score");
    score->add_option("--out", out, "score JSONL output ('-' for stdout)");
    score->add_option("--save-dump", dump_out, "write acquired records to this dump");
    add_hyper(score);

    auto* eval = app.add_subcommand("eval", "AUC and TPR@FPR per method");
    EvalOptions eo;
    std::string eo_format = "native", out_dir;
    eval->add_option("--scores", eo.scores, "score JSONL")->required();
    eval->add_option("--benchmark", eo.benchmark, "benchmark JSONL with labels")->required();
    eval->add_option("--format", eo_format, "benchmark layout: native | wikimia");
    eval->add_option("--out-dir", out_dir, "write per-method json/csv/roc-csv reports here");
    eval->add_option("--compare", eo.compare, "method pairs a:b for a paired bootstrap test");
    eval->add_option("--resamples", eo.resamples, "bootstrap resamples");
    eval->add_option("--fpr", fpr_targets, "target FPRs for TPR@FPR")->delimiter(',');

    auto* train = app.add_subcommand("oracle-train", "train the n-gram oracle on a benchmark's members");
    OracleTrainOptions to;
    std::string to_scheme = "whitespace", to_vocab;
    train->add_option("--corpus", to.corpus, "benchmark JSONL")->required();
    train->add_option("--order", to.order, "n-gram order")->check(CLI::PositiveNumber);
    train->add_option("--vocab", to_vocab, "vocabulary file (default: corpus words + <s> + <unk>)");
    train->add_option("--scheme", to_scheme, "tokenization scheme");
    bool all_docs = false;
    train->add_flag("--all", all_docs, "train on every document, not just label 1");
    train->add_option("--out", to.out, "model output (.ngm)")->required();

    auto* experiment = app.add_subcommand("oracle-experiment", "seeded end-to-end run against an n-gram oracle");
    OracleExperimentOptions xo;
    std::vector<std::size_t> sizes;
    std::string xo_out;
    experiment->add_option("--sizes", sizes, "members,non-members")->delimiter(',')->expected(2);
    experiment->add_option("--reference-docs", xo.reference_docs, "documents in the reference corpus");
    experiment->add_option("--order", xo.order, "oracle n-gram order")->check(CLI::PositiveNumber);
    experiment->add_option("--out-dir", xo_out, "write benchmark, dump, scores and reports here");
    add_hyper(experiment);

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        auto given = [&](const CLI::App* sub, const char* flag) { return sub->count(flag) > 0; };
        if (app.count("--seed")) cfg.seed = seed;
        if (app.count("--jobs")) cfg.jobs = jobs;
        for (auto* sub : {score, experiment}) {
            if (given(sub, "--a")) cfg.clip_bound = clip_bound;
            if (given(sub, "--k")) cfg.k_percent = k_percent;
        }
        if (given(score, "--methods")) cfg.methods = parse_methods(methods);
        if (given(score, "--freq")) cfg.freq_table = freq_path;
        if (given(score, "--tau")) cfg.threshold = tau;
        if (given(eval, "--fpr")) cfg.fpr_targets = fpr_targets;

        if (*build_freq) {
            bf.scheme = parse_scheme(bf_scheme);
            return cmd_build_freq(bf, cfg, std::cout, std::cerr);
        }
        if (*score) {
            so.scheme = parse_scheme(so_scheme);
            auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<Path>(s); };
            so.dump = opt(dump);
            so.oracle = opt(oracle);
            so.texts = opt(texts);
            so.lower_dump = opt(lower_dump);
            so.ref_dump = opt(ref_dump);
            so.ref_oracle = opt(ref_oracle);
            so.dump_out = opt(dump_out);
            so.out = out;
            return cmd_score(so, cfg, std::cout, std::cerr);
        }
        if (*eval) {
            eo.format = parse_benchmark_format(eo_format);
            if (!out_dir.empty()) eo.out_dir = out_dir;
            return cmd_eval(eo, cfg, std::cout, std::cerr);
        }
        if (*train) {
            to.scheme = parse_scheme(to_scheme);
            if (!to_vocab.empty()) to.vocab = to_vocab;
            to.members_only = !all_docs;
            return cmd_oracle_train(to, cfg, std::cout, std::cerr);
        }
        if (*experiment) {
            if (sizes.size() == 2) {
                xo.members = sizes[0];
                xo.non_members = sizes[1];
            }
            if (!xo_out.empty()) xo.out_dir = xo_out;
            return cmd_oracle_experiment(xo, cfg, std::cout, std::cerr);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
