#include "pdd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include <nlohmann/json.hpp>

#include "pdd/error.hpp"
#include "pdd/freqdist.hpp"
#include "pdd/ngram_lm.hpp"
#include "pdd/providers.hpp"
#include "pdd/synthetic.hpp"

namespace pdd::cli {

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NotApplicable:
        case ErrorKind::EmptyRecord:
        case ErrorKind::EmptyText:
        case ErrorKind::LengthMismatch:
        case ErrorKind::Transport:
        case ErrorKind::TruncatedResponse:
            return kExitPartial;
        default:
            return kExitInput;
    }
}

void apply_config_file(RunConfig& cfg, const Path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot open config file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        if (j.contains("methods")) {
            cfg.methods.clear();
            for (const auto& m : j["methods"]) cfg.methods.push_back(parse_method(m.get<std::string>()));
        }
        if (j.contains("a")) cfg.clip_bound = j["a"].get<double>();
        if (j.contains("k")) cfg.k_percent = j["k"].get<double>();
        if (j.contains("tau") && !j["tau"].is_null()) cfg.threshold = j["tau"].get<double>();
        if (j.contains("fpr_targets")) cfg.fpr_targets = j["fpr_targets"].get<std::vector<double>>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("jobs")) cfg.jobs = j["jobs"].get<unsigned>();
        if (j.contains("freq_table")) cfg.freq_table = Path(j["freq_table"].get<std::string>());
        if (j.contains("api")) cfg.api = j["api"];
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, path.string() + ": " + e.what());
    }
}

nlohmann::json score_to_json(const DetectionScore& score, std::optional<double> threshold) {
    nlohmann::json extras = nlohmann::json::object();
    for (const auto& [k, v] : score.extras) extras[k] = v;
    if (threshold) {
        const auto d = decide(score, *threshold);
        extras["tau"] = d.threshold;
        extras["is_member"] = d.is_member;
    }
    return {{"doc_id", score.doc_id},
            {"method", std::string(to_string(score.method))},
            {"value", score.value},
            {"extras", std::move(extras)}};
}

namespace {

// Runs a command body, turning toolkit errors into diagnostics and exit
// codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind()) == kExitPartial ? kExitPartial : kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

void require_file(const Path& p, std::string_view what) {
    if (!std::filesystem::exists(p)) throw Error(ErrorKind::Io, std::string(what) + " not found: " + p.string());
}

class Output {
public:
    explicit Output(const Path& path, std::ostream& fallback) {
        if (path == "-") {
            os_ = &fallback;
        } else {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw Error(ErrorKind::Io, "cannot write " + path.string());
            os_ = &file_;
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

std::map<std::string, LogprobRecord> records_by_id(const Path& path) {
    std::map<std::string, LogprobRecord> out;
    for (auto& r : read_dump(path)) {
        auto id = r.doc_id;
        out.emplace(std::move(id), std::move(r));
    }
    return out;
}

// Everything a record needs besides its own logprobs, per method.
struct Auxiliary {
    const std::string* text = nullptr;
    std::optional<LoweredText> lowered;
    const LogprobRecord* lowered_record = nullptr;
    const LogprobRecord* reference = nullptr;
};

DetectionScore score_one(Method method, const LogprobRecord& record, const Auxiliary& aux, const RunConfig& cfg,
                         const FrequencyTable* table) {
    switch (method) {
        case Method::DcPdd:
            if (!table) throw Error(ErrorKind::Config, "dcpdd needs --freq");
            return dcpdd_score(record, {table, cfg.clip_bound});
        case Method::Ppl:
            return ppl_score(record);
        case Method::Lowercase:
            if (!aux.text) throw Error(ErrorKind::NotApplicable, record.doc_id + ": lowercase needs the raw text");
            if (!aux.lowered->changed) return lowercase_score(record, record, false);
            if (!aux.lowered_record)
                throw Error(ErrorKind::NotApplicable, record.doc_id + ": no logprobs for the lowercased text");
            return lowercase_score(record, *aux.lowered_record, true);
        case Method::Compression:
            if (!aux.text) throw Error(ErrorKind::NotApplicable, record.doc_id + ": compression needs the raw text");
            return compression_score(record, *aux.text);
        case Method::SmallRef:
            if (!aux.reference) throw Error(ErrorKind::NotApplicable, record.doc_id + ": no reference-model logprobs");
            return small_ref_score(record, *aux.reference);
        case Method::MinK:
            return mink_score(record, cfg.k_percent);
        case Method::MinKpp:
            return minkpp_score(record, cfg.k_percent);
    }
    throw Error(ErrorKind::Config, "unhandled method");
}

}  // namespace

int cmd_build_freq(const BuildFreqOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        require_file(opts.vocab, "vocabulary file");
        require_file(opts.corpus, "corpus file");
        const auto vocab = Vocabulary::load(opts.vocab);
        const auto table = build_from_file(opts.corpus, vocab, opts.scheme, cfg.jobs);
        save(table, opts.out);
        out << "N'=" << table.total() << " distinct=" << table.distinct() << " |V|=" << table.vocab_size()
            << " -> " << opts.out.string() << "\n";
        return kExitOk;
    });
}

int cmd_score(const ScoreOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const int providers = opts.dump.has_value() + opts.oracle.has_value() + opts.api;
        if (providers != 1) throw Error(ErrorKind::Config, "choose exactly one of --dump, --oracle, --api");
        if (cfg.methods.empty()) throw Error(ErrorKind::Config, "no methods selected");

        std::optional<FrequencyTable> table;
        if (cfg.freq_table) {
            require_file(*cfg.freq_table, "frequency table");
            table = load_table(*cfg.freq_table);
        }

        std::map<std::string, std::string> texts;
        std::vector<Document> docs;
        if (opts.texts) {
            require_file(*opts.texts, "texts file");
            for (auto& ex : load_benchmark(*opts.texts).examples) {
                texts[ex.doc_id] = ex.text;
                docs.push_back({std::move(ex.doc_id), std::move(ex.text)});
            }
        } else if (!opts.dump) {
            throw Error(ErrorKind::Config, "--texts is required with --oracle and --api");
        }

        std::map<std::string, LogprobRecord> lowered_records, ref_records;
        if (opts.lower_dump) lowered_records = records_by_id(*opts.lower_dump);
        if (opts.ref_dump) ref_records = records_by_id(*opts.ref_dump);

        std::vector<LogprobRecord> records;
        std::size_t read_failures = 0;
        const bool wants_lower = std::count(cfg.methods.begin(), cfg.methods.end(), Method::Lowercase) > 0;
        const bool wants_ref = std::count(cfg.methods.begin(), cfg.methods.end(), Method::SmallRef) > 0;

        if (opts.dump) {
            require_file(*opts.dump, "dump");
            DumpReader reader(*opts.dump);
            for (;;) {
                try {
                    auto r = reader.next();
                    if (!r) break;
                    records.push_back(std::move(*r));
                } catch (const Error& e) {
                    err << "skip: " << e.what() << "\n";
                    ++read_failures;
                }
            }
        } else if (opts.oracle) {
            require_file(*opts.oracle, "oracle model");
            const auto model = load_model(*opts.oracle);
            std::optional<NGramModel> ref_model;
            if (opts.ref_oracle) ref_model = load_model(*opts.ref_oracle);
            for (const auto& doc : docs) {
                try {
                    records.push_back(fetch_oracle(doc.doc_id, doc.text, model, opts.scheme));
                    if (wants_lower) {
                        const auto low = lowercase_transform(doc.text);
                        if (low.changed)
                            lowered_records.insert_or_assign(doc.doc_id,
                                                             fetch_oracle(doc.doc_id, low.lowered, model, opts.scheme));
                    }
                    if (ref_model)
                        ref_records.insert_or_assign(doc.doc_id, fetch_oracle(doc.doc_id, doc.text, *ref_model, opts.scheme));
                } catch (const Error& e) {
                    err << "skip " << doc.doc_id << ": " << e.what() << "\n";
                    ++read_failures;
                }
            }
        } else {
            if (!cfg.api) throw Error(ErrorKind::Config, "--api needs an \"api\" section in the config file");
            const auto api = api_config_from_json(*cfg.api);
            FetchStats stats;
            auto batch = fetch_api_batch(docs, api, &stats);
            std::vector<Document> lowered_docs;
            for (std::size_t k = 0; k < docs.size(); ++k) {
                if (batch.errors[k]) {
                    try {
                        std::rethrow_exception(batch.errors[k]);
                    } catch (const Error& e) {
                        if (e.kind() == ErrorKind::AuthFailure) throw;
                        err << "skip " << docs[k].doc_id << ": " << e.what() << "\n";
                    }
                    ++read_failures;
                    continue;
                }
                records.push_back(std::move(*batch.records[k]));
                if (wants_lower) {
                    auto low = lowercase_transform(docs[k].text);
                    if (low.changed) lowered_docs.push_back({docs[k].doc_id, std::move(low.lowered)});
                }
            }
            if (!lowered_docs.empty()) {
                auto low_batch = fetch_api_batch(lowered_docs, api, &stats);
                for (std::size_t k = 0; k < lowered_docs.size(); ++k)
                    if (low_batch.records[k]) lowered_records.insert_or_assign(lowered_docs[k].doc_id, std::move(*low_batch.records[k]));
            }
            err << "api: " << stats.requests.load() << " requests, " << stats.retries.load() << " retries\n";
        }
        if (opts.dump_out) write_dump(*opts.dump_out, records);
        if (wants_ref && ref_records.empty())
            err << "warning: small_ref selected but no reference logprobs given (--ref-dump / --ref-oracle)\n";

        Output sink(opts.out, out);
        std::map<Method, std::size_t> ok, failed, not_applicable;
        for (const auto& record : records) {
            Auxiliary aux;
            if (auto it = texts.find(record.doc_id); it != texts.end()) {
                aux.text = &it->second;
                aux.lowered = lowercase_transform(it->second);
            }
            if (auto it = lowered_records.find(record.doc_id); it != lowered_records.end()) aux.lowered_record = &it->second;
            if (auto it = ref_records.find(record.doc_id); it != ref_records.end()) aux.reference = &it->second;
            for (auto method : cfg.methods) {
                try {
                    const auto score = score_one(method, record, aux, cfg, table ? &*table : nullptr);
                    *sink << score_to_json(score, cfg.threshold).dump() << "\n";
                    ++ok[method];
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::Config || e.kind() == ErrorKind::VocabMismatch) throw;
                    (e.kind() == ErrorKind::NotApplicable ? not_applicable : failed)[method]++;
                    err << record.doc_id << " " << to_string(method) << ": " << e.what() << "\n";
                }
            }
        }

        std::size_t total_failures = read_failures;
        for (auto method : cfg.methods) {
            err << to_string(method) << ": scored " << ok[method] << ", failed " << failed[method]
                << ", not applicable " << not_applicable[method] << "\n";
            total_failures += failed[method] + not_applicable[method];
        }
        if (read_failures) err << "records skipped: " << read_failures << "\n";
        return total_failures == 0 ? kExitOk : kExitPartial;
    });
}

namespace {

std::map<std::string, std::map<std::string, double>> read_scores(const Path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open scores " + path.string());
    std::map<std::string, std::map<std::string, double>> by_method;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            by_method[j.at("method").get<std::string>()][j.at("doc_id").get<std::string>()] = j.at("value").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::SchemaError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return by_method;
}

std::string fixed(double v, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void write_text(const Path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
}

void write_report_files(const EvalReport& report, const Path& dir) {
    write_text(dir / (report.method + ".json"), emit_report(report, ReportFormat::Json));
    write_text(dir / (report.method + ".csv"), emit_report(report, ReportFormat::Csv));
    write_text(dir / (report.method + ".roc.csv"), emit_report(report, ReportFormat::RocCsv));
}

}  // namespace

int cmd_eval(const EvalOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        require_file(opts.scores, "scores file");
        require_file(opts.benchmark, "benchmark file");
        const auto scores = read_scores(opts.scores);
        const auto bench = load_benchmark(opts.benchmark, opts.format);
        std::map<std::string, Label> labels;
        for (const auto& ex : bench.examples) labels[ex.doc_id] = ex.label;
        if (scores.empty()) throw Error(ErrorKind::SchemaError, opts.scores.string() + " holds no scores");

        if (opts.out_dir) std::filesystem::create_directories(*opts.out_dir);
        out << "method        n    AUC    ";
        for (double t : cfg.fpr_targets) out << "TPR@" << fixed(100 * t, 0) << "%FPR  ";
        out << "\n";
        for (const auto& [method, values] : scores) {
            std::vector<ScoredLabel> joined;
            std::size_t unknown = 0;
            for (const auto& [id, v] : values) {
                const auto it = labels.find(id);
                if (it == labels.end()) {
                    ++unknown;
                    continue;
                }
                joined.push_back({v, it->second == Label::Member});
            }
            if (unknown)
                throw Error(ErrorKind::JoinMismatch, method + ": " + std::to_string(unknown) +
                                                         " scored doc ids are not in the benchmark");
            if (joined.size() < labels.size())
                err << "warning: " << method << " scored " << joined.size() << " of " << labels.size()
                    << " benchmark examples\n";
            const auto report = evaluate(method, joined, cfg.fpr_targets);
            out << method << std::string(method.size() < 10 ? 10 - method.size() : 1, ' ') << " "
                << joined.size() << "  " << fixed(report.auc) << "  ";
            for (const auto& [t, tpr] : report.tpr_at_fpr) out << fixed(tpr) << "        ";
            out << "\n";
            if (opts.out_dir) write_report_files(report, *opts.out_dir);
        }

        auto comparisons = nlohmann::json::array();
        for (const auto& pair : opts.compare) {
            const auto colon = pair.find(':');
            if (colon == std::string::npos) throw Error(ErrorKind::Config, "--compare expects a:b, got " + pair);
            const auto a = pair.substr(0, colon), b = pair.substr(colon + 1);
            if (!scores.contains(a) || !scores.contains(b))
                throw Error(ErrorKind::Config, "--compare " + pair + ": method missing from scores");
            const auto c = compare_methods(pair_scores(scores.at(a), scores.at(b), labels), opts.resamples, cfg.seed,
                                           cfg.jobs);
            out << a << " vs " << b << ": dAUC=" << fixed(c.delta_auc, 4) << " p=" << fixed(c.p_value, 4)
                << " (paired bootstrap, " << c.resamples << " resamples, seed " << c.seed << ")\n";
            comparisons.push_back({{"a", a},
                                   {"b", b},
                                   {"auc_a", c.auc_a},
                                   {"auc_b", c.auc_b},
                                   {"delta_auc", c.delta_auc},
                                   {"p_value", c.p_value},
                                   {"resamples", c.resamples},
                                   {"degenerate_resamples", c.degenerate_resamples},
                                   {"seed", c.seed}});
        }
        if (opts.out_dir && !comparisons.empty())
            write_text(*opts.out_dir / "comparisons.json", comparisons.dump(2) + "\n");
        return kExitOk;
    });
}

int cmd_oracle_train(const OracleTrainOptions& opts, const RunConfig&, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        require_file(opts.corpus, "corpus");
        std::vector<Document> docs;
        for (auto& ex : load_benchmark(opts.corpus).examples)
            if (!opts.members_only || ex.label == Label::Member) docs.push_back({std::move(ex.doc_id), std::move(ex.text)});
        if (docs.empty()) throw Error(ErrorKind::EmptyText, opts.corpus.string() + " has no training documents");
        auto vocab = opts.vocab ? Vocabulary::load(*opts.vocab) : default_vocabulary(docs);
        const auto model = NGramModel::train(docs, opts.order, std::move(vocab), opts.scheme);
        save(model, opts.out);
        out << "order=" << model.order() << " |V|=" << model.vocab_size() << " contexts=" << model.contexts().size()
            << " docs=" << model.manifest().size() << " -> " << opts.out.string() << "\n";
        return kExitOk;
    });
}

ExperimentResult run_oracle_experiment(const OracleExperimentOptions& opts, const RunConfig& cfg) {
    ExperimentResult result;
    SyntheticCorpus generator(cfg.seed);
    const auto members = generator.documents(opts.members, "member-");
    const auto holdout = generator.documents(opts.non_members, "holdout-");
    const auto reference = generator.documents(opts.reference_docs, "ref-");

    if (members.empty() || holdout.empty()) {
        result.warnings.push_back("empty member or holdout split: metrics need both classes, skipping evaluation");
        if (members.empty()) return result;
    } else if (members.size() < 10 || holdout.size() < 10) {
        result.warnings.push_back("fewer than 10 examples in a split: AUC and TPR are coarse");
    }
    if (opts.order <= 1) result.warnings.push_back("order 1 target: small_ref compares two identical unigram models");

    const auto vocab = default_vocabulary(members);
    const auto target = NGramModel::train(members, opts.order, vocab, Scheme::Whitespace);
    const auto small = NGramModel::train(members, 1, vocab, Scheme::Whitespace);
    std::vector<std::string> ref_texts;
    for (const auto& d : reference) ref_texts.push_back(d.text);
    auto table = build(ref_texts, vocab, Scheme::Whitespace, cfg.jobs);

    std::vector<LabeledExample> examples;
    for (const auto& d : members) examples.push_back({d.doc_id, d.text, Label::Member, "synthetic", {}});
    for (const auto& d : holdout) examples.push_back({d.doc_id, d.text, Label::NonMember, "synthetic", {}});

    const std::vector<Method> all = {Method::DcPdd,    Method::Ppl,  Method::Lowercase, Method::Compression,
                                     Method::SmallRef, Method::MinK, Method::MinKpp};
    std::map<Method, std::vector<ScoredLabel>> scored;
    std::map<Method, std::size_t> failures;
    std::vector<LogprobRecord> dump;
    std::vector<nlohmann::json> score_lines;
    for (const auto& ex : examples) {
        auto record = fetch_oracle(ex.doc_id, ex.text, target, Scheme::Whitespace);
        Auxiliary aux;
        aux.text = &ex.text;
        aux.lowered = lowercase_transform(ex.text);
        std::optional<LogprobRecord> lowered;
        if (aux.lowered->changed) {
            lowered = fetch_oracle(ex.doc_id, aux.lowered->lowered, target, Scheme::Whitespace);
            aux.lowered_record = &*lowered;
        }
        const auto ref = fetch_oracle(ex.doc_id, ex.text, small, Scheme::Whitespace);
        aux.reference = &ref;
        for (auto m : all) {
            try {
                const auto s = score_one(m, record, aux, cfg, &table);
                scored[m].push_back({s.value, ex.label == Label::Member});
                score_lines.push_back(score_to_json(s, cfg.threshold));
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::Config) throw;
                ++failures[m];
            }
        }
        dump.push_back(std::move(record));
    }

    for (auto m : all) {
        auto& summary = result.methods[m];
        summary.failures = failures[m];
        const auto& s = scored[m];
        double sum_m = 0, sum_n = 0;
        std::size_t n_m = 0, n_n = 0;
        for (const auto& x : s) (x.member ? (sum_m += x.value, n_m++) : (sum_n += x.value, n_n++));
        summary.member_mean = n_m ? sum_m / static_cast<double>(n_m) : std::nan("");
        summary.non_member_mean = n_n ? sum_n / static_cast<double>(n_n) : std::nan("");
        if (n_m && n_n) {
            summary.report = evaluate(std::string(to_string(m)), s, cfg.fpr_targets);
        } else {
            summary.report.method = std::string(to_string(m));
            result.warnings.push_back(std::string(to_string(m)) + ": single-class scores, no metrics");
        }
        if (summary.failures)
            result.warnings.push_back(std::string(to_string(m)) + ": " + std::to_string(summary.failures) +
                                      " examples not scorable");
    }

    if (opts.out_dir) {
        const auto& dir = *opts.out_dir;
        std::filesystem::create_directories(dir);
        write_benchmark(dir / "benchmark.jsonl", examples);
        write_dump(dir / "dump.jsonl", dump);
        save(table, dir / "reference.fqt");
        save(target, dir / "oracle.ngm");
        std::string lines;
        for (const auto& l : score_lines) lines += l.dump() + "\n";
        write_text(dir / "scores.jsonl", lines);
        for (const auto& [m, summary] : result.methods)
            if (summary.report.n_members && summary.report.n_nonmembers) write_report_files(summary.report, dir);
        write_text(dir / "report.json", experiment_to_json(result, opts, cfg).dump(2) + "\n");
    }
    return result;
}

nlohmann::json experiment_to_json(const ExperimentResult& result, const OracleExperimentOptions& opts,
                                  const RunConfig& cfg) {
    auto methods = nlohmann::json::object();
    for (const auto& [m, s] : result.methods) {
        methods[std::string(to_string(m))] = {{"report", report_to_json(s.report)},
                                             {"member_mean", std::isnan(s.member_mean) ? nlohmann::json(nullptr) : nlohmann::json(s.member_mean)},
                                             {"non_member_mean", std::isnan(s.non_member_mean) ? nlohmann::json(nullptr) : nlohmann::json(s.non_member_mean)},
                                             {"failures", s.failures}};
    }
    return {{"seed", cfg.seed},
            {"members", opts.members},
            {"non_members", opts.non_members},
            {"reference_docs", opts.reference_docs},
            {"order", opts.order},
            {"a", cfg.clip_bound},
            {"k", cfg.k_percent},
            {"methods", std::move(methods)},
            {"warnings", result.warnings}};
}

int cmd_oracle_experiment(const OracleExperimentOptions& opts, const RunConfig& cfg, std::ostream& out,
                          std::ostream& err) {
    return guarded(err, [&] {
        const auto result = run_oracle_experiment(opts, cfg);
        for (const auto& w : result.warnings) err << "warning: " << w << "\n";
        out << "method        AUC    TPR@5%FPR  member_mean    nonmember_mean\n";
        for (const auto& [m, s] : result.methods) {
            const auto name = std::string(to_string(m));
            out << name << std::string(name.size() < 12 ? 12 - name.size() : 1, ' ') << "  ";
            if (s.report.n_members && s.report.n_nonmembers) {
                const auto t = s.report.tpr_at_fpr.begin();
                out << fixed(s.report.auc) << "  " << fixed(t == s.report.tpr_at_fpr.end() ? 0.0 : t->second) << "      ";
            } else {
                out << "  -      -        ";
            }
            out << fixed(s.member_mean, 6) << "  " << fixed(s.non_member_mean, 6) << "\n";
        }
        if (opts.out_dir) out << "report -> " << (*opts.out_dir / "report.json").string() << "\n";
        return result.warnings.empty() ? kExitOk : kExitPartial;
    });
}

}  // namespace pdd::cli
