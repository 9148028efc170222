#include "pdd/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "pdd/error.hpp"
#include "pdd/tokenizer.hpp"

namespace pdd {

BenchmarkFormat parse_benchmark_format(std::string_view name) {
    if (name == "native") return BenchmarkFormat::Native;
    if (name == "wikimia") return BenchmarkFormat::WikiMia;
    throw Error(ErrorKind::Config, "unknown benchmark format '" + std::string(name) + "'");
}

namespace {

Label parse_label(const nlohmann::json& j) {
    const auto v = j.get<int>();
    if (v != 0 && v != 1) throw Error(ErrorKind::SchemaError, "label must be 0 or 1");
    return v == 1 ? Label::Member : Label::NonMember;
}

}  // namespace

Benchmark load_benchmark(const std::filesystem::path& path, BenchmarkFormat format, std::string source) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open benchmark " + path.string());
    if (source.empty()) source = path.stem().string();
    Benchmark bench;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
        LabeledExample ex;
        try {
            const auto j = nlohmann::json::parse(line);
            if (format == BenchmarkFormat::Native) {
                ex.doc_id = j.at("doc_id").get<std::string>();
                ex.text = j.at("text").get<std::string>();
                ex.label = parse_label(j.at("label"));
                ex.source = j.value("source", source);
                if (j.contains("length") && !j["length"].is_null()) ex.length = j["length"].get<std::int64_t>();
            } else {
                ex.text = j.at("input").get<std::string>();
                ex.label = parse_label(j.at("label"));
                ex.source = source;
                ex.doc_id = source + "-" + std::to_string(line_no);
                ex.length = static_cast<std::int64_t>(split_whitespace(ex.text).size());
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::SchemaError, where + e.what());
        } catch (const Error& e) {
            throw Error(ErrorKind::SchemaError, where + e.what());
        }
        (ex.label == Label::Member ? bench.members : bench.non_members)++;
        bench.examples.push_back(std::move(ex));
    }
    return bench;
}

void write_benchmark(const std::filesystem::path& path, std::span<const LabeledExample> examples) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write benchmark " + path.string());
    for (const auto& ex : examples) {
        nlohmann::json j = {{"doc_id", ex.doc_id},
                            {"text", ex.text},
                            {"label", ex.label == Label::Member ? 1 : 0},
                            {"source", ex.source}};
        j["length"] = ex.length ? nlohmann::json(*ex.length) : nlohmann::json(nullptr);
        out << j.dump() << '\n';
    }
}

namespace {

struct ClassCounts {
    std::uint64_t members = 0;
    std::uint64_t non_members = 0;
};

ClassCounts count_classes(std::span<const ScoredLabel> scores) {
    ClassCounts c;
    for (const auto& s : scores) (s.member ? c.members : c.non_members)++;
    if (c.members == 0 || c.non_members == 0)
        throw Error(ErrorKind::DegenerateLabels, "need both members and non-members, got " +
                                                     std::to_string(c.members) + " and " +
                                                     std::to_string(c.non_members));
    return c;
}

// Tie groups of equal value in descending order, as (members, non-members).
std::vector<ClassCounts> descending_groups(std::span<const ScoredLabel> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return scores[x].value > scores[y].value; });
    std::vector<ClassCounts> groups;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k == 0 || scores[order[k]].value != scores[order[k - 1]].value) groups.emplace_back();
        (scores[order[k]].member ? groups.back().members : groups.back().non_members)++;
    }
    return groups;
}

}  // namespace

double auc(std::span<const ScoredLabel> scores) {
    const auto total = count_classes(scores);
    // Twice the Mann-Whitney U, kept integral until the final division.
    std::uint64_t twice_u = 0;
    std::uint64_t non_members_above = 0;
    for (const auto& g : descending_groups(scores)) {
        twice_u += 2 * g.members * (total.non_members - non_members_above - g.non_members) + g.members * g.non_members;
        non_members_above += g.non_members;
    }
    return static_cast<double>(twice_u) /
           (2.0 * static_cast<double>(total.members) * static_cast<double>(total.non_members));
}

std::vector<RocPoint> roc_curve(std::span<const ScoredLabel> scores) {
    const auto total = count_classes(scores);
    std::vector<RocPoint> roc{{0.0, 0.0}};
    std::uint64_t tp = 0, fp = 0;
    for (const auto& g : descending_groups(scores)) {
        tp += g.members;
        fp += g.non_members;
        roc.push_back({static_cast<double>(fp) / static_cast<double>(total.non_members),
                       static_cast<double>(tp) / static_cast<double>(total.members)});
    }
    return roc;
}

double tpr_at_fpr(std::span<const ScoredLabel> scores, double target_fpr) {
    const auto total = count_classes(scores);
    const double allowed_fp = target_fpr * static_cast<double>(total.non_members) + 1e-9;
    std::uint64_t tp = 0, fp = 0, best_tp = 0;
    for (const auto& g : descending_groups(scores)) {
        tp += g.members;
        fp += g.non_members;
        if (static_cast<double>(fp) > allowed_fp) break;
        best_tp = tp;
    }
    return static_cast<double>(best_tp) / static_cast<double>(total.members);
}

double trapezoid_area(std::span<const RocPoint> roc) {
    double area = 0.0;
    for (std::size_t k = 1; k < roc.size(); ++k)
        area += (roc[k].fpr - roc[k - 1].fpr) * (roc[k].tpr + roc[k - 1].tpr) / 2.0;
    return area;
}

EvalReport evaluate(std::string method, std::span<const ScoredLabel> scores, std::span<const double> fpr_targets) {
    EvalReport report;
    report.method = std::move(method);
    report.auc = auc(scores);
    report.roc_points = roc_curve(scores);
    static constexpr double kDefaultTargets[] = {0.05};
    if (fpr_targets.empty()) fpr_targets = kDefaultTargets;
    for (double t : fpr_targets) report.tpr_at_fpr[t] = tpr_at_fpr(scores, t);
    for (const auto& s : scores) (s.member ? report.n_members : report.n_nonmembers)++;
    return report;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "roc-csv") return ReportFormat::RocCsv;
    throw Error(ErrorKind::Config, "unknown report format '" + std::string(name) + "'");
}

namespace {

std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& report) {
    auto tpr = nlohmann::json::array();
    for (const auto& [fpr, t] : report.tpr_at_fpr) tpr.push_back({{"fpr", fpr}, {"tpr", t}});
    auto roc = nlohmann::json::array();
    for (const auto& p : report.roc_points) roc.push_back({p.fpr, p.tpr});
    return {{"method", report.method},       {"auc", report.auc},
            {"tpr_at_fpr", std::move(tpr)},  {"roc_points", std::move(roc)},
            {"n_members", report.n_members}, {"n_nonmembers", report.n_nonmembers}};
}

EvalReport report_from_json(const nlohmann::json& j) {
    try {
        EvalReport r;
        r.method = j.at("method").get<std::string>();
        r.auc = j.at("auc").get<double>();
        for (const auto& t : j.at("tpr_at_fpr")) r.tpr_at_fpr[t.at("fpr").get<double>()] = t.at("tpr").get<double>();
        for (const auto& p : j.at("roc_points")) r.roc_points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        r.n_members = j.at("n_members").get<std::size_t>();
        r.n_nonmembers = j.at("n_nonmembers").get<std::size_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SchemaError, std::string("report: ") + e.what());
    }
}

std::string emit_report(const EvalReport& report, ReportFormat format) {
    std::string out;
    switch (format) {
        case ReportFormat::Json:
            return report_to_json(report).dump(2) + "\n";
        case ReportFormat::Csv:
            out = "method,auc,n_members,n_nonmembers";
            for (const auto& [fpr, t] : report.tpr_at_fpr) out += ",tpr_at_fpr_" + num(fpr);
            out += "\n" + report.method + "," + num(report.auc) + "," + std::to_string(report.n_members) + "," +
                   std::to_string(report.n_nonmembers);
            for (const auto& [fpr, t] : report.tpr_at_fpr) out += "," + num(t);
            return out + "\n";
        case ReportFormat::RocCsv:
            out = "fpr,tpr\n";
            for (const auto& p : report.roc_points) out += num(p.fpr) + "," + num(p.tpr) + "\n";
            return out;
    }
    return out;
}

PairedScores pair_scores(const std::map<std::string, double>& a, const std::map<std::string, double>& b,
                         const std::map<std::string, Label>& labels) {
    if (a.size() != b.size())
        throw Error(ErrorKind::ExampleSetMismatch, "methods scored " + std::to_string(a.size()) + " and " +
                                                       std::to_string(b.size()) + " examples");
    PairedScores out;
    for (const auto& [id, va] : a) {
        const auto ib = b.find(id);
        if (ib == b.end()) throw Error(ErrorKind::ExampleSetMismatch, "'" + id + "' scored by only one method");
        const auto il = labels.find(id);
        if (il == labels.end()) throw Error(ErrorKind::ExampleSetMismatch, "'" + id + "' has no label");
        out.doc_ids.push_back(id);
        out.a.push_back(va);
        out.b.push_back(ib->second);
        out.member.push_back(il->second == Label::Member);
    }
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double auc_of(const std::vector<double>& values, const std::vector<bool>& member) {
    std::vector<ScoredLabel> s(values.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = {values[k], member[k]};
    return auc(s);
}

}  // namespace

Comparison compare_methods(const PairedScores& scores, std::size_t resamples, std::uint64_t seed, unsigned jobs) {
    const auto n = scores.a.size();
    if (scores.b.size() != n || scores.member.size() != n)
        throw Error(ErrorKind::ExampleSetMismatch, "paired score vectors differ in length");
    Comparison out;
    out.auc_a = auc_of(scores.a, scores.member);
    out.auc_b = auc_of(scores.b, scores.member);
    out.delta_auc = out.auc_a - out.auc_b;
    out.resamples = resamples;
    out.seed = seed;

    std::vector<std::optional<double>> deltas(resamples);
    auto run = [&](std::size_t begin, std::size_t end) {
        std::vector<double> a(n), b(n);
        std::vector<bool> m(n);
        for (std::size_t r = begin; r < end; ++r) {
            std::mt19937_64 rng(splitmix64(seed ^ splitmix64(r)));
            std::size_t members = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const auto pick = static_cast<std::size_t>(rng() % n);
                a[k] = scores.a[pick];
                b[k] = scores.b[pick];
                m[k] = scores.member[pick];
                members += m[k];
            }
            if (members == 0 || members == n) continue;
            deltas[r] = auc_of(a, m) - auc_of(b, m);
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, resamples))));
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (resamples + jobs - 1) / jobs;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(run, std::min(resamples, w * chunk), std::min(resamples, (w + 1) * chunk));
    }

    std::size_t at_or_below = 0, at_or_above = 0, valid = 0;
    for (const auto& d : deltas) {
        if (!d) {
            ++out.degenerate_resamples;
            continue;
        }
        ++valid;
        at_or_below += *d <= 0.0;
        at_or_above += *d >= 0.0;
    }
    const double tail = static_cast<double>(std::min(at_or_below, at_or_above) + 1) / static_cast<double>(valid + 1);
    out.p_value = std::min(1.0, 2.0 * tail);
    return out;
}

}  // namespace pdd
