#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "pdd/error.hpp"
#include "pdd/eval.hpp"

using namespace pdd;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = PDD_FIXTURE_DIR;

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Io;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<ScoredLabel> labeled(const std::vector<double>& members, const std::vector<double>& non_members) {
    std::vector<ScoredLabel> out;
    for (double v : members) out.push_back({v, true});
    for (double v : non_members) out.push_back({v, false});
    return out;
}

// Random instance with a good share of ties.
void random_instance(std::mt19937_64& rng, std::vector<double>& values, std::vector<bool>& member) {
    const auto n = 2 + rng() % 199;
    values.resize(n);
    member.resize(n);
    const bool coarse = rng() % 2;
    for (std::size_t k = 0; k < n; ++k) {
        member[k] = rng() % 2;
        values[k] = coarse ? static_cast<double>(rng() % 10) : std::ldexp(static_cast<double>(rng() >> 11), -53);
        if (member[k] && rng() % 3 == 0) values[k] += 0.5;
    }
    member[0] = true;
    member[1] = false;
}

std::vector<ScoredLabel> zip(const std::vector<double>& values, const std::vector<bool>& member) {
    std::vector<ScoredLabel> s(values.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = {values[k], member[k]};
    return s;
}

}  // namespace

TEST_CASE("auc and tpr on a hand example") {
    auto s = labeled({0.9, 0.8, 0.2}, {0.7, 0.1});
    CHECK(auc(s) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(tpr_at_fpr(s, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(tpr_at_fpr(s, 0.5) == 1.0);

    auto perfect = labeled({0.9, 0.8}, {0.1, 0.2});
    CHECK(auc(perfect) == 1.0);
    CHECK(tpr_at_fpr(perfect, 0.05) == 1.0);

    auto ties = labeled({0.5}, {0.5});
    CHECK(auc(ties) == 0.5);
}

TEST_CASE("single-class labels are degenerate") {
    auto s = labeled({0.9, 0.8}, {});
    CHECK(kind_of([&] { auc(s); }) == ErrorKind::DegenerateLabels);
    CHECK(kind_of([&] { tpr_at_fpr(s); }) == ErrorKind::DegenerateLabels);
    CHECK(kind_of([&] { roc_curve(s); }) == ErrorKind::DegenerateLabels);
    CHECK(kind_of([&] { auc(labeled({}, {0.1})); }) == ErrorKind::DegenerateLabels);
}

TEST_CASE("metrics match brute force on random instances") {
    std::mt19937_64 rng(51);
    std::vector<double> values;
    std::vector<bool> member;
    for (int t = 0; t < 500; ++t) {
        random_instance(rng, values, member);
        const auto s = zip(values, member);
        CHECK(std::abs(auc(s) - oracle::pairwise_auc(values, member)) <= 1e-12);
        for (double target : {0.0, 0.01, 0.05, 0.1, 0.5, 1.0})
            CHECK(std::abs(tpr_at_fpr(s, target) - oracle::enumerate_tpr(values, member, target)) <= 1e-12);
    }
}

TEST_CASE("auc invariances and roc monotonicity") {
    std::mt19937_64 rng(61);
    std::vector<double> values;
    std::vector<bool> member;
    for (int t = 0; t < 300; ++t) {
        random_instance(rng, values, member);
        const auto s = zip(values, member);
        const double base = auc(s);
        for (auto f : {+[](double v) { return 2 * v; }, +[](double v) { return v + 7; },
                       +[](double v) { return std::exp(v); }}) {
            auto moved = s;
            for (auto& x : moved) x.value = f(x.value);
            CHECK(auc(moved) == base);
        }
        // negation: complement up to tie credit, exact when tie-free
        auto neg = s;
        for (auto& x : neg) x.value = -x.value;
        std::set<double> distinct(values.begin(), values.end());
        if (distinct.size() == values.size()) CHECK(std::abs(base + auc(neg) - 1.0) <= 1e-12);

        double prev = -1.0;
        for (double target : {0.0, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0}) {
            const double tpr = tpr_at_fpr(s, target);
            CHECK(tpr >= prev);
            prev = tpr;
        }

        const auto roc = roc_curve(s);
        CHECK(roc.front() == RocPoint{0, 0});
        CHECK(roc.back() == RocPoint{1, 1});
        for (std::size_t k = 1; k < roc.size(); ++k) {
            CHECK(roc[k].fpr >= roc[k - 1].fpr);
            CHECK(roc[k].tpr >= roc[k - 1].tpr);
        }
        CHECK(std::abs(trapezoid_area(roc) - base) <= 1e-12);
    }
}

TEST_CASE("report formats") {
    auto perfect = evaluate("perfect", labeled({0.9}, {0.1}));
    CHECK(emit_report(perfect, ReportFormat::RocCsv) == "fpr,tpr\n0,0\n0,1\n1,1\n");

    auto r = evaluate("fixture", labeled({0.9, 0.8, 0.2}, {0.7, 0.1}));
    CHECK(r.n_members == 3);
    CHECK(r.n_nonmembers == 2);
    CHECK(emit_report(r, ReportFormat::Csv) == slurp(kFixtures / "report_golden.csv"));
    CHECK(emit_report(r, ReportFormat::RocCsv) == slurp(kFixtures / "report_golden.roc.csv"));

    std::vector<double> targets = {0.01, 0.05, 0.1};
    auto multi = evaluate("multi", labeled({0.9, 0.8, 0.2, 0.3}, {0.7, 0.1, 0.15}), targets);
    CHECK(report_from_json(nlohmann::json::parse(emit_report(multi, ReportFormat::Json))) == multi);
    CHECK(report_from_json(report_to_json(r)) == r);
}

TEST_CASE("benchmark loading") {
    const auto path = fs::temp_directory_path() / "pdd_bench.jsonl";
    std::vector<LabeledExample> ex = {{"a", "x y", Label::Member, "s", 2},
                                      {"b", "y z", Label::NonMember, "s", std::nullopt},
                                      {"c", "z", Label::Member, "s", 1},
                                      {"d", "w", Label::NonMember, "s", 1}};
    write_benchmark(path, ex);
    auto b = load_benchmark(path);
    CHECK(b.examples == ex);
    CHECK(b.members == 2);
    CHECK(b.non_members == 2);

    std::ofstream(path) << R"({"doc_id":"a","text":"x","source":"s","length":1})" << "\n";
    CHECK(kind_of([&] { load_benchmark(path); }) == ErrorKind::SchemaError);
    std::ofstream(path) << R"({"doc_id":"a","text":"x","label":2})" << "\n";
    CHECK(kind_of([&] { load_benchmark(path); }) == ErrorKind::SchemaError);
    fs::remove(path);

    auto w = load_benchmark(kFixtures / "wikimia_sample.jsonl", BenchmarkFormat::WikiMia, "WikiMIA");
    REQUIRE(w.examples.size() == 2);
    CHECK(w.examples[0].doc_id == "WikiMIA-1");
    CHECK(w.examples[0].text == "The 2023 Turkey–Syria earthquake struck southern Turkey.");
    CHECK(w.examples[0].label == Label::NonMember);
    CHECK(w.examples[1].label == Label::Member);
    CHECK(w.examples[1].source == "WikiMIA");
    CHECK(w.members == 1);
}

TEST_CASE("paired bootstrap") {
    // 50 members, 50 non-members; A separates perfectly, B is constant.
    std::map<std::string, double> a, b;
    std::map<std::string, Label> labels;
    for (int k = 0; k < 100; ++k) {
        const auto id = "d" + std::to_string(k);
        const bool m = k < 50;
        a[id] = m ? 1.0 + k : -1.0 - k;
        b[id] = 0.0;
        labels[id] = m ? Label::Member : Label::NonMember;
    }
    auto paired = pair_scores(a, b, labels);
    auto c = compare_methods(paired, 1000, 42);
    CHECK(c.auc_a == 1.0);
    CHECK(c.auc_b == 0.5);
    CHECK(c.delta_auc == 0.5);
    CHECK(c.degenerate_resamples == 0);
    CHECK(c.p_value < 0.05);
    CHECK(c.p_value == doctest::Approx(2.0 / 1001.0));

    // thread count does not change the outcome
    auto c8 = compare_methods(paired, 1000, 42, 8);
    CHECK(c8.p_value == c.p_value);

    // a method compared with itself is indistinguishable
    auto self = compare_methods(pair_scores(a, a, labels), 200, 7);
    CHECK(self.p_value == 1.0);

    auto missing = b;
    missing.erase("d3");
    missing["zz"] = 0.0;
    CHECK(kind_of([&] { pair_scores(a, missing, labels); }) == ErrorKind::ExampleSetMismatch);
}
