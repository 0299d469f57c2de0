#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "imbsel/error.hpp"

using namespace imbsel;

namespace {

DataError::Kind load_error(const std::string& text, const CsvSchema& schema = {}) {
    try {
        parse_csv(text, schema, "inline");
    } catch (const DataError& e) {
        return e.kind();
    }
    FAIL("expected DataError");
    return DataError::Kind::missing_file;
}

}  // namespace

TEST_CASE("parse_csv counts rows and positives") {
    auto r = parse_csv("a,b,Class\n1,2,0\n3,4,0\n5,6,1\n7,8,0\n9,10,1\n", {}, "five");
    CHECK(r.data.rows() == 5);
    CHECK(r.data.width() == 2);
    CHECK(r.data.positives() == 2);
    CHECK(r.data.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(r.data.features(4, 1) == 10.0);
}

TEST_CASE("label column can sit anywhere and be quoted") {
    auto r = parse_csv("\"Class\",x\n\"1\",0.5\n\"0\",1.5\n\"0\",2.5\n", {}, "q");
    CHECK(r.data.width() == 1);
    CHECK(r.data.labels == std::vector<int>{1, 0, 0});
    CHECK(r.data.features(2, 0) == 2.5);
}

TEST_CASE("explicit positive label and minority default") {
    CsvSchema s;
    s.label_column = "y";
    s.positive_label = "fraud";
    auto r = parse_csv("x,y\n1,fraud\n2,ok\n3,ok\n", s, "t");
    CHECK(r.data.labels == std::vector<int>{1, 0, 0});

    auto m = parse_csv("x,y\n1,a\n2,b\n3,b\n", CsvSchema{"y", ""}, "t");
    CHECK(m.data.labels == std::vector<int>{1, 0, 0});

    s.positive_label = "ok";
    auto w = parse_csv("x,y\n1,fraud\n2,ok\n3,ok\n", s, "t");
    CHECK(w.data.positives() == 2);
    CHECK_FALSE(w.warnings.empty());
}

TEST_CASE("malformed input is rejected with a specific kind") {
    CHECK(load_error("") == DataError::Kind::empty_file);
    CHECK(load_error("a,Class\n") == DataError::Kind::empty_dataset);
    CHECK(load_error("a,b\n1,0\n") == DataError::Kind::missing_label_column);
    CHECK(load_error("a,Class\nx,0\n") == DataError::Kind::non_numeric_cell);
    CHECK(load_error("a,Class\nnan,0\n") == DataError::Kind::non_finite_value);
    CHECK(load_error("a,Class\ninf,1\n") == DataError::Kind::non_finite_value);
    CHECK(load_error("a,Class\n1,0\n2\n") == DataError::Kind::ragged_row);
    CHECK(load_error("a,Class\n1,0\n2,1\n3,2\n") == DataError::Kind::bad_label);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", {}), DataError);
}

TEST_CASE("write_csv round trips exactly") {
    auto dir = testing::scratch_dir("roundtrip");
    auto d = testing::blobs(20, 5, 3, 1.0, 9);
    d.features(0, 0) = 0.1;
    d.features(1, 1) = -1e-300;
    write_csv(dir / "d.csv", d);
    auto back = load_csv(dir / "d.csv", {"Class", "1"}).data;
    CHECK(back.features == d.features);
    CHECK(back.labels == d.labels);
    CHECK(back.feature_names == d.feature_names);
}

TEST_CASE("standardizer uses population statistics") {
    auto d = testing::make_dataset(2, {2, 5, 4, 5, 6, 5}, {0, 1, 0});
    std::vector<std::string> cols{"f1", "f2"};
    auto p = fit_standardizer(d, cols);
    CHECK(p.mean[0] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(p.stddev[0] == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-15));
    CHECK(p.mean[1] == 5.0);
    CHECK(p.stddev[1] == 1.0);
    CHECK(p.constant_columns == std::vector<std::string>{"f2"});

    auto s = apply_standardizer(d, p);
    double m = 0, v = 0;
    for (std::size_t i = 0; i < 3; ++i) m += s.features(i, 0) / 3;
    for (std::size_t i = 0; i < 3; ++i) v += (s.features(i, 0) - m) * (s.features(i, 0) - m) / 3;
    CHECK(std::abs(m) < 1e-10);
    CHECK(std::abs(std::sqrt(v) - 1.0) < 1e-10);
    CHECK(s.features(0, 1) == 0.0);
}

TEST_CASE("standardizer edge cases") {
    auto d = testing::make_dataset(2, {1, 2, 3, 4}, {0, 1});
    auto empty = fit_standardizer(d, {});
    CHECK(apply_standardizer(d, empty).features == d.features);

    StandardizationParams identity{{"f1"}, {0.0}, {1.0}, {}};
    CHECK(apply_standardizer(d, identity).features == d.features);

    std::vector<std::string> bad{"nope"};
    CHECK_THROWS_AS(fit_standardizer(d, bad), DataError);

    // Test rows scaled with train parameters need not be centred.
    auto train = testing::make_dataset(1, {0, 2}, {0, 1});
    auto test = testing::make_dataset(1, {10, 12}, {0, 1});
    std::vector<std::string> f1{"f1"};
    auto t = apply_standardizer(test, fit_standardizer(train, f1));
    CHECK(t.features(0, 0) == 9.0);
}

TEST_CASE("stratified split: exact proportions and determinism") {
    auto d = testing::make_dataset(1, std::vector<double>(10, 0.0), {1, 1, 1, 1, 1, 0, 0, 0, 0, 0});
    auto s = stratified_split(d, 0.2, 5);
    REQUIRE(s.test_idx.size() == 2);
    int pos = 0;
    for (auto i : s.test_idx) pos += d.labels[i];
    CHECK(pos == 1);
    auto again = stratified_split(d, 0.2, 5);
    CHECK(again.test_idx == s.test_idx);
    CHECK(again.train_idx == s.train_idx);
}

TEST_CASE("stratified split of primary-sized label vector") {
    // Counts only; features are irrelevant to the split.
    const std::size_t n = 284807, pos = 492;
    Dataset d;
    d.features = Matrix(n, 1);
    d.labels.assign(n, 0);
    for (std::size_t i = 0; i < pos; ++i) d.labels[i * 577] = 1;
    auto s = stratified_split(d, 0.2, 42);
    std::size_t test_pos = 0;
    for (auto i : s.test_idx) test_pos += static_cast<std::size_t>(d.labels[i]);
    // Oracle: per-class round(0.2 * count).
    CHECK(static_cast<long>(s.test_idx.size()) - 56962 <= 1);
    CHECK(static_cast<long>(s.test_idx.size()) - 56962 >= -1);
    CHECK(test_pos == 98);
}

TEST_CASE("stratified split property: partition and stratification") {
    Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 10 + uniform_index(rng, 300);
        const std::size_t npos = 2 + uniform_index(rng, n / 2 - 1);
        std::vector<int> labels(n, 0);
        std::fill(labels.begin(), labels.begin() + static_cast<long>(npos), 1);
        shuffle(std::span(labels), rng);
        Dataset d;
        d.features = Matrix(n, 1);
        d.labels = labels;
        const double frac = 0.1 + 0.5 * uniform01(rng);
        SplitIndices s;
        try {
            s = stratified_split(d, frac, rng());
        } catch (const DataError&) {
            continue;
        }
        std::vector<std::size_t> all = s.train_idx;
        all.insert(all.end(), s.test_idx.begin(), s.test_idx.end());
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> expect(n);
        std::iota(expect.begin(), expect.end(), std::size_t{0});
        REQUIRE(all == expect);
        CHECK(std::is_sorted(s.test_idx.begin(), s.test_idx.end()));
        std::size_t tp = 0;
        for (auto i : s.test_idx) tp += static_cast<std::size_t>(labels[i]);
        const double t = static_cast<double>(s.test_idx.size());
        CHECK(std::abs(tp / t - static_cast<double>(npos) / static_cast<double>(n)) <= 1.0 / t + 1e-12);
    }
}

TEST_CASE("stratified split rejects a class that cannot cover both sides") {
    auto d = testing::make_dataset(1, std::vector<double>(6, 0.0), {1, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(stratified_split(d, 0.2, 1), DataError);
}

namespace {

void check_folds(std::size_t n, std::size_t npos, int k, std::vector<std::size_t> sizes,
                 std::vector<std::size_t> pos_counts) {
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < npos; ++i) labels[i * (n / npos)] = 1;
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    auto f = stratified_folds(rows, labels, k, 77);
    REQUIRE(f.size() == n);
    std::vector<std::size_t> sz(static_cast<std::size_t>(k)), pc(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        ++sz[static_cast<std::size_t>(f[i])];
        pc[static_cast<std::size_t>(f[i])] += static_cast<std::size_t>(labels[i]);
    }
    std::sort(sz.rbegin(), sz.rend());
    std::sort(pc.rbegin(), pc.rend());
    CHECK(sz == sizes);
    CHECK(pc == pos_counts);
}

}  // namespace

TEST_CASE("stratified folds sizes") {
    check_folds(100, 10, 5, {20, 20, 20, 20, 20}, {2, 2, 2, 2, 2});
    check_folds(103, 11, 5, {21, 21, 21, 20, 20}, {3, 2, 2, 2, 2});
    check_folds(4, 2, 2, {2, 2}, {1, 1});
}

TEST_CASE("stratified folds reject a class smaller than the fold count") {
    std::vector<int> labels{1, 1, 0, 0, 0, 0, 0};
    std::vector<std::size_t> rows{0, 1, 2, 3, 4, 5, 6};
    CHECK_THROWS_AS(stratified_folds(rows, labels, 3, 1), DataError);
}

TEST_CASE("subset, select_columns and checksum") {
    auto d = testing::make_dataset(3, {1, 2, 3, 4, 5, 6}, {0, 1});
    std::vector<std::size_t> idx{1};
    auto s = subset(d, idx);
    CHECK(s.labels == std::vector<int>{1});
    CHECK(s.features(0, 2) == 6);
    std::vector<std::string> cols{"f3", "f1"};
    auto c = select_columns(d, cols);
    CHECK(c.feature_names == cols);
    CHECK(c.features(1, 0) == 6);
    CHECK(c.features(1, 1) == 4);
    CHECK(checksum(d) == checksum(testing::make_dataset(3, {1, 2, 3, 4, 5, 6}, {0, 1})));
    CHECK(checksum(d) != checksum(testing::make_dataset(3, {1, 2, 3, 4, 5, 7}, {0, 1})));
    CHECK(round_half_away(2.5) == 3);
    CHECK(round_half_away(-2.5) == -3);
    CHECK(round_half_away(0.49) == 0);
}
