#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "imbsel/error.hpp"
#include "imbsel/sampling.hpp"
#include "sampling_oracles.hpp"

using namespace imbsel;

namespace {

Matrix rows_with_label(const Dataset& d, int label) {
    Matrix m;
    for (std::size_t i = 0; i < d.rows(); ++i)
        if (d.labels[i] == label) m.append_row(d.features.row(i));
    return m;
}

SamplerSpec spec_of(SamplerKind k) {
    SamplerSpec s;
    s.kind = k;
    return s;
}

// 10 negatives around (10,10), 2 positives at (0,0) and (2,0).
Dataset ten_two() {
    std::vector<double> v;
    for (int i = 0; i < 10; ++i) {
        v.push_back(10 + i * 0.1);
        v.push_back(10 - i * 0.1);
    }
    v.insert(v.end(), {0, 0, 2, 0});
    std::vector<int> y(10, 0);
    y.push_back(1);
    y.push_back(1);
    return testing::make_dataset(2, v, y);
}

}  // namespace

TEST_CASE("none is the identity") {
    auto d = ten_two();
    auto r = resample(spec_of(SamplerKind::none), d, 1);
    CHECK(r.features == d.features);
    CHECK(r.labels == d.labels);
}

TEST_CASE("random_under balances 10/2 to 2/2") {
    auto d = ten_two();
    auto r = resample(spec_of(SamplerKind::random_under), d, 3);
    CHECK(r.positives() == 2);
    CHECK(r.negatives() == 2);
    CHECK(testing::rows_subset(r.features, d.features));
    CHECK(rows_with_label(r, 1) == rows_with_label(d, 1));
}

TEST_CASE("random_under with replacement is a multiset of input rows") {
    auto d = testing::blobs(50, 5, 3, 2.0, 4);
    auto s = spec_of(SamplerKind::random_under);
    s.with_replacement = true;
    auto r = resample(s, d, 8);
    CHECK(r.negatives() == 5);
    CHECK(testing::rows_subset(r.features, d.features));
}

TEST_CASE("smote on two minority points stays on their segment") {
    auto d = ten_two();
    auto s = spec_of(SamplerKind::smote);
    s.k_neighbors = 1;
    auto r = resample(s, d, 5);
    CHECK(r.positives() == 10);
    CHECK(r.negatives() == 10);
    const auto pos = rows_with_label(r, 1);
    for (std::size_t i = 0; i < pos.rows(); ++i) {
        CHECK(pos(i, 1) == 0.0);
        CHECK(pos(i, 0) >= 0.0);
        CHECK(pos(i, 0) <= 2.0);
    }
}

TEST_CASE("smote_synthesize direct cases") {
    Matrix m(2, 2, {0, 0, 2, 0});
    auto z = smote_synthesize(m, 1, 3, 7);
    REQUIRE(z.rows() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(z(i, 1) == 0.0);
        CHECK(z(i, 0) >= 0.0);
        CHECK(z(i, 0) <= 2.0);
    }
    CHECK(smote_synthesize(m, 1, 0, 7).rows() == 0);
    CHECK_THROWS(smote_synthesize(m, 1, -1, 7));

    Matrix dup(3, 2, {1.5, -2, 1.5, -2, 1.5, -2});
    auto zd = smote_synthesize(dup, 2, 5, 1);
    for (std::size_t i = 0; i < zd.rows(); ++i) {
        CHECK(zd(i, 0) == 1.5);
        CHECK(zd(i, 1) == -2.0);
    }
    CHECK(smote_synthesize(m, 1, 4, 99) == smote_synthesize(m, 1, 4, 99));
}

TEST_CASE("smote needs more minority rows than neighbours") {
    auto d = ten_two();
    auto s = spec_of(SamplerKind::smote);
    s.k_neighbors = 2;
    CHECK_THROWS(resample(s, d, 1));
}

TEST_CASE("adasyn counts and weighting") {
    auto d = ten_two();
    auto s = spec_of(SamplerKind::adasyn);
    s.k_neighbors = 1;
    auto r = resample(s, d, 2);
    CHECK(r.positives() == 10);
    CHECK(r.rows() == 20);

    // Point A at (0,0) has a majority point as nearest neighbour; point B at
    // (50,50) is nearest to its minority partner C at (50,51).
    Dataset h = testing::make_dataset(2, {0.1, 0, 30, 30, 31, 30, 30, 31, 0, 0, 50, 50, 50, 51},
                                      {0, 0, 0, 0, 1, 1, 1});
    // Oracle: hardness with k=1: A -> 1 (nearest (0.1,0) is majority), B -> 0, C -> 0.
    auto alloc = adasyn_allocation(h, 1, 1.0);
    REQUIRE(alloc.size() == 3);
    CHECK(alloc[0] == 1);
    CHECK(alloc[1] == 0);
    CHECK(alloc[2] == 0);
}

TEST_CASE("adasyn falls back to uniform weights") {
    // Minority far from majority: every hardness is zero.
    Dataset d = testing::make_dataset(1, {0, 0.1, 0.2, 0.3, 0.4, 0.5, 100, 101, 102},
                                      {0, 0, 0, 0, 0, 0, 1, 1, 1});
    auto alloc = adasyn_allocation(d, 1, 1.0);
    CHECK(std::accumulate(alloc.begin(), alloc.end(), 0LL) == 3);
    for (auto a : alloc) CHECK(a == 1);
}

TEST_CASE("iht keeps the easiest majority rows") {
    // Separable: negatives on a line far left, a few close to positives.
    std::vector<double> v;
    std::vector<int> y;
    for (int i = 0; i < 100; ++i) {
        v.push_back(i < 90 ? -10.0 - i * 0.01 : 0.9 + (i - 90) * 0.01);
        v.push_back(0.0);
        y.push_back(0);
    }
    for (int i = 0; i < 10; ++i) {
        v.push_back(1.0 + i * 0.01);
        v.push_back(0.0);
        y.push_back(1);
    }
    auto d = testing::make_dataset(2, v, y);
    auto r = iht_undersample(d, 1.0, 5, 17, 20);
    CHECK(r.positives() == 10);
    CHECK(r.negatives() == 10);
    CHECK(testing::rows_subset(r.features, d.features));
    for (std::size_t i = 0; i < r.rows(); ++i)
        if (r.labels[i] == 0) CHECK(r.features(i, 0) < -5.0);
    CHECK(iht_undersample(d, 1.0, 5, 17, 20).features == r.features);
}

TEST_CASE("target arithmetic") {
    CHECK(undersample_target(10, 1.0) == 10);
    CHECK(undersample_target(10, 0.5) == 20);
    CHECK(oversample_target(100, 1.0) == 100);
    CHECK(oversample_target(100, 0.25) == 25);
}

TEST_CASE("spec validation") {
    auto s = spec_of(SamplerKind::smote);
    s.target_ratio = 1.5;
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.target_ratio = 0;
    CHECK_THROWS_AS(validate(s), ConfigError);
    s = spec_of(SamplerKind::smote);
    s.k_neighbors = 0;
    CHECK_THROWS_AS(validate(s), ConfigError);
    s = spec_of(SamplerKind::instance_hardness_threshold);
    s.iht_folds = 1;
    CHECK_THROWS_AS(validate(s), ConfigError);
    CHECK(sampler_kind_from_string("adasyn") == SamplerKind::adasyn);
    CHECK(display_name(SamplerKind::instance_hardness_threshold) == "U:I");
    CHECK_THROWS(sampler_kind_from_string("tomek"));
}

TEST_CASE("oversampler below current ratio is rejected") {
    auto d = testing::blobs(20, 10, 2, 2.0, 3);
    auto s = spec_of(SamplerKind::random_over);
    s.target_ratio = 0.2;
    CHECK_THROWS(resample(s, d, 1));
}

TEST_CASE("randomised sampler invariants") {
    Rng rng(31337);
    const SamplerKind kinds[] = {SamplerKind::random_under, SamplerKind::instance_hardness_threshold,
                                 SamplerKind::random_over, SamplerKind::smote, SamplerKind::adasyn};
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n_pos = 6 + uniform_index(rng, 10);
        const std::size_t n_neg = n_pos * 2 + uniform_index(rng, 80);
        const std::size_t p = 1 + uniform_index(rng, 4);
        auto d = testing::blobs(n_neg, n_pos, p, 1.5, rng());
        for (auto kind : kinds) {
            auto s = spec_of(kind);
            s.target_ratio = 0.6 + 0.4 * uniform01(rng);
            s.k_neighbors = 1 + static_cast<int>(uniform_index(rng, 4));
            s.iht_trees = 10;
            s.iht_folds = 3;
            auto r = resample(s, d, rng());
            const double ratio = static_cast<double>(r.positives()) / static_cast<double>(r.negatives());
            CHECK(std::abs(ratio - s.target_ratio) <= 1.0 / static_cast<double>(r.negatives()) + 1e-12);
            const auto pos_in = rows_with_label(d, 1);
            const auto neg_out = rows_with_label(r, 0);
            const auto pos_out = rows_with_label(r, 1);
            if (kind == SamplerKind::random_under || kind == SamplerKind::instance_hardness_threshold) {
                CHECK(testing::rows_subset(r.features, d.features));
                CHECK(pos_out == pos_in);
            } else {
                CHECK(neg_out == rows_with_label(d, 0));
                if (kind == SamplerKind::random_over) CHECK(testing::rows_subset(pos_out, pos_in));
                else
                    for (std::size_t i = 0; i < pos_out.rows(); ++i)
                        CHECK(testing::nearest_segment(pos_out.row(i), pos_in) < 1e-9);
            }
        }
    }
}
