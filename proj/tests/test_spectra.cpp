#include "doctest.h"

#include <cmath>

#include "juliaspec/spectra.hpp"

using namespace juliaspec;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(Eigen::Index(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace

TEST_CASE("greedy clustering") {
    auto cs = cluster_multiplicities(vec({0.0, 1.0, 1.0 + 1e-12, 5.0}), 1e-8);
    REQUIRE(cs.clusters.size() == 3);
    CHECK(cs.clusters[0].zero);
    CHECK(cs.clusters[1].multiplicity == 2);
    CHECK(cs.clusters[1].first == 1);
    CHECK(cs.clusters[1].last == 2);
    CHECK(cs.clusters[2].multiplicity == 1);
    CHECK(cs.near_misses.empty());
    auto nm = cluster_multiplicities(vec({1.0, 1.0 + 5e-8, 2.0}), 1e-8);
    CHECK(nm.clusters.size() == 3);
    REQUIRE(nm.near_misses.size() == 1);
    CHECK(nm.near_misses[0].index == 0);
    CHECK(cs.find(5.0, 1e-6) == 2);
    CHECK(cs.find(4.0, 1e-6) == -1);
}

TEST_CASE("orders in a synthetic geometric spectrum") {
    const double s = family_scale(3, 2);
    CHECK(s == doctest::Approx(std::pow(3.0, 1.5)));
    Eigen::VectorXd ev(6);
    ev(0) = 0.0;
    for (int j = 0; j < 5; ++j) ev(j + 1) = 7.0 * std::pow(s, j);
    auto cs = classify_orders(cluster_multiplicities(ev, 1e-8), s, 1e-8);
    for (int j = 0; j < 5; ++j) CHECK(cs.clusters[size_t(j + 1)].order == j);
    // two candidates within tolerance make the match ambiguous
    auto amb = classify_orders(cluster_multiplicities(vec({0.0, 1.0, 1.0 + 1e-7, s}), 1e-8), s, 1e-6);
    CHECK(amb.clusters.back().order == kUnclassified);
}

TEST_CASE("orders through a tower of synthetic spectra") {
    const double s = 4.0;
    std::vector<ClusterSet> levels = {cluster_multiplicities(vec({0.0, 1.0, 3.0}), 1e-8),
                                      cluster_multiplicities(vec({0.0, 1.0001, 3.0002, 4.0, 12.0}), 1e-8),
                                      cluster_multiplicities(vec({0.0, 1.0002, 3.0003, 4.0008, 16.0, 48.0}), 1e-8)};
    classify_orders(levels, s, 1e-8);
    CHECK(levels[1].clusters[3].order == 1);   // 4 = 4 * 1
    CHECK(levels[1].clusters[4].order == 1);
    CHECK(levels[1].clusters[1].order == 0);
    CHECK(levels[2].clusters[4].order == 2);   // 16 -> 4 -> 1
    CHECK(levels[2].clusters[5].order == 2);   // 48 -> 12 -> 3
    CHECK(levels[2].clusters[3].order == 0);   // 4.0008 has no partner at 1.0002
}

TEST_CASE("cubic basilica low clusters") {
    auto t = build_tower(GraphKind::family, 3, 2, 5, 1e-8, TowerVectors::none);
    const auto& cs = t.top().clusters;
    CHECK(cs.clusters[0].zero);
    CHECK(cs.clusters[1].multiplicity == 2);
    CHECK(cs.clusters[1].order == 0);
    CHECK(cs.clusters[2].multiplicity == 4);
    CHECK(cs.clusters[2].order == 1);
    CHECK(t.scale == doctest::Approx(std::pow(3.0, 1.5)).epsilon(1e-13));
}

TEST_CASE("counting function and Weyl ratio") {
    auto ev = vec({0.0, 2.0, 2.0, 5.0, 9.0});
    CHECK(counting_function(ev, 1.0) == 1);
    CHECK(counting_function(ev, 2.0) == 3);
    CHECK(counting_function(ev, 9.0) == 5);
    auto w = weyl_ratio(ev, 0.5, 20);
    REQUIRE(w.size() == 20);
    CHECK(w.front().t == doctest::Approx(2.0));
    CHECK(w.back().count == 5);
    for (size_t i = 1; i < w.size(); ++i) CHECK(w[i].count >= w[i - 1].count);
    CHECK(w[3].ratio == doctest::Approx(double(w[3].count) / std::pow(w[3].t, 0.5)));

    Eigen::VectorXd law(3000);
    law(0) = 0.0;
    for (int n = 1; n < 3000; ++n) law(n) = std::pow(double(n), 1 / 0.7);
    CHECK(weyl_exponent(law).slope == doctest::Approx(0.7).epsilon(0.01));
}

TEST_CASE("Weyl exponent of the cubic basilica") {
    auto t = build_tower(GraphKind::family, 3, 2, 6, 1e-8, TowerVectors::none);
    CHECK(std::abs(weyl_exponent(t.top().spectrum.eigenvalues).slope - 2.0 / 3) <= 0.05);
    const auto& ev = t.top().spectrum.eigenvalues;
    CHECK(counting_function(ev, ev(ev.size() - 1)) == ev.size());
}

TEST_CASE("conjectured multiplicity sequences") {
    std::vector<long> k2 = {2, 4, 8, 22, 62, 184};
    std::vector<long> k3 = {2, 4, 10, 26, 76};
    for (size_t j = 0; j < k2.size(); ++j) CHECK(conjectured_multiplicity(2, int(j)) == k2[j]);
    for (size_t j = 0; j < k3.size(); ++j) CHECK(conjectured_multiplicity(3, int(j)) == k3[j]);
}

TEST_CASE("multiplicity report") {
    auto t = build_tower(GraphKind::family, 3, 2, 6, 1e-8, TowerVectors::none);
    auto rep = check_multiplicity_conjecture(t.top().clusters, 2);
    CHECK(rep.pass);
    CHECK(rep.count("odd") == 0);
    CHECK(rep.to_json()["entries"].size() == rep.entries.size());
    CHECK(rep.table().find("multiplicity recursion: PASS") == 0);

    // synthetic: an odd cluster fails, an even excess is only flagged
    ClusterSet cs = cluster_multiplicities(vec({0, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14,
                                                15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31, 32,
                                                33, 34, 35, 36, 37, 38, 39, 40, 41, 42}),
                                           1e-8);
    auto r2 = check_multiplicity_conjecture(cs, 2);
    CHECK(r2.entries[0].status == "match");
    CHECK(r2.entries[1].status == "excess");
    CHECK(r2.entries[2].status == "odd");
    CHECK_FALSE(r2.pass);
}

TEST_CASE("counting identity at a moderate level") {
    auto t = build_tower(GraphKind::family, 3, 2, 6, 1e-8, TowerVectors::none);
    auto rep = check_counting_identity(t, 3, 2, 2);
    CHECK(rep.pass);
    REQUIRE(rep.entries.size() == 6);
    CHECK(rep.entries[0].observed == rep.entries[0].expected);   // j = 0
    CHECK(rep.entries[0].expected == 2);
    CHECK(rep.entries[1].expected == 6);
}

TEST_CASE("spectral gap table") {
    auto t = build_tower(GraphKind::family, 3, 2, 5, 1e-8, TowerVectors::none);
    auto rows = spectral_gaps(t.top().spectrum.eigenvalues, 3);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.index == ipow(3, r.n));
        CHECK(r.ratio_up * r.ratio_down == doctest::Approx(1.0));
        CHECK(r.ratio_up >= 1.0);
    }
}
