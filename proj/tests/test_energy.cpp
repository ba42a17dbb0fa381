#include "doctest.h"

#include <cmath>
#include <random>

#include "juliaspec/energy.hpp"
#include "oracles.hpp"

using namespace juliaspec;
using oracle::quadratic_minimizer;
using oracle::random_function;

namespace {

std::vector<LevelGraph> tower(GraphKind kind, int k, int m) {
    std::vector<LevelGraph> gs;
    gs.push_back(kind == GraphKind::family ? build_family_graph(3, k, 1) : build_mating_graph(1));
    for (int j = 2; j <= m; ++j) gs.push_back(subdivide(gs.back()));
    return gs;
}

}  // namespace

TEST_CASE("subdivision matrices") {
    auto s = family_subdivision_matrix(3, 2);
    CHECK(s.M(0, 1) == 3.0);
    CHECK(s.M(1, 0) == 1.0);
    for (int k : {2, 3, 4}) {
        auto f = family_subdivision_matrix(3, k);
        Eigen::MatrixXd P = Eigen::MatrixXd::Identity(k, k);
        for (int i = 0; i < k; ++i) P = P * f.M;
        CHECK((P - double(ipow(3, k - 1)) * Eigen::MatrixXd::Identity(k, k)).norm() == 0.0);
    }
    auto mt = mating_subdivision_matrix();
    CHECK((mt.M * mt.M * mt.M - 4.0 * Eigen::Matrix3d::Identity()).norm() == 0.0);
    CHECK(mt.first_type == 1);
}

TEST_CASE("renormalization weights") {
    auto w = renormalization_weights(family_subdivision_matrix(3, 2));
    CHECK(w.r == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(w.b(0) == 1.0);
    CHECK(w.b(1) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
    auto m = renormalization_weights(mating_subdivision_matrix());
    CHECK(m.r == doctest::Approx(std::cbrt(4.0)).epsilon(1e-14));
    CHECK(m.weight(2) == doctest::Approx(std::cbrt(4.0)).epsilon(1e-13));
    CHECK(m.weight(3) == doctest::Approx(std::cbrt(16.0)).epsilon(1e-13));
    for (int k : {2, 3, 4, 5}) {
        auto f = renormalization_weights(family_subdivision_matrix(3, k));
        CHECK(std::pow(f.r, k) == doctest::Approx(double(ipow(3, k - 1))).epsilon(1e-12));
        // b_n = r^n, not r^{n/k}
        for (int n = 0; n < k; ++n) CHECK(f.b(n) == doctest::Approx(std::pow(f.r, n)).epsilon(1e-12));
    }
}

TEST_CASE("typed energy examples") {
    auto g = build_family_graph(3, 2, 1);
    Eigen::VectorXd one = Eigen::VectorXd::Ones(3);
    CHECK(typed_energy(one, g, 0) == 0.0);
    CHECK(typed_energy(one, g, 1) == 0.0);
    Eigen::VectorXd ind = Eigen::VectorXd::Zero(3);
    ind(1) = 1.0;
    CHECK(typed_energy(ind, g, 0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(typed_energy(ind, g, 1) == 0.0);
    CHECK_THROWS_AS(typed_energy(Eigen::VectorXd::Zero(4), g, 0), std::invalid_argument);
    CHECK(total_energy(one, g, weights_for(g), true) == 0.0);
}

TEST_CASE("extension multiplies the weighted energy by r") {
    std::mt19937_64 rng(11);
    for (auto [kind, k] : std::vector<std::pair<GraphKind, int>>{
             {GraphKind::family, 2}, {GraphKind::family, 3}, {GraphKind::mating, 3}}) {
        auto gs = tower(kind, k, 5);
        auto w = weights_for(gs[0]);
        for (int m = 2; m <= 5; ++m) {
            const auto &g0 = gs[size_t(m - 2)], &g1 = gs[size_t(m - 1)];
            for (int t = 0; t < 100; ++t) {
                auto u = random_function(g0.num_classes(), rng);
                auto ext = harmonic_extension(u, g0, g1);
                double e0 = total_energy(u, g0, w, false);
                double e1 = total_energy(ext, g1, w, false);
                REQUIRE(std::abs(e1 - w.r * e0) <= 1e-10 * e0);
                double r0 = total_energy(u, g0, w, true);
                REQUIRE(std::abs(total_energy(ext, g1, w, true) - r0) <= 1e-10 * r0);
            }
        }
    }
}

TEST_CASE("interpolation minimizes energy for any positive weights") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(0.1, 10.0);
    for (auto [kind, k] : std::vector<std::pair<GraphKind, int>>{
             {GraphKind::family, 2}, {GraphKind::family, 3}, {GraphKind::mating, 3}}) {
        auto gs = tower(kind, k, 5);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> wt(5);
            for (auto& x : wt) x = pos(rng);
            for (int m = 2; m <= 5; ++m) {
                const auto &g0 = gs[size_t(m - 2)], &g1 = gs[size_t(m - 1)];
                auto u = random_function(g0.num_classes(), rng);
                auto ext = harmonic_extension(u, g0, g1);
                auto best = quadratic_minimizer(u, g0, g1, wt);
                double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
                REQUIRE((ext - best).cwiseAbs().maxCoeff() <= 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("any other extension has at least as much energy") {
    std::mt19937_64 rng(3);
    auto gs = tower(GraphKind::family, 3, 4);
    auto w = weights_for(gs[0]);
    auto u = random_function(gs[2].num_classes(), rng);
    auto ext = harmonic_extension(u, gs[2], gs[3]);
    double e = total_energy(ext, gs[3], w, true);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd v = ext + 0.1 * random_function(gs[3].num_classes(), rng);
        for (size_t i = 0; i < gs[2].points.size(); ++i)
            v(gs[3].class_of(gs[2].points[i] * 3)) = u(gs[2].point_class[i]);
        CHECK(total_energy(v, gs[3], w, true) >= e * (1 - 1e-12));
    }
}

TEST_CASE("pulling back by the dynamics multiplies each typed energy by p squared") {
    std::mt19937_64 rng(17);
    for (auto [kind, k] : std::vector<std::pair<GraphKind, int>>{
             {GraphKind::family, 2}, {GraphKind::family, 3}, {GraphKind::mating, 3}}) {
        auto gs = tower(kind, k, 5);
        auto w = weights_for(gs[0]);
        const double p = gs[0].p;
        for (int m = 2; m <= 5; ++m) {
            const auto &g0 = gs[size_t(m - 2)], &g1 = gs[size_t(m - 1)];
            for (int t = 0; t < 20; ++t) {
                auto u = random_function(g0.num_classes(), rng);
                auto v = compose_with_map(u, g0, g1);
                for (int n = g0.min_type(); n <= g0.max_type(); ++n) {
                    double e0 = typed_energy(u, g0, n);
                    REQUIRE(std::abs(typed_energy(v, g1, n) - p * p * e0) <= 1e-10 * std::max(e0, 1e-300));
                }
                double r0 = total_energy(u, g0, w, true);
                CHECK(std::abs(total_energy(v, g1, w, true) - eigenvalue_scale(g0) * r0) <= 1e-10 * r0);
            }
        }
    }
    auto g = build_family_graph(3, 2, 2);
    auto c = compose_with_map(Eigen::VectorXd::Constant(3, 2.5), build_family_graph(3, 2, 1), g);
    CHECK((c.array() == 2.5).all());
}

TEST_CASE("eigenvalue scale factors") {
    CHECK(eigenvalue_scale(build_family_graph(3, 2, 1)) == doctest::Approx(std::pow(3.0, 1.5)).epsilon(1e-13));
    CHECK(eigenvalue_scale(build_family_graph(3, 3, 1)) == doctest::Approx(std::pow(3.0, 4.0 / 3)).epsilon(1e-13));
    CHECK(eigenvalue_scale(build_mating_graph(1)) == doctest::Approx(std::pow(4.0, 2.0 / 3)).epsilon(1e-13));
}
