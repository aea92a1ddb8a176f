#include <doctest.h>

#include "../support.hpp"
#include "colsafe/bucket_index.hpp"
#include "colsafe/errors.hpp"
#include "colsafe/estimator.hpp"
#include "colsafe/grid.hpp"

#include <set>

using namespace colsafe;

TEST_CASE("regular grid is row-major with the last axis fastest") {
    auto g = ParameterGrid::regular({Axis{0.0, 1.0, 3}, Axis{-1.0, 1.0, 2}});
    CHECK(g.dim() == 2);
    CHECK(g.size() == 6);
    CHECK(g.point(0)[0] == 0.0);
    CHECK(g.point(0)[1] == -1.0);
    CHECK(g.point(1)[1] == 1.0);
    CHECK(g.point(2)[0] == 0.5);
    CHECK(g.point(5)[0] == 1.0);
    const auto mi = g.multi_index(5);
    CHECK(mi == std::vector<std::size_t>{2, 1});
    CHECK(g.flat_index(mi) == 5);
}

TEST_CASE("index and coordinate mapping is a bijection") {
    auto g = ParameterGrid::regular({Axis{-1.0, 1.0, 7}, Axis{0.0, 2.0, 5}, Axis{0.0, 1.0, 3}});
    std::set<std::vector<double>> seen;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto p = g.point(k);
        seen.insert(std::vector<double>(p.begin(), p.end()));
        CHECK(g.find(p) == k);
        CHECK(g.flat_index(g.multi_index(k)) == k);
    }
    CHECK(seen.size() == g.size());
}

TEST_CASE("point clouds reject duplicates and bad shapes") {
    CHECK_THROWS_AS(ParameterGrid::from_points(2, {0.0, 0.0, 0.0, 0.0}), ConfigError);
    CHECK_THROWS(ParameterGrid::from_points(2, {0.0, 0.0, 1.0}));
    auto g = ParameterGrid::from_points(1, {0.3, -0.2});
    CHECK(g.size() == 2);
    CHECK(g.distance(0, 1) == doctest::Approx(0.5));
    CHECK_FALSE(g.find(std::vector<double>{0.1}).has_value());
}

TEST_CASE("distance rejects mismatched dimensions") {
    const std::vector<double> a{0.0, 0.0};
    const std::vector<double> b{1.0};
    CHECK_THROWS_AS(distance(a, b), DimensionError);
}

TEST_CASE("grid sets") {
    GridSet a(10);
    a.insert(1);
    a.insert(3);
    a.insert(3);
    CHECK(a.count() == 2);
    GridSet b(10);
    b.insert(3);
    CHECK(b.is_subset_of(a));
    CHECK_FALSE(a.is_subset_of(b));
    CHECK(a.united(b) == a);
    b.erase(3);
    CHECK(b.empty());
    CHECK(a.indices() == std::vector<std::size_t>{1, 3});
    CHECK(a.to_hex() == "a00");
}

TEST_CASE("bucket index neighbor queries equal a linear scan") {
    support::Rng rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = 1 + rng.index(3);
        const double radius = rng.uniform(0.05, 0.5);
        SampleStore store(dim, {1}, radius);
        const std::size_t n = rng.index(60);
        for (std::size_t t = 0; t < n; ++t) {
            std::vector<double> p(dim);
            for (auto& x : p) x = rng.uniform(-1.0, 1.0);
            store.add_sample(p, Measurement{{{0.0}}});
        }
        std::vector<double> q(dim);
        for (auto& x : q) x = rng.uniform(-1.0, 1.0);
        if (n > 0 && rng.coin(0.3)) {
            // Put the query exactly one radius away from a stored sample.
            const auto s = store.point(rng.index(n));
            for (std::size_t k = 0; k < dim; ++k) q[k] = s[k];
            q[0] += radius;
        }
        std::vector<std::size_t> expected;
        for (std::size_t t = 0; t < n; ++t) {
            if (distance(q, store.point(t)) <= radius) expected.push_back(t);
        }
        REQUIRE(store.neighbors(q, radius) == expected);
        CHECK(store.last_buckets_examined() == static_cast<std::size_t>(std::pow(3, dim)));
    }
}

TEST_CASE("neighbors: empty store and the closed boundary") {
    SampleStore store(1, {1}, 0.5);
    CHECK(store.neighbors(std::vector<double>{0.0}, 0.5).empty());
    store.add_sample(std::vector<double>{0.5}, Measurement{{{1.0}}});
    CHECK(store.neighbors(std::vector<double>{0.0}, 0.5) == std::vector<std::size_t>{0});
    CHECK(store.neighbors(std::vector<double>{0.5}, 0.5) == std::vector<std::size_t>{0});
}

TEST_CASE("every sample sits in exactly one bucket") {
    BucketIndex index(2, 0.25);
    support::Rng rng(5);
    std::vector<std::vector<double>> pts;
    for (std::size_t id = 0; id < 200; ++id) {
        pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        index.insert(id, pts.back());
    }
    std::size_t total = 0;
    for (std::size_t id = 0; id < pts.size(); ++id) {
        const auto* b = index.bucket(index.cell_of(pts[id]));
        REQUIRE(b != nullptr);
        CHECK(std::count(b->begin(), b->end(), id) == 1);
    }
    std::set<CellKey> keys;
    for (const auto& p : pts) keys.insert(index.cell_of(p));
    for (const auto& k : keys) total += index.bucket(k)->size();
    CHECK(total == pts.size());
}
