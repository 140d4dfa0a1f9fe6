// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "troprelu/lp.hpp"
#include "troprelu/spec_check.hpp"

using namespace troprelu;

namespace {

const Box kUnit = Box::uniform(2, -1, 1);

LinearAssertion p1() { return {"P1", {0, 0}, {-1, 1}, 0, std::nullopt}; }

LinearAssertion p2() { return {"P2", {0, 0}, {-1, 0}, 0.5, Box({{-0.25, 0.25}, {-1, 1}})}; }

std::vector<LinearConstraint> to_rows(const std::vector<oracle::Halfspace>& hs) {
    std::vector<LinearConstraint> rows;
    for (const auto& h : hs) {
        LinearConstraint r;
        for (std::size_t k = 0; k < h.a.size(); ++k) {
            if (h.a[k] != 0) {
                r.terms.emplace_back(k, h.a[k]);
            }
        }
        r.rhs = h.b;
        rows.push_back(std::move(r));
    }
    return rows;
}

// Random closed zone from a point cloud.
Dbm random_zone(std::size_t n, std::mt19937_64& rng) {
    std::vector<Point> pts;
    for (int k = 0; k < 4; ++k) {
        pts.push_back(oracle::random_vector(n, rng, 2));
    }
    return best_zone_of_points(pts);
}

} // namespace

TEST_CASE("simplex matches vertex enumeration") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + t % 4;
        std::vector<oracle::Halfspace> hs;
        for (std::size_t k = 0; k < n; ++k) {
            oracle::Halfspace up{std::vector<double>(n, 0.0), 2};
            up.a[k] = 1;
            oracle::Halfspace down{std::vector<double>(n, 0.0), 2};
            down.a[k] = -1;
            hs.push_back(up);
            hs.push_back(down);
        }
        for (int k = 0; k < 3; ++k) {
            hs.push_back({oracle::random_vector(n, rng, 1), std::uniform_real_distribution<double>(0.1, 1)(rng)});
        }
        const auto c = oracle::random_vector(n, rng, 1);
        const LpResult r = lp_minimize(c, to_rows(hs));
        REQUIRE(r.status == LpStatus::optimal);
        CHECK(r.value == doctest::Approx(oracle::lp_min_by_vertices(hs, c)).epsilon(1e-7));
    }
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
    const std::vector<double> c{1};
    std::vector<LinearConstraint> rows{{{{0, 1.0}}, -1}, {{{0, -1.0}}, -1}};
    CHECK(lp_minimize(c, rows).status == LpStatus::infeasible);
    std::vector<LinearConstraint> open{{{{0, 1.0}}, 3}};
    CHECK(lp_minimize(c, open).status == LpStatus::unbounded);
    const std::vector<double> down{-1};
    const LpResult r = lp_minimize(down, open);
    CHECK(r.status == LpStatus::optimal);
    CHECK(r.value == doctest::Approx(-3));
}

TEST_CASE("minimum over a zone matches vertex enumeration") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + t % 3;
        const Dbm z = random_zone(n, rng);
        const auto c = oracle::random_vector(n, rng, 2);
        const double expected = oracle::lp_min_by_vertices(oracle::dbm_halfspaces(z), c);
        CHECK(min_over_zone(z, std::nullopt, c, 0.5) == doctest::Approx(expected + 0.5).epsilon(1e-7));
    }
}

TEST_CASE("minimum over a restricted zone") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 60; ++t) {
        const Dbm z = random_zone(3, rng);
        Box restriction;
        for (std::size_t k = 0; k < 2; ++k) {
            const double mid = (z.lower(k) + z.upper(k)) / 2;
            restriction.dims.push_back({mid - 0.3, mid + 0.1});
        }
        const auto c = oracle::random_vector(3, rng, 2);
        Dbm zr = z;
        for (std::size_t k = 0; k < 2; ++k) {
            zr(k + 1, 0) = std::min(zr(k + 1, 0), restriction[k].hi);
            zr(0, k + 1) = std::min(zr(0, k + 1), -restriction[k].lo);
        }
        const double expected = oracle::lp_min_by_vertices(oracle::dbm_halfspaces(zr), c);
        CHECK(min_over_zone(z, restriction, c, 0) == doctest::Approx(expected).epsilon(1e-7));
    }
}

TEST_CASE("minimum over an octagon matches vertex enumeration") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + t % 2;
        std::vector<Point> pts;
        for (int k = 0; k < 5; ++k) {
            pts.push_back(oracle::random_vector(n, rng, 2));
        }
        OctDbm o = OctDbm::top(n);
        std::vector<oracle::Halfspace> hs;
        for (std::size_t a = 0; a < 2 * n; ++a) {
            for (std::size_t b = 0; b < 2 * n; ++b) {
                auto val = [&](const Point& p, std::size_t s) { return s < n ? p[s] : -p[s - n]; };
                double best = -oracle::kInf;
                for (const Point& p : pts) {
                    best = std::max(best, val(p, a) - val(p, b));
                }
                o(a, b) = best;
                if (a % n == b % n && a == b) {
                    continue;
                }
                oracle::Halfspace h{std::vector<double>(n, 0.0), best};
                h.a[a % n] += a < n ? 1 : -1;
                h.a[b % n] -= b < n ? 1 : -1;
                hs.push_back(std::move(h));
            }
        }
        const auto c = oracle::random_vector(n, rng, 2);
        CHECK(min_over_octagon(o, std::nullopt, c, 0) == doctest::Approx(oracle::lp_min_by_vertices(hs, c)).epsilon(1e-7));
    }
}

TEST_CASE("minimum of a sum over the running output zone") {
    const AnalysisResult r = analyze(fixture::running_network(), kUnit);
    const std::vector<double> sum{0, 0, 1, 1};
    CHECK(min_over_zone(r.zone, std::nullopt, sum, 0) == doctest::Approx(0));
    const std::vector<double> none{0, 0, 0, 0};
    CHECK(min_over_zone(r.zone, std::nullopt, none, 1.5) == 1.5);
}

TEST_CASE("assertion validation") {
    LinearAssertion a = p1();
    CHECK_NOTHROW(a.validate(2, 2));
    CHECK_THROWS_AS(a.validate(3, 2), Error);
    LinearAssertion zero{"zero", {0, 0}, {0, 0}, 0, std::nullopt};
    CHECK_THROWS_AS(zero.validate(2, 2), Error);
}

TEST_CASE("difference of the running outputs is verified") {
    const Verdict v = check(p1(), analyze(fixture::running_network(), kUnit));
    CHECK(v.status == VerdictStatus::verified);
    CHECK(v.minimum == doctest::Approx(0));
    CHECK(v.method == "zone-lp");
}

TEST_CASE("restricted bound on the first output needs a cut") {
    const Network net = fixture::running_network();
    const Verdict v = check(p2(), analyze(net, kUnit));
    CHECK(v.status == VerdictStatus::unknown);
    CHECK(v.minimum == doctest::Approx(-0.5));
    const std::vector<std::size_t> counts{2, 1};
    const Verdict s = check_with_subdivision(p2(), net, kUnit, SubdivisionGrid::uniform(kUnit, counts));
    CHECK(s.status == VerdictStatus::verified);
    CHECK(s.minimum == doctest::Approx(0.25));
    CHECK(s.cells == 2);
    CHECK(s.method == "cellwise-zone-lp");
}

TEST_CASE("verdicts agree across modes on the running network") {
    const Network net = fixture::running_network();
    for (ChainMode mode : {ChainMode::box, ChainMode::zone, ChainMode::external}) {
        for (Domain domain : {Domain::zone, Domain::octagon}) {
            AnalysisOptions o;
            o.mode = mode;
            o.domain = domain;
            const AnalysisResult r = analyze(net, kUnit, o);
            CHECK(check(p1(), r).status == VerdictStatus::verified);
            CHECK(check(p2(), r).status == VerdictStatus::unknown);
        }
    }
}

TEST_CASE("restriction outside the zone is vacuous") {
    LinearAssertion a = p2();
    a.restrict_box = Box({{5, 6}, {5, 6}});
    const Verdict v = check(a, analyze(fixture::running_network(), kUnit));
    CHECK(v.status == VerdictStatus::verified);
    CHECK(v.method == "vacuous");
    CHECK(v.minimum == oracle::kInf);
    const Verdict s = check_with_subdivision(a, fixture::running_network(), kUnit, SubdivisionGrid::uniform(kUnit, 2));
    CHECK(s.cells == 0);
    CHECK(s.method == "vacuous");
    CHECK(s.status == VerdictStatus::verified);
}

TEST_CASE("reported minimum is a lower bound of the concrete minimum") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const Network net = oracle::random_network({2, 3, 2}, rng, t % 2 == 0);
        const Box box = oracle::random_box(2, rng);
        const LinearAssertion a{"a", oracle::random_vector(2, rng), oracle::random_vector(2, rng), 0.1, std::nullopt};
        for (Domain domain : {Domain::zone, Domain::octagon}) {
            AnalysisOptions o;
            o.domain = domain;
            const Verdict v = check(a, analyze(net, box, o));
            double concrete = oracle::kInf;
            for (int s = 0; s < 2000; ++s) {
                const Point x = oracle::uniform_in(box, rng);
                const Point y = net.evaluate(x);
                double val = a.constant;
                for (std::size_t k = 0; k < 2; ++k) {
                    val += a.in_coeffs[k] * x[k] + a.out_coeffs[k] * y[k];
                }
                concrete = std::min(concrete, val);
            }
            CHECK(v.minimum <= concrete + 1e-9);
        }
    }
}

TEST_CASE("finer cuts never lower the minimum") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
        const Network net = oracle::random_network({2, 3, 1}, rng, t % 2 == 0);
        const Box box = oracle::random_box(2, rng);
        const LinearAssertion a{"a", {0, 0}, {-1}, 0, std::nullopt};
        double previous = -oracle::kInf;
        for (std::size_t cells : {1u, 2u, 4u, 8u}) {
            const Verdict v = check_with_subdivision(a, net, box, SubdivisionGrid::uniform(box, cells));
            CHECK(v.minimum >= previous - 1e-9);
            previous = v.minimum;
        }
    }
}
