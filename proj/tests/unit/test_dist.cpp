#include "ucs/dist.hpp"
#include "ucs/errors.hpp"
#include "ucs/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace ucs;

namespace {

Dist make(std::initializer_list<const char*> probs) {
    std::vector<Rational> v;
    for (auto p : probs)
        v.push_back(parse_rational(p));
    return Dist::from_probs(std::move(v));
}

} // namespace

TEST_CASE("entropy") {
    CHECK(Dist::uniform(8).entropy() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(Dist::point_mass(5, 3).entropy() == 0.0);
    CHECK(make({"1/2", "1/4", "1/4"}).entropy() == doctest::Approx(1.5).epsilon(1e-15));
    // Tiny masses do not underflow into NaN.
    FamilyTag tag{FamilyKind::Geometric, 2000, {}, Rational(1, 2), {}};
    CHECK(std::isfinite(make_family(tag).entropy()));
    CHECK(make_family(tag).entropy() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("distance and closeness") {
    const auto p = make({"1/2", "1/4", "1/4"});
    const auto q = make({"1/4", "1/2", "1/4"});
    CHECK(distance(p, p) == 0.0);
    CHECK(distance(p, q) == doctest::Approx(1.0));
    CHECK(std::isinf(distance(make({"1/2", "1/2", "0"}), p)));
    CHECK(is_delta_close(p, p, 0));
    CHECK(is_delta_close(make({"1/2", "1/2"}), make({"1/4", "3/4"}), 1));
    CHECK_FALSE(is_delta_close(make({"1/2", "1/2"}), make({"1/4", "3/4"}), 0));
    CHECK_THROWS_AS(distance(p, Dist::uniform(2)), Error);
}

TEST_CASE("from_probs validates exactly") {
    CHECK_THROWS_AS(make({"1/2", "1/3"}), Error);
    CHECK_THROWS_AS(Dist::from_probs({}), Error);
    CHECK_THROWS_AS(dist_from_json(R"({"n":2,"probs":["0.5","0.5"]})"), Error);
    CHECK_THROWS_AS(dist_from_json(R"({"n":3,"probs":["1/2","1/2"]})"), Error);
    CHECK_THROWS_AS(dist_from_json(R"({"n":2,"probs":["1/2","1/4"]})"), Error);
    const auto d = dist_from_json(R"({"n":3,"probs":["2/4","1/4","1/4"]})");
    CHECK(d == make({"1/2", "1/4", "1/4"}));
    CHECK(dist_to_json(d) == R"({"n":3,"probs":["1/2","1/4","1/4"]})");
}

TEST_CASE("capacity") {
    FamilyTag flat{FamilyKind::Flat, 6, {1, 2, 4, 5}, 0, {}};
    CHECK(capacity(make_family(flat)) == 2.0);
    CHECK(capacity(Dist::point_mass(4, 2)) == 0.0);
    CHECK(capacity(make({"16/21", "4/21", "1/21"})) == 0.0);
    CHECK(max_unit_set_size(make({"1/2", "1/4", "1/8", "1/8"})) == 3);
    for (const auto& d : oracle::dyadic_pmfs(4, 3))
        CHECK(capacity(d) <= 2.0);
}

TEST_CASE("families") {
    FamilyTag flat{FamilyKind::Flat, 5, {1, 2, 3}, 0, {}};
    CHECK(make_family(flat) == make({"1/3", "1/3", "1/3", "0", "0"}));
    FamilyTag geo{FamilyKind::Geometric, 3, {}, Rational(1, 2), {}};
    CHECK(make_family(geo) == make({"4/7", "2/7", "1/7"}));
    FamilyTag bin{FamilyKind::Binomial, 2, {}, Rational(1, 2), {}};
    CHECK(make_family(bin) == make({"2/3", "1/3"}));
    // N=3, p=1/3: C(3,k)(1/3)^k(2/3)^(3-k) for k=1..3 is 12/27, 6/27, 1/27, renormalised by 19/27.
    FamilyTag bin3{FamilyKind::Binomial, 3, {}, Rational(1, 3), {}};
    CHECK(make_family(bin3) == make({"12/19", "6/19", "1/19"}));
    FamilyTag perm{FamilyKind::Geometric, 3, {}, Rational(1, 2), {3, 1, 2}};
    CHECK(make_family(perm) == make({"2/7", "1/7", "4/7"}));

    FamilyTag bad = geo;
    bad.parameter = 1;
    CHECK_THROWS_AS(make_family(bad), Error);
    bad.parameter = Rational(1, 2);
    bad.permutation = {1, 1, 2};
    CHECK_THROWS_AS(make_family(bad), Error);
    FamilyTag dup{FamilyKind::Flat, 3, {1, 1}, 0, {}};
    CHECK_THROWS_AS(make_family(dup), Error);

    const auto sp = seeded_permutation(50, 7);
    CHECK(std::set<Element>(sp.begin(), sp.end()).size() == 50);
    CHECK(sp == seeded_permutation(50, 7));
}

TEST_CASE("floor_neg_log and log classes") {
    CHECK(floor_neg_log(Rational(1)) == 0);
    CHECK(floor_neg_log(Rational(1, 8)) == 3);
    CHECK(floor_neg_log(Rational(3, 16)) == 2);
    CHECK_THROWS_AS(floor_neg_log(Rational(0)), Error);
    CHECK_THROWS_AS(floor_neg_log(Rational(3, 2)), Error);
    for (unsigned den = 1; den <= 300; ++den)
        for (unsigned num = 1; num <= den; num += 1 + den / 40) {
            const Rational q(num, den);
            const Rational canon = Rational(q);
            CHECK(floor_neg_log(canon) == oracle::brute_floor_neg_log(canon));
        }
    CHECK(log_class(Rational(1, 8)).exact);
    CHECK_FALSE(log_class(Rational(3, 16)).exact);

    // |log2 1/q - r| <= t against a float evaluation away from the boundary.
    const LogClass c = log_class(Rational(3, 16)); // log2 16/3 ≈ 2.415
    CHECK(c.within(2, 1));
    CHECK(c.within(3, 1));
    CHECK_FALSE(c.within(4, 1));
    CHECK_FALSE(c.within(1, 1));
    const LogClass e = log_class(Rational(1, 8));
    CHECK(e.within(4, 1));
    CHECK(e.within(2, 1));
    CHECK_FALSE(e.within(5, 1));
}

TEST_CASE("log star") {
    CHECK(log_star(1) == 0);
    CHECK(log_star(2) == 1);
    CHECK(log_star(16) == 3);
    CHECK(log_star(17) == 4);
    CHECK(log_star(65536) == 4);
    CHECK(log_star(65537) == 5);
    CHECK(iterated_log(16, 2).value() == doctest::Approx(2.0));
    CHECK_FALSE(iterated_log(2, 3).has_value());
}

TEST_CASE("perturb_enumerate matches the integer oracle") {
    const auto two = Dist::uniform(2);
    const auto qs = perturb_enumerate(two, 1, 2);
    REQUIRE(qs.size() == 3);
    CHECK(qs[0] == make({"1/4", "3/4"}));
    CHECK(qs[1] == make({"1/2", "1/2"}));
    CHECK(qs[2] == make({"3/4", "1/4"}));
    CHECK(perturb_enumerate(Dist::point_mass(3, 2), 5, 4).size() == 1);

    for (unsigned bits : {2U, 3U}) {
        const auto grid = oracle::dyadic_numerators(3, bits);
        for (const auto& a : grid) {
            std::vector<Rational> probs;
            for (auto v : a)
                probs.emplace_back(v, 1UL << bits);
            const auto p = Dist::from_probs(probs);
            for (unsigned delta : {0U, 1U, 2U}) {
                std::set<std::string> fast;
                for (const auto& q : perturb_enumerate(p, delta, bits)) {
                    CHECK(is_delta_close(p, q, delta));
                    fast.insert(dist_to_json(q));
                }
                std::set<std::string> slow;
                for (const auto& b : grid)
                    if (oracle::close_numerators(a, b, delta)) {
                        std::vector<Rational> qp;
                        for (auto v : b)
                            qp.emplace_back(v, 1UL << bits);
                        slow.insert(dist_to_json(Dist::from_probs(qp)));
                    }
                CHECK(fast == slow);
                if (delta == 0)
                    CHECK(fast.size() == 1);
            }
        }
    }
    CHECK_THROWS_AS(perturb_enumerate(Dist::uniform(4), 3, 6, 10), Error);
}

TEST_CASE("perturb_sample") {
    FamilyTag geo{FamilyKind::Geometric, 12, {}, Rational(2, 3), {}};
    const auto p = make_family(geo);
    CHECK(perturb_sample(p, 0, 99) == p);
    for (unsigned delta : {1U, 2U, 3U})
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto q = perturb_sample(p, delta, seed);
            CHECK(is_delta_close(p, q, delta));
            CHECK(q == perturb_sample(p, delta, seed));
        }
    CHECK_FALSE(perturb_sample(p, 2, 1) == perturb_sample(p, 2, 2));
}

TEST_CASE("distance is a pseudometric on enumerated grids") {
    for (auto [n, bits] : {std::pair{3U, 4U}, std::pair{4U, 3U}}) {
        const auto grid = oracle::dyadic_pmfs(n, bits);
        const std::size_t g = grid.size();
        std::vector<double> d(g * g);
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < g; ++j)
                d[i * g + j] = distance(grid[i], grid[j]);
        std::size_t violations = 0;
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < g; ++j) {
                if (d[i * g + j] != d[j * g + i])
                    ++violations;
                for (unsigned delta = 0; delta <= 3; ++delta)
                    if (is_delta_close(grid[i], grid[j], delta) != (d[i * g + j] <= delta + 1e-12))
                        ++violations;
                if (std::isinf(d[i * g + j]))
                    continue;
                for (std::size_t k = 0; k < g; ++k)
                    if (d[i * g + k] > d[i * g + j] + d[j * g + k] + 1e-9)
                        ++violations;
            }
        CHECK(violations == 0);
    }
}
