#include "ucs/errors.hpp"
#include "ucs/graphs.hpp"
#include "ucs/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>

using namespace ucs;

namespace {

bool is_complete(const Graph& g) {
    for (std::uint32_t u = 0; u < g.vertices(); ++u)
        if (g.adj[u].size() != g.vertices() - 1)
            return false;
    return true;
}

bool symmetric(const Graph& g) {
    for (std::uint32_t u = 0; u < g.vertices(); ++u)
        for (auto v : g.adj[u])
            if (!g.adjacent(v, u) || v == u)
                return false;
    return true;
}

} // namespace

TEST_CASE("subpermutation distance") {
    CHECK(subperm_distance({1, 2}, {1, 2}) == 0);
    CHECK(subperm_distance({1}, {2}) == 1);
    CHECK(oracle::brute_subperm_distance({1}, {2}, 4) == 1);
    CHECK(subperm_distance({1, 2, 3}, {3, 2, 1}) == 2);
    CHECK_THROWS_AS(subperm_distance({1}, {1, 2}), Error);

    for (std::size_t n = 2; n <= 5; ++n)
        for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k) {
            const auto vs = enumerate_subperms(n, k);
            for (const auto& a : vs)
                for (const auto& b : vs)
                    REQUIRE(subperm_distance(a, b) == oracle::brute_subperm_distance(a, b, n));
        }

    // Full permutations: maximal displacement of any element.
    for (const auto& a : enumerate_subperms(4, 4))
        for (const auto& b : enumerate_subperms(4, 4)) {
            unsigned best = 0;
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    if (a[i] == b[j])
                        best = std::max(best, static_cast<unsigned>(std::abs(int(i) - int(j))));
            CHECK(subperm_distance(a, b) == best);
        }
}

TEST_CASE("graph construction") {
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto u = build_unc_graph(n, 1, 1);
        CHECK(u.vertices.size() == n);
        CHECK(is_complete(u.graph));
        const auto s = build_shift_graph(n, 1);
        CHECK(is_complete(s.graph));
    }
    for (std::size_t n = 3; n <= 5; ++n) {
        CHECK(symmetric(build_unc_graph(n, 1, 2).graph));
        CHECK(symmetric(build_unc_graph(n, 2, 3).graph));
        CHECK(symmetric(build_shift_graph(n, 2).graph));
    }
    CHECK(enumerate_subperms(5, 3).size() == 60);
    CHECK_THROWS_AS(enumerate_subperms(3, 4), Error);
    CHECK_THROWS_AS(enumerate_subperms(10, 6, 1000), Error);
    CHECK_THROWS_AS(build_shift_graph(3, 3), Error);

    CHECK(is_left_shift({2, 3}, {1, 2}));
    CHECK_FALSE(is_left_shift({2, 1}, {1, 2}));
    CHECK_FALSE(is_left_shift({3, 2}, {1, 2}));

    const auto g = build_unc_graph(3, 1, 2);
    REQUIRE(g.index_of({2, 1}).has_value());
    CHECK(g.vertices[*g.index_of({2, 1})] == SubPerm{2, 1});
    CHECK_FALSE(g.index_of({2, 2}).has_value());
    const auto text = graph_to_text(g, "unc");
    CHECK(text.rfind("# unc N=3 l=1 k=2 vertices=6", 0) == 0);
}

TEST_CASE("restriction is a homomorphism") {
    const SubPerm p{4, 1, 3};
    CHECK(restrict_hom(p, 3) == p);
    CHECK(restrict_hom(restrict_hom(p, 2), 1) == restrict_hom(p, 1));
    CHECK_THROWS_AS(restrict_hom(p, 4), Error);
    for (std::size_t n = 3; n <= 5; ++n)
        for (unsigned l = 1; l <= 2; ++l) {
            const auto big = build_unc_graph(n, l, 3);
            const auto small = build_unc_graph(n, l, 2);
            for (std::uint32_t u = 0; u < big.vertices.size(); ++u)
                for (auto v : big.graph.adj[u]) {
                    const auto a = small.index_of(restrict_hom(big.vertices[u], 2));
                    const auto b = small.index_of(restrict_hom(big.vertices[v], 2));
                    REQUIRE(small.graph.adjacent(*a, *b));
                }
        }
}

TEST_CASE("exact chromatic number") {
    Graph single;
    single.adj.resize(1);
    CHECK(exact_chromatic(single).count == 1);
    CHECK(exact_chromatic(complete_graph(4)).count == 4);
    CHECK(exact_chromatic(build_unc_graph(4, 1, 1).graph).count == 4);
    CHECK(oracle::brute_chromatic(complete_graph(3)) == 3);

    // Odd cycle and a few uncertainty/shift graphs against plain backtracking.
    Graph c5;
    c5.adj = {{1, 4}, {0, 2}, {1, 3}, {2, 4}, {0, 3}};
    CHECK(exact_chromatic(c5).count == 3);
    for (const auto& g : {build_unc_graph(3, 1, 2).graph, build_unc_graph(4, 1, 2).graph,
                          build_shift_graph(4, 2).graph, build_shift_graph(4, 3).graph,
                          build_unc_graph(4, 2, 3).graph}) {
        const auto r = exact_chromatic(g);
        CHECK(verify_coloring(g, r.colors));
        CHECK(r.count == oracle::brute_chromatic(g));
    }

    // Longer prefixes never need more colors.
    for (std::size_t n = 3; n <= 5; ++n)
        for (unsigned l = 1; l <= 2; ++l) {
            std::size_t prev = n;
            for (std::size_t k = 1; k <= 3; ++k) {
                const auto chi = exact_chromatic(build_unc_graph(n, l, k).graph).count;
                CHECK(chi <= prev);
                prev = chi;
            }
        }

    CHECK_THROWS_AS(exact_chromatic(build_unc_graph(5, 2, 3).graph, 10), Error);

    const auto g = build_unc_graph(4, 1, 2).graph;
    std::vector<std::uint32_t> order(g.vertices());
    for (std::uint32_t i = 0; i < order.size(); ++i)
        order[i] = i;
    const auto greedy = greedy_chromatic(g, order);
    CHECK(verify_coloring(g, greedy.colors));
    CHECK(greedy.count >= exact_chromatic(g).count);
    CHECK_FALSE(verify_coloring(complete_graph(2), {0, 0}));
}

TEST_CASE("fractional cover coloring") {
    for (std::size_t n = 3; n <= 5; ++n)
        for (unsigned l = 1; l <= 2; ++l) {
            const auto g = build_unc_graph(n, l, l + 1);
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                const auto r = frac_cover_color(g, seed);
                CHECK(verify_coloring(g.graph, r.colors));
                CHECK(r.covers.size() == r.count);
                CHECK(r.count <= r.count_bound);
                CHECK(r.count_bound ==
                      doctest::Approx(8.0 * l * std::log(double(g.vertices.size())) + 10.0));
                CHECK(r.colors == frac_cover_color(g, seed).colors);
            }
        }
    CHECK_THROWS_AS(frac_cover_color(build_unc_graph(4, 2, 2), 1), Error);
}

TEST_CASE("iterated hash coloring") {
    const auto r = iterated_hash_color(5, 1, 3);
    const auto g = build_unc_graph(5, 1, 3);
    CHECK(verify_coloring(g.graph, r.colors));
    REQUIRE(r.levels.size() == 3);
    CHECK(r.levels.front().colors <= 5);
    for (const auto& lv : r.levels) {
        CHECK(lv.d <= lv.d_bound);
        CHECK(lv.colors <= lv.color_bound);
    }
    for (std::size_t n = 3; n <= 5; ++n)
        for (std::size_t k = 1; k <= 3; ++k) {
            const auto ug = build_unc_graph(n, 1, k);
            CHECK(measure_dk(ug) <= std::pow(3.0, double(k)));
            const auto c = iterated_hash_color(n, 1, k);
            CHECK(verify_coloring(ug.graph, c.colors));
        }
    const auto two = iterated_hash_color(5, 2, 3);
    CHECK(verify_coloring(build_unc_graph(5, 2, 3).graph, two.colors));
}

TEST_CASE("shift embedding") {
    CHECK(shift_embedding({1, 2, 3}) == SubPerm{2, 3, 1});
    CHECK(shift_embedding({1, 2, 3, 4}) == SubPerm{3, 4, 2, 1});
    CHECK_THROWS_AS(shift_embedding({1}), Error);

    std::set<SubPerm> images;
    const auto all = enumerate_subperms(5, 3);
    for (const auto& p : all)
        images.insert(shift_embedding(p));
    CHECK(images.size() == all.size());

    for (std::size_t n = 3; n <= 5; ++n)
        for (std::size_t k = 2; k <= std::min<std::size_t>(3, n - 1); ++k) {
            const auto rep = check_shift_embedding(n, k);
            CHECK(rep.injective);
            CHECK(rep.shift_edges > 0);
            MESSAGE("embedding N=" << n << " k=" << k << ": " << rep.failures << " of "
                                   << rep.shift_edges << " shift edges not preserved");
        }

    for (std::size_t k = 2; k <= 3; ++k) {
        const auto chi_u = exact_chromatic(build_unc_graph(4, 2, k).graph).count;
        const auto chi_s = exact_chromatic(build_shift_graph(4, k).graph).count;
        CHECK(chi_u >= chi_s);
    }
}
