#include "ucs/codec.hpp"
#include "ucs/codec_low.hpp"
#include "ucs/codec_reduce.hpp"
#include "ucs/codec_simple.hpp"
#include "ucs/errors.hpp"
#include "ucs/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace ucs;

namespace {

Dist make(std::initializer_list<const char*> probs) {
    std::vector<Rational> v;
    for (auto p : probs)
        v.push_back(parse_rational(p));
    return Dist::from_probs(std::move(v));
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode{};
}

CodecOptions opts(unsigned delta, Rational eps = 0) {
    CodecOptions o;
    o.delta = delta;
    o.epsilon = eps;
    return o;
}

} // namespace

TEST_CASE("simple: examples") {
    const auto point = Dist::point_mass(1, 1);
    const auto e = encode_simple_detail(point, 1, 0);
    CHECK(e.hash_bits == 1);
    CHECK(e.index == 1);
    CHECK(e.confusable.empty());
    CHECK(e.codeword.size() == 2);
    CHECK(decode_simple(point, e.codeword) == 1);

    const auto u4 = Dist::uniform(4);
    for (Element m = 1; m <= 4; ++m)
        CHECK(decode_simple(u4, encode_simple(u4, m, 0)) == m);

    const auto p = make({"3/16", "13/16"});
    const auto d = encode_simple_detail(p, 1, 1);
    CHECK(d.hash_bits == 5);
    CHECK(d.confusable == std::vector<Element>{2});
    // P(m)=1 still leaves 2Δ+1 hash bits.
    CHECK(encode_simple_detail(Dist::point_mass(3, 2), 2, 2).hash_bits == 5);

    CHECK(code_of([&] { encode_simple(make({"1", "0"}), 2, 0); }) == ErrorCode::ZeroProbability);
    CHECK(code_of([&] { encode_simple(u4, 5, 0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { decode_simple(u4, BitString::from_string("001")); }) ==
          ErrorCode::MalformedCodeword);
    CHECK(code_of([&] { decode_simple(u4, BitString::from_string("1")); }) ==
          ErrorCode::MalformedCodeword);

    // A hash value no element of a one-point universe produces.
    BitString wrong;
    write_gamma(wrong, 1);
    wrong.push_back(!IsolatingFamily(1, 1).eval(1, 1)[0]);
    CHECK(code_of([&] { decode_simple(point, wrong); }) == ErrorCode::DecodeFailed);
}

TEST_CASE("simple: exhaustive round trips with replayed proof facts") {
    std::size_t trips = 0;
    for (unsigned delta : {0U, 1U})
        for (const auto& p : oracle::dyadic_pmfs(4, 3)) {
            for (const auto& q : perturb_enumerate(p, delta, 3)) {
                for (Element m : p.support()) {
                    const auto enc = encode_simple_detail(p, m, delta);
                    const Element got = decode_simple(q, enc.codeword);
                    CHECK(cmp(q.prob(got), q.prob(m)) >= 0);
                    const bool in_s = got == m || std::find(enc.confusable.begin(),
                                                            enc.confusable.end(),
                                                            got) != enc.confusable.end();
                    CHECK(in_s);
                    CHECK(got == m);
                    ++trips;
                }
            }
        }
    CHECK(trips > 1000);
}

TEST_CASE("simple: confusable set stays below half the hash range") {
    for (unsigned delta : {0U, 1U, 2U})
        for (const auto& p : oracle::dyadic_pmfs(5, 3))
            for (Element m : p.support()) {
                const auto e = encode_simple_detail(p, m, delta);
                CHECK(e.confusable.size() < (std::size_t{1} << (e.hash_bits - 1)) + 1);
            }
}

TEST_CASE("low: chain construction") {
    CHECK(low_chain_length(1) == 2);
    CHECK(low_chain_length(2) == 2);
    CHECK(low_chain_length(16) == 6);
    CHECK(low_chain_length(17) == 8);

    const auto geo = make({"1/2", "1/4", "1/8", "1/16", "1/16"});
    const auto a0 = build_encoder_chain(geo, 2, 0, 4);
    CHECK(a0.serialize() == "2|1,2,3|1,2,3|1,2,3|1,2,3");
    const auto a1 = build_encoder_chain(geo, 3, 1, 4);
    // r = 3; windows 3, 4, 5, 6 around it.
    CHECK(a1.serialize() == "3|1,2,3,4,5|1,2,3,4,5|1,2,3,4,5|1,2,3,4,5");
    const auto a2 = build_encoder_chain(geo, 1, 0, 2);
    CHECK(a2.serialize() == "1|1,2|1,2");

    const auto pm = Dist::point_mass(4, 3);
    CHECK(build_encoder_chain(pm, 3, 2, 4).serialize() == "3|3|3|3|3");
    FamilyTag flat{FamilyKind::Flat, 6, {2, 4, 5}, 0, {}};
    CHECK(build_encoder_chain(make_family(flat), 4, 2, 2).serialize() == "4|2,4,5|2,4,5");

    const auto b = build_decoder_chain(geo, 3, 0, 4);
    CHECK(b.leader() == 2);
    CHECK(b.length() == 3);
    CHECK(code_of([&] { build_decoder_chain(Dist::uniform(4), 10, 1, 4); }) ==
          ErrorCode::NoQualifyingLeader);
}

TEST_CASE("low: threshold") {
    CHECK_FALSE(low_rejects(1000, 0.0, 0, 2, 0));
    // bound = H/ε + (f+1)Δ + 1 = 1/(1/4) + 3 + 1 = 8 bits.
    CHECK_FALSE(low_rejects(256, 1.0, 1, 2, Rational(1, 4)));
    CHECK(low_rejects(257, 1.0, 1, 2, Rational(1, 4)));
}

TEST_CASE("low: wire format") {
    CHECK_FALSE(parse_low_codeword(BitString::from_string("0")).has_value());
    CHECK(code_of([] { parse_low_codeword(BitString::from_string("01")); }) ==
          ErrorCode::MalformedCodeword);
    CHECK(code_of([] { parse_low_codeword(BitString::from_string("")); }) ==
          ErrorCode::MalformedCodeword);
    // s = 1, r = 0, j = 1, three color bits.
    const auto ok = parse_low_codeword(BitString::from_string("1111101"));
    REQUIRE(ok.has_value());
    CHECK(ok->s == 1);
    CHECK(ok->r == 0);
    CHECK(ok->color.index == 1);
    CHECK(ok->color.bits == 5);
    CHECK(code_of([] { parse_low_codeword(BitString::from_string("11111010")); }) ==
          ErrorCode::MalformedCodeword);
    CHECK(code_of([] { parse_low_codeword(BitString::from_string("111110")); }) ==
          ErrorCode::MalformedCodeword);
    // s = 25 exceeds the coloring range.
    CHECK(code_of([] { parse_low_codeword(BitString::from_string("1000011001")); }) ==
          ErrorCode::MalformedCodeword);

    ColorerPool pool;
    const auto p = make({"1/2", "1/4", "1/4"});
    const auto e = encode_low_detail(p, 2, opts(1), pool);
    const auto parsed = parse_low_codeword(e.codeword);
    REQUIRE(parsed.has_value());
    CHECK(parsed->s == e.chain.size());
    CHECK(parsed->r == 2);
    CHECK(parsed->color == e.color.levels.back());
    CHECK(e.color.depth() == e.f / 2);
}

TEST_CASE("low: exhaustive round trips and decoder-chain sandwich") {
    ColorerPool pool;
    std::size_t trips = 0;
    for (unsigned delta : {0U, 1U})
        for (std::size_t n : {2U, 3U, 4U})
            for (const auto& p : oracle::dyadic_pmfs(n, 3))
                for (const auto& q : perturb_enumerate(p, delta, 3))
                    for (Element m : p.support()) {
                        const auto e = encode_low_detail(p, m, opts(delta), pool);
                        REQUIRE_FALSE(e.bottom);
                        const Chain b = build_decoder_chain(q, e.r, delta, e.f);
                        CHECK(within_distance(b, e.chain, 1));
                        CHECK(decode_low(q, e.codeword, opts(delta), pool) == m);
                        ++trips;
                    }
    CHECK(trips > 1000);
}

TEST_CASE("low: every matching chain shares the leader") {
    ColorerPool pool;
    const unsigned delta = 1;
    std::size_t searches = 0;
    for (const auto& p : oracle::dyadic_pmfs(4, 3))
        for (Element m : p.support()) {
            const auto e = encode_low_detail(p, m, opts(delta), pool);
            for (const auto& q : perturb_enumerate(p, delta, 3)) {
                const Chain b = build_decoder_chain(q, e.r, delta, e.f);
                const auto outside = outside_candidates(q, b, e.r, delta, e.f);
                ChainColorer& colorer = pool.get(static_cast<unsigned>(e.chain.size()));
                const auto found = find_matching_chains(b, colorer, e.color.levels.back(), e.f,
                                                        outside, 1000);
                REQUIRE_FALSE(found.empty());
                for (const auto& a : found) {
                    CHECK(a.leader() == m);
                    CHECK(a.size() <= e.chain.size());
                    CHECK(within_distance(b, a, 1));
                    CHECK(colorer.col(a).levels.back() == e.color.levels.back());
                }
                ++searches;
            }
        }
    CHECK(searches > 100);

    // The encoder's own chain is found when B comes from A.
    const auto p = make({"1/2", "1/4", "1/8", "1/8"});
    const auto e = encode_low_detail(p, 3, opts(1), pool);
    const Chain b = build_decoder_chain(p, e.r, 1, e.f);
    ChainColorer& colorer = pool.get(static_cast<unsigned>(e.chain.size()));
    CHECK(find_matching_chain(b, colorer, e.color.levels.back(), e.f, {}).leader() == 3);
    const ColorLevel impossible{1ULL << 40, 0};
    CHECK(code_of([&] { find_matching_chain(b, colorer, impossible, e.f, {}); }) ==
          ErrorCode::NoChainFound);
}

TEST_CASE("low: rejection rate stays below epsilon") {
    ColorerPool pool;
    std::mt19937_64 rng(11);
    for (const Rational& eps : {Rational(1, 4), Rational(1, 8)}) {
        CodecOptions o = opts(1, eps);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<Rational> w;
            unsigned total = 0;
            std::vector<unsigned> raw(6);
            for (auto& x : raw) {
                x = static_cast<unsigned>(rng() % 9);
                total += x;
            }
            if (total == 0)
                continue;
            for (auto x : raw)
                w.emplace_back(x, total);
            const auto p = Dist::from_probs(w);
            Rational bottom = 0;
            for (Element m : p.support()) {
                const auto c = encode_low_detail(p, m, o, pool);
                if (c.bottom) {
                    bottom += p.prob(m);
                    CHECK(c.codeword == bottom_codeword());
                }
            }
            CHECK(cmp(bottom, eps) <= 0);
        }
    }
    // ⊥ is decoded as ⊥.
    CHECK_FALSE(decode_low(Dist::uniform(3), bottom_codeword(), opts(1), pool).has_value());
}

TEST_CASE("reduce: concentration") {
    const auto p = Dist::uniform(4);
    CHECK(concentrate(p, 1) == p);
    CHECK(concentrate(p, 2) == make({"5/8", "1/8", "1/8", "1/8"}));
    CHECK(concentrate(Dist::point_mass(5, 1), 7) == Dist::point_mass(5, 1));
    CHECK_THROWS_AS(concentrate(p, 0), Error);
    CHECK(concentration_factor(Dist::point_mass(3, 2)) == 1);
    CHECK(concentration_factor(p) == 2);
    CHECK(concentration_factor(Dist::uniform(5)) == 3);

    for (std::size_t n : {8U, 64U, 1000U}) {
        const auto u = Dist::uniform(n);
        CHECK(concentrate(u, concentration_factor(u)).entropy() <= 3.0 + 1e-9);
        FamilyTag geo{FamilyKind::Geometric, n, {}, Rational(9, 10), seeded_permutation(n, 3)};
        const auto g = make_family(geo);
        CHECK(concentrate(g, concentration_factor(g)).entropy() <= 3.0 + 1e-9);
    }

    // Closeness is preserved, and the exact distance never grows.
    for (const auto& a : oracle::dyadic_pmfs(3, 3))
        for (const auto& b : oracle::dyadic_pmfs(3, 3)) {
            if (!is_delta_close(a, b, 2))
                continue;
            for (std::uint64_t m : {2U, 3U, 5U}) {
                const auto ra = max_ratio(a, b);
                const auto rc = max_ratio(concentrate(a, m), concentrate(b, m));
                REQUIRE(ra.has_value());
                REQUIRE(rc.has_value());
                CHECK(cmp(*rc, *ra) <= 0);
            }
        }
}

TEST_CASE("reduce: round trips and framing") {
    const auto reduced = make_scheme("reduced+simple", opts(1));
    for (const auto& p : oracle::dyadic_pmfs(4, 3))
        for (const auto& q : perturb_enumerate(p, 1, 3))
            for (Element m : p.support())
                REQUIRE(reduced->decode(q, reduced->encode(p, m)) == m);

    const auto u = Dist::uniform(4);
    const auto c = reduced->encode(u, 3);
    BitReader r(c);
    CHECK(r.read_gamma() == 2);

    // Point mass: M = 1, then exactly the inner codeword.
    const auto simple = make_scheme("simple", opts(1));
    const auto pm = Dist::point_mass(3, 2);
    BitString expect;
    write_gamma(expect, 1);
    expect.append(simple->encode(pm, 2));
    CHECK(reduced->encode(pm, 2) == expect);

    CHECK(code_of([&] { reduced->decode(u, BitString::from_string("0001")); }) ==
          ErrorCode::MalformedCodeword);
    CHECK(code_of([&] { reduced->decode(u, BitString::from_string("010")); }) ==
          ErrorCode::MalformedCodeword);

    // Inner ⊥ comes out as ⊥.
    const auto low = make_scheme("reduced+low", opts(0, Rational(1)));
    std::vector<Rational> w(40, Rational(1, 40));
    const auto flat = Dist::from_probs(w);
    const auto bottom = low->encode(flat, 7);
    CHECK(is_bottom(bottom));
    CHECK_FALSE(low->decode(flat, bottom).has_value());

    CHECK(make_scheme("reduced+low", opts(0))->name() == "reduced+low");
    CHECK_THROWS_AS(make_scheme("reduced+reduced+simple", opts(0)), Error);
    CHECK_THROWS_AS(make_scheme("huffman", opts(0)), Error);
}
