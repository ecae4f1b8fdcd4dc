#include "ucs/dist.hpp"

#include "ucs/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace ucs {

namespace {

double log2_integer(const mpz_class& z) {
    long exp = 0;
    const double mantissa = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return static_cast<double>(exp) + std::log2(mantissa);
}

bool greater_prob(const Rational& a, const LogClass& ca, const Rational& b, const LogClass& cb) {
    if (ca.floor != cb.floor)
        return ca.floor < cb.floor;
    return cmp(a, b) > 0;
}

Rational times_pow2(const Rational& q, unsigned e) {
    Rational out;
    mpq_mul_2exp(out.get_mpq_t(), q.get_mpq_t(), e);
    return out;
}

} // namespace

bool LogClass::within(std::int64_t r, std::int64_t t) const noexcept {
    const auto f = static_cast<std::int64_t>(floor);
    if (f < r - t)
        return false;
    return f < r + t || (f == r + t && exact);
}

std::uint64_t floor_neg_log(const Rational& q) {
    if (sgn(q) <= 0 || cmp(q, 1) > 0)
        fail(ErrorCode::InvalidArgument, "floor_neg_log requires 0 < q <= 1");
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    const std::size_t t = mpz_sizeinbase(den.get_mpz_t(), 2) - mpz_sizeinbase(num.get_mpz_t(), 2);
    mpz_class shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), num.get_mpz_t(), t);
    // den/num lies in (2^(t-1), 2^(t+1)); it is >= 2^t exactly when num * 2^t <= den.
    return cmp(shifted, den) <= 0 ? t : t - 1;
}

LogClass log_class(const Rational& q) {
    LogClass c;
    c.floor = floor_neg_log(q);
    mpz_class shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), q.get_num().get_mpz_t(), c.floor);
    c.exact = cmp(shifted, q.get_den()) == 0;
    return c;
}

unsigned log_star(std::uint64_t n) {
    if (n == 0)
        fail(ErrorCode::InvalidArgument, "log_star requires n >= 1");
    // log^(i) n <= 1 exactly when n <= tower(i), tower(0) = 1, tower(i) = 2^tower(i-1).
    constexpr std::uint64_t towers[] = {1, 2, 4, 16, 65536};
    for (unsigned i = 0; i < std::size(towers); ++i)
        if (n <= towers[i])
            return i;
    return 5;
}

std::optional<double> iterated_log(std::uint64_t n, unsigned k) {
    double v = static_cast<double>(n);
    for (unsigned i = 0; i < k; ++i) {
        if (v <= 0.0)
            return std::nullopt;
        v = std::log2(v);
    }
    return v;
}

double log2_rational(const Rational& q) {
    return log2_integer(q.get_num()) - log2_integer(q.get_den());
}

Dist Dist::from_probs(std::vector<Rational> probs) {
    if (probs.empty())
        fail(ErrorCode::InvalidArgument, "distribution over an empty universe");
    if (probs.size() > std::numeric_limits<Element>::max())
        fail(ErrorCode::InvalidArgument, "universe too large");
    for (auto& q : probs)
        if (sgn(q.get_den()) == 0 || sgn(q) < 0)
            fail(ErrorCode::InvalidArgument, "negative probability");
    const mpz_class den = probs.front().get_den();
    bool shared = true;
    for (const auto& q : probs)
        shared = shared && q.get_den() == den;
    Rational total = 0;
    if (shared) {
        mpz_class num = 0;
        for (const auto& q : probs)
            num += q.get_num();
        total = Rational(num, den);
        total.canonicalize();
    }
    for (auto& q : probs) {
        q.canonicalize();
        if (!shared)
            total += q;
    }
    if (cmp(total, 1) != 0)
        fail(ErrorCode::InvalidArgument, "probabilities sum to " + total.get_str() + ", not 1");

    auto impl = std::make_shared<Impl>();
    impl->probs = std::move(probs);
    const std::size_t n = impl->probs.size();
    impl->classes.resize(n);
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Rational& q = impl->probs[i];
        if (sgn(q) == 0)
            continue;
        impl->support.push_back(static_cast<Element>(i + 1));
        impl->classes[i] = log_class(q);
        const double lg = log2_rational(q);
        h -= std::exp2(lg) * lg;
    }
    impl->entropy = h;
    impl->order = impl->support;
    std::stable_sort(impl->order.begin(), impl->order.end(), [&](Element a, Element b) {
        return greater_prob(impl->probs[a - 1], impl->classes[a - 1], impl->probs[b - 1],
                            impl->classes[b - 1]);
    });
    return Dist(std::move(impl));
}

Dist Dist::point_mass(std::size_t n, Element m) {
    if (m < 1 || m > n)
        fail(ErrorCode::InvalidArgument, "point mass outside the universe");
    std::vector<Rational> probs(n, Rational(0));
    probs[m - 1] = 1;
    return from_probs(std::move(probs));
}

Dist Dist::uniform(std::size_t n) {
    return from_probs(std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n))));
}

bool Dist::operator==(const Dist& other) const {
    if (impl_ == other.impl_)
        return true;
    return impl_->probs == other.impl_->probs;
}

double entropy(const Dist& p) { return p.entropy(); }

std::optional<Rational> max_ratio(const Dist& p, const Dist& q) {
    if (p.size() != q.size())
        fail(ErrorCode::UniverseMismatch, "distributions over different universes");
    Rational worst = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Rational& a = p.probs()[i];
        const Rational& b = q.probs()[i];
        const int sa = sgn(a);
        const int sb = sgn(b);
        if (sa == 0 && sb == 0)
            continue;
        if (sa == 0 || sb == 0)
            return std::nullopt;
        Rational r = cmp(a, b) >= 0 ? Rational(a / b) : Rational(b / a);
        if (cmp(r, worst) > 0)
            worst = r;
    }
    return worst;
}

double distance(const Dist& p, const Dist& q) {
    const auto r = max_ratio(p, q);
    if (!r)
        return std::numeric_limits<double>::infinity();
    return log2_rational(*r);
}

bool is_delta_close(const Dist& p, const Dist& q, unsigned delta) {
    if (p.size() != q.size())
        fail(ErrorCode::UniverseMismatch, "distributions over different universes");
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Rational& a = p.probs()[i];
        const Rational& b = q.probs()[i];
        if (cmp(a, times_pow2(b, delta)) > 0 || cmp(b, times_pow2(a, delta)) > 0)
            return false;
    }
    return true;
}

std::size_t max_unit_set_size(const Dist& p) {
    // Ascending by probability; the largest unit set is a contiguous window.
    auto order = p.by_decreasing_prob();
    std::vector<Element> asc(order.rbegin(), order.rend());
    std::size_t best = 0;
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < asc.size(); ++lo) {
        const Rational twice = times_pow2(p.prob(asc[lo]), 1);
        if (hi < lo)
            hi = lo;
        while (hi + 1 < asc.size() && cmp(p.prob(asc[hi + 1]), twice) <= 0)
            ++hi;
        best = std::max(best, hi - lo + 1);
    }
    return best;
}

double capacity(const Dist& p) {
    return std::log2(static_cast<double>(max_unit_set_size(p)));
}

std::string family_name(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::Flat: return "flat";
    case FamilyKind::Geometric: return "geometric";
    case FamilyKind::Binomial: return "binomial";
    }
    return "?";
}

FamilyKind parse_family_kind(const std::string& name) {
    if (name == "flat") return FamilyKind::Flat;
    if (name == "geometric") return FamilyKind::Geometric;
    if (name == "binomial") return FamilyKind::Binomial;
    fail(ErrorCode::Parse, "unknown family '" + name + "'");
}

std::vector<Element> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<Element> perm(n);
    std::iota(perm.begin(), perm.end(), Element{1});
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[rng() % i]);
    return perm;
}

namespace {

std::vector<Element> checked_permutation(const FamilyTag& tag) {
    if (tag.permutation.empty()) {
        std::vector<Element> id(tag.n);
        std::iota(id.begin(), id.end(), Element{1});
        return id;
    }
    if (tag.permutation.size() != tag.n)
        fail(ErrorCode::InvalidArgument, "permutation has the wrong length");
    std::vector<bool> seen(tag.n + 1, false);
    for (Element e : tag.permutation) {
        if (e < 1 || e > tag.n || seen[e])
            fail(ErrorCode::InvalidArgument, "permutation is not a bijection on [N]");
        seen[e] = true;
    }
    return tag.permutation;
}

void check_open_unit(const Rational& x, const char* what) {
    if (sgn(x) <= 0 || cmp(x, 1) >= 0)
        fail(ErrorCode::InvalidArgument, std::string(what) + " must lie in (0,1)");
}

} // namespace

Dist make_family(const FamilyTag& tag) {
    if (tag.n == 0)
        fail(ErrorCode::InvalidArgument, "family over an empty universe");
    const std::size_t n = tag.n;
    std::vector<Rational> probs(n, Rational(0));
    switch (tag.kind) {
    case FamilyKind::Flat: {
        if (tag.support.empty())
            fail(ErrorCode::InvalidArgument, "flat family needs a nonempty support");
        const Rational mass(1, static_cast<unsigned long>(tag.support.size()));
        for (Element e : tag.support) {
            if (e < 1 || e > n || sgn(probs[e - 1]) != 0)
                fail(ErrorCode::InvalidArgument, "flat support must be distinct elements of [N]");
            probs[e - 1] = mass;
        }
        break;
    }
    case FamilyKind::Geometric: {
        check_open_unit(tag.parameter, "geometric ratio");
        const auto perm = checked_permutation(tag);
        const mpz_class a = tag.parameter.get_num();
        const mpz_class b = tag.parameter.get_den();
        mpz_class bn, an;
        mpz_pow_ui(bn.get_mpz_t(), b.get_mpz_t(), n);
        mpz_pow_ui(an.get_mpz_t(), a.get_mpz_t(), n);
        const mpz_class denom = bn - an;
        // term_k = a^(k-1) b^(N-k) (b-a)
        mpz_class term;
        mpz_pow_ui(term.get_mpz_t(), b.get_mpz_t(), n - 1);
        term *= b - a;
        for (std::size_t k = 0; k < n; ++k) {
            probs[perm[k] - 1] = Rational(term, denom);
            if (k + 1 < n) {
                term *= a;
                mpz_divexact(term.get_mpz_t(), term.get_mpz_t(), b.get_mpz_t());
            }
        }
        break;
    }
    case FamilyKind::Binomial: {
        check_open_unit(tag.parameter, "binomial bias");
        const auto perm = checked_permutation(tag);
        const mpz_class a = tag.parameter.get_num();
        const mpz_class b = tag.parameter.get_den();
        const mpz_class c = b - a;
        mpz_class bn, cn;
        mpz_pow_ui(bn.get_mpz_t(), b.get_mpz_t(), n);
        mpz_pow_ui(cn.get_mpz_t(), c.get_mpz_t(), n);
        // Index k = 0 is not part of the family; the rest is renormalized.
        const mpz_class denom = bn - cn;
        // term_k = C(N,k) a^k c^(N-k), starting at k = 1.
        mpz_class term;
        mpz_pow_ui(term.get_mpz_t(), c.get_mpz_t(), n - 1);
        term *= a * static_cast<unsigned long>(n);
        for (std::size_t k = 1; k <= n; ++k) {
            probs[perm[k - 1] - 1] = Rational(term, denom);
            if (k < n) {
                term *= static_cast<unsigned long>(n - k);
                term *= a;
                const mpz_class div = c * static_cast<unsigned long>(k + 1);
                mpz_divexact(term.get_mpz_t(), term.get_mpz_t(), div.get_mpz_t());
            }
        }
        break;
    }
    }
    return Dist::from_probs(std::move(probs));
}

std::vector<Dist> perturb_enumerate(const Dist& p, unsigned delta, unsigned bits, std::size_t cap) {
    if (bits > 30)
        fail(ErrorCode::CapExceeded, "denominator bound too large for enumeration");
    const std::size_t n = p.size();
    const long total = 1L << bits;
    std::vector<long> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Rational& q = p.probs()[i];
        if (sgn(q) == 0) {
            lo[i] = hi[i] = 0;
            continue;
        }
        // ceil(q * 2^(bits-delta)) and floor(q * 2^(bits+delta)).
        Rational low = q * total;
        Rational high = q * total;
        mpq_div_2exp(low.get_mpq_t(), low.get_mpq_t(), delta);
        mpq_mul_2exp(high.get_mpq_t(), high.get_mpq_t(), delta);
        mpz_class c, f;
        mpz_cdiv_q(c.get_mpz_t(), low.get_num().get_mpz_t(), low.get_den().get_mpz_t());
        mpz_fdiv_q(f.get_mpz_t(), high.get_num().get_mpz_t(), high.get_den().get_mpz_t());
        lo[i] = cmp(c, total) > 0 ? total + 1 : c.get_si();
        hi[i] = cmp(f, total) > 0 ? total : f.get_si();
    }
    std::vector<long> suffix_lo(n + 1, 0), suffix_hi(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
        suffix_lo[i] = suffix_lo[i + 1] + lo[i];
        suffix_hi[i] = suffix_hi[i + 1] + hi[i];
    }

    std::vector<Dist> out;
    std::vector<long> cur(n, 0);
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
        if (i == n) {
            if (left != 0)
                return;
            if (out.size() >= cap)
                fail(ErrorCode::CapExceeded, "perturb_enumerate output cap exceeded");
            std::vector<Rational> probs(n);
            for (std::size_t k = 0; k < n; ++k)
                probs[k] = Rational(cur[k], total);
            Dist q = Dist::from_probs(std::move(probs));
            if (is_delta_close(p, q, delta))
                out.push_back(std::move(q));
            return;
        }
        const long from = std::max(lo[i], left - suffix_hi[i + 1]);
        const long to = std::min(hi[i], left - suffix_lo[i + 1]);
        for (long v = from; v <= to; ++v) {
            cur[i] = v;
            self(self, i + 1, left - v);
        }
    };
    rec(rec, 0, total);
    return out;
}

Dist perturb_sample(const Dist& p, unsigned delta, std::uint64_t seed, unsigned attempts) {
    constexpr unsigned grid_bits = 16;
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (unsigned attempt = 0; attempt < attempts; ++attempt) {
        std::vector<Rational> weighted(p.size(), Rational(0));
        Rational z = 0;
        for (Element m : p.support()) {
            // Multipliers c / 2^grid_bits in [1, 2^delta]; a quarter of them pinned to each end.
            const double pick = unit();
            double exponent = unit() * delta;
            if (pick < 0.25)
                exponent = 0.0;
            else if (pick < 0.5)
                exponent = delta;
            auto c = static_cast<unsigned long>(std::llround(std::exp2(grid_bits + exponent)));
            c = std::clamp(c, 1UL << grid_bits, 1UL << (grid_bits + delta));
            weighted[m - 1] = p.prob(m) * c;
            z += weighted[m - 1];
        }
        for (auto& w : weighted)
            w /= z;
        Dist q = Dist::from_probs(std::move(weighted));
        if (is_delta_close(p, q, delta))
            return q;
    }
    fail(ErrorCode::BudgetExhausted, "perturb_sample rejection budget exhausted");
}

std::string rational_to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789/") != std::string::npos ||
        std::count(text.begin(), text.end(), '/') > 1 || text.front() == '/' || text.back() == '/')
        fail(ErrorCode::Parse, "not an exact rational: '" + text + "'");
    Rational q;
    if (q.set_str(text, 10) != 0 || sgn(q.get_den()) == 0)
        fail(ErrorCode::Parse, "not an exact rational: '" + text + "'");
    q.canonicalize();
    return q;
}

std::string dist_to_json(const Dist& p) {
    nlohmann::json j;
    j["n"] = p.size();
    auto& arr = j["probs"] = nlohmann::json::array();
    for (const auto& q : p.probs())
        arr.push_back(rational_to_string(q));
    return j.dump();
}

Dist dist_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("distribution JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("probs") ||
        !j["n"].is_number_unsigned() || !j["probs"].is_array())
        fail(ErrorCode::Parse, "distribution JSON must be {\"n\": N, \"probs\": [...]}");
    const auto n = j["n"].get<std::size_t>();
    if (j["probs"].size() != n)
        fail(ErrorCode::Parse, "probs has " + std::to_string(j["probs"].size()) +
                                   " entries but n = " + std::to_string(n));
    std::vector<Rational> probs;
    probs.reserve(n);
    for (const auto& v : j["probs"]) {
        if (!v.is_string())
            fail(ErrorCode::Parse, "probabilities must be rational strings");
        probs.push_back(parse_rational(v.get<std::string>()));
    }
    try {
        return Dist::from_probs(std::move(probs));
    } catch (const Error& e) {
        fail(ErrorCode::Parse, e.what());
    }
}

} // namespace ucs
