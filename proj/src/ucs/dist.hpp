#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ucs {

using Rational = mpq_class;
using Integer = mpz_class;

// Messages are 1-based indices into the universe [N].
using Element = std::uint32_t;

// Exact position of a probability on the log scale: floor(log2 1/p), plus
// whether p is an exact power of two (log2 1/p integral).
struct LogClass {
    std::uint64_t floor = 0;
    bool exact = false;

    // |log2 1/p - r| <= t, decided with integers only.
    bool within(std::int64_t r, std::int64_t t) const noexcept;
};

// floor(log2(1/q)) for 0 < q <= 1, from bit lengths of numerator and denominator.
std::uint64_t floor_neg_log(const Rational& q);
LogClass log_class(const Rational& q);

// Iterated-log count: the least i with log^(i) n <= 1.
unsigned log_star(std::uint64_t n);
// log^(k) n; empty when some intermediate value is not positive.
std::optional<double> iterated_log(std::uint64_t n, unsigned k);

double log2_rational(const Rational& q);

// An exact probability mass function over [N]. Immutable and cheap to copy.
class Dist {
public:
    // Throws Parse/InvalidArgument unless the probabilities are nonnegative and sum to exactly 1.
    static Dist from_probs(std::vector<Rational> probs);
    static Dist point_mass(std::size_t n, Element m);
    static Dist uniform(std::size_t n);

    std::size_t size() const noexcept { return impl_->probs.size(); }
    const Rational& prob(Element m) const { return impl_->probs.at(m - 1); }
    std::span<const Rational> probs() const noexcept { return impl_->probs; }
    bool in_support(Element m) const { return sgn(prob(m)) > 0; }

    // Only meaningful for support elements.
    const LogClass& log_class_of(Element m) const { return impl_->classes.at(m - 1); }

    // Support elements ordered by decreasing probability, ties by increasing index.
    std::span<const Element> by_decreasing_prob() const noexcept { return impl_->order; }
    std::span<const Element> support() const noexcept { return impl_->support; }

    double entropy() const noexcept { return impl_->entropy; }

    bool operator==(const Dist& other) const;

private:
    struct Impl {
        std::vector<Rational> probs;
        std::vector<LogClass> classes;
        std::vector<Element> order;
        std::vector<Element> support;
        double entropy = 0.0;
    };
    explicit Dist(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

double entropy(const Dist& p);

// max over the support of max(P/Q, Q/P); empty means infinite (support mismatch).
std::optional<Rational> max_ratio(const Dist& p, const Dist& q);
// log2 of max_ratio, +infinity on support mismatch.
double distance(const Dist& p, const Dist& q);
bool is_delta_close(const Dist& p, const Dist& q, unsigned delta);

// log2 of the largest unit set (probabilities within a factor of two).
double capacity(const Dist& p);
std::size_t max_unit_set_size(const Dist& p);

enum class FamilyKind { Flat, Geometric, Binomial };

struct FamilyTag {
    FamilyKind kind = FamilyKind::Flat;
    std::size_t n = 1;
    std::vector<Element> support;   // flat
    Rational parameter;             // ratio alpha (geometric) or bias p (binomial)
    std::vector<Element> permutation; // pi(1..N); empty means identity
};

Dist make_family(const FamilyTag& tag);
std::string family_name(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& name);
std::vector<Element> seeded_permutation(std::size_t n, std::uint64_t seed);

// Every Q with denominator dividing 2^bits that is delta-close to P, in lexicographic
// order of numerators.
std::vector<Dist> perturb_enumerate(const Dist& p, unsigned delta, unsigned bits,
                                    std::size_t cap = 1'000'000);

// Randomly re-weights P by dyadic multipliers in [1, 2^delta] and renormalizes.
Dist perturb_sample(const Dist& p, unsigned delta, std::uint64_t seed,
                    unsigned attempts = 64);

// {"n": N, "probs": ["num/den", ...]}
std::string dist_to_json(const Dist& p);
Dist dist_from_json(const std::string& text);

std::string rational_to_string(const Rational& q);
Rational parse_rational(const std::string& text);

} // namespace ucs
