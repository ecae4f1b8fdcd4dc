#pragma once

#include "ucs/bits.hpp"
#include "ucs/dist.hpp"
#include "ucs/isolating_hash.hpp"

#include <memory>
#include <optional>
#include <string>

namespace ucs {

struct CodecOptions {
    unsigned delta = 0;
    Rational epsilon = 0;  // 0 disables the low-entropy threshold
    std::uint64_t seed = kProtocolSeed;
    std::uint64_t index_budget = kDefaultIndexBudget;
    unsigned chain_cap = 24;
};

// The one-bit codeword "0" stands for ⊥ in every scheme.
BitString bottom_codeword();
bool is_bottom(const BitString& c);

// Encoder/decoder pair. Instances may cache internally: use one per thread.
class Scheme {
public:
    virtual ~Scheme() = default;
    virtual std::string name() const = 0;
    virtual BitString encode(const Dist& p, Element m) = 0;
    // Empty on ⊥.
    virtual std::optional<Element> decode(const Dist& q, const BitString& c) = 0;
};

std::unique_ptr<Scheme> make_simple_scheme(const CodecOptions& options);
std::unique_ptr<Scheme> make_low_scheme(const CodecOptions& options);
std::unique_ptr<Scheme> make_reduced_scheme(std::unique_ptr<Scheme> inner);

// "simple", "low", "reduced+simple", "reduced+low"
std::unique_ptr<Scheme> make_scheme(const std::string& id, const CodecOptions& options);

} // namespace ucs
