#pragma once

#include "ucs/chains.hpp"
#include "ucs/codec.hpp"

#include <map>
#include <memory>
#include <span>

namespace ucs {

// f = 2 max(1, log* N)
unsigned low_chain_length(std::size_t n);

// A_0 = {m}; A_k = {m' : |log2 1/P(m') - r| <= (k+1)Δ + 1}, r = floor(log2 1/P(m)).
Chain build_encoder_chain(const Dist& p, Element m, unsigned delta, unsigned f);
// B_0 = {w} for the Q-largest w within Δ+1 of r; B_k as above for Q, length f - 1.
Chain build_decoder_chain(const Dist& q, std::uint64_t r, unsigned delta, unsigned f);

// Colorers keyed by size bound, shared between encoder and decoder calls.
class ColorerPool {
public:
    explicit ColorerPool(std::uint64_t seed = kProtocolSeed,
                         std::uint64_t index_budget = kDefaultIndexBudget)
        : seed_(seed), budget_(index_budget) {}
    ChainColorer& get(unsigned s);

private:
    std::uint64_t seed_;
    std::uint64_t budget_;
    std::map<unsigned, std::unique_ptr<ChainColorer>> colorers_;
};

struct LowEncoding {
    bool bottom = false;
    unsigned f = 0;
    std::uint64_t r = 0;
    Chain chain = Chain::from_entries(0, {{1, 0}});
    ChainColor color;   // empty when bottom
    BitString codeword; // "0" when bottom
};

// Whether a chain of size s is rejected for a prior of entropy h.
bool low_rejects(std::uint64_t s, double h, unsigned delta, unsigned f, const Rational& epsilon);

LowEncoding encode_low_detail(const Dist& p, Element m, const CodecOptions& options,
                              ColorerPool& pool);
BitString encode_low(const Dist& p, Element m, const CodecOptions& options, ColorerPool& pool);

struct LowPayload {
    std::uint64_t s = 0;
    std::uint64_t r = 0;
    ColorLevel color{};
};
// Empty on ⊥. Throws MalformedCodeword.
std::optional<LowPayload> parse_low_codeword(const BitString& c);

std::optional<Element> decode_low(const Dist& q, const BitString& c, const CodecOptions& options,
                                  ColorerPool& pool);

// Chains A' of length f with size <= s, B in S^1(A') and outermost color `target`.
// Elements outside B may only be drawn from `outside`; they enter at level f-1.
std::vector<Chain> find_matching_chains(const Chain& b, ChainColorer& colorer,
                                        const ColorLevel& target, unsigned f,
                                        std::span<const Element> outside, std::size_t limit);
Chain find_matching_chain(const Chain& b, ChainColorer& colorer, const ColorLevel& target,
                          unsigned f, std::span<const Element> outside);

// Candidates for elements outside B: the Q-window of width (f+2)Δ+1 around r.
std::vector<Element> outside_candidates(const Dist& q, const Chain& b, std::uint64_t r,
                                        unsigned delta, unsigned f);

} // namespace ucs
