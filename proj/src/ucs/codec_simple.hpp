#pragma once

#include "ucs/codec.hpp"

#include <vector>

namespace ucs {

struct SimpleEncoding {
    unsigned hash_bits = 0;          // l = floor(log2 1/P(m)) + 2Δ + 1
    std::uint64_t index = 0;         // j
    std::vector<Element> confusable; // S
    BitString codeword;              // gamma(j) ++ h_j(m)
};

SimpleEncoding encode_simple_detail(const Dist& p, Element m, unsigned delta,
                                    std::uint64_t seed = kProtocolSeed,
                                    std::uint64_t index_budget = kDefaultIndexBudget);
BitString encode_simple(const Dist& p, Element m, unsigned delta,
                        std::uint64_t seed = kProtocolSeed,
                        std::uint64_t index_budget = kDefaultIndexBudget);

// Q-maximal preimage of the transmitted hash, ties to the smaller index.
Element decode_simple(const Dist& q, const BitString& c, std::uint64_t seed = kProtocolSeed);

} // namespace ucs
