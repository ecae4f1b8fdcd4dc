#pragma once

#include "ucs/codec.hpp"

namespace ucs {

// P_M(1) = 1 - 1/M + P(1)/M, P_M(i) = P(i)/M otherwise.
Dist concentrate(const Dist& p, std::uint64_t m);

// max(1, ceil(H(P)))
std::uint64_t concentration_factor(const Dist& p);

BitString encode_reduced(Scheme& inner, const Dist& p, Element m);
std::optional<Element> decode_reduced(Scheme& inner, const Dist& q, const BitString& c);

} // namespace ucs
