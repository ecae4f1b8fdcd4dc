#pragma once

#include "ucs/bits.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ucs {

inline constexpr std::uint64_t kProtocolSeed = 0x5EED1D;
inline constexpr std::uint64_t kDefaultIndexBudget = std::uint64_t{1} << 20;

std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept;

// h_j : [D] -> {0,1}^bits, j = 1, 2, ...
//
// Block t of h_j(x) is splitmix64_finalize(seed ^ j*C1 ^ x*C2 ^ t*C3); the output is
// the first `bits` bits of blocks 0, 1, ... concatenated, most significant bit first.
class IsolatingFamily {
public:
    IsolatingFamily(std::uint64_t domain, unsigned bits, std::uint64_t seed = kProtocolSeed);

    std::uint64_t domain() const noexcept { return domain_; }
    unsigned bits() const noexcept { return bits_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t words() const noexcept { return (bits_ + 63) / 64; }

    // Raw 64-bit block t, unmasked.
    std::uint64_t block(std::uint64_t j, std::uint64_t x, std::uint64_t t) const noexcept;
    // Block t with the bits past the output length cleared.
    std::uint64_t masked_block(std::uint64_t j, std::uint64_t x, std::size_t t) const noexcept;

    BitString eval(std::uint64_t j, std::uint64_t x) const;
    // The output as an integer; requires bits <= 64.
    std::uint64_t eval_word(std::uint64_t j, std::uint64_t x) const;
    // Whether h_j(x) equals the given output, comparing block by block.
    bool matches(std::uint64_t j, std::uint64_t x, std::span<const std::uint64_t> masked) const;
    std::vector<std::uint64_t> masked_output(std::uint64_t j, std::uint64_t x) const;

private:
    std::uint64_t domain_;
    unsigned bits_;
    std::uint64_t seed_;
};

// Packs a bit string of exactly family.bits() bits into masked blocks.
std::vector<std::uint64_t> pack_output(const BitString& bits);

// Smallest j <= j_max with h_j(m) outside h_j(others). Throws BudgetExhausted.
std::uint64_t find_isolating_index(const IsolatingFamily& family, std::uint64_t m,
                                   std::span<const std::uint64_t> others,
                                   std::uint64_t j_max = kDefaultIndexBudget);

bool isolates(const IsolatingFamily& family, std::uint64_t j, std::uint64_t m,
              std::span<const std::uint64_t> others);

// Exhaustive: do h_1..h_M isolate every m from every S of size min(2^(bits-1), D-1)?
// Throws CapExceeded when the number of (m, S) instances exceeds the cap.
bool verify_family_prefix(const IsolatingFamily& family, std::uint64_t prefix,
                          std::uint64_t cap = 5'000'000);

} // namespace ucs
