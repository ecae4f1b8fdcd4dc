#include "ucs/isolating_hash.hpp"

#include "ucs/errors.hpp"

#include <algorithm>
#include <numeric>

namespace ucs {

namespace {

constexpr std::uint64_t kIndexMul = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kInputMul = 0xBF58476D1CE4E5B9ULL;
constexpr std::uint64_t kBlockMul = 0xD6E8FEB86659FD93ULL;

std::uint64_t tail_mask(unsigned bits, std::size_t t) noexcept {
    const std::size_t used = bits - 64 * t;
    if (used >= 64)
        return ~std::uint64_t{0};
    return ~std::uint64_t{0} << (64 - used);
}

} // namespace

std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

IsolatingFamily::IsolatingFamily(std::uint64_t domain, unsigned bits, std::uint64_t seed)
    : domain_(domain), bits_(bits), seed_(seed) {
    if (domain == 0 || bits == 0)
        fail(ErrorCode::InvalidArgument, "isolating family needs a nonempty domain and output");
}

std::uint64_t IsolatingFamily::block(std::uint64_t j, std::uint64_t x, std::uint64_t t) const noexcept {
    return splitmix64_finalize(seed_ ^ (j * kIndexMul) ^ (x * kInputMul) ^ (t * kBlockMul));
}

std::uint64_t IsolatingFamily::masked_block(std::uint64_t j, std::uint64_t x, std::size_t t) const noexcept {
    return block(j, x, t) & tail_mask(bits_, t);
}

BitString IsolatingFamily::eval(std::uint64_t j, std::uint64_t x) const {
    BitString out;
    for (std::size_t t = 0; t < words(); ++t) {
        const unsigned width = std::min<unsigned>(64, bits_ - static_cast<unsigned>(64 * t));
        out.append_bits(block(j, x, t) >> (64 - width), width);
    }
    return out;
}

std::uint64_t IsolatingFamily::eval_word(std::uint64_t j, std::uint64_t x) const {
    if (bits_ > 64)
        fail(ErrorCode::InvalidArgument, "eval_word needs at most 64 output bits");
    return block(j, x, 0) >> (64 - bits_);
}

std::vector<std::uint64_t> IsolatingFamily::masked_output(std::uint64_t j, std::uint64_t x) const {
    std::vector<std::uint64_t> out(words());
    for (std::size_t t = 0; t < out.size(); ++t)
        out[t] = masked_block(j, x, t);
    return out;
}

bool IsolatingFamily::matches(std::uint64_t j, std::uint64_t x,
                              std::span<const std::uint64_t> masked) const {
    if (masked.size() != words())
        return false;
    for (std::size_t t = 0; t < masked.size(); ++t)
        if (masked_block(j, x, t) != masked[t])
            return false;
    return true;
}

std::vector<std::uint64_t> pack_output(const BitString& bits) {
    std::vector<std::uint64_t> out((bits.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i])
            out[i / 64] |= std::uint64_t{1} << (63 - i % 64);
    return out;
}

bool isolates(const IsolatingFamily& family, std::uint64_t j, std::uint64_t m,
              std::span<const std::uint64_t> others) {
    const std::uint64_t head = family.masked_block(j, m, 0);
    std::vector<std::uint64_t> full;
    for (std::uint64_t x : others) {
        if (x == m)
            fail(ErrorCode::InvalidArgument, "element to isolate is in the set");
        if (family.masked_block(j, x, 0) != head)
            continue;
        if (family.words() == 1)
            return false;
        if (full.empty())
            full = family.masked_output(j, m);
        if (family.matches(j, x, full))
            return false;
    }
    return true;
}

std::uint64_t find_isolating_index(const IsolatingFamily& family, std::uint64_t m,
                                   std::span<const std::uint64_t> others, std::uint64_t j_max) {
    for (std::uint64_t j = 1; j <= j_max; ++j)
        if (isolates(family, j, m, others))
            return j;
    fail(ErrorCode::BudgetExhausted, "no isolating index within budget " + std::to_string(j_max));
}

bool verify_family_prefix(const IsolatingFamily& family, std::uint64_t prefix, std::uint64_t cap) {
    const std::uint64_t d = family.domain();
    const std::uint64_t half = family.bits() >= 64 ? ~std::uint64_t{0}
                                                   : std::uint64_t{1} << (family.bits() - 1);
    const std::uint64_t size = std::min(half, d - 1);

    // d * C(d-1, size) instances; supersets are harder, so maximal sets suffice.
    long double count = static_cast<long double>(d);
    for (std::uint64_t i = 0; i < size; ++i)
        count = count * static_cast<long double>(d - 1 - i) / static_cast<long double>(i + 1);
    if (count > static_cast<long double>(cap))
        fail(ErrorCode::CapExceeded, "family verification exceeds the instance cap");
    if (prefix == 0)
        return false;

    for (std::uint64_t m = 1; m <= d; ++m) {
        std::vector<std::uint64_t> rest;
        for (std::uint64_t x = 1; x <= d; ++x)
            if (x != m)
                rest.push_back(x);
        std::vector<bool> pick(rest.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
        std::vector<std::uint64_t> s;
        do {
            s.clear();
            for (std::size_t i = 0; i < rest.size(); ++i)
                if (pick[i])
                    s.push_back(rest[i]);
            bool found = false;
            for (std::uint64_t j = 1; j <= prefix && !found; ++j)
                found = isolates(family, j, m, s);
            if (!found)
                return false;
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return true;
}

} // namespace ucs
