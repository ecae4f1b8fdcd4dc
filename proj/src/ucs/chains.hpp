#pragma once

#include "ucs/dist.hpp"
#include "ucs/isolating_hash.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ucs {

// Ascending chain A_0 ⊆ A_1 ⊆ ... ⊆ A_k with |A_0| = 1, stored as the level at which
// each element first appears.
class Chain {
public:
    struct Entry {
        Element element;
        unsigned level;
        bool operator==(const Entry&) const = default;
    };

    static Chain from_levels(const std::vector<std::vector<Element>>& levels);
    static Chain from_entries(unsigned length, std::vector<Entry> entries);

    unsigned length() const noexcept { return length_; }
    std::size_t size() const noexcept { return entries_.size(); }
    Element leader() const noexcept { return leader_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::optional<unsigned> entry_of(Element e) const;

    std::vector<Element> level(unsigned i) const;
    std::vector<std::vector<Element>> levels() const;

    // A_0 .. A_k
    Chain prefix(unsigned k) const;
    // Y_i = A_{2i}; needs even length.
    Chain skeleton() const;

    // Sorted element lists per level, levels separated by '|'.
    std::string serialize() const;
    // Compact memo key.
    std::string key() const;

    bool operator==(const Chain&) const = default;

private:
    Chain(unsigned length, std::vector<Entry> entries);

    unsigned length_ = 0;
    Element leader_ = 0;
    std::vector<Entry> entries_; // sorted by element
};

// A_{i-d} ⊆ B_i ⊆ A_{i+d} for every level i of B; lgt(B) must equal lgt(A) - d.
bool within_distance(const Chain& b, const Chain& a, unsigned d);

// All B with within_distance(B, A, d), in a fixed order.
std::vector<Chain> enum_Sd(const Chain& a, unsigned d, std::size_t cap = 2'000'000);

struct ColorLevel {
    std::uint64_t index;  // j
    std::uint64_t bits;   // h_j of the previous color
    bool operator==(const ColorLevel&) const = default;
};

// Nested chain color: the leader, then one (j, bits) pair per recursion level.
struct ChainColor {
    Element leader = 0;
    unsigned size_bound = 0;
    std::vector<ColorLevel> levels;

    unsigned depth() const noexcept { return static_cast<unsigned>(levels.size()); }
    // Integer identity: the leader at depth 0, else (j-1)*2^l + bits + 1.
    std::uint64_t value() const;

    // Colors are points of a color space; only the outermost coordinate matters.
    bool operator==(const ChainColor& other) const {
        return depth() == other.depth() && size_bound == other.size_bound && value() == other.value();
    }
};

inline constexpr unsigned kMaxChainSize = 24;

// ceil(2.5 s)
unsigned color_hash_bits(unsigned s);
std::uint64_t color_value(const ColorLevel& level, unsigned hash_bits);

// Col(s, ·) with results memoized by even-level skeleton. One instance per size bound.
class ChainColorer {
public:
    explicit ChainColorer(unsigned size_bound, std::uint64_t seed = kProtocolSeed,
                          std::uint64_t index_budget = kDefaultIndexBudget);

    unsigned size_bound() const noexcept { return s_; }
    unsigned hash_bits() const noexcept { return bits_; }
    const IsolatingFamily& family() const noexcept { return family_; }

    // A has even length 2k and size <= s.
    ChainColor col(const Chain& a);
    // Same color computed from the skeleton Y_i = A_{2i} (length k).
    ChainColor col_skeleton(const Chain& y);

    std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    unsigned s_;
    unsigned bits_;
    std::uint64_t budget_;
    IsolatingFamily family_;
    std::unordered_map<std::string, ChainColor> memo_;
};

} // namespace ucs
