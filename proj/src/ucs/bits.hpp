#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ucs {

// Growable bit sequence, most significant bit first.
class BitString {
public:
    BitString() = default;

    static BitString from_string(std::string_view zeros_and_ones);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i]; }

    void push_back(bool bit) { bits_.push_back(bit); }
    // Appends the low `width` bits of `value`, high bit first.
    void append_bits(std::uint64_t value, unsigned width);
    void append(const BitString& other);

    BitString slice(std::size_t from, std::size_t to) const;
    std::string to_string() const;

    bool operator==(const BitString&) const = default;

private:
    std::vector<bool> bits_;
};

class BitReader {
public:
    explicit BitReader(const BitString& bits) : bits_(&bits) {}

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bits_->size() - pos_; }

    bool read_bit();
    std::uint64_t read_bits(unsigned width);
    std::uint64_t read_gamma();
    BitString read_rest();

private:
    const BitString* bits_;
    std::size_t pos_ = 0;
};

// Elias gamma: floor(log2 v) zeros followed by v in binary. v >= 1.
void write_gamma(BitString& out, std::uint64_t value);
std::size_t gamma_length(std::uint64_t value);

// File framing: the bits, then a single 1, then zeros to the byte boundary.
std::vector<std::uint8_t> pad_to_bytes(const BitString& bits);
BitString unpad_bytes(std::span<const std::uint8_t> bytes);

} // namespace ucs
