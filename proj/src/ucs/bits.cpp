#include "ucs/bits.hpp"

#include "ucs/errors.hpp"

#include <bit>

namespace ucs {

BitString BitString::from_string(std::string_view zeros_and_ones) {
    BitString out;
    for (char c : zeros_and_ones) {
        if (c != '0' && c != '1')
            fail(ErrorCode::Parse, "bit string may contain only '0' and '1'");
        out.push_back(c == '1');
    }
    return out;
}

void BitString::append_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;)
        bits_.push_back(((value >> i) & 1U) != 0);
}

void BitString::append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString BitString::slice(std::size_t from, std::size_t to) const {
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(from),
                     bits_.begin() + static_cast<std::ptrdiff_t>(to));
    return out;
}

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_)
        s.push_back(b ? '1' : '0');
    return s;
}

bool BitReader::read_bit() {
    if (pos_ >= bits_->size())
        fail(ErrorCode::MalformedCodeword, "codeword truncated");
    return (*bits_)[pos_++];
}

std::uint64_t BitReader::read_bits(unsigned width) {
    if (width > 64)
        fail(ErrorCode::MalformedCodeword, "field wider than 64 bits");
    if (remaining() < width)
        fail(ErrorCode::MalformedCodeword, "codeword truncated");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i)
        v = (v << 1) | static_cast<std::uint64_t>((*bits_)[pos_++]);
    return v;
}

std::uint64_t BitReader::read_gamma() {
    unsigned zeros = 0;
    while (!read_bit()) {
        if (++zeros > 63)
            fail(ErrorCode::MalformedCodeword, "gamma code longer than 64 bits");
    }
    std::uint64_t rest = read_bits(zeros);
    return (std::uint64_t{1} << zeros) | rest;
}

BitString BitReader::read_rest() {
    BitString out = bits_->slice(pos_, bits_->size());
    pos_ = bits_->size();
    return out;
}

void write_gamma(BitString& out, std::uint64_t value) {
    if (value == 0)
        fail(ErrorCode::InvalidArgument, "gamma code requires a positive integer");
    const unsigned width = static_cast<unsigned>(std::bit_width(value));
    out.append_bits(0, width - 1);
    out.append_bits(value, width);
}

std::size_t gamma_length(std::uint64_t value) {
    return 2 * static_cast<std::size_t>(std::bit_width(value)) - 1;
}

std::vector<std::uint8_t> pad_to_bytes(const BitString& bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 1 + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i])
            bytes[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    bytes[bits.size() / 8] |= static_cast<std::uint8_t>(0x80U >> (bits.size() % 8));
    return bytes;
}

BitString unpad_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.empty())
        fail(ErrorCode::MalformedCodeword, "empty codeword file");
    const std::uint8_t last = bytes.back();
    if (last == 0)
        fail(ErrorCode::MalformedCodeword, "missing terminator bit");
    const unsigned trailing = static_cast<unsigned>(std::countr_zero(last));
    const std::size_t nbits = bytes.size() * 8 - trailing - 1;
    BitString out;
    for (std::size_t i = 0; i < nbits; ++i)
        out.push_back(((bytes[i / 8] >> (7 - i % 8)) & 1U) != 0);
    return out;
}

} // namespace ucs
