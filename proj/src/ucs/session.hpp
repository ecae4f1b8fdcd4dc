#pragma once

#include "ucs/codec.hpp"

#include <cstdint>
#include <string>

namespace ucs {

struct SessionConfig {
    std::size_t n = 0; // 0: taken from the distribution
    unsigned delta = 0;
    Rational epsilon = 0;
    std::string scheme = "simple";
    std::uint64_t seed = kProtocolSeed;
    std::uint64_t index_budget = kDefaultIndexBudget;
    std::uint64_t solver_budget = 50'000'000;
    unsigned chain_cap = 24;

    CodecOptions codec_options() const;
    std::string to_json() const;
};

// Fields absent from the JSON keep their current values.
void merge_session_json(SessionConfig& config, const std::string& text);
// UCS_BUDGET=<n> scales every search budget; returns whether it was set.
bool apply_budget_env(SessionConfig& config);

std::uint64_t parse_seed(const std::string& text);

} // namespace ucs
