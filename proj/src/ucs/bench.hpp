#pragma once

#include "ucs/dist.hpp"
#include "ucs/session.hpp"

#include <string>
#include <vector>

namespace ucs {

struct BenchFamily {
    FamilyKind kind = FamilyKind::Flat;
    std::size_t support = 1; // flat: support size
    Rational parameter = 0;  // geometric ratio / binomial bias
    bool permuted = false;
};

struct BenchCell {
    std::string scheme = "simple";
    std::size_t n = 16;
    unsigned delta = 0;
    Rational epsilon = 0;
    BenchFamily family;
    std::uint64_t seed = kProtocolSeed;
};

struct BenchRow {
    BenchCell cell;
    double entropy = 0;
    double capacity = 0;
    double mean_length = 0; // L(P), exact over the support
    double bottom_rate = 0; // Pr_{m<-P}[⊥]
    double error_mass = 0;  // probability of messages whose encoding threw
    std::size_t support = 0;
};

Dist make_bench_dist(const BenchFamily& family, std::size_t n, std::uint64_t seed);
std::string describe_family(const BenchFamily& family);

BenchRow run_bench_cell(const BenchCell& cell);

// {"bench": [{"scheme", "n": [...], "delta": [...], "epsilon", "seed",
//             "families": [{"kind", "support"|"parameter", "permuted"}]}]}
std::vector<BenchCell> load_bench_grid(const std::string& json_text);

std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

} // namespace ucs
