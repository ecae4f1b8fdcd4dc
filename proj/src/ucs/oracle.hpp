#pragma once

#include "ucs/chains.hpp"
#include "ucs/codec.hpp"
#include "ucs/graphs.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ucs::oracle {

// All numerator vectors (a_1..a_N) with sum 2^bits, lexicographic.
std::vector<std::vector<std::uint32_t>> dyadic_numerators(std::size_t n, unsigned bits);
std::vector<Dist> dyadic_pmfs(std::size_t n, unsigned bits);
// Integer closeness test on numerators over a common denominator.
bool close_numerators(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                      unsigned delta);

// floor(log2 1/q) by comparing q with successive powers of two.
std::uint64_t brute_floor_neg_log(const Rational& q);

// Smallest k with proper k-coloring, by plain backtracking.
std::size_t brute_chromatic(const Graph& g, std::uint64_t node_budget = 200'000'000);

// min over full extensions of the maximal displacement.
unsigned brute_subperm_distance(const SubPerm& a, const SubPerm& b, std::size_t n);

// Col(s, A) evaluated literally on full chains with S^2 enumeration.
class ReferenceColorer {
public:
    explicit ReferenceColorer(unsigned s, std::uint64_t seed = kProtocolSeed);
    ChainColor col(const Chain& a);

private:
    unsigned s_;
    IsolatingFamily family_;
    std::map<std::string, ChainColor> memo_;
};

struct ChainScanReport {
    std::size_t n = 0;
    unsigned s = 0;
    unsigned k = 0;          // chains of length 2k
    std::size_t chains = 0;
    std::size_t neighbours = 0; // chains of length 2k-1
    std::size_t related_pairs = 0;
    std::size_t collisions = 0;
    std::uint64_t max_color = 0;
    bool size_bound_checked = false;
    double size_bound = 0;
    std::size_t size_bound_violations = 0;
    std::size_t reference_mismatches = 0;
};

// All chains of length 2k and size <= s over [N], paired through shared S^1 neighbours.
ChainScanReport brute_chain_collision_scan(std::size_t n, unsigned s, unsigned k,
                                           bool compare_reference = false);

struct VerificationConfig {
    std::string scheme = "simple";
    std::size_t n = 2;
    unsigned delta = 0;
    Rational epsilon = 0;
    unsigned bits = 2;
    std::uint64_t seed = kProtocolSeed;
    std::size_t fault_every = 0; // inject a bit flip into every k-th decoded codeword
    std::uint64_t max_trials = 50'000'000;
};

struct VerificationFailure {
    std::string p, q;
    Element m = 0;
    std::string codeword;
    std::string what;
};

struct DistributionRow {
    std::string p;
    double entropy = 0;
    double expected_length = 0; // L(P)
    double bottom_probability = 0;
};

struct VerificationReport {
    VerificationConfig config;
    std::uint64_t distributions = 0;
    std::uint64_t pairs = 0;   // ordered close pairs (P, Q)
    std::uint64_t trials = 0;  // (P, Q, m) round trips
    std::uint64_t encodes = 0;
    std::uint64_t bottoms = 0;
    std::uint64_t failure_count = 0;
    std::vector<VerificationFailure> failures; // first few
    double mean_length = 0;
    std::size_t p50_length = 0, p90_length = 0, max_length = 0;
    double mean_bottom_probability = 0;
    double max_bottom_probability = 0;
    std::uint64_t faults_injected = 0;
    std::uint64_t faults_detected = 0;   // error or wrong message
    std::uint64_t faults_undetected = 0; // still decoded to m
    std::vector<DistributionRow> rows;
    bool pass = false;
};

VerificationReport verify_scheme(const VerificationConfig& config);

std::string report_to_json(const VerificationReport& r);
std::string report_to_csv(const VerificationReport& r);

} // namespace ucs::oracle
