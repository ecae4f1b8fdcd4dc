#pragma once

#include "ucs/dist.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ucs {

// k-subpermutation ⟨π(1), ..., π(k)⟩ of [N].
using SubPerm = std::vector<Element>;

std::vector<SubPerm> enumerate_subperms(std::size_t n, std::size_t k, std::size_t cap = 200'000);

// Smallest l with {π(1..i)} ⊆ {σ(1..i+l)} and {σ(1..i)} ⊆ {π(1..i+l)} whenever i + l <= k.
unsigned subperm_distance(const SubPerm& a, const SubPerm& b);

SubPerm restrict_hom(const SubPerm& p, std::size_t k);

struct Graph {
    std::vector<std::vector<std::uint32_t>> adj; // sorted neighbour lists

    std::size_t vertices() const noexcept { return adj.size(); }
    std::size_t edges() const;
    bool adjacent(std::uint32_t u, std::uint32_t v) const;
};

Graph complete_graph(std::size_t n);

struct SubPermGraph {
    std::size_t n = 0;
    unsigned l = 0; // 0 for shift graphs
    std::size_t k = 0;
    std::vector<SubPerm> vertices;
    Graph graph;

    std::optional<std::uint32_t> index_of(const SubPerm& p) const;
};

// Edge iff π(1) != σ(1) and distance <= l.
SubPermGraph build_unc_graph(std::size_t n, unsigned l, std::size_t k, std::size_t cap = 200'000);
// π is a left shift of σ: π(i) = σ(i+1) for i < k and π(k) != σ(1); edges join shifts. k < N.
bool is_left_shift(const SubPerm& p, const SubPerm& s);
SubPermGraph build_shift_graph(std::size_t n, std::size_t k, std::size_t cap = 200'000);

std::string graph_to_text(const SubPermGraph& g, const std::string& kind);

struct LevelStats {
    std::size_t k = 0;
    std::size_t d = 0;           // distinct restricted neighbours, maximised over vertices
    double d_bound = 0;          // (2l+1)^k
    std::size_t colors = 0;
    std::size_t prev_colors = 0; // c
    std::size_t color_bound = 0; // 2d(d+1) ceil(log2 c)
    std::uint64_t max_index = 0;
};

struct ColoringResult {
    std::string method;
    std::vector<std::uint32_t> colors; // dense ids 0..count-1
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::vector<LevelStats> levels;                // iterated hash coloring
    std::vector<std::vector<std::uint8_t>> covers; // fractional cover: the f used per color
    double count_bound = 0;
};

bool verify_coloring(const Graph& g, const std::vector<std::uint32_t>& colors);

// DSATUR branch and bound. Throws BudgetExhausted past `node_budget` search nodes.
ColoringResult exact_chromatic(const Graph& g, std::uint64_t node_budget = 50'000'000);
ColoringResult greedy_chromatic(const Graph& g, const std::vector<std::uint32_t>& order);

// Colors U_{N,l,k} by covering with the independent sets I_f, f : [N] -> [2l].
ColoringResult frac_cover_color(const SubPermGraph& g, std::uint64_t seed,
                                std::size_t max_samples = 1'000'000);

// Base coloring π(1) on U_{N,l,k0}, then hash-refined up to k in steps of l.
ColoringResult iterated_hash_color(std::size_t n, unsigned l, std::size_t k,
                                   std::uint64_t seed = 0x5EED1D, std::size_t cap = 200'000);

// max over π of |{restrict(σ, k-l) : σ ~ π}| in U_{N,l,k}.
std::size_t measure_dk(const SubPermGraph& g);

// Interleave around the centre: ⟨π(t+1), π(t+2), π(t), π(t+3), ...⟩ with t = floor(k/2).
SubPerm shift_embedding(const SubPerm& p);

struct EmbeddingReport {
    std::size_t shift_edges = 0;
    std::size_t failures = 0; // shift edges whose images are not adjacent in U_{N,2,k}
    bool injective = true;
    std::optional<std::vector<std::size_t>> working_positions; // brute-force position map
};
EmbeddingReport check_shift_embedding(std::size_t n, std::size_t k);

} // namespace ucs
