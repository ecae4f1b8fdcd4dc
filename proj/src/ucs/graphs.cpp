#include "ucs/graphs.hpp"

#include "ucs/errors.hpp"
#include "ucs/isolating_hash.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace ucs {

std::vector<SubPerm> enumerate_subperms(std::size_t n, std::size_t k, std::size_t cap) {
    if (k > n)
        fail(ErrorCode::InvalidArgument, "subpermutation longer than the universe");
    long double count = 1;
    for (std::size_t i = 0; i < k; ++i)
        count *= static_cast<long double>(n - i);
    if (count > static_cast<long double>(cap))
        fail(ErrorCode::CapExceeded, "too many subpermutations");
    std::vector<SubPerm> out;
    SubPerm cur;
    std::vector<bool> used(n + 1, false);
    auto rec = [&](auto&& self) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (Element e = 1; e <= n; ++e) {
            if (used[e])
                continue;
            used[e] = true;
            cur.push_back(e);
            self(self);
            cur.pop_back();
            used[e] = false;
        }
    };
    rec(rec);
    return out;
}

unsigned subperm_distance(const SubPerm& a, const SubPerm& b) {
    if (a.size() != b.size())
        fail(ErrorCode::InvalidArgument, "subpermutations of different lengths");
    const std::size_t k = a.size();
    auto position = [](const SubPerm& p, Element e) -> std::size_t {
        auto it = std::find(p.begin(), p.end(), e);
        return it == p.end() ? std::size_t(-1) : static_cast<std::size_t>(it - p.begin());
    };
    for (std::size_t l = 0; l <= k; ++l) {
        bool ok = true;
        // The element at position p of one must sit at position <= p + l of the other.
        for (std::size_t p = 0; ok && p + l < k; ++p)
            ok = position(b, a[p]) <= p + l && position(a, b[p]) <= p + l;
        if (ok)
            return static_cast<unsigned>(l);
    }
    return static_cast<unsigned>(k);
}

SubPerm restrict_hom(const SubPerm& p, std::size_t k) {
    if (k > p.size())
        fail(ErrorCode::InvalidArgument, "restriction longer than the subpermutation");
    return SubPerm(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k));
}

std::size_t Graph::edges() const {
    std::size_t total = 0;
    for (const auto& a : adj)
        total += a.size();
    return total / 2;
}

bool Graph::adjacent(std::uint32_t u, std::uint32_t v) const {
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

Graph complete_graph(std::size_t n) {
    Graph g;
    g.adj.resize(n);
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = 0; v < n; ++v)
            if (u != v)
                g.adj[u].push_back(v);
    return g;
}

std::optional<std::uint32_t> SubPermGraph::index_of(const SubPerm& p) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), p);
    if (it == vertices.end() || *it != p)
        return std::nullopt;
    return static_cast<std::uint32_t>(it - vertices.begin());
}

namespace {

template <class Pred>
SubPermGraph build_graph(std::size_t n, unsigned l, std::size_t k, std::size_t cap, Pred edge) {
    SubPermGraph g;
    g.n = n;
    g.l = l;
    g.k = k;
    g.vertices = enumerate_subperms(n, k, cap);
    g.graph.adj.resize(g.vertices.size());
    for (std::uint32_t u = 0; u < g.vertices.size(); ++u)
        for (std::uint32_t v = u + 1; v < g.vertices.size(); ++v)
            if (edge(g.vertices[u], g.vertices[v])) {
                g.graph.adj[u].push_back(v);
                g.graph.adj[v].push_back(u);
            }
    for (auto& a : g.graph.adj)
        std::sort(a.begin(), a.end());
    return g;
}

} // namespace

SubPermGraph build_unc_graph(std::size_t n, unsigned l, std::size_t k, std::size_t cap) {
    if (k == 0)
        fail(ErrorCode::InvalidArgument, "uncertainty graphs need k >= 1");
    return build_graph(n, l, k, cap, [l](const SubPerm& a, const SubPerm& b) {
        return a[0] != b[0] && subperm_distance(a, b) <= l;
    });
}

bool is_left_shift(const SubPerm& p, const SubPerm& s) {
    const std::size_t k = p.size();
    for (std::size_t i = 0; i + 1 < k; ++i)
        if (p[i] != s[i + 1])
            return false;
    return p[k - 1] != s[0];
}

SubPermGraph build_shift_graph(std::size_t n, std::size_t k, std::size_t cap) {
    if (k == 0 || k >= n)
        fail(ErrorCode::InvalidArgument, "shift graphs need 1 <= k < N");
    return build_graph(n, 0, k, cap, [](const SubPerm& a, const SubPerm& b) {
        return is_left_shift(a, b) || is_left_shift(b, a);
    });
}

std::string graph_to_text(const SubPermGraph& g, const std::string& kind) {
    std::ostringstream out;
    out << "# " << kind << " N=" << g.n << " l=" << g.l << " k=" << g.k
        << " vertices=" << g.vertices.size() << " edges=" << g.graph.edges() << "\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        out << v << " <";
        for (std::size_t i = 0; i < g.vertices[v].size(); ++i)
            out << (i ? "," : "") << g.vertices[v][i];
        out << ">:";
        for (auto w : g.graph.adj[v])
            out << ' ' << w;
        out << "\n";
    }
    return out.str();
}

bool verify_coloring(const Graph& g, const std::vector<std::uint32_t>& colors) {
    if (colors.size() != g.vertices())
        return false;
    for (std::uint32_t u = 0; u < g.vertices(); ++u)
        for (auto v : g.adj[u])
            if (colors[u] == colors[v])
                return false;
    return true;
}

namespace {

class Dsatur {
public:
    Dsatur(const Graph& g, std::uint64_t budget)
        : g_(g), n_(g.vertices()), budget_(budget), color_(n_, -1),
          seen_(n_, std::vector<std::uint32_t>(n_ + 1, 0)), saturation_(n_, 0) {}

    std::vector<std::uint32_t> greedy() {
        for (std::size_t step = 0; step < n_; ++step) {
            const std::uint32_t v = pick();
            std::uint32_t c = 0;
            while (seen_[v][c] != 0)
                ++c;
            assign(v, c);
        }
        std::vector<std::uint32_t> out(color_.begin(), color_.end());
        for (std::uint32_t v = 0; v < n_; ++v)
            unassign(v);
        return out;
    }

    std::vector<std::uint32_t> solve() {
        if (n_ == 0)
            return {};
        best_ = greedy();
        best_count_ = 1 + *std::max_element(best_.begin(), best_.end());
        lower_ = clique_bound();
        if (best_count_ > lower_)
            search(0, 0);
        return best_;
    }

private:
    std::uint32_t pick() const {
        std::uint32_t best = 0;
        bool have = false;
        for (std::uint32_t v = 0; v < n_; ++v) {
            if (color_[v] >= 0)
                continue;
            if (!have || saturation_[v] > saturation_[best] ||
                (saturation_[v] == saturation_[best] && g_.adj[v].size() > g_.adj[best].size())) {
                best = v;
                have = true;
            }
        }
        return best;
    }

    void assign(std::uint32_t v, std::uint32_t c) {
        color_[v] = static_cast<int>(c);
        for (auto w : g_.adj[v])
            if (seen_[w][c]++ == 0)
                ++saturation_[w];
    }

    void unassign(std::uint32_t v) {
        const auto c = static_cast<std::uint32_t>(color_[v]);
        color_[v] = -1;
        for (auto w : g_.adj[v])
            if (--seen_[w][c] == 0)
                --saturation_[w];
    }

    std::size_t clique_bound() const {
        // Greedy clique from each vertex.
        std::size_t best = 1;
        for (std::uint32_t s = 0; s < n_; ++s) {
            std::vector<std::uint32_t> clique{s};
            for (auto w : g_.adj[s]) {
                bool ok = true;
                for (auto u : clique)
                    if (u != s && !g_.adjacent(u, w)) {
                        ok = false;
                        break;
                    }
                if (ok)
                    clique.push_back(w);
            }
            best = std::max(best, clique.size());
        }
        return best;
    }

    void search(std::size_t colored, std::uint32_t used) {
        if (done_)
            return;
        if (++nodes_ > budget_)
            fail(ErrorCode::BudgetExhausted, "exact coloring exceeded its node budget");
        if (used >= best_count_)
            return;
        if (colored == n_) {
            best_count_ = used;
            best_.assign(color_.begin(), color_.end());
            done_ = best_count_ <= lower_;
            return;
        }
        const std::uint32_t v = pick();
        for (std::uint32_t c = 0; c <= used && !done_; ++c) {
            if (c == used && used + 1 >= best_count_)
                break;
            if (seen_[v][c] != 0)
                continue;
            assign(v, c);
            search(colored + 1, std::max(used, c + 1));
            unassign(v);
        }
    }

    const Graph& g_;
    std::size_t n_;
    std::uint64_t budget_;
    std::vector<int> color_;
    std::vector<std::vector<std::uint32_t>> seen_;
    std::vector<std::uint32_t> saturation_;
    std::vector<std::uint32_t> best_;
    std::size_t best_count_ = 0;
    std::size_t lower_ = 1;
    std::uint64_t nodes_ = 0;
    bool done_ = false;
};

std::size_t count_colors(const std::vector<std::uint32_t>& colors) {
    return std::set<std::uint32_t>(colors.begin(), colors.end()).size();
}

} // namespace

ColoringResult exact_chromatic(const Graph& g, std::uint64_t node_budget) {
    ColoringResult out;
    out.method = "exact";
    out.colors = Dsatur(g, node_budget).solve();
    out.count = count_colors(out.colors);
    if (!verify_coloring(g, out.colors))
        fail(ErrorCode::DecodeFailed, "exact solver produced an invalid coloring");
    return out;
}

ColoringResult greedy_chromatic(const Graph& g, const std::vector<std::uint32_t>& order) {
    if (order.size() != g.vertices())
        fail(ErrorCode::InvalidArgument, "greedy order must list every vertex once");
    ColoringResult out;
    out.method = "greedy";
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    out.colors.assign(g.vertices(), unset);
    for (auto v : order) {
        if (v >= g.vertices() || out.colors[v] != unset)
            fail(ErrorCode::InvalidArgument, "greedy order must list every vertex once");
        std::set<std::uint32_t> taken;
        for (auto w : g.adj[v])
            taken.insert(out.colors[w]);
        std::uint32_t c = 0;
        while (taken.count(c))
            ++c;
        out.colors[v] = c;
    }
    out.count = count_colors(out.colors);
    return out;
}

ColoringResult frac_cover_color(const SubPermGraph& g, std::uint64_t seed, std::size_t max_samples) {
    const unsigned l = g.l;
    if (l == 0 || g.k < l + 1)
        fail(ErrorCode::InvalidArgument, "fractional cover needs l >= 1 and k >= l+1");
    ColoringResult out;
    out.method = "frac_cover";
    out.seed = seed;
    const std::size_t nv = g.vertices.size();
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    out.colors.assign(nv, unset);
    std::size_t uncovered = nv;
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> f(g.n + 1);
    for (std::size_t sample = 0; uncovered > 0; ++sample) {
        if (sample >= max_samples)
            fail(ErrorCode::BudgetExhausted, "fractional cover did not finish within the sample cap");
        for (std::size_t e = 1; e <= g.n; ++e)
            f[e] = static_cast<std::uint8_t>(1 + rng() % (2 * l));
        std::vector<std::uint32_t> members;
        for (std::uint32_t v = 0; v < nv; ++v) {
            const SubPerm& p = g.vertices[v];
            bool in = f[p[0]] == 1;
            for (std::size_t j = 1; in && j <= l; ++j)
                in = f[p[j]] != 1;
            if (in)
                members.push_back(v);
        }
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                if (g.graph.adjacent(members[a], members[b]))
                    fail(ErrorCode::DecodeFailed, "sampled cover set is not independent");
        bool fresh = false;
        for (auto v : members)
            if (out.colors[v] == unset) {
                out.colors[v] = static_cast<std::uint32_t>(out.covers.size());
                --uncovered;
                fresh = true;
            }
        if (fresh)
            out.covers.emplace_back(f.begin() + 1, f.end());
    }
    out.count = out.covers.size();
    out.count_bound = 8.0 * l * std::log(static_cast<double>(nv)) + 10.0;
    if (!verify_coloring(g.graph, out.colors))
        fail(ErrorCode::DecodeFailed, "fractional cover produced an invalid coloring");
    return out;
}

std::size_t measure_dk(const SubPermGraph& g) {
    const std::size_t target = g.k >= g.l ? g.k - g.l : 0;
    std::size_t best = 0;
    for (std::uint32_t v = 0; v < g.vertices.size(); ++v) {
        std::set<SubPerm> images;
        for (auto w : g.graph.adj[v])
            images.insert(restrict_hom(g.vertices[w], target));
        best = std::max(best, images.size());
    }
    return best;
}

ColoringResult iterated_hash_color(std::size_t n, unsigned l, std::size_t k, std::uint64_t seed,
                                   std::size_t cap) {
    if (l == 0 || k == 0)
        fail(ErrorCode::InvalidArgument, "iterated coloring needs l >= 1 and k >= 1");
    ColoringResult out;
    out.method = "iterated_hash";
    out.seed = seed;

    std::size_t level_k = (k - 1) % l + 1;
    SubPermGraph prev = build_unc_graph(n, l, level_k, cap);
    std::vector<std::uint32_t> prev_colors(prev.vertices.size());
    {
        std::map<Element, std::uint32_t> dense;
        for (std::size_t v = 0; v < prev.vertices.size(); ++v)
            prev_colors[v] = dense.emplace(prev.vertices[v][0], dense.size()).first->second;
        LevelStats base;
        base.k = level_k;
        base.colors = dense.size();
        base.color_bound = n;
        out.levels.push_back(base);
    }
    if (!verify_coloring(prev.graph, prev_colors))
        fail(ErrorCode::DecodeFailed, "base coloring is invalid");

    const IsolatingFamily family(std::numeric_limits<std::uint64_t>::max(), 64, seed);
    while (level_k < k) {
        level_k += l;
        SubPermGraph cur = build_unc_graph(n, l, level_k, cap);
        const std::size_t prev_count = out.levels.back().colors;

        LevelStats stats;
        stats.k = level_k;
        stats.d = measure_dk(cur);
        stats.d_bound = std::pow(2.0 * l + 1.0, static_cast<double>(level_k));
        stats.prev_colors = prev_count;
        const std::uint64_t range = std::max<std::uint64_t>(1, 2 * stats.d);
        auto bucket = [&](std::uint64_t j, std::uint64_t x) {
            return static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(family.block(j, x, 0)) * range) >> 64);
        };

        std::vector<std::uint32_t> colors(cur.vertices.size());
        std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint32_t> dense;
        for (std::uint32_t v = 0; v < cur.vertices.size(); ++v) {
            auto own_index = prev.index_of(restrict_hom(cur.vertices[v], level_k - l));
            const std::uint64_t own = prev_colors[*own_index] + 1;
            std::set<std::uint64_t> others;
            for (auto w : cur.graph.adj[v]) {
                auto idx = prev.index_of(restrict_hom(cur.vertices[w], level_k - l));
                others.insert(prev_colors[*idx] + 1);
            }
            if (others.count(own))
                fail(ErrorCode::DecodeFailed, "restriction is not a homomorphism");
            std::uint64_t j = 1;
            for (;; ++j) {
                if (j > kDefaultIndexBudget)
                    fail(ErrorCode::BudgetExhausted, "no isolating index for a vertex");
                const std::uint64_t mine = bucket(j, own);
                bool clash = false;
                for (auto x : others)
                    if (bucket(j, x) == mine) {
                        clash = true;
                        break;
                    }
                if (!clash)
                    break;
            }
            stats.max_index = std::max(stats.max_index, j);
            colors[v] = dense.emplace(std::make_pair(j, bucket(j, own)), dense.size()).first->second;
        }
        if (!verify_coloring(cur.graph, colors))
            fail(ErrorCode::DecodeFailed, "iterated hash coloring is invalid");
        stats.colors = dense.size();
        const auto log_c = static_cast<std::size_t>(
            std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(prev_count, 2)))));
        stats.color_bound = std::max<std::size_t>(1, 2 * stats.d * (stats.d + 1) * log_c);
        out.levels.push_back(stats);
        prev = std::move(cur);
        prev_colors = std::move(colors);
    }
    out.colors = prev_colors;
    out.count = out.levels.back().colors;
    return out;
}

SubPerm shift_embedding(const SubPerm& p) {
    const std::size_t k = p.size();
    if (k < 2)
        fail(ErrorCode::InvalidArgument, "shift embedding needs k >= 2");
    const auto t = static_cast<std::ptrdiff_t>(k / 2);
    SubPerm out;
    out.reserve(k);
    for (std::ptrdiff_t step = 0; out.size() < k; ++step) {
        // Offsets 0, +1, -1, +2, -2, ... around the 0-based centre t.
        const std::ptrdiff_t offset = step % 2 == 1 ? (step + 1) / 2 : -(step / 2);
        const std::ptrdiff_t pos = t + offset;
        if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(k))
            out.push_back(p[static_cast<std::size_t>(pos)]);
    }
    return out;
}

EmbeddingReport check_shift_embedding(std::size_t n, std::size_t k) {
    EmbeddingReport report;
    const SubPermGraph shift = build_shift_graph(n, k);
    auto adjacent_in_unc = [](const SubPerm& a, const SubPerm& b) {
        return a[0] != b[0] && subperm_distance(a, b) <= 2;
    };

    std::set<SubPerm> images;
    for (const auto& v : shift.vertices)
        images.insert(shift_embedding(v));
    report.injective = images.size() == shift.vertices.size();

    for (std::uint32_t u = 0; u < shift.vertices.size(); ++u)
        for (auto v : shift.graph.adj[u]) {
            if (v < u)
                continue;
            ++report.shift_edges;
            if (!adjacent_in_unc(shift_embedding(shift.vertices[u]), shift_embedding(shift.vertices[v])))
                ++report.failures;
        }

    // Any fixed reordering of positions that embeds the shift graph.
    std::vector<std::size_t> positions(k);
    std::iota(positions.begin(), positions.end(), 0);
    do {
        auto apply = [&](const SubPerm& p) {
            SubPerm q(k);
            for (std::size_t i = 0; i < k; ++i)
                q[i] = p[positions[i]];
            return q;
        };
        bool ok = true;
        for (std::uint32_t u = 0; ok && u < shift.vertices.size(); ++u)
            for (auto v : shift.graph.adj[u])
                if (v > u && !adjacent_in_unc(apply(shift.vertices[u]), apply(shift.vertices[v]))) {
                    ok = false;
                    break;
                }
        if (ok) {
            report.working_positions = positions;
            break;
        }
    } while (std::next_permutation(positions.begin(), positions.end()));
    return report;
}

} // namespace ucs
