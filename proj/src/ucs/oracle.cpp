#include "ucs/oracle.hpp"

#include "ucs/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ucs::oracle {

std::vector<std::vector<std::uint32_t>> dyadic_numerators(std::size_t n, unsigned bits) {
    if (n == 0 || bits > 20)
        fail(ErrorCode::CapExceeded, "dyadic grid out of range");
    const std::uint32_t total = 1U << bits;
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur(n, 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t left) {
        if (i + 1 == n) {
            cur[i] = left;
            out.push_back(cur);
            return;
        }
        for (std::uint32_t v = 0; v <= left; ++v) {
            cur[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, total);
    return out;
}

std::vector<Dist> dyadic_pmfs(std::size_t n, unsigned bits) {
    std::vector<Dist> out;
    for (const auto& a : dyadic_numerators(n, bits)) {
        std::vector<Rational> probs;
        for (auto v : a)
            probs.emplace_back(v, 1UL << bits);
        out.push_back(Dist::from_probs(std::move(probs)));
    }
    return out;
}

bool close_numerators(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                      unsigned delta) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::uint64_t x = a[i], y = b[i];
        if ((x << delta) < y || (y << delta) < x)
            return false;
    }
    return true;
}

std::uint64_t brute_floor_neg_log(const Rational& q) {
    // Largest r with q <= 2^-r.
    std::uint64_t r = 0;
    Rational power = 1;
    while (true) {
        Rational next = power / 2;
        if (cmp(q, next) > 0)
            return r;
        power = next;
        ++r;
    }
}

std::size_t brute_chromatic(const Graph& g, std::uint64_t node_budget) {
    const std::size_t n = g.vertices();
    if (n == 0)
        return 0;
    std::uint64_t nodes = 0;
    for (std::size_t colors = 1; colors <= n; ++colors) {
        std::vector<int> assigned(n, -1);
        std::function<bool(std::size_t)> place = [&](std::size_t v) {
            if (v == n)
                return true;
            if (++nodes > node_budget)
                fail(ErrorCode::BudgetExhausted, "brute chromatic budget exceeded");
            for (int c = 0; c < static_cast<int>(colors); ++c) {
                bool ok = true;
                for (auto w : g.adj[v])
                    if (assigned[w] == c) {
                        ok = false;
                        break;
                    }
                if (!ok)
                    continue;
                assigned[v] = c;
                if (place(v + 1))
                    return true;
                assigned[v] = -1;
            }
            return false;
        };
        if (place(0))
            return colors;
    }
    return n;
}

unsigned brute_subperm_distance(const SubPerm& a, const SubPerm& b, std::size_t n) {
    auto extensions = [n](const SubPerm& p) {
        std::vector<Element> rest;
        for (Element e = 1; e <= n; ++e)
            if (std::find(p.begin(), p.end(), e) == p.end())
                rest.push_back(e);
        std::vector<std::vector<std::size_t>> out; // inverse maps: element -> position
        do {
            std::vector<std::size_t> inv(n + 1);
            for (std::size_t i = 0; i < p.size(); ++i)
                inv[p[i]] = i;
            for (std::size_t i = 0; i < rest.size(); ++i)
                inv[rest[i]] = p.size() + i;
            out.push_back(std::move(inv));
        } while (std::next_permutation(rest.begin(), rest.end()));
        return out;
    };
    const auto ea = extensions(a);
    const auto eb = extensions(b);
    unsigned best = static_cast<unsigned>(n);
    for (const auto& x : ea)
        for (const auto& y : eb) {
            unsigned worst = 0;
            for (Element e = 1; e <= n; ++e) {
                const auto diff = x[e] > y[e] ? x[e] - y[e] : y[e] - x[e];
                worst = std::max(worst, static_cast<unsigned>(diff));
            }
            best = std::min(best, worst);
        }
    return best;
}

namespace {

using Masks = std::vector<std::uint32_t>; // level i as a bitmask over elements 1..N (bit e-1)

bool sandwiched(const Masks& b, const Masks& a, unsigned d) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        const std::uint32_t lower = i >= d ? a[i - d] : 0;
        const std::uint32_t upper = a[i + d];
        if ((lower & ~b[i]) != 0 || (b[i] & ~upper) != 0)
            return false;
    }
    return true;
}

// Every chain of the given length over the elements of `pool`, size <= s.
std::vector<Masks> all_chains(std::uint32_t pool, unsigned length, unsigned s) {
    std::vector<unsigned> elements;
    for (unsigned e = 0; e < 32; ++e)
        if (pool >> e & 1U)
            elements.push_back(e);
    std::vector<Masks> out;
    std::vector<int> entry(elements.size(), -1);
    std::function<void(std::size_t, unsigned, unsigned)> rec = [&](std::size_t i, unsigned size,
                                                                  unsigned zeros) {
        if (i == elements.size()) {
            if (zeros != 1)
                return;
            Masks m(length + 1, 0);
            for (std::size_t t = 0; t < elements.size(); ++t)
                if (entry[t] >= 0)
                    for (unsigned lvl = static_cast<unsigned>(entry[t]); lvl <= length; ++lvl)
                        m[lvl] |= 1U << elements[t];
            out.push_back(std::move(m));
            return;
        }
        entry[i] = -1;
        rec(i + 1, size, zeros);
        if (size == s)
            return;
        for (int lvl = 0; lvl <= static_cast<int>(length); ++lvl) {
            if (lvl == 0 && zeros == 1)
                continue;
            entry[i] = lvl;
            rec(i + 1, size + 1, zeros + (lvl == 0));
        }
        entry[i] = -1;
    };
    rec(0, 0, 0);
    return out;
}

Chain to_chain(const Masks& m) {
    std::vector<std::vector<Element>> levels;
    for (auto mask : m) {
        std::vector<Element> level;
        for (unsigned e = 0; e < 32; ++e)
            if (mask >> e & 1U)
                level.push_back(e + 1);
        levels.push_back(std::move(level));
    }
    return Chain::from_levels(levels);
}

Masks to_masks(const Chain& c) {
    Masks m;
    for (const auto& level : c.levels()) {
        std::uint32_t mask = 0;
        for (Element e : level) {
            if (e > 32)
                fail(ErrorCode::CapExceeded, "reference chains are limited to 32 elements");
            mask |= 1U << (e - 1);
        }
        m.push_back(mask);
    }
    return m;
}

std::string masks_key(const Masks& m) {
    std::string key;
    for (auto v : m)
        key += std::to_string(v) + '/';
    return key;
}

} // namespace

ReferenceColorer::ReferenceColorer(unsigned s, std::uint64_t seed)
    : s_(s), family_(std::numeric_limits<std::uint64_t>::max(), (5 * s + 1) / 2, seed) {}

ChainColor ReferenceColorer::col(const Chain& a) {
    if (a.length() % 2 != 0 || a.size() > s_)
        fail(ErrorCode::InvalidArgument, "reference coloring needs an even chain within the size bound");
    const Masks masks = to_masks(a);
    const std::string key = masks_key(masks);
    if (auto it = memo_.find(key); it != memo_.end())
        return it->second;
    ChainColor out;
    if (a.length() == 0) {
        out.leader = a.leader();
        out.size_bound = s_;
    } else {
        out = col(a.prefix(a.length() - 2));
        const std::uint64_t inner = out.value();
        std::set<std::uint64_t> others;
        for (const Masks& b : all_chains(masks.back(), a.length() - 2, s_))
            if (sandwiched(b, masks, 2)) {
                const std::uint64_t v = col(to_chain(b)).value();
                if (v != inner)
                    others.insert(v);
            }
        const std::vector<std::uint64_t> list(others.begin(), others.end());
        const std::uint64_t j = find_isolating_index(family_, inner, list);
        out.levels.push_back({j, family_.eval_word(j, inner)});
    }
    memo_.emplace(key, out);
    return out;
}

ChainScanReport brute_chain_collision_scan(std::size_t n, unsigned s, unsigned k,
                                           bool compare_reference) {
    if (k == 0 || n == 0 || n > 32)
        fail(ErrorCode::InvalidArgument, "collision scan needs k >= 1 and 1 <= N <= 32");
    ChainScanReport report;
    report.n = n;
    report.s = s;
    report.k = k;
    const std::uint32_t universe = n == 32 ? ~0U : (1U << n) - 1;
    const auto chains = all_chains(universe, 2 * k, s);
    const auto near = all_chains(universe, 2 * k - 1, s);
    report.chains = chains.size();
    report.neighbours = near.size();

    ChainColorer colorer(s);
    std::unique_ptr<ReferenceColorer> reference;
    if (compare_reference)
        reference = std::make_unique<ReferenceColorer>(s);

    std::vector<std::uint64_t> colors(chains.size());
    std::vector<Element> leaders(chains.size());
    const auto log_k = iterated_log(n, k);
    report.size_bound_checked = log_k && *log_k > 0;
    if (report.size_bound_checked)
        report.size_bound = std::ldexp(*log_k, static_cast<int>(6 * (s + 1)));
    for (std::size_t i = 0; i < chains.size(); ++i) {
        const Chain c = to_chain(chains[i]);
        colors[i] = colorer.col(c).value();
        leaders[i] = c.leader();
        report.max_color = std::max(report.max_color, colors[i]);
        if (report.size_bound_checked && static_cast<double>(colors[i]) > report.size_bound)
            ++report.size_bound_violations;
        if (reference && reference->col(c).value() != colors[i])
            ++report.reference_mismatches;
    }

    std::set<std::pair<std::size_t, std::size_t>> related, colliding;
    for (const Masks& b : near) {
        std::vector<std::size_t> owners;
        for (std::size_t i = 0; i < chains.size(); ++i)
            if (sandwiched(b, chains[i], 1))
                owners.push_back(i);
        for (std::size_t x = 0; x < owners.size(); ++x)
            for (std::size_t y = x + 1; y < owners.size(); ++y) {
                const auto i = owners[x], j = owners[y];
                if (leaders[i] == leaders[j])
                    continue;
                related.emplace(i, j);
                if (colors[i] == colors[j])
                    colliding.emplace(i, j);
            }
    }
    report.related_pairs = related.size();
    report.collisions = colliding.size();
    return report;
}

namespace {

std::string numerators_string(const std::vector<std::uint32_t>& a, unsigned bits) {
    std::string out = "(";
    for (std::size_t i = 0; i < a.size(); ++i)
        out += (i ? "," : "") + std::to_string(a[i]);
    return out + ")/" + std::to_string(1U << bits);
}

} // namespace

VerificationReport verify_scheme(const VerificationConfig& config) {
    VerificationReport report;
    report.config = config;
    CodecOptions options;
    options.delta = config.delta;
    options.epsilon = config.epsilon;
    options.seed = config.seed;
    auto scheme = make_scheme(config.scheme, options);

    const auto grid = dyadic_numerators(config.n, config.bits);
    std::vector<Dist> dists;
    dists.reserve(grid.size());
    for (const auto& a : grid) {
        std::vector<Rational> probs;
        for (auto v : a)
            probs.emplace_back(v, 1UL << config.bits);
        dists.push_back(Dist::from_probs(std::move(probs)));
    }
    report.distributions = grid.size();

    auto record = [&](const VerificationFailure& f) {
        ++report.failure_count;
        if (report.failures.size() < 20)
            report.failures.push_back(f);
    };

    // Encode every (P, m) once.
    std::vector<std::vector<std::optional<BitString>>> codewords(grid.size());
    std::vector<std::size_t> lengths;
    double bottom_sum = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        codewords[i].resize(config.n + 1);
        DistributionRow row;
        row.p = numerators_string(grid[i], config.bits);
        row.entropy = dists[i].entropy();
        for (Element m = 1; m <= config.n; ++m) {
            if (grid[i][m - 1] == 0)
                continue;
            const double weight = std::ldexp(grid[i][m - 1], -static_cast<int>(config.bits));
            try {
                BitString c = scheme->encode(dists[i], m);
                ++report.encodes;
                lengths.push_back(c.size());
                row.expected_length += weight * static_cast<double>(c.size());
                if (is_bottom(c)) {
                    ++report.bottoms;
                    row.bottom_probability += weight;
                }
                codewords[i][m] = std::move(c);
            } catch (const Error& e) {
                record({row.p, row.p, m, "", std::string("encode: ") + e.what()});
            }
        }
        bottom_sum += row.bottom_probability;
        report.max_bottom_probability = std::max(report.max_bottom_probability, row.bottom_probability);
        report.rows.push_back(std::move(row));
    }
    if (!grid.empty())
        report.mean_bottom_probability = bottom_sum / static_cast<double>(grid.size());
    if (!lengths.empty()) {
        report.mean_length = std::accumulate(lengths.begin(), lengths.end(), 0.0) /
                             static_cast<double>(lengths.size());
        std::sort(lengths.begin(), lengths.end());
        report.p50_length = lengths[lengths.size() / 2];
        report.p90_length = lengths[lengths.size() * 9 / 10];
        report.max_length = lengths.back();
    }

    struct Outcome {
        std::optional<Element> value;
        std::string error;
    };
    for (std::size_t qi = 0; qi < grid.size(); ++qi) {
        std::unordered_map<std::string, Outcome> cache;
        for (std::size_t pi = 0; pi < grid.size(); ++pi) {
            if (!close_numerators(grid[pi], grid[qi], config.delta))
                continue;
            ++report.pairs;
            for (Element m = 1; m <= config.n; ++m) {
                const auto& c = codewords[pi][m];
                if (!c)
                    continue;
                if (++report.trials > config.max_trials)
                    fail(ErrorCode::CapExceeded, "verification trial budget exceeded");
                if (is_bottom(*c))
                    continue;
                const std::string key = c->to_string();
                auto it = cache.find(key);
                if (it == cache.end()) {
                    Outcome o;
                    try {
                        o.value = scheme->decode(dists[qi], *c);
                    } catch (const Error& e) {
                        o.error = e.what();
                    }
                    it = cache.emplace(key, std::move(o)).first;
                }
                const Outcome& o = it->second;
                if (!o.error.empty() || !o.value || *o.value != m)
                    record({report.rows[pi].p, report.rows[qi].p, m, key,
                            o.error.empty() ? "decoded to " + (o.value ? std::to_string(*o.value) : "⊥")
                                            : o.error});

                if (config.fault_every > 0 && report.trials % config.fault_every == 0) {
                    BitString flipped;
                    const std::size_t at = report.trials % c->size();
                    for (std::size_t b = 0; b < c->size(); ++b)
                        flipped.push_back(b == at ? !(*c)[b] : (*c)[b]);
                    ++report.faults_injected;
                    try {
                        const auto v = scheme->decode(dists[qi], flipped);
                        if (v && *v == m)
                            ++report.faults_undetected;
                        else
                            ++report.faults_detected;
                    } catch (const Error&) {
                        ++report.faults_detected;
                    }
                }
            }
        }
    }
    report.pass = report.failure_count == 0;
    return report;
}

std::string report_to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["config"] = {{"scheme", r.config.scheme},
                   {"n", r.config.n},
                   {"delta", r.config.delta},
                   {"epsilon", rational_to_string(r.config.epsilon)},
                   {"bits", r.config.bits},
                   {"seed", r.config.seed},
                   {"fault_every", r.config.fault_every}};
    j["pass"] = r.pass;
    j["distributions"] = r.distributions;
    j["pairs"] = r.pairs;
    j["trials"] = r.trials;
    j["encodes"] = r.encodes;
    j["bottoms"] = r.bottoms;
    j["failure_count"] = r.failure_count;
    auto& fails = j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : r.failures)
        fails.push_back({{"p", f.p}, {"q", f.q}, {"m", f.m}, {"codeword", f.codeword}, {"what", f.what}});
    j["length"] = {{"mean", r.mean_length},
                   {"p50", r.p50_length},
                   {"p90", r.p90_length},
                   {"max", r.max_length}};
    j["bottom_probability"] = {{"mean", r.mean_bottom_probability},
                               {"max", r.max_bottom_probability}};
    j["faults"] = {{"injected", r.faults_injected},
                   {"detected", r.faults_detected},
                   {"undetected", r.faults_undetected}};
    return j.dump(2);
}

std::string report_to_csv(const VerificationReport& r) {
    std::ostringstream out;
    out << "scheme,n,delta,epsilon,bits,p,entropy,expected_length,bottom_probability\n";
    for (const auto& row : r.rows)
        out << r.config.scheme << ',' << r.config.n << ',' << r.config.delta << ','
            << rational_to_string(r.config.epsilon) << ',' << r.config.bits << ",\"" << row.p
            << "\"," << row.entropy << ',' << row.expected_length << ',' << row.bottom_probability
            << '\n';
    return out.str();
}

} // namespace ucs::oracle
