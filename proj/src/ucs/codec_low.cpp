#include "ucs/codec_low.hpp"

#include "ucs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ucs {

namespace {

std::int64_t window(unsigned k, unsigned delta) {
    return static_cast<std::int64_t>(k + 1) * delta + 1;
}

// Smallest k in [1, top] whose window around r holds the class, or 0 if none.
unsigned entry_level(const LogClass& c, std::uint64_t r, unsigned delta, unsigned top) {
    for (unsigned k = 1; k <= top; ++k)
        if (c.within(static_cast<std::int64_t>(r), window(k, delta)))
            return k;
    return 0;
}

} // namespace

unsigned low_chain_length(std::size_t n) {
    return 2 * std::max(1U, log_star(n));
}

Chain build_encoder_chain(const Dist& p, Element m, unsigned delta, unsigned f) {
    if (!p.in_support(m))
        fail(ErrorCode::ZeroProbability, "message has zero probability");
    const std::uint64_t r = floor_neg_log(p.prob(m));
    std::vector<Chain::Entry> entries{{m, 0}};
    for (Element e : p.support()) {
        if (e == m)
            continue;
        if (const unsigned k = entry_level(p.log_class_of(e), r, delta, f))
            entries.push_back({e, k});
    }
    return Chain::from_entries(f, std::move(entries));
}

Chain build_decoder_chain(const Dist& q, std::uint64_t r, unsigned delta, unsigned f) {
    if (f < 1)
        fail(ErrorCode::InvalidArgument, "decoder chain needs f >= 1");
    const auto rr = static_cast<std::int64_t>(r);
    Element leader = 0;
    for (Element e : q.by_decreasing_prob()) {
        if (q.log_class_of(e).within(rr, static_cast<std::int64_t>(delta) + 1)) {
            leader = e;
            break;
        }
    }
    if (leader == 0)
        fail(ErrorCode::NoQualifyingLeader, "no message of Q lies within Δ+1 of r");
    std::vector<Chain::Entry> entries{{leader, 0}};
    for (Element e : q.support()) {
        if (e == leader)
            continue;
        if (const unsigned k = entry_level(q.log_class_of(e), r, delta, f - 1))
            entries.push_back({e, k});
    }
    return Chain::from_entries(f - 1, std::move(entries));
}

ChainColorer& ColorerPool::get(unsigned s) {
    auto& slot = colorers_[s];
    if (!slot)
        slot = std::make_unique<ChainColorer>(s, seed_, budget_);
    return *slot;
}

bool low_rejects(std::uint64_t s, double h, unsigned delta, unsigned f, const Rational& epsilon) {
    if (sgn(epsilon) == 0)
        return false;
    const double bound = h / epsilon.get_d() + static_cast<double>((f + 1) * delta) + 1.0;
    // The slack only ever favours sending.
    return std::log2(static_cast<double>(s)) > bound + 1e-9;
}

LowEncoding encode_low_detail(const Dist& p, Element m, const CodecOptions& options,
                              ColorerPool& pool) {
    if (m < 1 || m > p.size())
        fail(ErrorCode::InvalidArgument, "message outside the universe");
    if (sgn(options.epsilon) < 0)
        fail(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
    LowEncoding out;
    out.f = low_chain_length(p.size());
    out.chain = build_encoder_chain(p, m, options.delta, out.f);
    out.r = floor_neg_log(p.prob(m));
    const std::uint64_t s = out.chain.size();
    if (low_rejects(s, p.entropy(), options.delta, out.f, options.epsilon)) {
        out.bottom = true;
        out.codeword = bottom_codeword();
        return out;
    }
    if (s > options.chain_cap || s > kMaxChainSize)
        fail(ErrorCode::CapExceeded, "chain of size " + std::to_string(s) +
                                         " exceeds the coloring cap");
    ChainColorer& colorer = pool.get(static_cast<unsigned>(s));
    out.color = colorer.col(out.chain);
    const ColorLevel& top = out.color.levels.back();
    out.codeword.push_back(true);
    write_gamma(out.codeword, s);
    write_gamma(out.codeword, out.r + 1);
    write_gamma(out.codeword, top.index);
    out.codeword.append_bits(top.bits, colorer.hash_bits());
    return out;
}

BitString encode_low(const Dist& p, Element m, const CodecOptions& options, ColorerPool& pool) {
    return encode_low_detail(p, m, options, pool).codeword;
}

std::optional<LowPayload> parse_low_codeword(const BitString& c) {
    BitReader reader(c);
    if (!reader.read_bit()) {
        if (reader.remaining() != 0)
            fail(ErrorCode::MalformedCodeword, "bits after the ⊥ flag");
        return std::nullopt;
    }
    LowPayload out;
    out.s = reader.read_gamma();
    if (out.s > kMaxChainSize)
        fail(ErrorCode::MalformedCodeword, "chain size field beyond the supported range");
    out.r = reader.read_gamma() - 1;
    out.color.index = reader.read_gamma();
    out.color.bits = reader.read_bits(color_hash_bits(static_cast<unsigned>(out.s)));
    if (reader.remaining() != 0)
        fail(ErrorCode::MalformedCodeword, "trailing bits after the color");
    return out;
}

std::vector<Element> outside_candidates(const Dist& q, const Chain& b, std::uint64_t r,
                                        unsigned delta, unsigned f) {
    std::vector<Element> out;
    const auto rr = static_cast<std::int64_t>(r);
    for (Element e : q.support())
        if (!b.entry_of(e) && q.log_class_of(e).within(rr, window(f + 1, delta)))
            out.push_back(e);
    return out;
}

std::vector<Chain> find_matching_chains(const Chain& b, ChainColorer& colorer,
                                        const ColorLevel& target, unsigned f,
                                        std::span<const Element> outside, std::size_t limit) {
    if (f < 2 || f % 2 != 0 || b.length() + 1 != f)
        fail(ErrorCode::InvalidArgument, "matching needs an even f and lgt(B) = f - 1");
    const unsigned s = colorer.size_bound();
    const unsigned half = f / 2;
    std::vector<Chain> found;
    if (b.size() > s)
        return found;

    // Per element: the skeleton levels ceil(a/2) reachable by full entry levels a.
    struct Slot {
        Element element;
        std::vector<unsigned> skeleton_levels;
        bool optional;
    };
    std::vector<Slot> slots;
    for (const auto& e : b.entries()) {
        const unsigned lo = e.level > 0 ? e.level - 1 : 0;
        const unsigned hi = std::min(e.level + 1, f);
        std::vector<unsigned> levels;
        for (unsigned a = lo; a <= hi; ++a) {
            const unsigned y = (a + 1) / 2;
            if (levels.empty() || levels.back() != y)
                levels.push_back(y);
        }
        slots.push_back({e.element, std::move(levels), false});
    }
    for (Element e : outside) {
        if (b.entry_of(e))
            continue;
        slots.push_back({e, {half}, true});
    }

    const IsolatingFamily& family = colorer.family();
    std::vector<Chain::Entry> cur;
    auto check = [&]() {
        const Chain y = Chain::from_entries(half, cur);
        const std::uint64_t inner = colorer.col_skeleton(y.prefix(half - 1)).value();
        if (family.eval_word(target.index, inner) != target.bits)
            return;
        const ChainColor full = colorer.col_skeleton(y);
        if (full.levels.back() != target)
            return;
        // Lift the skeleton to a full chain, taking the lowest admissible level.
        std::vector<Chain::Entry> lifted;
        for (const auto& e : cur) {
            unsigned a = 2 * e.level;
            if (const auto lb = b.entry_of(e.element)) {
                const unsigned lo = *lb > 0 ? *lb - 1 : 0;
                a = std::max(lo, e.level > 0 ? 2 * e.level - 1 : 0);
            } else {
                a = f - 1;
            }
            lifted.push_back({e.element, a});
        }
        found.push_back(Chain::from_entries(f, std::move(lifted)));
    };

    auto rec = [&](auto&& self, std::size_t i, unsigned zeros) -> void {
        if (found.size() >= limit)
            return;
        if (i == slots.size()) {
            if (zeros == 1)
                check();
            return;
        }
        const Slot& slot = slots[i];
        if (cur.size() < s) {
            for (unsigned y : slot.skeleton_levels) {
                if (y == 0 && zeros == 1)
                    continue;
                cur.push_back({slot.element, y});
                self(self, i + 1, zeros + (y == 0 ? 1 : 0));
                cur.pop_back();
                if (found.size() >= limit)
                    return;
            }
        }
        if (slot.optional)
            self(self, i + 1, zeros);
    };
    rec(rec, 0, 0);
    return found;
}

Chain find_matching_chain(const Chain& b, ChainColorer& colorer, const ColorLevel& target,
                          unsigned f, std::span<const Element> outside) {
    auto found = find_matching_chains(b, colorer, target, f, outside, 1);
    if (found.empty())
        fail(ErrorCode::NoChainFound, "no chain near the decoder's chain carries this color");
    return std::move(found.front());
}

std::optional<Element> decode_low(const Dist& q, const BitString& c, const CodecOptions& options,
                                  ColorerPool& pool) {
    const auto payload = parse_low_codeword(c);
    if (!payload)
        return std::nullopt;
    const unsigned f = low_chain_length(q.size());
    const Chain b = build_decoder_chain(q, payload->r, options.delta, f);
    const auto outside = outside_candidates(q, b, payload->r, options.delta, f);
    ChainColorer& colorer = pool.get(static_cast<unsigned>(payload->s));
    return find_matching_chain(b, colorer, payload->color, f, outside).leader();
}

namespace {

class LowScheme final : public Scheme {
public:
    explicit LowScheme(const CodecOptions& o) : options_(o), pool_(o.seed, o.index_budget) {}
    std::string name() const override { return "low"; }
    BitString encode(const Dist& p, Element m) override {
        return encode_low(p, m, options_, pool_);
    }
    std::optional<Element> decode(const Dist& q, const BitString& c) override {
        return decode_low(q, c, options_, pool_);
    }

private:
    CodecOptions options_;
    ColorerPool pool_;
};

} // namespace

std::unique_ptr<Scheme> make_low_scheme(const CodecOptions& options) {
    return std::make_unique<LowScheme>(options);
}

} // namespace ucs
