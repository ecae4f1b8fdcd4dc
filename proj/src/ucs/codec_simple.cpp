#include "ucs/codec_simple.hpp"

#include "ucs/errors.hpp"

#include <algorithm>

namespace ucs {

BitString bottom_codeword() { return BitString::from_string("0"); }

bool is_bottom(const BitString& c) { return c.size() == 1 && !c[0]; }

SimpleEncoding encode_simple_detail(const Dist& p, Element m, unsigned delta, std::uint64_t seed,
                                    std::uint64_t index_budget) {
    if (m < 1 || m > p.size())
        fail(ErrorCode::InvalidArgument, "message outside the universe");
    if (!p.in_support(m))
        fail(ErrorCode::ZeroProbability, "message has zero probability");

    SimpleEncoding out;
    out.hash_bits = static_cast<unsigned>(floor_neg_log(p.prob(m))) + 2 * delta + 1;

    Rational threshold = p.prob(m);
    mpq_div_2exp(threshold.get_mpq_t(), threshold.get_mpq_t(), 2 * delta);
    const auto order = p.by_decreasing_prob();
    const auto end = std::partition_point(order.begin(), order.end(), [&](Element e) {
        return cmp(p.prob(e), threshold) >= 0;
    });
    std::vector<std::uint64_t> others;
    for (auto it = order.begin(); it != end; ++it) {
        if (*it == m)
            continue;
        out.confusable.push_back(*it);
        others.push_back(*it);
    }

    const IsolatingFamily family(p.size(), out.hash_bits, seed);
    out.index = find_isolating_index(family, m, others, index_budget);
    write_gamma(out.codeword, out.index);
    out.codeword.append(family.eval(out.index, m));
    return out;
}

BitString encode_simple(const Dist& p, Element m, unsigned delta, std::uint64_t seed,
                        std::uint64_t index_budget) {
    return encode_simple_detail(p, m, delta, seed, index_budget).codeword;
}

Element decode_simple(const Dist& q, const BitString& c, std::uint64_t seed) {
    BitReader reader(c);
    const std::uint64_t j = reader.read_gamma();
    const BitString z = reader.read_rest();
    if (z.empty())
        fail(ErrorCode::MalformedCodeword, "codeword carries no hash bits");
    const IsolatingFamily family(q.size(), static_cast<unsigned>(z.size()), seed);
    const auto target = pack_output(z);
    // Scanning by decreasing Q makes the first hit the argmax.
    for (Element e : q.by_decreasing_prob())
        if (family.matches(j, e, target))
            return e;
    fail(ErrorCode::DecodeFailed, "no supported message hashes to the received value");
}

namespace {

class SimpleScheme final : public Scheme {
public:
    explicit SimpleScheme(const CodecOptions& o) : options_(o) {}
    std::string name() const override { return "simple"; }
    BitString encode(const Dist& p, Element m) override {
        return encode_simple(p, m, options_.delta, options_.seed, options_.index_budget);
    }
    std::optional<Element> decode(const Dist& q, const BitString& c) override {
        if (is_bottom(c))
            return std::nullopt;
        return decode_simple(q, c, options_.seed);
    }

private:
    CodecOptions options_;
};

} // namespace

std::unique_ptr<Scheme> make_simple_scheme(const CodecOptions& options) {
    return std::make_unique<SimpleScheme>(options);
}

} // namespace ucs
