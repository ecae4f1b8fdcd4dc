#include "ucs/codec_reduce.hpp"

#include "ucs/errors.hpp"

#include <cmath>

namespace ucs {

Dist concentrate(const Dist& p, std::uint64_t m) {
    if (m == 0)
        fail(ErrorCode::InvalidArgument, "concentration factor must be positive");
    if (m == 1)
        return p;
    const Rational inv(1, static_cast<unsigned long>(m));
    std::vector<Rational> probs(p.probs().begin(), p.probs().end());
    for (auto& q : probs)
        q *= inv;
    probs[0] += 1 - inv;
    return Dist::from_probs(std::move(probs));
}

std::uint64_t concentration_factor(const Dist& p) {
    const double h = std::ceil(p.entropy());
    return h < 1.0 ? 1 : static_cast<std::uint64_t>(h);
}

BitString encode_reduced(Scheme& inner, const Dist& p, Element m) {
    const std::uint64_t factor = concentration_factor(p);
    const BitString body = inner.encode(concentrate(p, factor), m);
    if (is_bottom(body))
        return body;
    BitString out;
    write_gamma(out, factor);
    out.append(body);
    return out;
}

std::optional<Element> decode_reduced(Scheme& inner, const Dist& q, const BitString& c) {
    if (is_bottom(c))
        return std::nullopt;
    BitReader reader(c);
    const std::uint64_t factor = reader.read_gamma();
    const BitString body = reader.read_rest();
    if (body.empty())
        fail(ErrorCode::MalformedCodeword, "reduced codeword has no inner part");
    return inner.decode(concentrate(q, factor), body);
}

namespace {

class ReducedScheme final : public Scheme {
public:
    explicit ReducedScheme(std::unique_ptr<Scheme> inner) : inner_(std::move(inner)) {}
    std::string name() const override { return "reduced+" + inner_->name(); }
    BitString encode(const Dist& p, Element m) override { return encode_reduced(*inner_, p, m); }
    std::optional<Element> decode(const Dist& q, const BitString& c) override {
        return decode_reduced(*inner_, q, c);
    }

private:
    std::unique_ptr<Scheme> inner_;
};

} // namespace

std::unique_ptr<Scheme> make_reduced_scheme(std::unique_ptr<Scheme> inner) {
    if (!inner)
        fail(ErrorCode::InvalidArgument, "reduced scheme needs an inner scheme");
    return std::make_unique<ReducedScheme>(std::move(inner));
}

std::unique_ptr<Scheme> make_scheme(const std::string& id, const CodecOptions& options) {
    if (id == "simple")
        return make_simple_scheme(options);
    if (id == "low")
        return make_low_scheme(options);
    if (id.rfind("reduced+", 0) == 0) {
        const std::string inner = id.substr(8);
        if (inner == "simple" || inner == "low")
            return make_reduced_scheme(make_scheme(inner, options));
    }
    fail(ErrorCode::InvalidArgument, "unknown scheme '" + id + "'");
}

} // namespace ucs
