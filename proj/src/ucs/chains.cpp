#include "ucs/chains.hpp"

#include "ucs/errors.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace ucs {

Chain::Chain(unsigned length, std::vector<Entry> entries)
    : length_(length), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& x, const Entry& y) { return x.element < y.element; });
    unsigned zeros = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const Entry& e = entries_[i];
        if (e.element == 0)
            fail(ErrorCode::InvalidArgument, "chain elements are 1-based");
        if (i > 0 && entries_[i - 1].element == e.element)
            fail(ErrorCode::InvalidArgument, "chain element listed twice");
        if (e.level > length_)
            fail(ErrorCode::InvalidArgument, "chain entry level beyond the chain length");
        if (e.level == 0) {
            ++zeros;
            leader_ = e.element;
        }
    }
    if (zeros != 1)
        fail(ErrorCode::InvalidArgument, "the first level of a chain must be a singleton");
}

Chain Chain::from_entries(unsigned length, std::vector<Entry> entries) {
    return Chain(length, std::move(entries));
}

Chain Chain::from_levels(const std::vector<std::vector<Element>>& levels) {
    if (levels.empty())
        fail(ErrorCode::InvalidArgument, "a chain has at least one level");
    std::vector<Entry> entries;
    std::set<Element> previous;
    for (unsigned i = 0; i < levels.size(); ++i) {
        std::set<Element> current(levels[i].begin(), levels[i].end());
        if (current.size() != levels[i].size())
            fail(ErrorCode::InvalidArgument, "chain level lists an element twice");
        if (!std::includes(current.begin(), current.end(), previous.begin(), previous.end()))
            fail(ErrorCode::InvalidArgument, "chain levels are not ascending");
        for (Element e : current)
            if (!previous.count(e))
                entries.push_back({e, i});
        previous = std::move(current);
    }
    return Chain(static_cast<unsigned>(levels.size() - 1), std::move(entries));
}

std::optional<unsigned> Chain::entry_of(Element e) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), e,
                               [](const Entry& x, Element v) { return x.element < v; });
    if (it == entries_.end() || it->element != e)
        return std::nullopt;
    return it->level;
}

std::vector<Element> Chain::level(unsigned i) const {
    std::vector<Element> out;
    for (const Entry& e : entries_)
        if (e.level <= i)
            out.push_back(e.element);
    return out;
}

std::vector<std::vector<Element>> Chain::levels() const {
    std::vector<std::vector<Element>> out;
    for (unsigned i = 0; i <= length_; ++i)
        out.push_back(level(i));
    return out;
}

Chain Chain::prefix(unsigned k) const {
    if (k > length_)
        fail(ErrorCode::InvalidArgument, "prefix longer than the chain");
    std::vector<Entry> kept;
    for (const Entry& e : entries_)
        if (e.level <= k)
            kept.push_back(e);
    return Chain(k, std::move(kept));
}

Chain Chain::skeleton() const {
    if (length_ % 2 != 0)
        fail(ErrorCode::InvalidArgument, "skeleton needs an even-length chain");
    std::vector<Entry> out;
    out.reserve(entries_.size());
    for (const Entry& e : entries_)
        out.push_back({e.element, (e.level + 1) / 2});
    return Chain(length_ / 2, std::move(out));
}

std::string Chain::serialize() const {
    std::string out;
    for (unsigned i = 0; i <= length_; ++i) {
        if (i > 0)
            out += '|';
        bool first = true;
        for (Element e : level(i)) {
            if (!first)
                out += ',';
            out += std::to_string(e);
            first = false;
        }
    }
    return out;
}

std::string Chain::key() const {
    std::string out;
    out.reserve(1 + entries_.size() * 5);
    out.push_back(static_cast<char>(length_));
    for (const Entry& e : entries_) {
        for (int b = 0; b < 4; ++b)
            out.push_back(static_cast<char>((e.element >> (8 * b)) & 0xFF));
        out.push_back(static_cast<char>(e.level));
    }
    return out;
}

bool within_distance(const Chain& b, const Chain& a, unsigned d) {
    if (a.length() < d || b.length() != a.length() - d)
        fail(ErrorCode::InvalidArgument, "within_distance needs lgt(B) = lgt(A) - d");
    constexpr unsigned absent = std::numeric_limits<unsigned>::max();
    const unsigned top = b.length();
    // Walk both sorted entry lists together.
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    while (ia != a.entries().end() || ib != b.entries().end()) {
        unsigned la = absent;
        unsigned lb = absent;
        if (ib == b.entries().end() || (ia != a.entries().end() && ia->element < ib->element)) {
            la = (ia++)->level;
        } else if (ia == a.entries().end() || ib->element < ia->element) {
            lb = (ib++)->level;
        } else {
            la = (ia++)->level;
            lb = (ib++)->level;
        }
        // A_{i-d} ⊆ B_i: once the element is in A at la, it must be in B by la + d.
        if (la != absent && la + d <= top && (lb == absent || lb > la + d))
            return false;
        // B_i ⊆ A_{i+d}
        if (lb != absent && (la == absent || la > lb + d))
            return false;
    }
    return true;
}

std::vector<Chain> enum_Sd(const Chain& a, unsigned d, std::size_t cap) {
    if (a.length() < d)
        fail(ErrorCode::InvalidArgument, "enum_Sd needs d <= lgt(A)");
    constexpr unsigned absent = std::numeric_limits<unsigned>::max();
    const unsigned top = a.length() - d;
    const auto& entries = a.entries();
    std::vector<std::vector<unsigned>> options(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const unsigned lvl = entries[i].level;
        const unsigned lo = lvl > d ? lvl - d : 0;
        const unsigned hi = std::min(lvl + d, top);
        for (unsigned v = lo; v <= hi; ++v)
            options[i].push_back(v);
        if (lvl + d > top)
            options[i].push_back(absent);
    }

    std::vector<Chain> out;
    std::vector<Chain::Entry> cur;
    auto rec = [&](auto&& self, std::size_t i, unsigned zeros) -> void {
        if (i == entries.size()) {
            if (zeros != 1)
                return;
            if (out.size() >= cap)
                fail(ErrorCode::CapExceeded, "S^d enumeration cap exceeded");
            out.push_back(Chain::from_entries(top, cur));
            return;
        }
        for (unsigned v : options[i]) {
            if (v == 0 && zeros == 1)
                continue;
            if (v != absent)
                cur.push_back({entries[i].element, v});
            self(self, i + 1, zeros + (v == 0 ? 1 : 0));
            if (v != absent)
                cur.pop_back();
        }
    };
    rec(rec, 0, 0);
    return out;
}

unsigned color_hash_bits(unsigned s) { return (5 * s + 1) / 2; }

std::uint64_t color_value(const ColorLevel& level, unsigned hash_bits) {
    if (level.index == 0 || hash_bits >= 64)
        fail(ErrorCode::CapExceeded, "color does not fit in 64 bits");
    const std::uint64_t high = level.index - 1;
    if (high > (std::numeric_limits<std::uint64_t>::max() >> hash_bits) - 1)
        fail(ErrorCode::CapExceeded, "color does not fit in 64 bits");
    return (high << hash_bits) + level.bits + 1;
}

std::uint64_t ChainColor::value() const {
    if (levels.empty())
        return leader;
    return color_value(levels.back(), color_hash_bits(size_bound));
}

ChainColorer::ChainColorer(unsigned size_bound, std::uint64_t seed, std::uint64_t index_budget)
    : s_(size_bound), bits_(color_hash_bits(size_bound)), budget_(index_budget),
      family_(std::numeric_limits<std::uint64_t>::max(), std::max(1U, bits_), seed) {
    if (size_bound == 0 || size_bound > kMaxChainSize)
        fail(ErrorCode::CapExceeded, "chain size bound must lie in [1, " +
                                         std::to_string(kMaxChainSize) + "]");
}

ChainColor ChainColorer::col(const Chain& a) {
    if (a.size() > s_)
        fail(ErrorCode::InvalidArgument, "chain larger than the size bound");
    return col_skeleton(a.skeleton());
}

ChainColor ChainColorer::col_skeleton(const Chain& y) {
    if (y.size() > s_)
        fail(ErrorCode::InvalidArgument, "chain larger than the size bound");
    const std::string key = y.key();
    if (auto it = memo_.find(key); it != memo_.end())
        return it->second;

    ChainColor out;
    if (y.length() == 0) {
        out.leader = y.leader();
        out.size_bound = s_;
    } else {
        out = col_skeleton(y.prefix(y.length() - 1));
        const std::uint64_t inner = out.value();
        // Colors of the chains two full levels away, skeleton distance one.
        std::vector<std::uint64_t> others;
        for (const Chain& z : enum_Sd(y, 1)) {
            const std::uint64_t v = col_skeleton(z).value();
            if (v != inner)
                others.push_back(v);
        }
        std::sort(others.begin(), others.end());
        others.erase(std::unique(others.begin(), others.end()), others.end());
        const std::uint64_t j = find_isolating_index(family_, inner, others, budget_);
        out.levels.push_back({j, family_.eval_word(j, inner)});
        out.value(); // overflow check
    }
    memo_.emplace(key, out);
    return out;
}

} // namespace ucs
