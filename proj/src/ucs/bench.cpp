#include "ucs/bench.hpp"

#include "ucs/errors.hpp"

#include <cmath>
#include <json.hpp>

#include <sstream>

namespace ucs {

Dist make_bench_dist(const BenchFamily& family, std::size_t n, std::uint64_t seed) {
    FamilyTag tag;
    tag.kind = family.kind;
    tag.n = n;
    tag.parameter = family.parameter;
    if (family.kind == FamilyKind::Flat) {
        const std::size_t size = std::min(family.support, n);
        if (family.permuted) {
            const auto perm = seeded_permutation(n, seed);
            tag.support.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(size));
        } else {
            for (std::size_t i = 1; i <= size; ++i)
                tag.support.push_back(static_cast<Element>(i));
        }
    } else if (family.permuted) {
        tag.permutation = seeded_permutation(n, seed);
    }
    return make_family(tag);
}

std::string describe_family(const BenchFamily& family) {
    std::string out = family_name(family.kind);
    if (family.kind == FamilyKind::Flat)
        out += ":" + std::to_string(family.support);
    else
        out += ":" + rational_to_string(family.parameter);
    if (family.permuted)
        out += ":perm";
    return out;
}

BenchRow run_bench_cell(const BenchCell& cell) {
    BenchRow row;
    row.cell = cell;
    const Dist p = make_bench_dist(cell.family, cell.n, cell.seed);
    row.entropy = p.entropy();
    row.capacity = capacity(p);
    row.support = p.support().size();
    CodecOptions options;
    options.delta = cell.delta;
    options.epsilon = cell.epsilon;
    auto scheme = make_scheme(cell.scheme, options);
    for (Element m : p.support()) {
        const double weight = std::exp2(log2_rational(p.prob(m)));
        try {
            const BitString c = scheme->encode(p, m);
            row.mean_length += weight * static_cast<double>(c.size());
            if (is_bottom(c))
                row.bottom_rate += weight;
        } catch (const Error&) {
            row.error_mass += weight;
        }
    }
    return row;
}

std::vector<BenchCell> load_bench_grid(const std::string& json_text) {
    std::vector<BenchCell> cells;
    try {
        const auto j = nlohmann::json::parse(json_text);
        for (const auto& block : j.at("bench")) {
            const std::string scheme = block.value("scheme", "simple");
            const Rational epsilon = parse_rational(block.value("epsilon", "0"));
            const std::uint64_t seed = block.contains("seed") && block["seed"].is_string()
                                           ? parse_seed(block["seed"].get<std::string>())
                                           : block.value("seed", kProtocolSeed);
            std::vector<BenchFamily> families;
            for (const auto& f : block.at("families")) {
                BenchFamily fam;
                fam.kind = parse_family_kind(f.at("kind").get<std::string>());
                fam.support = f.value("support", std::size_t{1});
                fam.parameter = parse_rational(f.value("parameter", "0"));
                fam.permuted = f.value("permuted", false);
                families.push_back(fam);
            }
            for (auto n : block.at("n"))
                for (auto d : block.at("delta"))
                    for (const auto& fam : families) {
                        BenchCell c;
                        c.scheme = scheme;
                        c.n = n.get<std::size_t>();
                        c.delta = d.get<unsigned>();
                        c.epsilon = epsilon;
                        c.family = fam;
                        c.seed = seed;
                        cells.push_back(c);
                    }
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("bench grid: ") + e.what());
    }
    return cells;
}

std::string bench_csv_header() {
    return "scheme,n,delta,epsilon,family,seed,support,entropy,capacity,mean_length,bottom_rate,error_mass\n";
}

std::string bench_csv_row(const BenchRow& r) {
    std::ostringstream out;
    out.precision(10);
    out << r.cell.scheme << ',' << r.cell.n << ',' << r.cell.delta << ','
        << rational_to_string(r.cell.epsilon) << ',' << describe_family(r.cell.family) << ','
        << r.cell.seed << ',' << r.support << ',' << r.entropy << ',' << r.capacity << ','
        << r.mean_length << ',' << r.bottom_rate << ',' << r.error_mass << '\n';
    return out.str();
}

} // namespace ucs
