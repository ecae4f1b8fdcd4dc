#include "ucs/ucs.h"

#include "ucs/bench.hpp"
#include "ucs/codec.hpp"
#include "ucs/errors.hpp"
#include "ucs/graphs.hpp"
#include "ucs/oracle.hpp"
#include "ucs/session.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

struct ucs_dist {
    ucs::Dist dist;
};

struct ucs_codec {
    ucs::SessionConfig config;
    std::unique_ptr<ucs::Scheme> scheme;
};

namespace {

thread_local std::string last_error;

ucs_status to_status(ucs::ErrorCode code) {
    using ucs::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return UCS_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return UCS_ERR_PARSE;
    case ErrorCode::UniverseMismatch: return UCS_ERR_UNIVERSE_MISMATCH;
    case ErrorCode::ZeroProbability: return UCS_ERR_ZERO_PROBABILITY;
    case ErrorCode::BudgetExhausted: return UCS_ERR_BUDGET_EXHAUSTED;
    case ErrorCode::CapExceeded: return UCS_ERR_CAP_EXCEEDED;
    case ErrorCode::MalformedCodeword: return UCS_ERR_MALFORMED_CODEWORD;
    case ErrorCode::DecodeFailed: return UCS_ERR_DECODE_FAILED;
    case ErrorCode::NoQualifyingLeader: return UCS_ERR_NO_QUALIFYING_LEADER;
    case ErrorCode::NoChainFound: return UCS_ERR_NO_CHAIN_FOUND;
    case ErrorCode::Io: return UCS_ERR_IO;
    }
    return UCS_ERR_INTERNAL;
}

template <class F>
ucs_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const ucs::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return UCS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return UCS_ERR_INTERNAL;
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what) {
    if (!ok)
        ucs::fail(ucs::ErrorCode::InvalidArgument, what);
}

} // namespace

extern "C" {

ucs_status ucs_dist_from_json(const char* json, ucs_dist** out) {
    return guarded([&] {
        require(json && out, "null argument");
        *out = new ucs_dist{ucs::dist_from_json(json)};
        return UCS_OK;
    });
}

ucs_status ucs_dist_from_family(const char* kind, size_t n, const char* parameter, size_t support,
                                uint64_t perm_seed, ucs_dist** out) {
    return guarded([&] {
        require(kind && out, "null argument");
        ucs::FamilyTag tag;
        tag.kind = ucs::parse_family_kind(kind);
        tag.n = n;
        if (tag.kind == ucs::FamilyKind::Flat) {
            require(support >= 1 && support <= n, "flat support must lie in [1, N]");
            const auto order = perm_seed ? ucs::seeded_permutation(n, perm_seed)
                                         : std::vector<ucs::Element>{};
            for (size_t i = 0; i < support; ++i)
                tag.support.push_back(perm_seed ? order[i] : static_cast<ucs::Element>(i + 1));
        } else {
            require(parameter != nullptr, "family parameter missing");
            tag.parameter = ucs::parse_rational(parameter);
            if (perm_seed)
                tag.permutation = ucs::seeded_permutation(n, perm_seed);
        }
        *out = new ucs_dist{ucs::make_family(tag)};
        return UCS_OK;
    });
}

void ucs_dist_free(ucs_dist* d) { delete d; }

size_t ucs_dist_size(const ucs_dist* d) { return d ? d->dist.size() : 0; }

double ucs_dist_entropy(const ucs_dist* d) { return d ? d->dist.entropy() : 0.0; }

double ucs_dist_capacity(const ucs_dist* d) { return d ? ucs::capacity(d->dist) : 0.0; }

ucs_status ucs_dist_to_json(const ucs_dist* d, char** out) {
    return guarded([&] {
        require(d && out, "null argument");
        *out = copy_string(ucs::dist_to_json(d->dist));
        return UCS_OK;
    });
}

ucs_status ucs_dist_is_close(const ucs_dist* p, const ucs_dist* q, unsigned delta, int* out) {
    return guarded([&] {
        require(p && q && out, "null argument");
        *out = ucs::is_delta_close(p->dist, q->dist, delta) ? 1 : 0;
        return UCS_OK;
    });
}

void ucs_codec_config_init(ucs_codec_config* config) {
    if (!config)
        return;
    config->scheme = "simple";
    config->delta = 0;
    config->epsilon = "0";
    config->seed = ucs::kProtocolSeed;
    config->index_budget = ucs::kDefaultIndexBudget;
}

ucs_status ucs_codec_new(const ucs_codec_config* config, ucs_codec** out) {
    return guarded([&] {
        require(config && out, "null argument");
        auto codec = std::make_unique<ucs_codec>();
        codec->config.scheme = config->scheme ? config->scheme : "simple";
        codec->config.delta = config->delta;
        codec->config.epsilon = ucs::parse_rational(config->epsilon ? config->epsilon : "0");
        codec->config.seed = config->seed;
        codec->config.index_budget = config->index_budget ? config->index_budget
                                                          : ucs::kDefaultIndexBudget;
        codec->scheme = ucs::make_scheme(codec->config.scheme, codec->config.codec_options());
        *out = codec.release();
        return UCS_OK;
    });
}

void ucs_codec_free(ucs_codec* codec) { delete codec; }

ucs_status ucs_encode(ucs_codec* codec, const ucs_dist* p, uint32_t message, uint8_t** bytes,
                      size_t* len, size_t* bit_length) {
    return guarded([&] {
        require(codec && p && bytes && len, "null argument");
        const ucs::BitString c = codec->scheme->encode(p->dist, message);
        const auto padded = ucs::pad_to_bytes(c);
        auto* buf = static_cast<uint8_t*>(std::malloc(padded.size()));
        if (!buf)
            throw std::bad_alloc();
        std::memcpy(buf, padded.data(), padded.size());
        *bytes = buf;
        *len = padded.size();
        if (bit_length)
            *bit_length = c.size();
        return ucs::is_bottom(c) ? UCS_BOTTOM : UCS_OK;
    });
}

ucs_status ucs_decode(ucs_codec* codec, const ucs_dist* q, const uint8_t* bytes, size_t len,
                      uint32_t* message) {
    return guarded([&] {
        require(codec && q && message && (bytes || len == 0), "null argument");
        const ucs::BitString c = ucs::unpad_bytes({bytes, len});
        const auto m = codec->scheme->decode(q->dist, c);
        if (!m) {
            *message = 0;
            return UCS_BOTTOM;
        }
        *message = *m;
        return UCS_OK;
    });
}

void ucs_bytes_free(uint8_t* bytes) { std::free(bytes); }

ucs_status ucs_verify(const char* config_json, char** report_json, char** report_csv) {
    return guarded([&] {
        require(config_json && report_json, "null argument");
        ucs::oracle::VerificationConfig config;
        try {
            const auto j = nlohmann::json::parse(config_json);
            config.scheme = j.value("scheme", config.scheme);
            config.n = j.value("n", config.n);
            config.delta = j.value("delta", config.delta);
            config.epsilon = ucs::parse_rational(j.value("epsilon", std::string("0")));
            config.bits = j.value("bits", config.bits);
            if (j.contains("seed"))
                config.seed = j["seed"].is_string() ? ucs::parse_seed(j["seed"].get<std::string>())
                                                    : j["seed"].get<std::uint64_t>();
            config.fault_every = j.value("fault_every", config.fault_every);
            config.max_trials = j.value("max_trials", config.max_trials);
        } catch (const nlohmann::json::exception& e) {
            ucs::fail(ucs::ErrorCode::Parse, std::string("verify config: ") + e.what());
        }
        const auto report = ucs::oracle::verify_scheme(config);
        *report_json = copy_string(ucs::oracle::report_to_json(report));
        if (report_csv)
            *report_csv = copy_string(ucs::oracle::report_to_csv(report));
        return UCS_OK;
    });
}

ucs_status ucs_bench(const char* grid_json, char** csv) {
    return guarded([&] {
        require(grid_json && csv, "null argument");
        std::string out = ucs::bench_csv_header();
        for (const auto& cell : ucs::load_bench_grid(grid_json))
            out += ucs::bench_csv_row(ucs::run_bench_cell(cell));
        *csv = copy_string(out);
        return UCS_OK;
    });
}

ucs_status ucs_graph(const char* kind, size_t n, unsigned l, size_t k, const char* method,
                     uint64_t seed, uint64_t budget, char** certificate_json, char** dump_text) {
    return guarded([&] {
        require(kind && method && certificate_json, "null argument");
        const std::string kind_s = kind;
        const std::string method_s = method;
        if (budget == 0)
            budget = 50'000'000;

        ucs::ColoringResult result;
        ucs::SubPermGraph g;
        if (method_s == "hash") {
            require(kind_s == "unc", "iterated hash coloring applies to uncertainty graphs");
            result = ucs::iterated_hash_color(n, l, k, seed);
            g = ucs::build_unc_graph(n, l, k);
        } else {
            if (kind_s == "unc")
                g = ucs::build_unc_graph(n, l, k);
            else if (kind_s == "shift")
                g = ucs::build_shift_graph(n, k);
            else
                ucs::fail(ucs::ErrorCode::InvalidArgument, "graph kind must be 'unc' or 'shift'");
            if (method_s == "exact") {
                result = ucs::exact_chromatic(g.graph, budget);
            } else if (method_s == "greedy") {
                std::vector<std::uint32_t> order(g.vertices.size());
                for (std::uint32_t i = 0; i < order.size(); ++i)
                    order[i] = i;
                result = ucs::greedy_chromatic(g.graph, order);
            } else if (method_s == "frac") {
                require(kind_s == "unc", "fractional cover applies to uncertainty graphs");
                result = ucs::frac_cover_color(g, seed);
            } else {
                ucs::fail(ucs::ErrorCode::InvalidArgument, "unknown coloring method '" + method_s + "'");
            }
        }
        if (!ucs::verify_coloring(g.graph, result.colors))
            ucs::fail(ucs::ErrorCode::DecodeFailed, "coloring failed verification");

        nlohmann::ordered_json j;
        j["kind"] = kind_s;
        j["n"] = n;
        if (kind_s == "unc")
            j["l"] = l;
        j["k"] = k;
        j["method"] = result.method;
        j["seed"] = seed;
        j["vertices"] = g.vertices.size();
        j["edges"] = g.graph.edges();
        j["colors"] = result.count;
        if (result.method == "exact")
            j["chi"] = result.count;
        if (result.count_bound > 0)
            j["count_bound"] = result.count_bound;
        auto& levels = j["levels"] = nlohmann::ordered_json::array();
        for (const auto& lv : result.levels)
            levels.push_back({{"k", lv.k},
                              {"d", lv.d},
                              {"d_bound", lv.d_bound},
                              {"colors", lv.colors},
                              {"prev_colors", lv.prev_colors},
                              {"color_bound", lv.color_bound},
                              {"max_index", lv.max_index}});
        j["covers"] = result.covers;
        auto& assignment = j["assignment"] = nlohmann::ordered_json::array();
        for (std::size_t v = 0; v < g.vertices.size(); ++v)
            assignment.push_back({{"vertex", g.vertices[v]}, {"color", result.colors[v]}});
        j["valid"] = true;
        *certificate_json = copy_string(j.dump(2));
        if (dump_text)
            *dump_text = copy_string(ucs::graph_to_text(g, kind_s));
        return UCS_OK;
    });
}

void ucs_string_free(char* s) { std::free(s); }

const char* ucs_last_error(void) { return last_error.c_str(); }

const char* ucs_status_string(ucs_status status) {
    switch (status) {
    case UCS_OK: return "ok";
    case UCS_BOTTOM: return "bottom";
    case UCS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case UCS_ERR_PARSE: return "parse";
    case UCS_ERR_UNIVERSE_MISMATCH: return "universe_mismatch";
    case UCS_ERR_ZERO_PROBABILITY: return "zero_probability";
    case UCS_ERR_BUDGET_EXHAUSTED: return "budget_exhausted";
    case UCS_ERR_CAP_EXCEEDED: return "cap_exceeded";
    case UCS_ERR_MALFORMED_CODEWORD: return "malformed_codeword";
    case UCS_ERR_DECODE_FAILED: return "decode_failed";
    case UCS_ERR_NO_QUALIFYING_LEADER: return "no_qualifying_leader";
    case UCS_ERR_NO_CHAIN_FOUND: return "no_chain_found";
    case UCS_ERR_IO: return "io";
    case UCS_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

} // extern "C"
