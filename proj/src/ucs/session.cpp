#include "ucs/session.hpp"

#include "ucs/errors.hpp"

#include <json.hpp>

#include <cstdlib>

namespace ucs {

CodecOptions SessionConfig::codec_options() const {
    CodecOptions o;
    o.delta = delta;
    o.epsilon = epsilon;
    o.seed = seed;
    o.index_budget = index_budget;
    o.chain_cap = chain_cap;
    return o;
}

std::string SessionConfig::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["delta"] = delta;
    j["epsilon"] = rational_to_string(epsilon);
    j["scheme"] = scheme;
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(seed));
    j["seed"] = buf;
    j["index_budget"] = index_budget;
    j["solver_budget"] = solver_budget;
    j["chain_cap"] = chain_cap;
    return j.dump();
}

std::uint64_t parse_seed(const std::string& text) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used, 0);
        if (used != text.size())
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::Parse, "bad seed '" + text + "'");
    }
}

void merge_session_json(SessionConfig& config, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        if (!j.is_object())
            fail(ErrorCode::Parse, "session config must be a JSON object");
        if (j.contains("n"))
            config.n = j["n"].get<std::size_t>();
        if (j.contains("delta"))
            config.delta = j["delta"].get<unsigned>();
        if (j.contains("epsilon"))
            config.epsilon = parse_rational(j["epsilon"].get<std::string>());
        if (j.contains("scheme"))
            config.scheme = j["scheme"].get<std::string>();
        if (j.contains("seed"))
            config.seed = j["seed"].is_string() ? parse_seed(j["seed"].get<std::string>())
                                                : j["seed"].get<std::uint64_t>();
        if (j.contains("index_budget"))
            config.index_budget = j["index_budget"].get<std::uint64_t>();
        if (j.contains("solver_budget"))
            config.solver_budget = j["solver_budget"].get<std::uint64_t>();
        if (j.contains("chain_cap"))
            config.chain_cap = j["chain_cap"].get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("session config: ") + e.what());
    }
}

bool apply_budget_env(SessionConfig& config) {
    const char* raw = std::getenv("UCS_BUDGET");
    if (!raw || !*raw)
        return false;
    const std::uint64_t v = parse_seed(raw);
    if (v == 0)
        fail(ErrorCode::InvalidArgument, "UCS_BUDGET must be positive");
    config.index_budget = v;
    config.solver_budget = v;
    return true;
}

} // namespace ucs
