#include "edgeledger/jsonio.hpp"

#include <algorithm>
#include <cstring>

namespace edgeledger::jsonio {

Json parse(const std::string& text, const char* what) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw ContractError(ErrorCode::validation, std::string(what) + ": malformed json");
    return doc;
}

const Json& require(const Json& obj, const char* key, const char* what) {
    if (!obj.is_object())
        throw ContractError(ErrorCode::validation, std::string(what) + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ContractError(ErrorCode::validation,
                            std::string(what) + ": missing field '" + key + "'");
    return *it;
}

std::string require_string(const Json& obj, const char* key, const char* what) {
    const Json& v = require(obj, key, what);
    if (!v.is_string())
        throw ContractError(ErrorCode::validation,
                            std::string(what) + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

bool require_bool(const Json& obj, const char* key, const char* what) {
    const Json& v = require(obj, key, what);
    if (!v.is_boolean())
        throw ContractError(ErrorCode::validation,
                            std::string(what) + ": field '" + key + "' must be a boolean");
    return v.get<bool>();
}

double require_number(const Json& obj, const char* key, const char* what) {
    const Json& v = require(obj, key, what);
    if (!v.is_number())
        throw ContractError(ErrorCode::validation,
                            std::string(what) + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::int64_t require_int(const Json& obj, const char* key, const char* what) {
    const Json& v = require(obj, key, what);
    if (!v.is_number_integer())
        throw ContractError(ErrorCode::validation,
                            std::string(what) + ": field '" + key + "' must be an integer");
    return v.get<std::int64_t>();
}

void reject_unknown_fields(const Json& obj, std::initializer_list<const char*> allowed,
                           const char* what) {
    if (!obj.is_object())
        throw ContractError(ErrorCode::validation, std::string(what) + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return it.key() == k; });
        if (!known)
            throw ContractError(ErrorCode::validation,
                                std::string(what) + ": unknown field '" + it.key() + "'");
    }
}

}  // namespace edgeledger::jsonio
