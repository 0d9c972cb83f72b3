#pragma once

#include <string>

#include <json.hpp>

#include "edgeledger/errors.hpp"

namespace edgeledger::jsonio {

// All structured records use insertion-ordered JSON so canonical
// serialization has a stable field order.
using Json = nlohmann::ordered_json;

// Parses a document, mapping syntax errors to validation failures.
Json parse(const std::string& text, const char* what);

// Field accessors that reject missing keys and wrong types by name.
const Json& require(const Json& obj, const char* key, const char* what);
std::string require_string(const Json& obj, const char* key, const char* what);
bool require_bool(const Json& obj, const char* key, const char* what);
double require_number(const Json& obj, const char* key, const char* what);
std::int64_t require_int(const Json& obj, const char* key, const char* what);

// Rejects keys outside the allowed set ("unknown field" errors).
void reject_unknown_fields(const Json& obj, std::initializer_list<const char*> allowed,
                           const char* what);

}  // namespace edgeledger::jsonio
