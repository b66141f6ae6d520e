#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

namespace mrrsim {

// Reads and parses a JSON document. Missing/unreadable file -> IoError,
// malformed JSON -> ParseError (with the parser diagnostic).
nlohmann::json load_json_file(const std::string& path);

// Rejects unknown keys and missing required keys. `context` names the object
// in diagnostics (e.g. "layer 3 ('conv2')").
void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional, const std::string& context);

double require_number(const nlohmann::json& obj, const char* key, const std::string& context);
std::int64_t require_integer(const nlohmann::json& obj, const char* key, const std::string& context);
std::string require_string(const nlohmann::json& obj, const char* key, const std::string& context);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace mrrsim
