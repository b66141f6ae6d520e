#include "mrrsim/json_util.hpp"

#include <fstream>
#include <sstream>

#include "mrrsim/errors.hpp"

namespace mrrsim {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read file: " + path);
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional, const std::string& context) {
  if (!obj.is_object()) throw ValidationError(context + ": expected a JSON object");
  for (const char* key : required) {
    if (!obj.contains(key)) throw ValidationError(context + ": missing required key '" + key + "'");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : required) known = known || it.key() == key;
    for (const char* key : optional) known = known || it.key() == key;
    if (!known) throw ValidationError(context + ": unknown key '" + it.key() + "'");
  }
}

double require_number(const nlohmann::json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ValidationError(context + ": key '" + key + "' must be a number");
  return obj[key].get<double>();
}

std::int64_t require_integer(const nlohmann::json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key) || !obj[key].is_number_integer())
    throw ValidationError(context + ": key '" + key + "' must be an integer");
  return obj[key].get<std::int64_t>();
}

std::string require_string(const nlohmann::json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw ValidationError(context + ": key '" + key + "' must be a string");
  return obj[key].get<std::string>();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw IoError("cannot write file: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read file: " + path);
  return buf.str();
}

}  // namespace mrrsim
