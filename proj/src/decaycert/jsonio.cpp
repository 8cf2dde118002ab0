/**
 * Exact-rational system-file parser.
 */
#include "decaycert/jsonio.hpp"

#include <cctype>

#include "decaycert/errors.hpp"

namespace decaycert {
namespace {

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

Rational parse_factor(const std::string& s, const std::map<std::string, Rational>& params) {
  if (s.empty()) throw CertError(ErrorCode::InvalidInput, "empty factor");
  if (is_identifier(s)) {
    const auto it = params.find(s);
    if (it == params.end())
      throw CertError(ErrorCode::InvalidInput, "unknown identifier '" + s + "'");
    return it->second;
  }
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw CertError(ErrorCode::InvalidInput, std::string(e.what()));
  }
}

/** Shape- and type-checked read of one n x n matrix of entry strings. */
RealMatrix parse_matrix(const Json& doc, const std::string& key, int n,
                        const std::map<std::string, Rational>& params) {
  if (!doc.contains(key) || !doc[key].is_array() || static_cast<int>(doc[key].size()) != n)
    throw CertError(ErrorCode::InvalidInput,
                    key + " must be an array of " + std::to_string(n) + " rows");
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const Json& row = doc[key][static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw CertError(ErrorCode::InvalidInput, key + " row " + std::to_string(i) + " must have " +
                                                   std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) {
      const Json& cell = row[static_cast<size_t>(j)];
      const std::string where = key + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (!cell.is_string())
        throw CertError(ErrorCode::InvalidInput,
                        where + " must be a quoted entry string (floats are not accepted)");
      try {
        m.at(i, j) = parse_entry(cell.get<std::string>(), params);
      } catch (const CertError& e) {
        throw CertError(ErrorCode::InvalidInput, where + ": " + e.msg());
      }
    }
  }
  return m;
}

}  // namespace

Rational parse_entry(const std::string& text, const std::map<std::string, Rational>& params) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw CertError(ErrorCode::InvalidInput, "empty matrix entry");

  Rational sign(1);
  size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    if (s[0] == '-') sign = -1;
    pos = 1;
  }
  Rational value = sign;
  while (pos <= s.size()) {
    const size_t star = s.find('*', pos);
    const size_t end = (star == std::string::npos) ? s.size() : star;
    value *= parse_factor(s.substr(pos, end - pos), params);
    if (star == std::string::npos) break;
    pos = star + 1;
    if (pos == s.size()) throw CertError(ErrorCode::InvalidInput, "dangling '*' in '" + text + "'");
  }
  return value;
}

LoadedSystem parse_system_file(const std::string& text,
                               const std::map<std::string, Rational>& overrides) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw CertError(ErrorCode::InvalidInput, std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw CertError(ErrorCode::InvalidInput, "system file must be an object");
  if (!doc.contains("name") || !doc["name"].is_string())
    throw CertError(ErrorCode::InvalidInput, "missing string field 'name'");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw CertError(ErrorCode::InvalidInput, "missing integer field 'n'");
  const int n = doc["n"].get<int>();
  if (n < 1 || n > 64)
    throw CertError(ErrorCode::InvalidInput, "dimension n must be between 1 and 64");

  std::map<std::string, Rational> params;
  if (doc.contains("params")) {
    if (!doc["params"].is_object())
      throw CertError(ErrorCode::InvalidInput, "'params' must be an object");
    for (const auto& [key, val] : doc["params"].items()) {
      if (!is_identifier(key))
        throw CertError(ErrorCode::InvalidInput, "bad parameter name '" + key + "'");
      if (!val.is_string())
        throw CertError(ErrorCode::InvalidInput,
                        "parameter '" + key + "' must be a quoted rational string");
      try {
        params[key] = parse_rational(val.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw CertError(ErrorCode::InvalidInput, "parameter '" + key + "': " + e.what());
      }
    }
  }
  for (const auto& [key, val] : overrides) {
    if (params.find(key) == params.end())
      throw CertError(ErrorCode::InvalidInput,
                      "override for parameter '" + key + "' which the file does not declare");
    params[key] = val;
  }

  LoadedSystem out;
  out.sys = make_system(doc["name"].get<std::string>(), parse_matrix(doc, "A", n, params),
                        parse_matrix(doc, "Ba", n, params), parse_matrix(doc, "Bs", n, params));
  out.doc = std::move(doc);
  out.params = std::move(params);
  return out;
}

std::string dump_system_json(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace decaycert
