/**
 * System-file ingestion and canonical serialization.
 *
 * A system file is a single JSON document:
 *
 *   {
 *     "name": "...", "n": 3,
 *     "params": {"a": "1", "b": "3/2"},          // optional
 *     "A":  [["0","a","0"], ...],                 // n rows of n entry strings
 *     "Ba": ..., "Bs": ...,
 *     "options": {...}                            // optional analysis options
 *   }
 *
 * Matrix entries follow the grammar
 *     entry  := [+-]? factor ('*' factor)*
 *     factor := rational | identifier
 * with rationals written "p" or "p/q" and identifiers resolved against the
 * params table. All values stay exact rationals; floats are never parsed.
 */
#pragma once

#include <map>
#include <string>

#include "json.hpp"

#include "decaycert/system.hpp"

namespace decaycert {

using Json = nlohmann::ordered_json;

struct LoadedSystem {
  SystemSpec sys;
  Json doc;                                // document as loaded (byte-stable re-emission)
  std::map<std::string, Rational> params;  // effective parameter values
};

/**
 * Input:  one matrix-entry string and the effective parameter table.
 * Output: its exact rational value.
 * Errors: InvalidInput on malformed syntax or unknown identifiers.
 */
Rational parse_entry(const std::string& text, const std::map<std::string, Rational>& params);

/**
 * Input:  JSON text and optional parameter overrides (must name parameters the
 *         file declares).
 * Action: parse, substitute parameters, validate the system structure.
 * Output: validated system plus the retained document.
 * Errors: InvalidInput with the offending field/entry named.
 */
LoadedSystem parse_system_file(const std::string& text,
                               const std::map<std::string, Rational>& overrides = {});

/** Canonical serialization: 2-space indent plus trailing newline. */
std::string dump_system_json(const Json& doc);

}  // namespace decaycert
