/**
 * Built-in model systems.
 *
 * Six reference systems used throughout the tests and the CLI:
 *   damped-wave        2x2 wave equation with frictional damping
 *   toy2x2             two transport speeds coupled by rotation, one damped
 *   toy3x3             wave pair + transport coupled through the damped slot
 *   sugimoto           3x3 acoustic chain with inner-component damping
 *   timoshenko         4x4 beam model, dissipative in the shear-rate slot
 *   timoshenko-memory  5x5 beam-with-memory model, damping on the memory slot
 *
 * Each is exposed both as a canonical system-file document (for emission and
 * golden tests) and as a parsed SystemSpec with optional parameter overrides.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "decaycert/jsonio.hpp"
#include "decaycert/system.hpp"

namespace decaycert {

/** The six model names, in canonical order. */
std::vector<std::string> zoo_names();

/** Canonical system-file document; throws InvalidInput for unknown names. */
Json zoo_file(const std::string& name);

/** dump_system_json(zoo_file(name)): the exact bytes `zoo emit` writes. */
std::string zoo_file_text(const std::string& name);

/** Parsed and validated model, optionally with parameter overrides. */
SystemSpec zoo_system(const std::string& name,
                      const std::map<std::string, Rational>& overrides = {});

}  // namespace decaycert
