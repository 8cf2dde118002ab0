/**
 * Model-system definitions.
 *
 * Systems are defined once, as system-file documents; zoo_system goes through
 * the regular parser so the zoo exercises the same code path as user files.
 */
#include "decaycert/zoo.hpp"

#include "decaycert/errors.hpp"

namespace decaycert {
namespace {

Json damped_wave_doc() {
  return Json{
      {"name", "damped-wave"},
      {"n", 2},
      {"A", Json::array({Json::array({"0", "1"}), Json::array({"1", "0"})})},
      {"Ba", Json::array({Json::array({"0", "0"}), Json::array({"0", "0"})})},
      {"Bs", Json::array({Json::array({"1", "0"}), Json::array({"0", "0"})})},
  };
}

Json toy2x2_doc() {
  return Json{
      {"name", "toy2x2"},
      {"n", 2},
      {"params", Json{{"a", "1"}, {"b", "2"}}},
      {"A", Json::array({Json::array({"a", "0"}), Json::array({"0", "b"})})},
      {"Ba", Json::array({Json::array({"0", "1"}), Json::array({"-1", "0"})})},
      {"Bs", Json::array({Json::array({"1", "0"}), Json::array({"0", "0"})})},
  };
}

Json toy3x3_doc() {
  return Json{
      {"name", "toy3x3"},
      {"n", 3},
      {"params", Json{{"a", "1"}, {"b", "2"}}},
      {"A", Json::array({Json::array({"0", "a", "0"}), Json::array({"a", "0", "0"}),
                         Json::array({"0", "0", "b"})})},
      {"Ba", Json::array({Json::array({"0", "0", "1"}), Json::array({"0", "0", "0"}),
                          Json::array({"-1", "0", "0"})})},
      {"Bs", Json::array({Json::array({"1", "0", "0"}), Json::array({"0", "0", "0"}),
                          Json::array({"0", "0", "0"})})},
  };
}

Json sugimoto_doc() {
  return Json{
      {"name", "sugimoto"},
      {"n", 3},
      {"params", Json{{"a", "1"}, {"Omega", "1"}, {"omega", "1"}, {"eps", "1"}}},
      {"A", Json::array({Json::array({"a", "0", "0"}), Json::array({"0", "0", "0"}),
                         Json::array({"0", "0", "0"})})},
      {"Ba", Json::array({Json::array({"0", "Omega", "0"}), Json::array({"-Omega", "0", "omega"}),
                          Json::array({"0", "-omega", "0"})})},
      {"Bs", Json::array({Json::array({"0", "0", "0"}), Json::array({"0", "eps", "0"}),
                          Json::array({"0", "0", "0"})})},
  };
}

Json timoshenko_doc() {
  return Json{
      {"name", "timoshenko"},
      {"n", 4},
      {"params", Json{{"a", "2"}, {"b", "1"}}},
      {"A", Json::array({Json::array({"0", "-1", "0", "0"}), Json::array({"-1", "0", "0", "0"}),
                         Json::array({"0", "0", "0", "-a"}), Json::array({"0", "0", "-a", "0"})})},
      {"Ba", Json::array({Json::array({"0", "0", "0", "1"}), Json::array({"0", "0", "0", "0"}),
                          Json::array({"0", "0", "0", "0"}), Json::array({"-1", "0", "0", "0"})})},
      {"Bs", Json::array({Json::array({"0", "0", "0", "0"}), Json::array({"0", "0", "0", "0"}),
                          Json::array({"0", "0", "0", "0"}), Json::array({"0", "0", "0", "b"})})},
  };
}

Json timoshenko_memory_doc() {
  return Json{
      {"name", "timoshenko-memory"},
      {"n", 5},
      {"params", Json{{"c1", "1"}, {"c2", "1"}, {"mu", "1"}}},
      {"A",
       Json::array({Json::array({"0", "0", "-1", "0", "0"}),
                    Json::array({"0", "0", "0", "-c1", "c2"}),
                    Json::array({"-1", "0", "0", "0", "0"}),
                    Json::array({"0", "-c1", "0", "0", "0"}),
                    Json::array({"0", "c2", "0", "0", "0"})})},
      {"Ba", Json::array({Json::array({"0", "1", "0", "0", "0"}),
                          Json::array({"-1", "0", "0", "0", "0"}),
                          Json::array({"0", "0", "0", "0", "0"}),
                          Json::array({"0", "0", "0", "0", "0"}),
                          Json::array({"0", "0", "0", "0", "0"})})},
      {"Bs", Json::array({Json::array({"0", "0", "0", "0", "0"}),
                          Json::array({"0", "0", "0", "0", "0"}),
                          Json::array({"0", "0", "0", "0", "0"}),
                          Json::array({"0", "0", "0", "0", "0"}),
                          Json::array({"0", "0", "0", "0", "mu"})})},
  };
}

}  // namespace

std::vector<std::string> zoo_names() {
  return {"damped-wave", "toy2x2", "toy3x3", "sugimoto", "timoshenko", "timoshenko-memory"};
}

Json zoo_file(const std::string& name) {
  if (name == "damped-wave") return damped_wave_doc();
  if (name == "toy2x2") return toy2x2_doc();
  if (name == "toy3x3") return toy3x3_doc();
  if (name == "sugimoto") return sugimoto_doc();
  if (name == "timoshenko") return timoshenko_doc();
  if (name == "timoshenko-memory") return timoshenko_memory_doc();
  throw CertError(ErrorCode::InvalidInput, "unknown zoo system '" + name + "'");
}

std::string zoo_file_text(const std::string& name) { return dump_system_json(zoo_file(name)); }

SystemSpec zoo_system(const std::string& name, const std::map<std::string, Rational>& overrides) {
  return parse_system_file(zoo_file_text(name), overrides).sys;
}

}  // namespace decaycert
