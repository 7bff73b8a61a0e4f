#include "chorefair/io.hpp"

#include "chorefair/errors.hpp"
#include "chorefair/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace chorefair {

namespace {

using nlohmann::json;

constexpr const char* kHousekeeperName = "housekeeper";

std::string default_agent_name(int i) { return "a" + std::to_string(i + 1); }
std::string default_chore_name(int j) { return "c" + std::to_string(j + 1); }

Rational parse_value(const json& node, const std::string& where) {
  if (node.is_number_integer()) {
    return Rational(node.get<std::int64_t>());
  }
  if (node.is_number_unsigned()) {
    return Rational(node.get<std::uint64_t>());
  }
  if (node.is_number_float()) {
    throw IoError(where + ": write decimals as strings (e.g. \"2.5\") so they stay exact");
  }
  if (node.is_string()) {
    try {
      return parse_rational(node.get<std::string>());
    } catch (const std::invalid_argument& error) {
      throw IoError(where + ": " + error.what());
    }
  }
  throw IoError(where + ": expected a number or a string");
}

json value_to_json(const Rational& value) { return format_rational(value); }

void require_keys(const json& object, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& item : object.items()) {
    if (allowed.count(item.key()) == 0) {
      throw IoError(where + ": unknown key \"" + item.key() + "\"");
    }
  }
}

json parse_text(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& error) {
    throw IoError(std::string("invalid JSON: ") + error.what());
  }
  if (!document.is_object()) throw IoError("the document is not a JSON object");
  return document;
}

void check_version(const json& document) {
  if (!document.contains("version")) throw IoError("missing \"version\"");
  const json& version = document.at("version");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    throw IoError("unsupported document version");
  }
}

std::string read_name(const json& object, const char* key,
                      const std::string& fallback, const std::string& where) {
  if (!object.contains(key)) return fallback;
  const json& node = object.at(key);
  if (!node.is_string()) throw IoError(where + ": name must be a string");
  std::string name = node.get<std::string>();
  if (name.empty()) throw IoError(where + ": name must not be empty");
  return name;
}

void check_unique(const std::vector<std::string>& names,
                  const std::string& what) {
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (name == kHousekeeperName) {
      throw IoError("\"housekeeper\" is a reserved name");
    }
    if (!seen.insert(name).second) {
      throw IoError("duplicate " + what + " name \"" + name + "\"");
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open " + path + " for writing");
  stream << text;
  if (!stream) throw IoError("failed to write " + path);
}

const std::string& agent_label(const InstanceDoc& doc, int index) {
  static const std::string housekeeper = kHousekeeperName;
  if (index == doc.instance.agent_count()) return housekeeper;
  return doc.agent_names.at(index);
}

int agent_index(const InstanceDoc& doc, const std::string& name,
                const std::string& where) {
  if (name == kHousekeeperName) return doc.instance.agent_count();
  const auto it =
      std::find(doc.agent_names.begin(), doc.agent_names.end(), name);
  if (it == doc.agent_names.end()) {
    throw IoError(where + ": unknown agent \"" + name + "\"");
  }
  return static_cast<int>(it - doc.agent_names.begin());
}

int chore_index(const InstanceDoc& doc, const std::string& name,
                const std::string& where) {
  const auto it =
      std::find(doc.chore_names.begin(), doc.chore_names.end(), name);
  if (it == doc.chore_names.end()) {
    throw IoError(where + ": unknown chore \"" + name + "\"");
  }
  return static_cast<int>(it - doc.chore_names.begin());
}

json witness_to_json(const EnvyWitness& witness, const InstanceDoc& doc) {
  json node;
  node["envier"] = agent_label(doc, witness.envier);
  node["envied"] = agent_label(doc, witness.envied);
  json subset = json::array();
  for (int id : witness.subset.ids) subset.push_back(doc.chore_names.at(id));
  node["subset"] = std::move(subset);
  if (witness.fractions) {
    json fractions = json::array();
    for (const auto& value : *witness.fractions) {
      fractions.push_back(value_to_json(value));
    }
    node["fractions"] = std::move(fractions);
  }
  return node;
}

EnvyWitness witness_from_json(const json& node, const InstanceDoc& doc) {
  const std::string where = "certificate witness";
  require_keys(node, {"envier", "envied", "subset", "fractions"}, where);
  if (!node.contains("envier") || !node.contains("envied") ||
      !node.contains("subset")) {
    throw IoError(where + ": requires \"envier\", \"envied\" and \"subset\"");
  }
  EnvyWitness witness;
  witness.envier =
      agent_index(doc, node.at("envier").get<std::string>(), where);
  witness.envied =
      agent_index(doc, node.at("envied").get<std::string>(), where);
  const json& subset = node.at("subset");
  if (!subset.is_array()) throw IoError(where + ": subset must be an array");

  std::vector<std::pair<int, Rational>> entries;
  const bool has_fractions = node.contains("fractions");
  if (has_fractions && (!node.at("fractions").is_array() ||
                        node.at("fractions").size() != subset.size())) {
    throw IoError(where + ": fractions must align with the subset");
  }
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const int id = chore_index(doc, subset.at(k).get<std::string>(), where);
    Rational fraction(1);
    if (has_fractions) {
      fraction = parse_value(node.at("fractions").at(k), where);
    }
    entries.emplace_back(id, std::move(fraction));
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> ids;
  std::vector<Rational> fractions;
  for (auto& [id, fraction] : entries) {
    ids.push_back(id);
    fractions.push_back(std::move(fraction));
  }
  try {
    witness.subset = make_bundle(ids);
  } catch (const std::invalid_argument& error) {
    throw IoError(where + ": " + error.what());
  }
  if (has_fractions) witness.fractions = std::move(fractions);
  return witness;
}

}  // namespace

InstanceDoc parse_instance_text(const std::string& text) {
  const json document = parse_text(text);
  require_keys(document,
               {"version", "divisible", "agents", "chores", "disutility_matrix"},
               "instance");
  check_version(document);

  InstanceDoc doc;
  if (document.contains("divisible")) {
    const json& divisible = document.at("divisible");
    if (!divisible.is_boolean()) {
      throw IoError("\"divisible\" must be a boolean");
    }
    doc.divisible = divisible.get<bool>();
  }

  if (!document.contains("agents") || !document.at("agents").is_array()) {
    throw IoError("missing \"agents\" array");
  }
  if (!document.contains("chores") || !document.at("chores").is_array()) {
    throw IoError("missing \"chores\" array");
  }

  const json& agents = document.at("agents");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "agent " + std::to_string(i + 1);
    const json& node = agents.at(i);
    if (!node.is_object()) throw IoError(where + ": expected an object");
    require_keys(node, {"name", "budget"}, where);
    if (!node.contains("budget")) throw IoError(where + ": missing budget");
    doc.agent_names.push_back(
        read_name(node, "name", default_agent_name(static_cast<int>(i)), where));
    doc.instance.budgets.push_back(parse_value(node.at("budget"), where));
  }

  const json& chores = document.at("chores");
  for (std::size_t j = 0; j < chores.size(); ++j) {
    const std::string where = "chore " + std::to_string(j + 1);
    const json& node = chores.at(j);
    if (!node.is_object()) throw IoError(where + ": expected an object");
    require_keys(node, {"name", "size", "disutility"}, where);
    if (!node.contains("size")) throw IoError(where + ": missing size");
    doc.chore_names.push_back(
        read_name(node, "name", default_chore_name(static_cast<int>(j)), where));
    Chore chore;
    chore.size = parse_value(node.at("size"), where);
    if (node.contains("disutility")) {
      chore.disutility = parse_value(node.at("disutility"), where);
    }
    doc.instance.chores.push_back(std::move(chore));
  }

  check_unique(doc.agent_names, "agent");
  check_unique(doc.chore_names, "chore");

  if (document.contains("disutility_matrix")) {
    if (!doc.divisible) {
      throw IoError("a disutility matrix requires \"divisible\": true");
    }
    const json& matrix = document.at("disutility_matrix");
    if (!matrix.is_array() || matrix.size() != doc.agent_names.size()) {
      throw IoError("disutility matrix needs one row per agent");
    }
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      const std::string where = "disutility matrix row " + std::to_string(i + 1);
      const json& row = matrix.at(i);
      if (!row.is_array() || row.size() != doc.chore_names.size()) {
        throw IoError(where + ": needs one entry per chore");
      }
      std::vector<Rational> values;
      for (const json& cell : row) values.push_back(parse_value(cell, where));
      rows.push_back(std::move(values));
    }
    doc.instance.disutility_matrix = std::move(rows);
  }

  validate_instance(doc.instance);
  return doc;
}

std::string instance_to_text(const InstanceDoc& doc) {
  json document;
  document["version"] = 1;
  document["divisible"] = doc.divisible;

  json agents = json::array();
  for (int i = 0; i < doc.instance.agent_count(); ++i) {
    json node;
    node["name"] = i < static_cast<int>(doc.agent_names.size())
                       ? doc.agent_names[i]
                       : default_agent_name(i);
    node["budget"] = value_to_json(doc.instance.budgets[i]);
    agents.push_back(std::move(node));
  }
  document["agents"] = std::move(agents);

  json chores = json::array();
  for (int j = 0; j < doc.instance.chore_count(); ++j) {
    json node;
    node["name"] = j < static_cast<int>(doc.chore_names.size())
                       ? doc.chore_names[j]
                       : default_chore_name(j);
    node["size"] = value_to_json(doc.instance.chores[j].size);
    node["disutility"] = value_to_json(doc.instance.chores[j].disutility);
    chores.push_back(std::move(node));
  }
  document["chores"] = std::move(chores);

  if (doc.instance.disutility_matrix) {
    json matrix = json::array();
    for (const auto& row : *doc.instance.disutility_matrix) {
      json cells = json::array();
      for (const auto& value : row) cells.push_back(value_to_json(value));
      matrix.push_back(std::move(cells));
    }
    document["disutility_matrix"] = std::move(matrix);
  }

  return document.dump(2) + "\n";
}

InstanceDoc read_instance_file(const std::string& path) {
  return parse_instance_text(read_file(path));
}

void write_instance_file(const std::string& path, const InstanceDoc& doc) {
  write_file(path, instance_to_text(doc));
}

std::string result_to_text(const ResultDoc& result, const InstanceDoc& doc) {
  json document;
  document["version"] = 1;
  document["algorithm"] = result.algorithm;

  if (result.allocation) {
    json bundles;
    const int n = doc.instance.agent_count();
    for (int i = 0; i <= n; ++i) {
      json names = json::array();
      for (int id : result.allocation->bundles.at(i).ids) {
        names.push_back(doc.chore_names.at(id));
      }
      bundles[agent_label(doc, i)] = std::move(names);
    }
    document["allocation"] = std::move(bundles);
  }

  if (result.fractions) {
    json rows = json::array();
    for (const auto& row : result.fractions->fractions) {
      json cells = json::array();
      for (const auto& value : row) cells.push_back(value_to_json(value));
      rows.push_back(std::move(cells));
    }
    document["fractions"] = std::move(rows);
  }

  json certificates = json::array();
  for (const auto& certificate : result.certificates) {
    json node;
    node["criterion"] = criterion_label(certificate.criterion);
    node["satisfied"] = certificate.report.satisfied;
    if (certificate.report.witness) {
      node["witness"] = witness_to_json(*certificate.report.witness, doc);
    }
    certificates.push_back(std::move(node));
  }
  document["certificates"] = std::move(certificates);

  json metadata;
  metadata["iterations"] = result.iterations;
  metadata["elapsed_ms"] = result.elapsed_ms;
  metadata["special_cases"] = result.special_cases;
  metadata["guarantee"] = result.guarantee;
  if (result.cutoffs) metadata["density_cutoffs"] = *result.cutoffs;
  document["metadata"] = std::move(metadata);

  return document.dump(2) + "\n";
}

ResultDoc parse_result_text(const std::string& text, const InstanceDoc& doc) {
  const json document = parse_text(text);
  require_keys(document,
               {"version", "algorithm", "allocation", "fractions",
                "certificates", "metadata"},
               "result");
  check_version(document);

  ResultDoc result;
  if (document.contains("algorithm")) {
    result.algorithm = document.at("algorithm").get<std::string>();
  }

  const int n = doc.instance.agent_count();
  const int m = doc.instance.chore_count();

  if (document.contains("allocation")) {
    const json& bundles = document.at("allocation");
    if (!bundles.is_object()) {
      throw IoError("\"allocation\" must map agents to chore lists");
    }
    Allocation allocation;
    allocation.bundles.assign(n + 1, Bundle{});
    std::vector<int> owner(m, -1);
    for (const auto& item : bundles.items()) {
      const int agent = agent_index(doc, item.key(), "allocation");
      if (!item.value().is_array()) {
        throw IoError("allocation for \"" + item.key() + "\" must be an array");
      }
      for (const json& name : item.value()) {
        const int id = chore_index(doc, name.get<std::string>(), "allocation");
        if (owner[id] != -1) {
          throw IoError("chore \"" + name.get<std::string>() +
                        "\" is assigned twice");
        }
        owner[id] = agent;
        allocation.bundles[agent].insert(id);
      }
    }
    for (int j = 0; j < m; ++j) {
      if (owner[j] == -1) {
        throw IoError("chore \"" + doc.chore_names.at(j) +
                      "\" is not assigned");
      }
    }
    result.allocation = std::move(allocation);
  }

  if (document.contains("fractions")) {
    const json& rows = document.at("fractions");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n + 1)) {
      throw IoError("\"fractions\" needs one row per agent plus the housekeeper");
    }
    FractionalAllocation fractions;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string where = "fractions row " + std::to_string(i + 1);
      const json& row = rows.at(i);
      if (!row.is_array() || row.size() != static_cast<std::size_t>(m)) {
        throw IoError(where + ": needs one entry per chore");
      }
      std::vector<Rational> values;
      for (const json& cell : row) values.push_back(parse_value(cell, where));
      fractions.fractions.push_back(std::move(values));
    }
    result.fractions = std::move(fractions);
  }

  if (document.contains("certificates")) {
    const json& certificates = document.at("certificates");
    if (!certificates.is_array()) {
      throw IoError("\"certificates\" must be an array");
    }
    for (const json& node : certificates) {
      require_keys(node, {"criterion", "satisfied", "witness"}, "certificate");
      if (!node.contains("criterion") || !node.contains("satisfied")) {
        throw IoError("certificate requires \"criterion\" and \"satisfied\"");
      }
      ResultCertificate certificate{
          parse_criterion(node.at("criterion").get<std::string>()),
          EnvyReport{node.at("satisfied").get<bool>(), std::nullopt}};
      if (node.contains("witness")) {
        certificate.report.witness = witness_from_json(node.at("witness"), doc);
      }
      result.certificates.push_back(std::move(certificate));
    }
  }

  if (document.contains("metadata")) {
    const json& metadata = document.at("metadata");
    require_keys(metadata,
                 {"iterations", "elapsed_ms", "special_cases", "guarantee",
                  "density_cutoffs"},
                 "metadata");
    if (metadata.contains("iterations")) {
      result.iterations = metadata.at("iterations").get<long>();
    }
    if (metadata.contains("elapsed_ms")) {
      result.elapsed_ms = metadata.at("elapsed_ms").get<double>();
    }
    if (metadata.contains("special_cases")) {
      result.special_cases =
          metadata.at("special_cases").get<std::vector<std::string>>();
    }
    if (metadata.contains("guarantee")) {
      result.guarantee = metadata.at("guarantee").get<std::string>();
    }
    if (metadata.contains("density_cutoffs")) {
      result.cutoffs = metadata.at("density_cutoffs").get<DensityCutoffs>();
    }
  }

  return result;
}

void write_result_file(const std::string& path, const ResultDoc& result,
                       const InstanceDoc& doc) {
  write_file(path, result_to_text(result, doc));
}

ResultDoc read_result_file(const std::string& path, const InstanceDoc& doc) {
  return parse_result_text(read_file(path), doc);
}

EnvyCriterion parse_criterion(const std::string& label) {
  if (label == "ef") return EnvyCriterion::ef();
  if (label == "ef1") return EnvyCriterion::ef1();
  if (label == "ef2") return EnvyCriterion::ef2();
  if (label == "efx") return EnvyCriterion::efx();
  if (label.rfind("efk:", 0) == 0) {
    try {
      const int k = std::stoi(label.substr(4));
      return EnvyCriterion::efk(k);
    } catch (const std::exception&) {
      // fall through to the common error
    }
  }
  throw IoError("unknown criterion \"" + label +
                "\" (expected ef, ef1, ef2, efx, or efk:K)");
}

std::string criterion_label(const EnvyCriterion& criterion) {
  switch (criterion.kind) {
    case EnvyCriterion::Kind::Ef:
      return "ef";
    case EnvyCriterion::Kind::Efx:
      return "efx";
    case EnvyCriterion::Kind::Efk:
      break;
  }
  if (criterion.k == 1) return "ef1";
  if (criterion.k == 2) return "ef2";
  return "efk:" + std::to_string(criterion.k);
}

std::vector<std::string> special_case_labels(const SpecialCase& flags) {
  std::vector<std::string> labels;
  if (flags.identically_valued) labels.push_back("identically-valued");
  if (flags.binary_disutility) labels.push_back("binary-disutility");
  if (flags.identically_sized) labels.push_back("identically-sized");
  if (flags.identically_dense) labels.push_back("identically-dense");
  if (flags.identical_budgets) labels.push_back("identical-budgets");
  if (flags.two_agents) labels.push_back("two-agents");
  return labels;
}

}  // namespace chorefair
