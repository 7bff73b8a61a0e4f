#include "chorefair/divisible.hpp"
#include "chorefair/errors.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/generator.hpp"
#include "chorefair/instance.hpp"
#include "chorefair/io.hpp"
#include "chorefair/rational.hpp"
#include "chorefair/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace chorefair;
using nlohmann::json;

constexpr int kExitSatisfied = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIntractable = 3;

double elapsed_ms_since(std::chrono::steady_clock::time_point start) {
  const auto wall = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(wall).count();
}

std::string chore_display(const InstanceDoc& doc, int id) {
  return doc.chore_names.at(id);
}

std::string agent_display(const InstanceDoc& doc, int index) {
  if (index == doc.instance.agent_count()) return "housekeeper";
  return doc.agent_names.at(index);
}

std::string describe_witness(const EnvyWitness& witness,
                             const InstanceDoc& doc) {
  std::ostringstream out;
  out << agent_display(doc, witness.envier) << " envies "
      << agent_display(doc, witness.envied) << " via {";
  for (std::size_t k = 0; k < witness.subset.ids.size(); ++k) {
    if (k > 0) out << ", ";
    if (witness.fractions && (*witness.fractions)[k] != Rational(1)) {
      out << format_rational((*witness.fractions)[k]) << " of ";
    }
    out << chore_display(doc, witness.subset.ids[k]);
  }
  out << "}";
  return out.str();
}

void print_report(const std::string& label, const EnvyReport& report,
                  const InstanceDoc& doc) {
  if (report.satisfied) {
    std::cout << label << ": satisfied\n";
  } else {
    std::cout << label << ": violated — "
              << describe_witness(*report.witness, doc) << "\n";
  }
}

void emit_result(const ResultDoc& result, const InstanceDoc& doc,
                 const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << result_to_text(result, doc);
  } else {
    write_result_file(out_path, result, doc);
    std::cout << "wrote " << out_path << "\n";
  }
}

int run_solve(const std::string& in_path, const std::string& algorithm,
              const std::string& out_path) {
  const InstanceDoc doc = read_instance_file(in_path);

  ResultDoc result;
  result.algorithm = algorithm;
  result.special_cases = special_case_labels(classify_instance(doc.instance).flags);

  EnvyCriterion criterion = EnvyCriterion::ef();
  EnvyReport report;
  const auto start = std::chrono::steady_clock::now();

  if (algorithm == "efx") {
    const SolverResult solved = solve_efx(doc.instance);
    criterion = EnvyCriterion::efx();
    report = verify(solved.allocation, criterion, doc.instance);
    result.allocation = solved.allocation;
    result.iterations = solved.iterations;
  } else if (algorithm == "densest-first") {
    const SolverResult solved = densest_first(doc.instance);
    criterion = densest_first_guarantee(doc.instance);
    report = verify(solved.allocation, criterion, doc.instance);
    result.allocation = solved.allocation;
    result.iterations = solved.iterations;
  } else if (algorithm == "two-agent") {
    const SolverResult solved = solve_two_agents(doc.instance);
    criterion = EnvyCriterion::ef1();
    report = verify(solved.allocation, criterion, doc.instance);
    result.allocation = solved.allocation;
    result.iterations = solved.iterations;
  } else {  // divisible
    const DivisibleResult solved = solve_divisible(doc.instance);
    criterion = EnvyCriterion::ef();
    report = verify_ef_divisible(solved.allocation, doc.instance);
    result.fractions = solved.allocation;
    result.cutoffs = solved.certificate.cutoffs;
    result.iterations = solved.iterations;
  }

  result.elapsed_ms = elapsed_ms_since(start);
  result.guarantee = criterion_label(criterion);
  result.certificates.push_back({criterion, report});

  emit_result(result, doc, out_path);
  print_report(result.guarantee, report, doc);
  return report.satisfied ? kExitSatisfied : kExitViolated;
}

int run_verify(const std::string& in_path, const std::string& result_path,
               const std::string& label) {
  const InstanceDoc doc = read_instance_file(in_path);
  const ResultDoc result = read_result_file(result_path, doc);
  const EnvyCriterion criterion = parse_criterion(label);

  EnvyReport report;
  if (result.fractions) {
    if (criterion.kind != EnvyCriterion::Kind::Ef) {
      std::cerr << "fractional allocations support only the ef criterion\n";
      return kExitUsage;
    }
    validate_fractional(*result.fractions, doc.instance);
    report = verify_ef_divisible(*result.fractions, doc.instance);
  } else if (result.allocation) {
    if (!is_feasible(*result.allocation, doc.instance)) {
      std::cerr << "the allocation is not a feasible partition\n";
      return kExitUsage;
    }
    report = verify(*result.allocation, criterion, doc.instance);
  } else {
    std::cerr << "the result contains no allocation\n";
    return kExitUsage;
  }

  print_report(label, report, doc);
  return report.satisfied ? kExitSatisfied : kExitViolated;
}

IntRange range_from_json(const json& node, const std::string& where) {
  if (!node.is_array() || node.size() != 2 || !node.at(0).is_number_integer() ||
      !node.at(1).is_number_integer()) {
    throw IoError(where + ": expected [lo, hi]");
  }
  return {node.at(0).get<std::int64_t>(), node.at(1).get<std::int64_t>()};
}

ForcedCase forced_case_from_label(const std::string& label) {
  static const std::map<std::string, ForcedCase> cases = {
      {"identically-valued", ForcedCase::IdenticallyValued},
      {"binary-disutility", ForcedCase::BinaryDisutility},
      {"identically-sized", ForcedCase::IdenticallySized},
      {"identically-dense", ForcedCase::IdenticallyDense},
      {"identical-budgets", ForcedCase::IdenticalBudgets},
      {"two-agents", ForcedCase::TwoAgents},
  };
  const auto it = cases.find(label);
  if (it == cases.end()) {
    throw IoError("unknown special case \"" + label + "\"");
  }
  return it->second;
}

struct GenSettings {
  GeneratorConfig config;
  bool divisible = false;
};

GenSettings gen_settings_from_json(const json& document) {
  GenSettings settings;
  for (const auto& item : document.items()) {
    const std::string& key = item.key();
    const json& value = item.value();
    if (key == "version") {
      if (!value.is_number_integer() || value.get<int>() != 1) {
        throw IoError("unsupported config version");
      }
    } else if (key == "seed") {
      settings.config.seed = value.get<std::uint64_t>();
    } else if (key == "agents") {
      settings.config.agents = range_from_json(value, key);
    } else if (key == "chores") {
      settings.config.chores = range_from_json(value, key);
    } else if (key == "size") {
      settings.config.size = range_from_json(value, key);
    } else if (key == "disutility") {
      settings.config.disutility = range_from_json(value, key);
    } else if (key == "budget") {
      settings.config.budget = range_from_json(value, key);
    } else if (key == "special_case") {
      settings.config.special_case =
          forced_case_from_label(value.get<std::string>());
    } else if (key == "denominator_limit") {
      settings.config.denominator_limit = value.get<std::int64_t>();
    } else if (key == "subjective") {
      settings.config.subjective = value.get<bool>();
    } else if (key == "divisible") {
      settings.divisible = value.get<bool>();
    } else {
      throw IoError("generator config: unknown key \"" + key + "\"");
    }
  }
  return settings;
}

GenSettings load_gen_settings(const std::string& config_path) {
  if (config_path.empty()) return {};
  std::ifstream stream(config_path, std::ios::binary);
  if (!stream) throw IoError("cannot open " + config_path);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  json document;
  try {
    document = json::parse(buffer.str());
  } catch (const json::parse_error& error) {
    throw IoError(std::string("invalid JSON: ") + error.what());
  }
  if (!document.is_object()) throw IoError("the config is not a JSON object");
  return gen_settings_from_json(document);
}

int run_gen(const std::string& config_path,
            const std::optional<std::uint64_t>& seed,
            const std::string& out_path) {
  GenSettings settings = load_gen_settings(config_path);
  if (seed) settings.config.seed = *seed;

  InstanceDoc doc;
  doc.instance = generate(settings.config);
  doc.divisible = settings.divisible || settings.config.subjective;
  for (int i = 0; i < doc.instance.agent_count(); ++i) {
    doc.agent_names.push_back("a" + std::to_string(i + 1));
  }
  for (int j = 0; j < doc.instance.chore_count(); ++j) {
    doc.chore_names.push_back("c" + std::to_string(j + 1));
  }

  if (out_path.empty()) {
    std::cout << instance_to_text(doc);
  } else {
    write_instance_file(out_path, doc);
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitSatisfied;
}

int run_oracle(const std::string& in_path, const std::string& label) {
  const InstanceDoc doc = read_instance_file(in_path);
  const EnvyCriterion criterion = parse_criterion(label);
  const bool exists = oracle_exists(doc.instance, criterion);
  std::cout << (exists ? "a feasible " : "no feasible ") << label
            << " allocation exists\n";
  return exists ? kExitSatisfied : kExitViolated;
}

struct BenchRow {
  long runs = 0;
  long skipped = 0;
  double total_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
  long iterations = 0;

  void add(double ms, long iters) {
    if (runs == 0 || ms < min_ms) min_ms = ms;
    if (runs == 0 || ms > max_ms) max_ms = ms;
    total_ms += ms;
    iterations += iters;
    ++runs;
  }
};

int run_bench(const std::string& config_path) {
  if (config_path.empty()) throw IoError("bench requires --config");

  std::ifstream stream(config_path, std::ios::binary);
  if (!stream) throw IoError("cannot open " + config_path);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  json document;
  try {
    document = json::parse(buffer.str());
  } catch (const json::parse_error& error) {
    throw IoError(std::string("invalid JSON: ") + error.what());
  }
  if (!document.is_object()) throw IoError("the config is not a JSON object");

  GenSettings settings;
  long runs = 20;
  std::vector<std::string> algorithms = {"densest-first", "efx", "two-agent",
                                         "divisible"};
  for (const auto& item : document.items()) {
    const std::string& key = item.key();
    if (key == "version") {
      if (!item.value().is_number_integer() || item.value().get<int>() != 1) {
        throw IoError("unsupported config version");
      }
    } else if (key == "generator") {
      settings = gen_settings_from_json(item.value());
    } else if (key == "runs") {
      runs = item.value().get<long>();
      if (runs < 1) throw IoError("runs must be at least 1");
    } else if (key == "algorithms") {
      algorithms = item.value().get<std::vector<std::string>>();
    } else {
      throw IoError("bench config: unknown key \"" + key + "\"");
    }
  }
  for (const auto& algorithm : algorithms) {
    if (algorithm != "densest-first" && algorithm != "efx" &&
        algorithm != "two-agent" && algorithm != "divisible") {
      throw IoError("unknown algorithm \"" + algorithm + "\"");
    }
  }

  std::map<std::string, BenchRow> rows;
  for (long r = 0; r < runs; ++r) {
    GeneratorConfig config = settings.config;
    config.seed = settings.config.seed + static_cast<std::uint64_t>(r);
    const Instance instance = generate(config);

    for (const auto& algorithm : algorithms) {
      BenchRow& row = rows[algorithm];
      if (algorithm == "two-agent" && instance.agent_count() != 2) {
        ++row.skipped;
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      long iterations = 0;
      if (algorithm == "efx") {
        iterations = solve_efx(instance).iterations;
      } else if (algorithm == "densest-first") {
        iterations = densest_first(instance).iterations;
      } else if (algorithm == "two-agent") {
        iterations = solve_two_agents(instance).iterations;
      } else {
        iterations = solve_divisible(instance).iterations;
      }
      row.add(elapsed_ms_since(start), iterations);
    }
  }

  std::cout << "algorithm       runs  skipped   mean ms    min ms    max ms  mean iters\n";
  for (const auto& algorithm : algorithms) {
    const BenchRow& row = rows[algorithm];
    char line[160];
    std::snprintf(line, sizeof line,
                  "%-14s %5ld %8ld %9.3f %9.3f %9.3f %11.2f\n",
                  algorithm.c_str(), row.runs, row.skipped,
                  row.runs ? row.total_ms / static_cast<double>(row.runs) : 0.0,
                  row.min_ms, row.max_ms,
                  row.runs ? static_cast<double>(row.iterations) /
                                 static_cast<double>(row.runs)
                           : 0.0);
    std::cout << line;
  }
  return kExitSatisfied;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact solvers and verifiers for budgeted chore division"};
  app.require_subcommand(1);

  std::string in_path;
  std::string out_path;
  std::string result_path;
  std::string config_path;
  std::string algorithm = "densest-first";
  std::string criterion = "ef1";
  std::optional<std::uint64_t> seed;

  CLI::App* solve = app.add_subcommand("solve", "allocate and certify");
  solve->add_option("--in", in_path, "instance file")->required();
  solve->add_option("--algorithm", algorithm,
                    "efx, densest-first, two-agent, or divisible")
      ->check(CLI::IsMember({"efx", "densest-first", "two-agent", "divisible"}));
  solve->add_option("--out", out_path, "result file (defaults to stdout)");

  CLI::App* verify = app.add_subcommand("verify", "check an allocation");
  verify->add_option("--in", in_path, "instance file")->required();
  verify->add_option("--allocation", result_path, "result file")->required();
  verify->add_option("--criterion", criterion, "ef, ef1, ef2, efx, or efk:K")
      ->required();

  CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--config", config_path, "generator config file");
  gen->add_option("--seed", seed, "seed override");
  gen->add_option("--out", out_path, "instance file (defaults to stdout)");

  CLI::App* oracle =
      app.add_subcommand("oracle", "brute-force existence check");
  oracle->add_option("--in", in_path, "instance file")->required();
  oracle->add_option("--criterion", criterion, "ef, ef1, ef2, efx, or efk:K")
      ->required();

  CLI::App* bench = app.add_subcommand("bench", "time the solvers");
  bench->add_option("--config", config_path, "bench config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(in_path, algorithm, out_path);
    if (verify->parsed()) return run_verify(in_path, result_path, criterion);
    if (gen->parsed()) return run_gen(config_path, seed, out_path);
    if (oracle->parsed()) return run_oracle(in_path, criterion);
    return run_bench(config_path);
  } catch (const VerificationIntractable& error) {
    std::cerr << error.what() << "\n";
    return kExitIntractable;
  } catch (const OracleTooLarge& error) {
    std::cerr << error.what() << "\n";
    return kExitIntractable;
  } catch (const InternalInvariantViolation& error) {
    std::cerr << "internal error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const Error& error) {
    std::cerr << error.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& error) {
    std::cerr << error.what() << "\n";
    return kExitUsage;
  }
}
