#include <CLI11.hpp>
#include <json.hpp>

#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

#include "gtpb/commands.hpp"
#include "gtpb/errors.hpp"

namespace {

std::string utc_timestamp() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw gtpb::ValidationError("cannot open output path " + path);
  out << text << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gtpb: frequency spectra, complexity and generalization bounds for "
               "trigonometric-polynomial models of data-encoding circuits"};
  app.require_subcommand(1);

  std::string config_path, out_path, format_flag;
  long long seed_flag = -1;

  const std::vector<std::string> names = {"omega",    "bounds", "rademacher", "cover-check",
                                          "simulate", "srm",    "table1"};
  const std::vector<std::string> descriptions = {
      "frequency spectrum of a data-encoding strategy with cardinality bounds",
      "generalization-bound report and sample-size inversions",
      "Monte Carlo Rademacher complexity against the analytic bounds",
      "explicit covering net construction and empirical radius check",
      "statevector simulation with Fourier-coefficient extraction",
      "structural risk minimization over encoding hyper-parameters",
      "measured cardinality scaling slopes against the tabulated exponents"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descriptions[i]);
    sub->add_option("--config", config_path, "JSON config path")->required();
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--seed", seed_flag, "seed override");
    sub->add_option("--format", format_flag, "json or csv");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    std::ifstream in(config_path);
    if (!in) throw gtpb::ValidationError("cannot open config " + config_path);
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw gtpb::ValidationError(std::string("config is not valid JSON: ") + e.what());
    }

    std::uint64_t seed = 0;
    if (config.is_object() && config.contains("seed"))
      seed = config.at("seed").get<std::uint64_t>();
    if (seed_flag >= 0) seed = static_cast<std::uint64_t>(seed_flag);
    std::string format = "json";
    if (config.is_object() && config.contains("format"))
      format = config.at("format").get<std::string>();
    if (!format_flag.empty()) format = format_flag;
    if (format != "json" && format != "csv")
      throw gtpb::ValidationError("format must be json or csv");
    std::string output = out_path;
    if (output.empty() && config.is_object() && config.contains("output"))
      output = config.at("output").get<std::string>();

    const gtpb::CommandOutput result = gtpb::run_command(command, config, seed);

    if (format == "csv") {
      if (result.csv.empty())
        throw gtpb::ValidationError("command '" + command + "' has no tabular CSV form");
      write_output(result.csv, output);
    } else {
      nlohmann::json envelope;
      envelope["command"] = command;
      envelope["timestamp"] = utc_timestamp();
      envelope["seed"] = seed;
      nlohmann::json resolved = config;
      resolved["seed"] = seed;
      envelope["config"] = resolved;
      envelope["result"] = result.result;
      write_output(envelope.dump(2), output);
    }
    return 0;
  } catch (const gtpb::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 3;
  } catch (const gtpb::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 4;
  }
}
