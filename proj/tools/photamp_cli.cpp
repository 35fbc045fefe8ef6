#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "photamp/cli/commands.hpp"

namespace {

struct OptionSpec {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr OptionSpec kOptions[] = {
    {"--n-e", "n_e", "excited-atom counts (comma list; fig3 takes one value)"},
    {"--n", "n", "photon counts (comma list)"},
    {"--intensity", "intensity", "coherent intensities |alpha|^2 (comma list)"},
    {"--N", "N", "atom numbers for exact-compare (comma list)"},
    {"--grid-points", "grid_points", "number of tau grid points"},
    {"--tau-min", "tau_min", "first grid point; accepts forms like pi/4"},
    {"--tau-max", "tau_max", "last grid point; accepts forms like pi"},
    {"--epsilon", "epsilon", "threshold level for sweep"},
    {"--output", "output_path", "output file (default: stdout)"},
    {"--format", "format", "csv or json"},
    {"--j", "j", "wigner: total angular momentum, e.g. 3/2"},
    {"--m-prime", "m_prime", "wigner: row index m'"},
    {"--m", "m", "wigner: column index m"},
    {"--observed", "observed", "discriminate: observed peak time"},
    {"--n-max", "n_max", "discriminate: largest candidate photon number"},
};

const std::map<std::string, std::string> kDescriptions{
    {"fig1", "ground-projection probability for Fock inputs"},
    {"fig2", "ground-projection probability for coherent inputs"},
    {"fig3", "pure vs mixed excited-atom ensembles"},
    {"wigner", "small-d element d^j_{m'm}(2 tau)"},
    {"exact-compare", "exact finite-N sector model against the large-N limit"},
    {"discriminate", "infer photon number from an observed peak time"},
    {"sweep", "peak and threshold times over (n_e, n)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon amplification and discrimination in the Dicke model"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> flags;

  for (const auto& [cmd, name] : photamp::cli::kCommandNames) {
    auto* sub = app.add_subcommand(std::string(name), kDescriptions.at(std::string(name)));
    sub->add_option("--config", config_path, "key=value parameter file; flags override it");
    for (const auto& opt : kOptions) {
      sub->add_option_function<std::string>(
          opt.flag, [&flags, key = std::string(opt.key)](const std::string& v) { flags[key] = v; },
          opt.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? photamp::cli::kSuccess : photamp::cli::kUsage;
  }

  photamp::cli::RunConfig config;
  for (auto* sub : app.get_subcommands()) config.command = photamp::cli::parse_command(sub->get_name());

  if (!config_path.empty()) {
    try {
      config.parameters = photamp::cli::load_config_file(config_path);
    } catch (const photamp::cli::IoError& e) {
      std::cerr << "I/O error: " << e.what() << '\n';
      return photamp::cli::kIo;
    } catch (const photamp::cli::UsageError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return photamp::cli::kUsage;
    }
  }
  for (const auto& [k, v] : flags) config.parameters[k] = v;

  return photamp::cli::execute(config, std::cout, std::cerr);
}
