// qosm: command-line front end for the quality-differentiated market model.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qosm/cli.hpp"

namespace {

template <class T>
void bind_option(CLI::App* app, const std::string& name, std::optional<T>& dst, const std::string& help) {
  app->add_option_function<T>(name, [&dst](const T& v) { dst = v; }, help);
}

void add_model_options(CLI::App* app, qosm::cli::RunConfig& flags, std::string& config_path) {
  bind_option(app, "--alpha", flags.alpha, "exponent of the quality distribution f(q) = q^alpha");
  bind_option(app, "--s", flags.s, "economies-of-scale exponent, 0 < s < 1");
  bind_option(app, "--h", flags.h, "price response family: rational | exp | gauss");
  bind_option(app, "--beta", flags.beta, "rational response exponent");
  bind_option(app, "--a", flags.a, "rational response scale (default 1)");
  bind_option(app, "--c", flags.c, "technological constant");
  bind_option(app, "--c-start", flags.c_start, "first (largest) c of the grid");
  bind_option(app, "--c-stop", flags.c_stop, "last (smallest) c of the grid");
  bind_option(app, "--c-count", flags.c_count, "number of grid points");
  app->add_flag_function("--c-log", [&flags](std::int64_t) { flags.c_log = true; }, "geometric c spacing");
  bind_option(app, "--max-classes", flags.max_classes, "class cap in the UDC regime (default 32)");
  bind_option(app, "--format", flags.format, "csv | json");
  bind_option(app, "--out", flags.out, "output path (file, or directory for figures)");
  app->add_option("--config", config_path, "JSON file with parameters; flags override it");
}

int precision_from_env() {
  const char* env = std::getenv("QOSM_PRECISION");
  if (env == nullptr || *env == '\0') return 12;
  try {
    return std::stoi(env);
  } catch (const std::exception&) {
    return -1;  // rejected by run()
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competitive pricing and class formation in quality-differentiated service markets"};
  app.require_subcommand(1);
  // --h names the price response family, so help is long-form only
  app.set_help_flag("--help", "print this help message and exit");
  qosm::cli::RunConfig flags;
  std::string config_path;

  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"classify", "regime verdict (UC / BDC / UDC) as JSON"},
      {"solve", "competitive price of one class of quality --b over (--low, --b]"},
      {"cascade", "per-class price, traffic and revenue over a c grid"},
      {"sweep", "per-c summary of the class cascade"},
      {"uc", "capped-quality UC model over a c grid"},
      {"figures", "write the figure data files into --out DIR"},
      {"ratio-limits", "small-c limits of neighboring-class price and traffic ratios"},
  };
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_model_options(sub, flags, config_path);
    if (std::string(cmd.name) == "solve") {
      bind_option(sub, "--b", flags.b, "class quality (default: q0 times --low)");
      bind_option(sub, "--low", flags.low, "lower class boundary (default 1)");
    }
    if (std::string(cmd.name) == "uc") bind_option(sub, "--qm", flags.q_m, "quality cap q_m > 1");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qosm::cli::kParameterError;
  }
  flags.command = app.get_subcommands().front()->get_name();
  flags.precision = precision_from_env();

  qosm::cli::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = qosm::cli::load_config_file(config_path);
  } catch (const qosm::cli::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qosm::cli::kParameterError;
  } catch (const qosm::cli::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qosm::cli::kIoError;
  }
  return qosm::cli::run(qosm::cli::merge(cfg, flags), std::cout, std::cerr);
}
