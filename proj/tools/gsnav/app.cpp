#include "app.hpp"

#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "common.hpp"
#include "gsnav/errors.hpp"

namespace gsnav::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian-splat navigation engine", "gsnav"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gsnav 0.3.0");
  Command selected;
  register_render(app, selected, out);
  register_bench(app, selected, out);
  register_prune(app, selected, out);
  register_rollout(app, selected, out);
  register_da_demo(app, selected, out);
  register_generate(app, selected, out);
  register_config(app, selected, out);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return selected ? selected() : kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const gsnav::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
  } catch (const LoadError& e) {
    err << "load error: " << e.what() << '\n';
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace gsnav::cli
