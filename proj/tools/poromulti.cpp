#include "poromulti/config.hpp"
#include "poromulti/error.hpp"
#include "poromulti/experiment.hpp"
#include "poromulti/io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kConfigFailure = 1;
constexpr int kNumericalFailure = 2;

poromulti::ExperimentConfig configure(const std::string& file, const std::string& out, const std::string& law,
                                      const std::string& snapshot) {
  poromulti::ExperimentConfig c = poromulti::load_config(file);
  if (!out.empty()) poromulti::apply_setting(c, "output", out);
  if (!law.empty()) poromulti::apply_setting(c, "law", law);
  if (!snapshot.empty()) poromulti::apply_setting(c, "snapshot", snapshot);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GMsFEM solver for nonlinear Biot poroelasticity"};
  app.require_subcommand(1);

  std::string config, out, law, snapshot, state, vtk;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "key = value experiment file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--law", law, "linear or nonlinear (comma list allowed)");
    cmd->add_option("--snapshot", snapshot, "harmonic or spectral (comma list allowed)");
  };
  CLI::App* run = app.add_subcommand("run", "fine reference, offline stage and multiscale sweep");
  add_common(run);
  CLI::App* fine = app.add_subcommand("fine", "fine-grid reference runs only");
  add_common(fine);
  CLI::App* exp = app.add_subcommand("export", "convert a saved state to VTK");
  exp->add_option("--state", state, "state file")->required()->check(CLI::ExistingFile);
  exp->add_option("--vtk", vtk, "output .vtk file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigFailure;
  }

  try {
    if (*run) {
      poromulti::run_experiment(configure(config, out, law, snapshot), std::cout);
    } else if (*fine) {
      poromulti::run_fine_only(configure(config, out, law, snapshot), std::cout);
    } else if (*exp) {
      poromulti::TriMesh mesh;
      poromulti::PoroState s;
      poromulti::load_state(state, mesh, s);
      poromulti::export_vtk(vtk, mesh, s);
    }
  } catch (const poromulti::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigFailure;
  }
  return 0;
}
