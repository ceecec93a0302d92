// Command-line surface over the lipspace C API. Every subcommand builds
// a JSON run config and hands it to lipspace_run_json; the library owns
// dispatch, checks and artifact emission.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lipspace.h"

namespace {

using nlohmann::json;

json parse_number_list(const std::string& text) {
  json arr = json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item.find_first_of(".eE") != std::string::npos)
      arr.push_back(std::stod(item));
    else
      arr.push_back(std::stoll(item));
  }
  return arr;
}

int run_config(const json& config) {
  char* report = nullptr;
  int exit_status = 0;
  lipspace_status st =
      lipspace_run_json(config.dump().c_str(), &report, &exit_status);
  if (st != LIPSPACE_OK) {
    std::fprintf(stderr, "error: %s\n", lipspace_last_error());
    return 1;
  }
  std::fputs(report, stdout);
  lipspace_string_free(report);
  return exit_status;
}

struct Pending {
  json config{{"command", ""}, {"params", json::object()}};
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite models of Lipschitz subspaces: constructions, "
               "verification and derivation indices"};
  app.require_subcommand(1);

  std::string out_dir;
  app.add_option("--out", out_dir, "Output directory for report artifacts")
      ->envname("LIPSPACE_OUT");

  std::vector<std::pair<CLI::App*, Pending*>> pendings;
  auto add = [&](CLI::App* parent, const std::string& name,
                 const std::string& desc, const std::string& command) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    // Global flags like --out may appear after the subcommand name.
    sub->fallthrough();
    auto* p = new Pending;
    p->config["command"] = command;
    pendings.emplace_back(sub, p);
    return std::make_pair(sub, p);
  };
  auto opt_num = [](CLI::App* sub, Pending* p, const std::string& flag,
                    const std::string& key, const std::string& desc,
                    bool required = true) {
    auto* o = sub->add_option_function<double>(
        flag, [p, key](const double& v) { p->config["params"][key] = v; }, desc);
    if (required) o->required();
    return o;
  };
  auto opt_int = [](CLI::App* sub, Pending* p, const std::string& flag,
                    const std::string& key, const std::string& desc,
                    bool required = true) {
    auto* o = sub->add_option_function<long long>(
        flag, [p, key](const long long& v) { p->config["params"][key] = v; },
        desc);
    if (required) o->required();
    return o;
  };
  auto opt_str = [](CLI::App* sub, Pending* p, const std::string& flag,
                    const std::string& key, const std::string& desc,
                    bool required = true) {
    auto* o = sub->add_option_function<std::string>(
        flag, [p, key](const std::string& v) { p->config["params"][key] = v; },
        desc);
    if (required) o->required();
    return o;
  };
  auto opt_list = [](CLI::App* sub, Pending* p, const std::string& flag,
                     const std::string& key, const std::string& desc,
                     bool required = true) {
    auto* o = sub->add_option_function<std::string>(
        flag,
        [p, key](const std::string& v) {
          p->config["params"][key] = parse_number_list(v);
        },
        desc);
    if (required) o->required();
    return o;
  };

  // --- list ---------------------------------------------------------------
  CLI::App* list_cmd =
      app.add_subcommand("list", "Table of commands and library operations");

  // --- run from a config file --------------------------------------------
  std::string config_path;
  std::vector<std::string> overrides;
  CLI::App* runfile = app.add_subcommand("run", "Run a saved JSON config");
  runfile->fallthrough();
  runfile->add_option("--config", config_path, "Path to a run config JSON file")
      ->required();
  runfile->add_option("--param", overrides,
                      "key=json override applied on top of the file");

  // --- metric commands ----------------------------------------------------
  {
    auto [sub, p] = add(&app, "validate-metric", "Check metric axioms",
                        "validate-metric");
    opt_str(sub, p, "--model", "model", "Model spec, e.g. fan:8");
    opt_str(sub, p, "--metric", "metric", "fine or coarse", false);
  }
  {
    auto [sub, p] = add(&app, "lip", "Lipschitz constant of a field", "lip");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_list(sub, p, "--values", "values", "Comma list, one value per point");
    opt_str(sub, p, "--metric", "metric", "fine or coarse", false);
  }
  {
    auto [sub, p] = add(&app, "extend", "Lipschitz extension of partial data",
                        "extend");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_list(sub, p, "--subset", "subset", "Comma list of point indices");
    opt_list(sub, p, "--values", "values", "Comma list of data values");
    opt_num(sub, p, "--L", "L", "Lipschitz constant");
    opt_num(sub, p, "--lo", "lo", "Lower clamp", false);
    opt_num(sub, p, "--hi", "hi", "Upper clamp", false);
  }
  {
    auto [sub, p] = add(&app, "ball", "Closed fine-metric ball", "ball");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_list(sub, p, "--points", "points", "Comma list of point indices");
    opt_num(sub, p, "--r", "r", "Radius");
  }
  {
    auto [sub, p] = add(&app, "model", "Build a model and emit JSON", "model");
    opt_str(sub, p, "--model", "model", "Model spec");
  }

  // --- convex commands ----------------------------------------------------
  {
    auto [sub, p] = add(&app, "norm-eval", "Evaluate a polyhedral norm",
                        "norm-eval");
    opt_str(sub, p, "--norm", "norm", "Preset name or inline JSON");
    opt_list(sub, p, "--x", "x", "Comma list vector");
  }
  {
    auto [sub, p] = add(&app, "polar", "Dual ball extreme points", "polar");
    opt_str(sub, p, "--norm", "norm", "Preset name or inline JSON");
  }
  {
    auto [sub, p] = add(&app, "face-count", "Facets of the unit ball",
                        "face-count");
    opt_str(sub, p, "--norm", "norm", "Preset name or inline JSON");
  }
  {
    auto [sub, p] = add(&app, "sphere-grid", "Quasi-uniform sphere sample",
                        "sphere-grid");
    opt_int(sub, p, "--n", "n", "Sphere dimension (1..3)");
    opt_int(sub, p, "--resolution", "resolution", "Resolution");
  }

  // --- embedding commands -------------------------------------------------
  CLI::App* embed = app.add_subcommand("embed", "Embedding constructors");
  embed->require_subcommand(1);
  embed->fallthrough();
  {
    auto [sub, p] = add(embed, "circle", "Plane via half-circle directions",
                        "embed-circle");
    opt_int(sub, p, "--grid", "grid", "Interval grid size");
  }
  {
    auto [sub, p] = add(embed, "linf", "Polyhedral space over finite points",
                        "embed-linf");
    opt_str(sub, p, "--norm", "norm", "Preset name or inline JSON");
    opt_int(sub, p, "--n", "n", "Number of points");
  }
  {
    auto [sub, p] = add(embed, "bumps", "Polyhedral space via bump fields",
                        "embed-bumps");
    opt_str(sub, p, "--norm", "norm", "Preset name or inline JSON");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_list(sub, p, "--sites", "sites", "Comma list of site indices");
  }
  {
    auto [sub, p] = add(embed, "cover", "Euclidean space via the sphere cover",
                        "embed-cover");
    opt_int(sub, p, "--n", "n", "Sphere dimension");
    opt_int(sub, p, "--cube-dim", "cube_dim", "Cube lattice dimension");
    opt_int(sub, p, "--grid", "grid", "Lattice resolution per axis");
  }
  {
    auto [sub, p] = add(&app, "c0-construct",
                        "Sup-norm basis from a separated family", "c0-construct");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_num(sub, p, "--eps", "eps", "Separation scale");
    opt_int(sub, p, "--base", "base", "Base point index", false);
    opt_list(sub, p, "--centers", "centers", "Comma list of center indices",
             false);
    opt_list(sub, p, "--coeffs", "coeffs", "Coefficients to combine", false);
  }
  {
    auto [sub, p] = add(&app, "ell1",
                        "Absolute-sum basis from a non-fragmentation witness",
                        "ell1");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_num(sub, p, "--eps", "eps", "Separation scale");
    opt_int(sub, p, "--depth", "depth", "Dyadic depth");
    opt_list(sub, p, "--coeffs", "coeffs", "Coefficients to combine", false);
  }
  {
    auto [sub, p] = add(&app, "ball-example",
                        "Quadratic fields over a sampled round ball",
                        "ball-example");
    opt_int(sub, p, "--dim", "dim", "Ball dimension");
    opt_int(sub, p, "--samples", "samples", "Sample count");
    opt_int(sub, p, "--seed", "seed", "RNG seed", false);
    opt_list(sub, p, "--coeffs", "coeffs", "Comma list of coefficients");
  }
  {
    auto [sub, p] = add(&app, "mazur", "Signed power map between lq balls",
                        "mazur");
    opt_list(sub, p, "--x", "x", "Comma list vector");
    opt_num(sub, p, "--q1", "q1", "Source exponent");
    opt_num(sub, p, "--q2", "q2", "Target exponent");
  }
  {
    auto [sub, p] = add(&app, "transfer",
                        "Push a sampled lq ball to a lower exponent", "transfer");
    opt_num(sub, p, "--q", "q", "Source exponent");
    opt_num(sub, p, "--q-prime", "q_prime", "Target exponent");
    opt_int(sub, p, "--dim", "dim", "Dimension");
    opt_int(sub, p, "--samples", "samples", "Sample count", false);
    opt_int(sub, p, "--seed", "seed", "RNG seed", false);
  }
  {
    auto [sub, p] = add(&app, "sphere-cover",
                        "Lipschitz cover of the sphere by a cube", "sphere-cover");
    opt_int(sub, p, "--n", "n", "Sphere dimension");
    opt_int(sub, p, "--grid", "grid", "Lattice resolution per axis");
  }
  {
    auto [sub, p] = add(&app, "filling-curve",
                        "Lipschitz growth under curve refinement",
                        "filling-curve");
    opt_list(sub, p, "--levels", "levels", "Comma list of refinement levels",
             false);
  }
  {
    auto [sub, p] = add(&app, "verify",
                        "Isometry report for a finite-point embedding", "verify");
    opt_str(sub, p, "--norm", "norm", "Preset name or inline JSON");
    opt_int(sub, p, "--n", "n", "Number of points");
    opt_int(sub, p, "--vectors", "vectors", "Test vector count", false);
  }

  // --- derivation commands -------------------------------------------------
  {
    auto [sub, p] = add(&app, "derive", "One derivation step", "derive");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_num(sub, p, "--eps", "eps", "Scale");
    opt_num(sub, p, "--delta", "delta", "Resolution", false);
  }
  {
    auto [sub, p] = add(&app, "szlenk", "Iterated derivation verdict", "szlenk");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_num(sub, p, "--eps", "eps", "Scale");
    opt_num(sub, p, "--delta", "delta", "Resolution", false);
  }
  {
    auto [sub, p] = add(&app, "witness", "Non-fragmentation witness search",
                        "witness");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_num(sub, p, "--eps", "eps", "Scale");
  }
  {
    auto [sub, p] = add(&app, "dyadic", "Nested separated dyadic families",
                        "dyadic");
    opt_str(sub, p, "--model", "model", "Model spec");
    opt_num(sub, p, "--eps", "eps", "Scale");
    opt_int(sub, p, "--depth", "depth", "Depth");
  }
  {
    auto [sub, p] = add(&app, "quotient-check",
                        "Index inequality along a point map", "quotient-check");
    opt_str(sub, p, "--target", "target", "Target model spec", false);
    opt_str(sub, p, "--source", "source", "Source model spec", false);
    opt_str(sub, p, "--map", "map", "identity|prefix|collapse|halve", false);
    opt_list(sub, p, "--eps-list", "eps_list", "Comma list of scales", false);
  }
  {
    auto [sub, p] = add(&app, "scaling", "Index scaling across an eps grid",
                        "scaling");
    opt_list(sub, p, "--q-list", "q_list", "Comma list of exponents", false);
    opt_list(sub, p, "--dims", "dims", "Comma list of dimensions", false);
    opt_list(sub, p, "--eps-grid", "eps_grid", "Comma list of scales", false);
    opt_int(sub, p, "--samples", "samples", "Sample count", false);
    opt_int(sub, p, "--seed", "seed", "RNG seed", false);
  }

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    char* table = nullptr;
    if (lipspace_list_commands(&table) != LIPSPACE_OK) {
      std::fprintf(stderr, "error: %s\n", lipspace_last_error());
      return 1;
    }
    json rows = json::parse(table);
    lipspace_string_free(table);
    for (const auto& row : rows)
      std::printf("%-16s %-28s %s\n", row["command"].get<std::string>().c_str(),
                  row["operation"].get<std::string>().c_str(),
                  row["description"].get<std::string>().c_str());
    return 0;
  }

  if (runfile->parsed()) {
    std::ifstream f(config_path);
    if (!f) {
      std::fprintf(stderr, "error: cannot read %s\n", config_path.c_str());
      return 1;
    }
    json config;
    try {
      config = json::parse(f);
    } catch (const json::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
    for (const std::string& ov : overrides) {
      auto eq = ov.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "error: --param expects key=json\n");
        return 1;
      }
      try {
        config["params"][ov.substr(0, eq)] = json::parse(ov.substr(eq + 1));
      } catch (const json::exception&) {
        config["params"][ov.substr(0, eq)] = ov.substr(eq + 1);
      }
    }
    if (!out_dir.empty()) config["out_dir"] = out_dir;
    return run_config(config);
  }

  for (auto& [sub, p] : pendings)
    if (sub->parsed()) {
      if (!out_dir.empty()) p->config["out_dir"] = out_dir;
      return run_config(p->config);
    }
  std::fprintf(stderr, "error: no command\n");
  return 2;
}
