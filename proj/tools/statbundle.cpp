// statbundle: command-line front end.
//
//   statbundle verify --seed 42 --trials 25 --sizes 2x2,3x4 [--tol 1e-6] [--density p.json]
//   statbundle bayes --joint q12.json [--velocity v.json] --out dir
//   statbundle flow --family f.json --target r1.json --mode left|right --theta0 1.0
//                   --step 0.5 --iters 200 --tol 1e-10 --out dir
//   statbundle demo --out dir [--seed 7]
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on bad
// input or configuration.

#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "statbundle/cli/commands.hpp"
#include "statbundle/cli/io.hpp"
#include "statbundle/cli/verify.hpp"

namespace {

std::vector<double> parse_floats(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw statbundle::Error(statbundle::ErrorKind::Config, "cannot parse number \"" + item + "\"");
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = statbundle::cli;

  CLI::App app{"statbundle: charts, transports and divergences on finite sample spaces"};
  app.require_subcommand(1);

  cli::VerifyConfig vcfg;
  std::string sizes = "2x2,3x4";
  std::string density_path;
  auto* verify = app.add_subcommand("verify", "run the randomized verification suite");
  verify->add_option("--seed", vcfg.seed, "base seed");
  verify->add_option("--trials", vcfg.trials, "trials per size pair");
  verify->add_option("--sizes", sizes, "comma-separated factor sizes, e.g. 2x2,3x4");
  verify->add_option("--tol", vcfg.fd_tol, "finite-difference agreement threshold");
  verify->add_option("--density", density_path, "extra density (JSON) to include in the checks");
  std::string report_path;
  verify->add_option("--report", report_path, "write the per-check report as CSV");

  std::string joint_path;
  std::string velocity_path;
  std::string out_dir;
  auto* bayes = app.add_subcommand("bayes", "marginal, conditionals and KL chain of a joint density");
  bayes->add_option("--joint", joint_path, "joint density (JSON)")->required();
  bayes->add_option("--velocity", velocity_path, "fiber vector at the joint density (JSON)");
  bayes->add_option("--out", out_dir, "output directory")->required();

  cli::FlowCommand flow_cmd;
  std::string family_path;
  std::string target_path;
  std::string theta0 = "0";
  statbundle::FlowMode mode = statbundle::FlowMode::Left;
  std::string flow_out;
  const std::map<std::string, statbundle::FlowMode> modes{{"left", statbundle::FlowMode::Left},
                                                          {"right", statbundle::FlowMode::Right}};
  auto* flow = app.add_subcommand("flow", "natural-gradient descent of a marginal KL objective");
  flow->add_option("--family", family_path, "exponential family (JSON)")->required();
  flow->add_option("--target", target_path, "target marginal density (JSON)")->required();
  flow->add_option("--mode", mode, "left: D(r1||G1), right: D(G1||r1)")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  flow->add_option("--theta0", theta0, "initial parameter, comma-separated");
  flow->add_option("--step", flow_cmd.options.step, "initial step size");
  flow->add_option("--iters", flow_cmd.options.iters, "maximum iterations");
  flow->add_option("--tol", flow_cmd.options.tol, "gradient-norm stopping threshold");
  flow->add_option("--out", flow_out, "output directory")->required();

  std::string demo_out;
  std::uint64_t demo_seed = 7;
  auto* demo = app.add_subcommand("demo", "write the reference fixtures and run everything on them");
  demo->add_option("--out", demo_out, "output directory")->required();
  demo->add_option("--seed", demo_seed, "verification seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      vcfg.sizes = cli::parse_sizes(sizes);
      if (!density_path.empty()) vcfg.density_path = density_path;
      const cli::Report report = cli::run_verify(vcfg);
      report.print(std::cout);
      if (!report_path.empty()) report.write_csv(report_path);
      return report.overall() ? 0 : 1;
    }
    if (bayes->parsed()) {
      std::optional<std::filesystem::path> velocity;
      if (!velocity_path.empty()) velocity = velocity_path;
      return cli::cmd_bayes(joint_path, velocity, out_dir, std::cout).pass() ? 0 : 1;
    }
    if (flow->parsed()) {
      flow_cmd.family_path = family_path;
      flow_cmd.target_path = target_path;
      flow_cmd.mode = mode;
      flow_cmd.theta0 = parse_floats(theta0);
      flow_cmd.out_dir = flow_out;
      return cli::cmd_flow(flow_cmd, std::cout).converged ? 0 : 1;
    }
    if (demo->parsed()) {
      return cli::cmd_demo(demo_out, demo_seed, std::cout).pass() ? 0 : 1;
    }
  } catch (const statbundle::Error& e) {
    std::cerr << "error (" << statbundle::to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  }
  return 2;
}
