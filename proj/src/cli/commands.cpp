#include "statbundle/cli/commands.hpp"

#include <ostream>
#include <string>

#include "statbundle/cli/io.hpp"
#include "statbundle/cli/verify.hpp"

namespace statbundle::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kBayesIdentityTol = 1e-12;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
}

std::vector<std::string> flow_header(std::size_t dim) {
  std::vector<std::string> header{"iteration"};
  for (std::size_t j = 0; j < dim; ++j) header.push_back("theta_" + std::to_string(j));
  header.insert(header.end(), {"objective", "grad_norm", "step"});
  return header;
}

}  // namespace

bool BayesOutcome::pass() const noexcept {
  return chain.residual() <= kBayesIdentityTol && decomposition_residual <= kBayesIdentityTol;
}

BayesOutcome cmd_bayes(const fs::path& joint_path, const std::optional<fs::path>& velocity_path,
                       const fs::path& out_dir, std::ostream& log) {
  const JointDensity q12 = parse_joint(load_json(joint_path));
  std::optional<FiberVector> velocity;
  if (velocity_path) velocity = parse_joint_velocity(load_json(*velocity_path), q12);
  ensure_dir(out_dir);

  const Density q1 = marginalize(q12);
  {
    CsvWriter csv(out_dir / "marginal.csv", {"x", "q1"});
    for (std::size_t x = 0; x < q1.size(); ++x) csv.row({static_cast<double>(x), q1[x]});
  }
  {
    CsvWriter csv(out_dir / "conditionals.csv", {"x", "y", "q2_given_1"});
    for (std::size_t x = 0; x < q12.rows(); ++x) {
      const Density c = condition(q12, x);
      for (std::size_t y = 0; y < c.size(); ++y) {
        csv.row({static_cast<double>(x), static_cast<double>(y), c[y]});
      }
    }
  }

  const Density p1 = Density::uniform(q12.space().left());
  const Density p2 = Density::uniform(q12.space().right());
  BayesOutcome outcome;
  outcome.chain = kl_chain(p1, p2, q12);
  const ExpDecomposition dec = exp_decompose(p1, p2, q12);
  outcome.decomposition_residual = dec.residual;
  {
    CsvWriter csv(out_dir / "kl_chain.csv",
                  {"lhs", "marginal_term", "conditional_term", "chain_residual",
                   "decomposition_residual"});
    csv.row({outcome.chain.lhs, outcome.chain.marginal_term, outcome.chain.conditional_term,
             outcome.chain.residual(), dec.residual});
  }
  {
    CsvWriter csv(out_dir / "exp_decomposition.csv", {"x", "y", "u12", "u1", "u21", "centering"});
    const std::size_t n2 = q12.cols();
    for (std::size_t x = 0; x < q12.rows(); ++x) {
      for (std::size_t y = 0; y < n2; ++y) {
        csv.row({static_cast<double>(x), static_cast<double>(y), dec.u12[x * n2 + y], dec.u1[x],
                 dec.u21[x * n2 + y], dec.centering[x]});
      }
    }
  }

  if (velocity) {
    const FiberVector dm = marginal_derivative(q12, *velocity);
    CsvWriter marginal(out_dir / "marginal_derivative.csv", {"x", "value"});
    for (std::size_t x = 0; x < dm.size(); ++x) marginal.row({static_cast<double>(x), dm[x]});
    CsvWriter conditional(out_dir / "conditional_derivative.csv", {"x", "y", "value"});
    for (std::size_t x = 0; x < q12.rows(); ++x) {
      const FiberVector dc = conditional_derivative(q12, x, *velocity);
      for (std::size_t y = 0; y < dc.size(); ++y) {
        conditional.row({static_cast<double>(x), static_cast<double>(y), dc[y]});
      }
    }
  }

  log << "kl chain: " << format_number(outcome.chain.lhs) << " = "
      << format_number(outcome.chain.marginal_term) << " + "
      << format_number(outcome.chain.conditional_term) << " (residual "
      << format_number(outcome.chain.residual()) << ")\n"
      << "exp decomposition residual: " << format_number(dec.residual) << '\n'
      << "bayes: " << (outcome.pass() ? "PASS" : "FAIL") << '\n';
  return outcome;
}

FlowTrace cmd_flow(const FlowCommand& cmd, std::ostream& log) {
  const ExpFamily family = parse_family(load_json(cmd.family_path));
  const Density target = parse_density(load_json(cmd.target_path));
  const FlowTrace trace = natural_gradient_flow(family, cmd.theta0, target, cmd.mode, cmd.options);
  ensure_dir(cmd.out_dir);
  {
    CsvWriter csv(cmd.out_dir / "flow_trace.csv", flow_header(family.dim()));
    for (const FlowRecord& rec : trace.records) {
      std::vector<double> row{static_cast<double>(rec.iteration)};
      row.insert(row.end(), rec.theta.begin(), rec.theta.end());
      row.insert(row.end(), {rec.objective, rec.grad_norm, rec.step});
      csv.row(row);
    }
  }
  const FlowRecord& last = trace.records.back();
  {
    std::vector<std::string> header{"converged", "iterations"};
    for (std::size_t j = 0; j < family.dim(); ++j) header.push_back("theta_" + std::to_string(j));
    header.insert(header.end(), {"objective", "grad_norm"});
    CsvWriter csv(cmd.out_dir / "flow_summary.csv", header);
    std::vector<std::string> row{trace.converged ? "1" : "0", std::to_string(last.iteration)};
    for (double t : last.theta) row.push_back(format_number(t));
    row.push_back(format_number(last.objective));
    row.push_back(format_number(last.grad_norm));
    csv.row(row);
  }
  log << "flow: converged=" << (trace.converged ? "true" : "false")
      << " iterations=" << last.iteration << " objective=" << format_number(last.objective)
      << " grad_norm=" << format_number(last.grad_norm) << " theta=";
  for (std::size_t j = 0; j < last.theta.size(); ++j) {
    log << (j ? "," : "") << format_number(last.theta[j]);
  }
  log << '\n';
  return trace;
}

bool DemoOutcome::pass() const noexcept {
  return verify.overall() && bayes.pass() && flow_left_converged && flow_right_converged;
}

DemoOutcome cmd_demo(const fs::path& out_dir, std::uint64_t seed, std::ostream& log) {
  const fs::path fixtures = out_dir / "fixtures";
  ensure_dir(fixtures);

  const SampleSpace coin({0.5, 0.5});
  const ProductSpace coins(coin, coin);
  save_json(fixtures / "fixture_A_p.json", density_json(Density(coin, {1.0, 1.0})));
  save_json(fixtures / "fixture_A_q.json", density_json(Density(coin, {1.2, 0.8})));
  save_json(fixtures / "fixture_B_joint.json", joint_json(coins, {{1.6, 0.4}, {0.4, 1.6}}));
  save_json(fixtures / "fixture_B_velocity.json", velocity_json({{0.4, -1.6}, {-1.6, 0.4}}));
  save_json(fixtures / "fixture_C_family.json",
            family_json(coins, {1.0, 1.0}, {1.0, 1.0}, {{{1.0, -1.0}, {-1.0, 1.0}}}));
  save_json(fixtures / "fixture_Cprime_family.json",
            family_json(coins, {1.0, 1.0}, {1.0, 1.0}, {{{1.0, 1.0}, {-1.0, -1.0}}}));
  save_json(fixtures / "target_uniform.json", density_json(Density(coin, {1.0, 1.0})));
  save_json(fixtures / "target_skewed.json", density_json(Density(coin, {1.5, 0.5})));

  DemoOutcome outcome;

  log << "== verify (seed " << seed << ")\n";
  VerifyConfig vcfg;
  vcfg.seed = seed;
  vcfg.density_path = fixtures / "fixture_A_q.json";
  outcome.verify = run_verify(vcfg);
  ensure_dir(out_dir / "verify");
  outcome.verify.write_csv(out_dir / "verify" / "verify_report.csv");
  outcome.verify.print(log);

  log << "== bayes (fixture B)\n";
  outcome.bayes = cmd_bayes(fixtures / "fixture_B_joint.json", fixtures / "fixture_B_velocity.json",
                            out_dir / "bayes", log);

  log << "== flow (fixture C', left, uniform target)\n";
  FlowCommand left;
  left.family_path = fixtures / "fixture_Cprime_family.json";
  left.target_path = fixtures / "target_uniform.json";
  left.mode = FlowMode::Left;
  left.theta0 = {1.0};
  left.options = FlowOptions{0.5, 200, 1e-10};
  left.out_dir = out_dir / "flow_left";
  outcome.flow_left_converged = cmd_flow(left, log).converged;

  log << "== flow (fixture C', right, skewed target)\n";
  FlowCommand right = left;
  right.target_path = fixtures / "target_skewed.json";
  right.mode = FlowMode::Right;
  right.theta0 = {0.0};
  right.out_dir = out_dir / "flow_right";
  outcome.flow_right_converged = cmd_flow(right, log).converged;

  log << "demo: " << (outcome.pass() ? "PASS" : "FAIL") << '\n';
  return outcome;
}

}  // namespace statbundle::cli
