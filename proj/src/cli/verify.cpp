#include "statbundle/cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "statbundle/cli/io.hpp"
#include "statbundle/expfam.hpp"
#include "statbundle/fd.hpp"
#include "statbundle/sampling.hpp"

namespace statbundle::cli {

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return std::nan("");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> log_values(const Density& q) {
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = std::log(q[i]);
  return out;
}

// Largest t with |t v| <= 1/2 everywhere, so (1 + t v) q stays positive.
double mixture_reach(const FiberVector& v) {
  double m = 0.0;
  for (double x : v.values()) m = std::max(m, std::abs(x));
  return m > 0.0 ? 0.5 / m : 1.0;
}

class Suite {
 public:
  Suite(const VerifyConfig& cfg, Report& report) : cfg_(cfg), report_(report) {
    fd_.h = cfg.fd_step;
  }

  void single_space(const Density& p, const Density& q, const Density& r, std::uint64_t seed) {
    const double tol = cfg_.identity_tol;
    report_.check("exp_chart_roundtrip", tol)
        .observe(max_abs_diff(exp_chart_inv(p, exp_chart(p, q)).values(), q.values()));
    report_.check("mix_chart_roundtrip", tol)
        .observe(max_abs_diff(mix_chart_inv(p, mix_chart(p, q)).values(), q.values()));

    const FiberVector v = random_fiber_vector(p, derive_seed(seed, 1));
    const FiberVector w = random_fiber_vector(p, derive_seed(seed, 2), Polarity::Mixture);
    const double e_cocycle =
        std::max(max_abs_diff(e_transport(q, r, e_transport(p, q, v)).values(),
                              e_transport(p, r, v).values()),
                 max_abs_diff(e_transport(p, p, v).values(), v.values()));
    report_.check("e_transport_cocycle", tol).observe(e_cocycle);
    const double m_cocycle =
        std::max(max_abs_diff(m_transport(q, r, m_transport(p, q, w)).values(),
                              m_transport(p, r, w).values()),
                 max_abs_diff(m_transport(p, p, w).values(), w.values()));
    report_.check("m_transport_cocycle", tol).observe(m_cocycle);

    const FiberVector vq = random_fiber_vector(q, derive_seed(seed, 3));
    report_.check("transport_duality", tol)
        .observe(pairing(q, m_transport(p, q, w), vq) - pairing(p, w, e_transport(q, p, vq)));

    report_.check("weyl_exponential", tol)
        .observe(max_abs_diff((exp_chart(p, q) + e_transport(q, p, exp_chart(q, r))).values(),
                              exp_chart(p, r).values()));
    report_.check("weyl_mixture", tol)
        .observe(max_abs_diff((mix_chart(p, q) + m_transport(q, p, mix_chart(q, r))).values(),
                              mix_chart(p, r).values()));

    report_.check("structural_equation", tol)
        .observe(max_abs_diff(structural_reconstruct(p, q).values(), q.values()));
    report_.check("cumulant_kl", tol).observe(cumulant(p, exp_chart(p, q)) - kl(p, q));

    // q(t) moves along the exponential arc with velocity u, r(t) along the
    // mixture line with velocity wr; both velocities hold at t = 0.
    const FiberVector u = random_fiber_vector(q, derive_seed(seed, 4));
    const FiberVector wr = random_fiber_vector(r, derive_seed(seed, 5), Polarity::Mixture);
    const auto divergence_along = [&](double t) {
      return kl(exp_chart_inv(q, t * u), mix_chart_inv(r, t * wr));
    };
    report_.check("kl_total_gradient_fd", cfg_.fd_tol)
        .observe(kl_curve_derivative(q, u, r, wr) - fd::fd_scalar(divergence_along, 0.0, fd_));
  }

  void joint(const ProductSpace& space, std::uint64_t seed) {
    const JointDensity q12 = random_joint(space, derive_seed(seed, 10));
    const Density p1 = random_density(space.left(), derive_seed(seed, 11));
    const Density p2 = random_density(space.right(), derive_seed(seed, 12));
    const FiberVector v = random_fiber_vector(q12.flat(), derive_seed(seed, 13));
    const std::size_t n2 = space.cols();

    const FiberVector dm = marginal_derivative(q12, v);
    // E[v 1{X = x}] / P(X = x) summed over the flattened joint cells.
    std::vector<double> enumerated(space.rows(), 0.0);
    std::vector<double> row_mass(space.rows(), 0.0);
    for (std::size_t i = 0; i < q12.flat().size(); ++i) {
      enumerated[i / n2] += v[i] * q12.flat().mass(i);
      row_mass[i / n2] += q12.flat().mass(i);
    }
    for (std::size_t x = 0; x < enumerated.size(); ++x) enumerated[x] /= row_mass[x];
    report_.check("marginal_derivative_enumeration", cfg_.identity_tol)
        .observe(max_abs_diff(dm.values(), enumerated));

    const double reach = mixture_reach(v);
    const auto along = [&](double t) {
      return JointDensity(space, mix_chart_inv(q12.flat(), (t * reach) * v));
    };
    const auto marginal_log = [&](double t) { return log_values(marginalize(along(t))); };
    std::vector<double> fd_margin = fd::fd_vector_curve(marginal_log, 0.0, fd_);
    for (double& x : fd_margin) x /= reach;
    report_.check("marginal_derivative_fd", cfg_.fd_tol).observe(max_abs_diff(dm.values(), fd_margin));
    report_.check("marginal_chart_pipeline", cfg_.pipeline_tol)
        .observe(max_abs_diff(marginal_derivative_via_charts(p1, p2, q12, v).values(), dm.values()));

    for (std::size_t x = 0; x < space.rows(); ++x) {
      const FiberVector dc = conditional_derivative(q12, x, v);
      const auto conditional_log = [&](double t) { return log_values(condition(along(t), x)); };
      std::vector<double> fd_cond = fd::fd_vector_curve(conditional_log, 0.0, fd_);
      for (double& y : fd_cond) y /= reach;
      report_.check("conditional_derivative_fd", cfg_.fd_tol)
          .observe(max_abs_diff(dc.values(), fd_cond));
      report_.check("conditional_chart_pipeline", cfg_.pipeline_tol)
          .observe(max_abs_diff(conditional_derivative_via_charts(p1, p2, q12, x, v).values(),
                                dc.values()));
    }

    report_.check("exp_decomposition", cfg_.identity_tol)
        .observe(exp_decompose(p1, p2, q12).residual);
    report_.check("kl_chain", cfg_.identity_tol).observe(kl_chain(p1, p2, q12).residual());
  }

  void family(const ProductSpace& space, std::size_t dim, std::uint64_t seed) {
    const Density p1 = random_density(space.left(), derive_seed(seed, 20));
    const Density p2 = random_density(space.right(), derive_seed(seed, 21));
    std::vector<std::vector<double>> stats;
    for (std::size_t j = 0; j < dim; ++j) {
      stats.push_back(random_normal_vector(space.joint().size(), derive_seed(seed, 30 + j)));
    }
    const ExpFamily fam(p1, p2, std::move(stats));
    const std::vector<double> theta = random_normal_vector(dim, derive_seed(seed, 22), 0.5);
    const std::vector<double> thetadot = random_normal_vector(dim, derive_seed(seed, 23));
    const Density r1 = random_density(space.left(), derive_seed(seed, 24));
    const std::size_t x = seed % space.rows();

    report_.check("psi_kl_identity", cfg_.identity_tol)
        .observe(psi(fam, theta) - kl(fam.base().flat(), density(fam, theta).flat()));
    const auto psi_fn = [&](std::span<const double> t) { return psi(fam, t); };
    report_.check("grad_psi_fd", cfg_.fd_tol)
        .observe(max_abs_diff(grad_psi(fam, theta), fd::fd_gradient(psi_fn, theta, fd_)));

    const auto at = [&](double t) {
      std::vector<double> moved(theta);
      for (std::size_t j = 0; j < dim; ++j) moved[j] += t * thetadot[j];
      return density(fam, moved);
    };
    const auto joint_log = [&](double t) { return log_values(at(t).flat()); };
    const auto margin_log = [&](double t) { return log_values(marginalize(at(t))); };
    const auto cond_log = [&](double t) { return log_values(condition(at(t), x)); };
    report_.check("joint_velocity_fd", cfg_.fd_tol)
        .observe(max_abs_diff(joint_velocity(fam, theta, thetadot).values(),
                              fd::fd_vector_curve(joint_log, 0.0, fd_)));
    report_.check("marginal_velocity_fd", cfg_.fd_tol)
        .observe(max_abs_diff(marginal_velocity(fam, theta, thetadot).values(),
                              fd::fd_vector_curve(margin_log, 0.0, fd_)));
    report_.check("conditional_velocity_fd", cfg_.fd_tol)
        .observe(max_abs_diff(conditional_velocity(fam, theta, thetadot, x).values(),
                              fd::fd_vector_curve(cond_log, 0.0, fd_)));

    const auto left_fn = [&](std::span<const double> t) {
      return kl(r1, marginalize(density(fam, t)));
    };
    const auto right_fn = [&](std::span<const double> t) {
      return kl(marginalize(density(fam, t)), r1);
    };
    report_.check("kl_theta_left_fd", cfg_.fd_tol)
        .observe(max_abs_diff(kl_theta_gradient_left(fam, theta, r1),
                              fd::fd_gradient(left_fn, theta, fd_)));
    report_.check("kl_theta_right_fd", cfg_.fd_tol)
        .observe(max_abs_diff(kl_theta_gradient_right(fam, theta, r1),
                              fd::fd_gradient(right_fn, theta, fd_)));
  }

 private:
  const VerifyConfig& cfg_;
  Report& report_;
  fd::FDConfig fd_;
};

}  // namespace

void VerifyConfig::validate() const {
  if (trials < 1) {
    throw Error(ErrorKind::Config, "trials must be >= 1, got " + std::to_string(trials));
  }
  if (sizes.empty()) throw Error(ErrorKind::Config, "at least one size pair is required");
  for (const auto& [n1, n2] : sizes) {
    if (n1 < 2 || n2 < 2) {
      throw Error(ErrorKind::Config, "factor sizes must be >= 2, got " + std::to_string(n1) + "x" +
                                         std::to_string(n2));
    }
  }
  if (!(identity_tol > 0.0 && pipeline_tol > 0.0 && fd_tol > 0.0)) {
    throw Error(ErrorKind::Config, "tolerances must be > 0");
  }
  fd::FDConfig{fd_step}.validate();
}

std::vector<SizePair> parse_sizes(const std::string& text) {
  std::vector<SizePair> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto sep = item.find('x');
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    try {
      if (sep == std::string::npos) throw std::invalid_argument(item);
      std::size_t used1 = 0;
      std::size_t used2 = 0;
      n1 = std::stoul(item.substr(0, sep), &used1);
      n2 = std::stoul(item.substr(sep + 1), &used2);
      if (used1 != sep || used2 != item.size() - sep - 1) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Config, "cannot parse size \"" + item + "\"; expected <n1>x<n2>");
    }
    out.emplace_back(n1, n2);
  }
  if (out.empty()) throw Error(ErrorKind::Config, "empty size list");
  return out;
}

Report run_verify(const VerifyConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Report report;
  Suite suite(cfg, report);

  std::optional<Density> user_density;
  if (cfg.density_path) user_density = parse_density(load_json(*cfg.density_path));

  for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
    const auto [n1, n2] = cfg.sizes[s];
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t seed =
          derive_seed(cfg.seed, (static_cast<std::uint64_t>(s) << 32) | static_cast<unsigned>(trial));
      const ProductSpace space(random_space(n1, derive_seed(seed, 100)),
                               random_space(n2, derive_seed(seed, 101)));
      for (const SampleSpace& single : {space.left(), space.joint()}) {
        suite.single_space(random_density(single, derive_seed(seed, 200)),
                           random_density(single, derive_seed(seed, 201)),
                           random_density(single, derive_seed(seed, 202)), derive_seed(seed, 203));
      }
      suite.joint(space, derive_seed(seed, 300));
      suite.family(space, 1 + static_cast<std::size_t>(trial % 3), derive_seed(seed, 400));
    }
  }

  if (user_density) {
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t seed = derive_seed(cfg.seed ^ 0x5eedULL, static_cast<std::uint64_t>(trial));
      const SampleSpace& space = user_density->space();
      suite.single_space(*user_density, random_density(space, derive_seed(seed, 1)),
                         random_density(space, derive_seed(seed, 2)), derive_seed(seed, 3));
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace statbundle::cli
