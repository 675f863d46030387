#pragma once

// Exponential and mixture charts of the statistical bundle, the two parallel
// transports between fibers, and Fisher-score velocities of curves.

#include <functional>
#include <string>

#include "statbundle/simplex.hpp"

namespace statbundle {

/// K_p(u) = log E_p[exp u], evaluated with a max shift.
double cumulant(const Density& p, const FiberVector& u);

/// s_p(q) = log(q/p) - E_p log(q/p).
FiberVector exp_chart(const Density& p, const Density& q);

/// exp(v - K_p(v)) p.
Density exp_chart_inv(const Density& p, const FiberVector& v);

/// eta_p(q) = q/p - 1.
FiberVector mix_chart(const Density& p, const Density& q);

/// (1 + w) p. Throws ErrorKind::Boundary if 1 + w(x) <= 0 anywhere.
Density mix_chart_inv(const Density& p, const FiberVector& w);

/// e-transport from the fiber at p to the fiber at q: v - E_q v.
FiberVector e_transport(const Density& p, const Density& q, const FiberVector& v);

/// m-transport from the fiber at p to the fiber at q: (p/q) w.
FiberVector m_transport(const Density& p, const Density& q, const FiberVector& w);

/// A one-parameter statistical model t -> q(t) on a fixed sample space.
struct Curve {
  std::function<Density(double)> eval;
  double t0 = 0.0;
  double t1 = 1.0;
  std::string tag;

  Density operator()(double t) const { return eval(t); }
};

/// Central-difference Fisher score d/dt log q(t), re-centered under q(t).
FiberVector score_velocity(const Curve& curve, double t, double h = 1e-5);

}  // namespace statbundle
