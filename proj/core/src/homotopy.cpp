#include "lassopath/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "lassopath/errors.hpp"
#include "lassopath/fixtures.hpp"
#include "lassopath/oracle.hpp"

namespace lassopath {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

StepSizeBreakdown step_size(const ProblemInstance& inst, double t_hat, const Vector& u,
                            const DirectionCertificate& cert, const Tolerances& tol) {
  if (!(t_hat > 0.0)) throw DomainError("step_size requires t > 0");
  const Vector& d = cert.d;
  if (d.size() != inst.cols()) throw DimensionError("direction has the wrong dimension");
  const Matrix& A = inst.A();
  const Vector p = subgradient(inst, t_hat, u);
  const Vector a = A.transpose() * (A * d);
  const Vector g = p - a;
  const IndexSet E = equicorrelation_set(inst, t_hat, u, tol);
  const IndexSet act = active_set(u, tol);

  StepSizeBreakdown out;
  struct Candidate {
    double s;
    StepEvent ev;
  };
  std::vector<Candidate> cands;

  for (Index i : act) {
    if (d(i) == 0.0) continue;
    const double nu = (u(i) + t_hat * d(i)) / d(i);
    if (nu < t_hat) {
      out.s_A = std::max(out.s_A, nu);
      cands.push_back({nu, {i, StepTrigger::CoefficientHitsZero}});
    }
  }
  for (Index i : set_difference(E, act)) {
    const double lam = std::abs(g(i));
    const double s = t_hat * lam / (lam + 2.0);
    out.s_EminusA = std::max(out.s_EminusA, s);
    cands.push_back({s, {i, StepTrigger::MultiplierSignFlip}});
  }
  for (Index i : complement(set_union(E, act), inst.cols())) {
    for (double side : {1.0, -1.0}) {
      const double denom = side - a(i);
      const double mu = denom == 0.0 ? 0.0 : t_hat * g(i) / denom;
      if (mu < t_hat) {
        out.s_EC = std::max(out.s_EC, mu);
        cands.push_back({mu, {i, StepTrigger::CorrelationHitsBoundary}});
      }
    }
  }

  out.s = std::max({out.s_A, out.s_EminusA, out.s_EC, 0.0});
  out.delta = t_hat - out.s;
  if (out.s > 0.0) {
    const double band = tol.eq_tol * std::max(1.0, t_hat);
    for (const auto& c : cands) {
      if (std::abs(c.s - out.s) <= band) out.triggering.push_back(c.ev);
    }
  }
  return out;
}

namespace {

struct Choice {
  std::optional<DirectionCertificate> cert;
  Termination stop;
};

using Chooser =
    std::function<Choice(const DirectionProblem& prob, const Vector& u, const IndexSet& prev_active)>;

// Shared path walk; the algorithms differ only in how a direction is chosen at a kink.
SolutionPath walk(const ProblemInstance& inst, const HomotopyConfig& cfg, const Chooser& choose) {
  const Tolerances& tol = cfg.tol;
  tol.validate();
  const Index n = inst.cols();
  SolutionPath path{inst, {}, inst.t0(), {}, {}};
  if (inst.t0() == 0.0) {
    path.kinks.push_back(make_path_point(inst, 0.0, Vector::Zero(n), tol));
    return path;
  }
  path.kinks.push_back(make_path_point(inst, inst.t0(), Vector::Zero(n), tol));

  // A step ending this close to zero is the terminal segment, not a new kink.
  const double snap = tol.eq_tol * std::min(1.0, inst.t0());
  double t = inst.t0();
  Vector u = Vector::Zero(n);
  IndexSet prev_active;
  for (std::size_t j = 0;; ++j) {
    if (j >= tol.max_iters) {
      path.termination = {TerminationKind::IterationCap, -1, t};
      break;
    }
    // r and p are recomputed from (t, u) at every kink.
    const DirectionProblem prob = DirectionProblem::at(inst, t, u, tol);
    Choice c;
    try {
      c = choose(prob, u, prev_active);
    } catch (const DirectionError& e) {
      throw DirectionError("kink " + std::to_string(j) + " at t = " + fmt(t) + ": " + e.what());
    } catch (const ConvergenceError& e) {
      throw DirectionError("kink " + std::to_string(j) + " at t = " + fmt(t) + ": " + e.what());
    }
    if (!c.cert) {
      path.termination = c.stop;
      break;
    }
    const Vector& d = c.cert->d;
    const StepSizeBreakdown step = step_size(inst, t, u, *c.cert, tol);
    if (!(step.delta > 0.0)) {
      throw DirectionError("kink " + std::to_string(j) + " at t = " + fmt(t) + ": nonpositive step");
    }
    const double t_next = step.s <= snap ? 0.0 : step.s;
    Vector u_next = u + (t - t_next) * d;
    for (const StepEvent& ev : step.triggering) {
      if (ev.kind == StepTrigger::CoefficientHitsZero) u_next(ev.index) = 0.0;
    }
    for (Index i = 0; i < n; ++i) {
      if (std::abs(u_next(i)) <= tol.act_tol) u_next(i) = 0.0;
    }
    if (cfg.record_midpoint_checks) {
      const double tm = 0.5 * (t + t_next);
      path.midpoint_residuals.push_back(kkt_check(inst, tm, u + (t - tm) * d, tol));
    }
    prev_active = active_set(u, tol);
    if (t_next == 0.0) {
      // p is constant on the final segment; carry it as the terminal subgradient.
      path.kinks.push_back(make_path_point(inst, 0.0, std::move(u_next), tol, prob.subgradient()));
      path.termination = {TerminationKind::ReachedZero, -1, 0.0};
      break;
    }
    path.kinks.push_back(make_path_point(inst, t_next, u_next, tol));
    t = t_next;
    u = std::move(u_next);
  }
  return path;
}

Choice accept(DirectionCertificate cert) { return {std::move(cert), {}}; }

}  // namespace

SolutionPath run_generalized(const ProblemInstance& inst, const HomotopyConfig& cfg) {
  return walk(inst, cfg, [&](const DirectionProblem& prob, const Vector&, const IndexSet&) {
    return accept(generalized_direction(prob, cfg.tol));
  });
}

SolutionPath run_standard(const ProblemInstance& inst, const HomotopyConfig& cfg) {
  return walk(inst, cfg, [&](const DirectionProblem& prob, const Vector&, const IndexSet& prev_active) -> Choice {
    const IndexSet leaving = set_difference(prev_active, prob.free());
    const IndexSet S = set_difference(prob.equicorrelation(), leaving);
    Vector d = pseudoinverse_direction(prob, S, cfg.tol.rank_tol);
    const MembershipReport rep = direction_set_membership(prob, d, cfg.tol);
    if (!rep.member) {
      const Index bad = rep.sign_violation_index >= 0 ? rep.sign_violation_index : rep.worst_index;
      return {std::nullopt, {TerminationKind::SignInconsistency, bad, prob.t()}};
    }
    return accept(certify(prob, std::move(d)));
  });
}

SolutionPath run_looping(const ProblemInstance& inst, const HomotopyConfig& cfg) {
  return walk(inst, cfg, [&](const DirectionProblem& prob, const Vector& u, const IndexSet&) -> Choice {
    const IndexSet& J = prob.constrained();
    const auto k = static_cast<std::size_t>(J.size());
    if (k > cfg.loop_cap) {
      throw LoopCapExceeded("looping homotopy: " + std::to_string(k) + " undecided indices at t = " +
                                fmt(prob.t()) + " exceed the cap of " + std::to_string(cfg.loop_cap) +
                                "; use the generalized algorithm instead",
                            prob.t(), k);
    }
    // Candidates A <= S <= E by increasing |S|, then lexicographically.
    for (std::size_t size = 0; size <= k; ++size) {
      std::vector<std::size_t> pick(size);
      for (std::size_t q = 0; q < size; ++q) pick[q] = q;
      while (true) {
        std::vector<Index> S(prob.free().begin(), prob.free().end());
        for (std::size_t q : pick) S.push_back(J[static_cast<Index>(q)]);
        Vector d = pseudoinverse_direction(prob, IndexSet::from_unsorted(std::move(S)), cfg.tol.rank_tol);
        if (direction_set_membership(prob, d, cfg.tol).member) {
          DirectionCertificate cert = certify(prob, std::move(d));
          const StepSizeBreakdown step = step_size(prob.instance(), prob.t(), u, cert, cfg.tol);
          if (step.delta > 0.0) return accept(std::move(cert));
        }
        // Next combination in lexicographic order.
        std::size_t q = size;
        while (q > 0 && pick[q - 1] == k - size + q - 1) --q;
        if (q == 0) break;
        ++pick[q - 1];
        for (std::size_t r = q; r < size; ++r) pick[r] = pick[r - 1] + 1;
      }
    }
    throw DirectionError("looping homotopy: no candidate set yields a valid direction");
  });
}

SolutionPath run_homotopy(const ProblemInstance& inst, const HomotopyConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::Generalized: return run_generalized(inst, cfg);
    case Algorithm::Standard: return run_standard(inst, cfg);
    case Algorithm::Looping: return run_looping(inst, cfg);
  }
  throw DomainError("unknown algorithm");
}

SolutionPath adversarial_demo(std::size_t max_kinks, const Tolerances& tol) {
  if (max_kinks < 1) throw DomainError("adversarial_demo needs max_kinks >= 1");
  tol.validate();
  const ProblemInstance inst = fixtures::infinite_kinks();
  const Vector first = make_vector({0.5, 0.5, 0.0, 0.0});
  const Vector odd = make_vector({1.5, -1.0, 0.5, 1.0});
  const Vector even = make_vector({1.5, 0.5, -1.0, 1.0});

  SolutionPath path{inst, {}, inst.t0(), {TerminationKind::IterationCap, -1, 0.0}, {}};
  double t = inst.t0();
  Vector u = Vector::Zero(inst.cols());
  path.kinks.push_back(make_path_point(inst, t, u, tol));
  for (std::size_t j = 0; path.kinks.size() < max_kinks; ++j) {
    const Vector& d = j == 0 ? first : (j % 2 == 1 ? odd : even);
    const MembershipReport rep = direction_set_membership(inst, t, u, d, tol);
    if (!rep.member) {
      throw DirectionError("adversarial_demo: replayed direction " + std::to_string(j) + " at t = " + fmt(t) +
                           " is not in D (residual " + fmt(rep.max_residual) + ")");
    }
    const StepSizeBreakdown step = step_size(inst, t, u, certify(DirectionProblem::at(inst, t, u, tol), d), tol);
    const double t_next = step.s;
    Vector u_next = u + (t - t_next) * d;
    for (const StepEvent& ev : step.triggering) {
      if (ev.kind == StepTrigger::CoefficientHitsZero) u_next(ev.index) = 0.0;
    }
    if (t_next == 0.0) {
      path.kinks.push_back(make_path_point(inst, 0.0, std::move(u_next), tol, path.kinks.back().p));
      path.termination = {TerminationKind::ReachedZero, -1, 0.0};
      break;
    }
    path.kinks.push_back(make_path_point(inst, t_next, u_next, tol));
    t = t_next;
    u = std::move(u_next);
  }
  path.termination.t = path.kinks.back().t;
  return path;
}

OneAtATimeReport one_at_a_time_report(const SolutionPath& path) {
  OneAtATimeReport rep;
  IndexSet prev_E, prev_active;
  for (const PathPoint& pt : path.kinks) {
    KinkEvents ev{pt.t, set_difference(pt.E, prev_E), set_difference(prev_active, pt.active)};
    if (pt.t > 0.0 && ev.hitting.size() + ev.leaving.size() > 1) rep.holds = false;
    rep.kinks.push_back(std::move(ev));
    prev_E = pt.E;
    prev_active = pt.active;
  }
  return rep;
}

}  // namespace lassopath
