#include "lassopath/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <utility>

#include "lassopath/errors.hpp"

namespace lassopath {

double lipschitz_bound(const Matrix& A) {
  const Index n = A.cols();
  if (n == 0) return 0.0;
  // Deterministic, not orthogonal to any coordinate direction.
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = 1.0 + static_cast<double>(i) / static_cast<double>(n);
  v.normalize();
  double est = 0.0;
  for (int k = 0; k < 50; ++k) {
    Vector w = A.transpose() * (A * v);
    est = w.norm();
    if (est == 0.0) return 0.0;
    v = w / est;
  }
  return 1.01 * est;
}

namespace {

Vector soft_threshold(const Vector& x, double k) {
  return x.unaryExpr([k](double v) { return std::copysign(std::max(std::abs(v) - k, 0.0), v); });
}

// Primal minus the dual value at theta = s r, s = min(1, t / ||A^T r||_inf). Written as
//   1/2 (1 - s)^2 ||r||^2 + sum_i (t |u_i| - s u_i (A^T r)_i),
// a sum of nonnegative terms, instead of the cancelling difference of the two objectives.
double duality_gap(const ProblemInstance& inst, double t, const Vector& u) {
  const Vector r = inst.f() - inst.A() * u;
  const Vector c = inst.A().transpose() * r;
  const double cmax = c.cwiseAbs().maxCoeff();
  const double s = cmax > t ? t / cmax : 1.0;
  double gap = 0.5 * (1.0 - s) * (1.0 - s) * r.squaredNorm();
  for (Index i = 0; i < u.size(); ++i) gap += t * std::abs(u(i)) - s * u(i) * c(i);
  return std::max(gap, 0.0);
}

}  // namespace

FistaResult fista_solve(const ProblemInstance& inst, double t, const OracleConfig& cfg,
                        const std::optional<Vector>& warm_start) {
  if (!(t > 0.0)) throw DomainError("fista_solve requires t > 0");
  const Matrix& A = inst.A();
  const Vector& f = inst.f();
  const double target = cfg.obj_tol * (1.0 + 0.5 * f.squaredNorm());

  FistaResult res;
  res.u = warm_start ? *warm_start : Vector::Zero(inst.cols());
  if (res.u.size() != inst.cols()) throw DimensionError("warm start has the wrong dimension");
  res.objective = energy(inst, t, res.u);
  res.gap = duality_gap(inst, t, res.u);
  if (res.gap <= target) return res;

  const double L = cfg.step > 0.0 ? 1.0 / cfg.step : lipschitz_bound(A);
  if (L == 0.0) {
    // A == 0: every u has the same residual, u = 0 is optimal.
    res.u.setZero();
    res.objective = energy(inst, t, res.u);
    res.gap = 0.0;
    return res;
  }
  const double step = 1.0 / L;

  Vector x = res.u;
  Vector y = x;
  double fx = res.objective;
  double momentum = 1.0;
  const Vector Atf = A.transpose() * f;
  const Matrix AtA = A.transpose() * A;

  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    const Vector grad = AtA * y - Atf;
    Vector x_new = soft_threshold(y - step * grad, step * t);
    const double f_new = energy(inst, t, x_new);
    if (f_new > fx && momentum > 1.0) {
      // Function-value restart: drop the momentum and retry from x. A plain
      // proximal step from x is always taken, so round-off cannot stall us here.
      momentum = 1.0;
      y = x;
      continue;
    }
    const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = x_new + ((momentum - 1.0) / next) * (x_new - x);
    x = std::move(x_new);
    fx = f_new;
    momentum = next;

    if (it % 10 == 0) {
      const double gap = duality_gap(inst, t, x);
      if (gap <= target) {
        res.u = x;
        res.objective = fx;
        res.gap = gap;
        res.iterations = it;
        return res;
      }
    }
  }
  throw ConvergenceError("fista_solve: no convergence at t = " + std::to_string(t) + " (objective " +
                             std::to_string(fx) + ")",
                         x, duality_gap(inst, t, x));
}

double kkt_check(const ProblemInstance& inst, double t, const Vector& u, const Tolerances& tol) {
  if (!(t >= 0.0)) throw DomainError("kkt_check requires t >= 0");
  const Vector c = inst.A().transpose() * residual(inst, u);
  if (t == 0.0) return c.cwiseAbs().maxCoeff() / (1.0 + inst.t0());
  const Vector p = c / t;
  double res = std::max(0.0, p.cwiseAbs().maxCoeff() - 1.0);
  for (Index i : active_set(u, tol)) res = std::max(res, std::abs(p(i) - (u(i) > 0.0 ? 1.0 : -1.0)));
  return res;
}

Vector tibshirani_beta(const ProblemInstance& inst, double t, const Vector& u_ref, const Tolerances& tol) {
  if (!(t > 0.0)) throw DomainError("tibshirani_beta requires t > 0");
  const IndexSet E = equicorrelation_set(inst, t, u_ref, tol);
  const Vector p = subgradient(inst, t, u_ref);
  const Matrix AE = columns(inst.A(), E);
  const Vector w = least_squares_min_norm(AE.transpose(), t * gather(p, E), tol.rank_tol);
  const Vector bE = least_squares_min_norm(AE, inst.f() - w, tol.rank_tol);
  return scatter(bE, E, inst.cols());
}

namespace {

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LASSOPATH_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

std::vector<double> sample_parameters(const SolutionPath& path, const VerifyConfig& cfg) {
  std::vector<double> ts;
  const auto& ks = path.kinks;
  for (std::size_t k = 0; k < ks.size(); ++k) {
    if (ks[k].t > 0.0) ts.push_back(ks[k].t);
    if (k > 0) ts.push_back(0.5 * (ks[k - 1].t + ks[k].t));
  }
  const double t_hi = path.t0;
  const double t_lo = std::max(cfg.sample_floor * path.t0, ks.back().t);
  std::mt19937_64 rng(cfg.seed);
  if (t_hi > 0.0 && t_lo > 0.0 && t_lo < t_hi) {
    std::uniform_real_distribution<double> unif(std::log(t_lo), std::log(t_hi));
    while (ts.size() < cfg.n_samples) ts.push_back(std::exp(unif(rng)));
  }
  std::sort(ts.begin(), ts.end(), std::greater<>());
  return ts;
}

}  // namespace

VerificationReport verify_path(const SolutionPath& path, const VerifyConfig& cfg) {
  path.check_structure();
  const ProblemInstance& inst = path.instance;
  const double obj_scale = 1.0 + 0.5 * inst.f().squaredNorm();

  VerificationReport rep;
  rep.seed = cfg.seed;
  const std::vector<double> ts = sample_parameters(path, cfg);
  std::vector<VerificationSample> out(ts.size());

  // Samples are processed in fixed chunks of descending t; within a chunk each
  // oracle solve warm-starts from the previous oracle solution (never from the
  // path), so results do not depend on the thread count.
  constexpr std::size_t kChunk = 8;
  const std::size_t n_chunks = (ts.size() + kChunk - 1) / kChunk;
  auto run_chunk = [&](std::size_t c) {
    std::optional<Vector> warm;
    for (std::size_t s = c * kChunk; s < std::min(ts.size(), (c + 1) * kChunk); ++s) {
      const double t = ts[s];
      const Vector u = eval_path(path, t).u;
      VerificationSample& smp = out[s];
      smp.t = t;
      smp.kkt_residual = kkt_check(inst, t, u, cfg.tol);
      try {
        FistaResult o = fista_solve(inst, t, cfg.oracle, warm);
        smp.objective_gap = std::abs(energy(inst, t, u) - o.objective);
        warm = std::move(o.u);
      } catch (const ConvergenceError& e) {
        smp.objective_gap = std::abs(energy(inst, t, u) - energy(inst, t, e.best_iterate())) + e.residual();
        warm.reset();
      }
    }
  };
  const unsigned workers = worker_count(cfg.threads, n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < n_chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  if (path.termination.kind == TerminationKind::ReachedZero) {
    // Terminal point: least squares solution with an l1-minimality certificate from
    // the final segment's subgradient p, which must satisfy ||p||_inf <= 1,
    // p_i = sgn u_i on the support and p in the row space of A.
    const PathPoint& last = path.kinks.back();
    VerificationSample smp;
    smp.t = 0.0;
    double res = kkt_check(inst, 0.0, last.u, cfg.tol);
    const Vector& p = last.p;
    res = std::max(res, std::max(0.0, p.cwiseAbs().maxCoeff() - 1.0));
    for (Index i : active_set(last.u, cfg.tol)) res = std::max(res, std::abs(p(i) - (last.u(i) > 0.0 ? 1.0 : -1.0)));
    const Vector w = least_squares_min_norm(inst.A().transpose(), p, cfg.tol.rank_tol);
    res = std::max(res, (inst.A().transpose() * w - p).cwiseAbs().maxCoeff());
    smp.kkt_residual = res;
    const Vector witness = least_squares_min_norm(inst.A(), inst.f(), cfg.tol.rank_tol);
    smp.objective_gap = std::max(0.0, last.u.lpNorm<1>() - witness.lpNorm<1>());
    out.push_back(smp);
  }

  // worst_t: among samples failing the optimality check, the one with the largest
  // violation in correlation units (t * residual, which peaks at a corrupted kink
  // rather than next to it). The t = 0 certificate reuses the last kink's
  // subgradient, so it only counts when no positive sample fails. Without
  // optimality failures, the sample closest to failing.
  auto rank = [&](const VerificationSample& smp) {
    if (smp.kkt_residual > cfg.kkt_tol) {
      return std::pair{smp.t > 0.0 ? 2 : 1, smp.t > 0.0 ? smp.kkt_residual * smp.t : smp.kkt_residual};
    }
    return std::pair{0, std::max(smp.kkt_residual / cfg.kkt_tol, smp.objective_gap / (cfg.obj_tol * obj_scale))};
  };
  std::pair<int, double> worst{-1, 0.0};
  for (const auto& smp : out) {
    const double score = std::max(smp.kkt_residual / cfg.kkt_tol, smp.objective_gap / (cfg.obj_tol * obj_scale));
    if (score > 1.0) rep.pass = false;
    const auto r = rank(smp);
    if (r > worst) {
      worst = r;
      rep.worst_t = smp.t;
    }
  }
  rep.samples = std::move(out);
  return rep;
}

}  // namespace lassopath
