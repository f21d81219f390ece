#include "lassopath/problem.hpp"

#include <algorithm>
#include <cmath>

#include "lassopath/errors.hpp"

namespace lassopath {

void Tolerances::validate() const {
  if (!(eq_tol > 0.0) || !(act_tol > 0.0) || !(kkt_tol > 0.0) || !(rank_tol > 0.0)) {
    throw DomainError("tolerances must be strictly positive");
  }
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
}

ProblemInstance::ProblemInstance(Matrix A, Vector f) {
  if (A.rows() == 0 || A.cols() == 0) throw DimensionError("matrix must have positive dimensions");
  if (f.size() != A.rows()) {
    throw DimensionError("data vector has " + std::to_string(f.size()) + " entries, matrix has " +
                         std::to_string(A.rows()) + " rows");
  }
  if (!A.allFinite() || !f.allFinite()) throw DimensionError("instance entries must be finite");
  t0_ = (A.transpose() * f).cwiseAbs().maxCoeff();
  A_ = std::make_shared<const Matrix>(std::move(A));
  f_ = std::make_shared<const Vector>(std::move(f));
}

namespace {

void check_iterate(const ProblemInstance& inst, const Vector& u) {
  if (u.size() != inst.cols()) {
    throw DimensionError("iterate has " + std::to_string(u.size()) + " entries, expected " +
                         std::to_string(inst.cols()));
  }
}

}  // namespace

Vector residual(const ProblemInstance& inst, const Vector& u) {
  check_iterate(inst, u);
  return inst.f() - inst.A() * u;
}

double energy(const ProblemInstance& inst, double t, const Vector& u) {
  const Vector r = residual(inst, u);
  return 0.5 * r.squaredNorm() + t * u.lpNorm<1>();
}

Vector subgradient(const ProblemInstance& inst, double t, const Vector& u) {
  if (!(t > 0.0)) throw DomainError("subgradient requires t > 0");
  return inst.A().transpose() * residual(inst, u) / t;
}

IndexSet equicorrelation_set(const ProblemInstance& inst, double t, const Vector& u,
                             const Tolerances& tol) {
  check_iterate(inst, u);
  if (t == 0.0) return IndexSet::all(inst.cols());
  const Vector corr = inst.A().transpose() * residual(inst, u);
  const double band = tol.eq_tol * std::max(1.0, t);
  std::vector<Index> out;
  for (Index i = 0; i < corr.size(); ++i) {
    if (std::abs(std::abs(corr(i)) - t) <= band) out.push_back(i);
  }
  return IndexSet(std::move(out));
}

IndexSet active_set(const Vector& u, const Tolerances& tol) { return support(u, tol.act_tol); }

PathPoint make_path_point(const ProblemInstance& inst, double t, Vector u, const Tolerances& tol,
                          const std::optional<Vector>& terminal_subgradient) {
  if (!(t >= 0.0)) throw DomainError("path points need t >= 0");
  check_iterate(inst, u);
  PathPoint pt;
  pt.t = t;
  pt.r = residual(inst, u);
  if (t > 0.0) {
    pt.p = inst.A().transpose() * pt.r / t;
  } else if (terminal_subgradient) {
    if (terminal_subgradient->size() != inst.cols()) throw DimensionError("terminal subgradient size");
    pt.p = *terminal_subgradient;
  } else {
    pt.p = Vector::Zero(inst.cols());
  }
  pt.E = equicorrelation_set(inst, t, u, tol);
  pt.active = active_set(u, tol);
  pt.u = std::move(u);
  return pt;
}

std::string to_string(TerminationKind kind) {
  switch (kind) {
    case TerminationKind::ReachedZero: return "ReachedZero";
    case TerminationKind::IterationCap: return "IterationCap";
    case TerminationKind::SignInconsistency: return "SignInconsistency";
  }
  return "Unknown";
}

std::optional<TerminationKind> termination_from_string(const std::string& s) {
  if (s == "ReachedZero") return TerminationKind::ReachedZero;
  if (s == "IterationCap") return TerminationKind::IterationCap;
  if (s == "SignInconsistency") return TerminationKind::SignInconsistency;
  return std::nullopt;
}

namespace {

template <class TAt, class UAt>
void check_kinks(std::size_t count, double t0, const Termination& term, Index n, TAt t_at, UAt u_at) {
  if (count == 0) throw FormatError("path has no kinks");
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t_at(k);
    if (!std::isfinite(t) || t < 0.0) throw FormatError("kink parameters must be finite and nonnegative");
    if (u_at(k).size() != n) throw FormatError("kink " + std::to_string(k) + " has the wrong dimension");
    if (!u_at(k).allFinite()) throw FormatError("kink " + std::to_string(k) + " has non-finite entries");
    if (k > 0 && !(t < t_at(k - 1))) {
      throw FormatError("kink parameters must be strictly decreasing (kink " + std::to_string(k) + ")");
    }
  }
  if (t_at(0) != t0) throw FormatError("first kink must sit at t0");
  if (!u_at(0).isZero(0.0)) throw FormatError("solution at t0 must be zero");
  if (term.kind == TerminationKind::ReachedZero && t_at(count - 1) != 0.0) {
    throw FormatError("path marked ReachedZero does not end at t = 0");
  }
}

// Shared interpolation over any kink container, kinks sorted by decreasing t.
template <class TAt, class UAt>
PathValue interpolate(std::size_t count, Index n, TAt t_at, UAt u_at, double t) {
  PathValue out;
  if (count == 0 || t >= t_at(0)) {
    out.u = Vector::Zero(n);
    return out;
  }
  const double t_last = t_at(count - 1);
  if (t <= t_last) {
    out.u = u_at(count - 1);
    out.extrapolated = t < t_last;
    return out;
  }
  // First kink with t_at(k) <= t; then t in [t^k, t^{k-1}).
  std::size_t lo = 1, hi = count - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (t_at(mid) <= t) hi = mid; else lo = mid + 1;
  }
  const std::size_t k = lo;
  const double a = t_at(k), b = t_at(k - 1);
  if (t == a) {
    out.u = u_at(k);
    return out;
  }
  const double w_prev = (t - a) / (b - a);
  const double w_next = (b - t) / (b - a);
  out.u = w_prev * u_at(k - 1) + w_next * u_at(k);
  return out;
}

}  // namespace

void SolutionPath::check_structure() const {
  check_kinks(
      kinks.size(), t0, termination, instance.cols(),
      [&](std::size_t k) { return kinks[k].t; },
      [&](std::size_t k) -> const Vector& { return kinks[k].u; });
}

void PathRecord::check_structure() const {
  if (m <= 0 || n <= 0) throw FormatError("path dimensions must be positive");
  check_kinks(
      kinks.size(), t0, termination, n,
      [&](std::size_t k) { return kinks[k].t; },
      [&](std::size_t k) -> const Vector& { return kinks[k].u; });
}

PathRecord to_record(const SolutionPath& path) {
  PathRecord rec;
  rec.m = path.instance.rows();
  rec.n = path.instance.cols();
  rec.t0 = path.t0;
  rec.termination = path.termination;
  rec.kinks.reserve(path.kinks.size());
  for (const auto& k : path.kinks) rec.kinks.push_back({k.t, k.u});
  return rec;
}

SolutionPath from_record(const PathRecord& record, const ProblemInstance& inst, const Tolerances& tol) {
  record.check_structure();
  if (record.m != inst.rows() || record.n != inst.cols()) {
    throw FormatError("path is " + std::to_string(record.m) + "x" + std::to_string(record.n) +
                      " but the instance is " + std::to_string(inst.rows()) + "x" +
                      std::to_string(inst.cols()));
  }
  if (std::abs(record.t0 - inst.t0()) > tol.eq_tol * std::max(1.0, inst.t0())) {
    throw FormatError("path t0 does not match ||A^T f||_inf of the instance");
  }
  SolutionPath path{inst, {}, record.t0, record.termination, {}};
  path.kinks.reserve(record.kinks.size());
  for (const auto& k : record.kinks) {
    std::optional<Vector> p_limit;
    if (k.t == 0.0 && !path.kinks.empty()) p_limit = path.kinks.back().p;
    path.kinks.push_back(make_path_point(inst, k.t, k.u, tol, p_limit));
  }
  return path;
}

PathValue eval_path(const SolutionPath& path, double t) {
  return interpolate(
      path.kinks.size(), path.instance.cols(),
      [&](std::size_t k) { return path.kinks[k].t; },
      [&](std::size_t k) -> const Vector& { return path.kinks[k].u; }, t);
}

PathValue eval_path(const PathRecord& path, double t) {
  return interpolate(
      path.kinks.size(), path.n,
      [&](std::size_t k) { return path.kinks[k].t; },
      [&](std::size_t k) -> const Vector& { return path.kinks[k].u; }, t);
}

}  // namespace lassopath
