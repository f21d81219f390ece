#include "lassopath/direction.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "lassopath/errors.hpp"
#include "lassopath/nnls.hpp"

namespace lassopath {

DirectionProblem DirectionProblem::at(const ProblemInstance& inst, double t, const Vector& u,
                                      const Tolerances& tol) {
  if (!(t > 0.0)) throw DomainError("direction problems are posed at t > 0");
  const Vector r = residual(inst, u);
  const Vector p = inst.A().transpose() * r / t;
  const IndexSet E = equicorrelation_set(inst, t, u, tol);
  const IndexSet act = active_set(u, tol);
  IndexSet constrained = set_difference(E, act);
  std::vector<int> signs;
  signs.reserve(static_cast<std::size_t>(constrained.size()));
  for (Index i : constrained) signs.push_back(p(i) >= 0.0 ? 1 : -1);

  DirectionProblem prob(inst, r / t, act, std::move(constrained), std::move(signs));
  prob.t_ = t;
  return prob;
}

DirectionProblem::DirectionProblem(ProblemInstance inst, Vector target, IndexSet free,
                                   IndexSet constrained, std::vector<int> signs)
    : inst_(std::move(inst)),
      target_(std::move(target)),
      free_(std::move(free)),
      constrained_(std::move(constrained)),
      signs_(std::move(signs)) {
  const Index n = inst_.cols();
  if (target_.size() != inst_.rows()) throw DimensionError("direction target must have one entry per row");
  free_.check_bound(n);
  constrained_.check_bound(n);
  if (!set_intersection(free_, constrained_).empty()) {
    throw DimensionError("free and sign-constrained index sets overlap");
  }
  if (static_cast<Index>(signs_.size()) != constrained_.size()) {
    throw DimensionError("one sign per constrained index is required");
  }
  for (int s : signs_) {
    if (s != 1 && s != -1) throw DimensionError("signs must be +1 or -1");
  }
  p_ = inst_.A().transpose() * target_;
  E_ = set_union(free_, constrained_);
  zero_ = complement(E_, n);
}

int DirectionProblem::sign_of(Index i) const {
  const Index k = constrained_.position(i);
  return k < 0 ? 0 : signs_[static_cast<std::size_t>(k)];
}

DirectionCertificate certify(const DirectionProblem& prob, Vector d) {
  if (d.size() != prob.dim()) throw DimensionError("direction has the wrong dimension");
  const Matrix& A = prob.A();
  const Vector g = prob.subgradient() - A.transpose() * (A * d);
  DirectionCertificate cert;
  cert.lambda = Vector::Zero(prob.dim());
  cert.theta = Vector::Zero(prob.dim());
  for (Index i : prob.constrained()) cert.lambda(i) = g(i);
  for (Index i : prob.zero()) cert.theta(i) = g(i);
  cert.d = std::move(d);
  return cert;
}

double direction_objective(const DirectionProblem& prob, const Vector& d) {
  return (prob.A() * d - prob.target()).squaredNorm();
}

MembershipReport direction_set_membership(const DirectionProblem& prob, const Vector& d,
                                          const Tolerances& tol) {
  if (d.size() != prob.dim()) throw DimensionError("direction has the wrong dimension");
  const Matrix& A = prob.A();
  const Vector g = prob.subgradient() - A.transpose() * (A * d);
  const double dscale = std::max(1.0, d.size() ? d.cwiseAbs().maxCoeff() : 0.0);

  MembershipReport rep;
  double worst = 0.0;
  auto note = [&](double& slot, double value, Index i) {
    slot = std::max(slot, value);
    if (value > worst) {
      worst = value;
      rep.worst_index = i;
    }
  };

  for (Index i : prob.free()) note(rep.stationarity, std::abs(g(i)), i);
  for (Index i : prob.zero()) note(rep.support, std::abs(d(i)) / dscale, i);
  double worst_sign = 0.0;
  for (std::size_t k = 0; k < prob.signs().size(); ++k) {
    const Index i = prob.constrained()[static_cast<Index>(k)];
    const double s = prob.signs()[k];
    const double sign_violation = std::max(0.0, -s * d(i)) / dscale;
    note(rep.sign, sign_violation, i);
    if (sign_violation > worst_sign) {
      worst_sign = sign_violation;
      rep.sign_violation_index = i;
    }
    note(rep.multiplier_sign, std::max(0.0, s * g(i)), i);
    note(rep.complementarity, std::abs(g(i) * d(i)) / dscale, i);
  }
  rep.max_residual = worst;
  rep.member = worst <= tol.kkt_tol;
  return rep;
}

MembershipReport direction_set_membership(const ProblemInstance& inst, double t, const Vector& u,
                                          const Vector& d, const Tolerances& tol) {
  return direction_set_membership(DirectionProblem::at(inst, t, u, tol), d, tol);
}

Vector pseudoinverse_direction(const DirectionProblem& prob, const IndexSet& S, double rank_tol) {
  const Vector dS = least_squares_min_norm(columns(prob.A(), S), prob.target(), rank_tol);
  return scatter(dS, S, prob.dim());
}

DirectionCertificate solve_direction(const DirectionProblem& prob, const Tolerances& tol) {
  const Matrix& A = prob.A();
  const IndexSet& F = prob.free();
  const IndexSet& J = prob.constrained();
  const Vector& b = prob.target();

  if (J.empty()) return certify(prob, pseudoinverse_direction(prob, F, tol.rank_tol));

  // Sign-flipped constrained columns, x_j = s_j d_j >= 0.
  Matrix B = columns(A, J);
  for (Index k = 0; k < J.size(); ++k) B.col(k) *= prob.signs()[static_cast<std::size_t>(k)];

  // The free block is minimized in closed form: project it out of the problem.
  const Matrix AF = columns(A, F);
  const Matrix Q = range_basis(AF, tol.rank_tol);
  const Matrix M = B - Q * (Q.transpose() * B);
  const Vector c = b - Q * (Q.transpose() * b);

  NnlsOptions opts;
  opts.rank_tol = tol.rank_tol;
  const NnlsResult sol = nnls(M, c, opts);

  Vector d = Vector::Zero(prob.dim());
  for (Index k = 0; k < J.size(); ++k) d(J[k]) = prob.signs()[static_cast<std::size_t>(k)] * sol.x(k);
  if (!F.empty()) {
    const Vector dF = least_squares_min_norm(AF, b - B * sol.x, tol.rank_tol);
    for (Index k = 0; k < F.size(); ++k) d(F[k]) = dF(k);
  }
  if (!sol.converged) {
    throw ConvergenceError("direction NNLS hit its iteration cap (t = " + std::to_string(prob.t()) + ")", d,
                           sol.residual_norm);
  }
  return certify(prob, std::move(d));
}

namespace {

// Sign of each E-coordinate in the flipped variables: +1 on free indices.
Vector flip_signs(const DirectionProblem& prob) {
  const IndexSet& E = prob.equicorrelation();
  Vector sigma(E.size());
  for (Index k = 0; k < E.size(); ++k) {
    const int s = prob.sign_of(E[k]);
    sigma(k) = s == 0 ? 1.0 : static_cast<double>(s);
  }
  return sigma;
}

// Re-solves on the identified support, S = A u supp(d): the minimal-norm element of
// D is the pseudoinverse solution there. Returns nothing if that does not improve d.
std::optional<Vector> polish(const DirectionProblem& prob, const Vector& d, const Tolerances& tol) {
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  std::vector<Index> S(prob.free().begin(), prob.free().end());
  for (Index j : prob.constrained()) {
    if (std::abs(d(j)) > 1e-10 * scale) S.push_back(j);
  }
  Vector cand = pseudoinverse_direction(prob, IndexSet::from_unsorted(std::move(S)), tol.rank_tol);
  if (!direction_set_membership(prob, cand, tol).member) return std::nullopt;
  if (cand.norm() > d.norm() * (1.0 + 1e-9) + 1e-14) return std::nullopt;
  return cand;
}

}  // namespace

DirectionCertificate min_norm_direction(const DirectionProblem& prob, const Vector& d_any,
                                        const Tolerances& tol) {
  const MembershipReport given = direction_set_membership(prob, d_any, tol);
  if (!given.member) {
    throw DirectionError("min_norm_direction: supplied direction is not in D (residual " +
                         std::to_string(given.max_residual) + ")");
  }
  const IndexSet& E = prob.equicorrelation();
  if (E.empty()) {
    DirectionCertificate cert = certify(prob, Vector::Zero(prob.dim()));
    cert.is_min_norm = true;
    return cert;
  }

  const Vector sigma = flip_signs(prob);
  Matrix C = columns(prob.A(), E);
  for (Index k = 0; k < E.size(); ++k) C.col(k) *= sigma(k);
  const Vector y = prob.A() * d_any;

  // {x : Cx = y} = C^+ y + ker(C); the sign constraints cut a polyhedron out of it
  // and the nearest point to the origin is a least distance problem.
  const Vector x0 = least_squares_min_norm(C, y, tol.rank_tol);
  Vector x = x0;
  std::vector<Index> jpos;
  for (Index k = 0; k < E.size(); ++k) {
    if (prob.sign_of(E[k]) != 0) jpos.push_back(k);
  }
  const Matrix Z = null_space_basis(C, tol.rank_tol);
  if (!jpos.empty() && Z.cols() > 0) {
    Matrix G(static_cast<Index>(jpos.size()), Z.cols());
    Vector h(static_cast<Index>(jpos.size()));
    for (std::size_t r = 0; r < jpos.size(); ++r) {
      G.row(static_cast<Index>(r)) = Z.row(jpos[r]);
      h(static_cast<Index>(r)) = -x0(jpos[r]);
    }
    NnlsOptions opts;
    opts.rank_tol = tol.rank_tol;
    const LdpResult ldp = least_distance(G, h, opts);
    if (!ldp.feasible) throw DirectionError("min_norm_direction: sign constraints are infeasible");
    x = x0 + Z * ldp.v;
  }
  for (Index k : jpos) x(k) = std::max(x(k), 0.0);

  Vector d = Vector::Zero(prob.dim());
  for (Index k = 0; k < E.size(); ++k) d(E[k]) = sigma(k) * x(k);
  if (auto better = polish(prob, d, tol)) d = std::move(*better);

  const MembershipReport rep = direction_set_membership(prob, d, tol);
  if (!rep.member) {
    throw DirectionError("min_norm_direction: result failed certification (residual " +
                         std::to_string(rep.max_residual) + " at index " + std::to_string(rep.worst_index) +
                         ")");
  }
  DirectionCertificate cert = certify(prob, std::move(d));
  cert.is_min_norm = true;
  return cert;
}

DirectionCertificate generalized_direction(const DirectionProblem& prob, const Tolerances& tol) {
  if (prob.equicorrelation().empty()) {
    DirectionCertificate cert = certify(prob, Vector::Zero(prob.dim()));
    cert.is_min_norm = true;
    return cert;
  }
  if (prob.constrained().size() <= 1) {
    // With at most one undecided index the minimal-norm direction is the
    // pseudoinverse solution on S = A or S = E; keep the smaller certified one.
    std::optional<Vector> best;
    for (const IndexSet& S : {prob.free(), prob.equicorrelation()}) {
      Vector cand = pseudoinverse_direction(prob, S, tol.rank_tol);
      if (!direction_set_membership(prob, cand, tol).member) continue;
      if (!best || cand.norm() < best->norm()) best = std::move(cand);
    }
    if (best) {
      DirectionCertificate cert = certify(prob, std::move(*best));
      cert.is_min_norm = true;
      return cert;
    }
  }
  const DirectionCertificate any = solve_direction(prob, tol);
  return min_norm_direction(prob, any.d, tol);
}

}  // namespace lassopath
