#include "lassopath/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lassopath/errors.hpp"

namespace lassopath {

namespace {

Vector solve_on(const Matrix& M, const Vector& b, const std::vector<Index>& passive, double rank_tol) {
  Matrix MP(M.rows(), static_cast<Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) MP.col(static_cast<Index>(k)) = M.col(passive[k]);
  return least_squares_min_norm(MP, b, rank_tol);
}

}  // namespace

NnlsResult nnls(const Matrix& M, const Vector& b, const NnlsOptions& opts) {
  if (b.size() != M.rows()) throw DimensionError("nnls: rhs size does not match matrix rows");
  const Index n = M.cols();
  const std::size_t cap = opts.max_iters ? opts.max_iters : 30 * static_cast<std::size_t>(n + 1) + 100;

  NnlsResult res;
  res.x = Vector::Zero(n);
  if (n == 0) {
    res.gradient = Vector(0);
    res.residual_norm = b.norm();
    res.converged = true;
    return res;
  }

  const double scale = std::max(1.0, (M.transpose() * b).cwiseAbs().maxCoeff());
  const double grad_tol = opts.gradient_tol * scale;

  std::vector<char> passive(static_cast<std::size_t>(n), 0);
  // Variables whose entry was undone by round-off; retried once x moves.
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  Vector& x = res.x;
  Vector w = M.transpose() * (b - M * x);

  auto passive_list = [&] {
    std::vector<Index> P;
    for (Index i = 0; i < n; ++i) {
      if (passive[static_cast<std::size_t>(i)]) P.push_back(i);
    }
    return P;
  };

  std::size_t iters = 0;
  while (true) {
    Index enter = -1;
    for (Index i = 0; i < n; ++i) {
      const auto si = static_cast<std::size_t>(i);
      if (!passive[si] && !blocked[si] && w(i) > grad_tol) {
        enter = i;
        break;
      }
    }
    if (enter < 0) {
      res.converged = true;
      break;
    }
    passive[static_cast<std::size_t>(enter)] = 1;

    bool moved = false;
    bool first_pass = true;
    while (true) {
      if (++iters > cap) {
        res.gradient = M.transpose() * (b - M * x);
        res.residual_norm = (M * x - b).norm();
        res.iterations = iters;
        return res;
      }
      const std::vector<Index> P = passive_list();
      const Vector zP = solve_on(M, b, P, opts.rank_tol);
      Vector z = Vector::Zero(n);
      for (std::size_t k = 0; k < P.size(); ++k) z(P[k]) = zP(static_cast<Index>(k));

      if (first_pass && !(z(enter) > 0.0)) {
        // Exact arithmetic guarantees z(enter) > 0; round-off may not.
        passive[static_cast<std::size_t>(enter)] = 0;
        blocked[static_cast<std::size_t>(enter)] = 1;
        break;
      }
      first_pass = false;

      bool all_positive = true;
      for (Index q : P) {
        if (!(z(q) > 0.0)) {
          all_positive = false;
          break;
        }
      }
      if (all_positive) {
        x = z;
        moved = true;
        break;
      }

      double alpha = std::numeric_limits<double>::infinity();
      Index leave = -1;
      for (Index q : P) {
        if (!(z(q) > 0.0)) {
          const double a = x(q) / (x(q) - z(q));
          if (a < alpha) {
            alpha = a;
            leave = q;
          }
        }
      }
      x += alpha * (z - x);
      moved = moved || alpha > 0.0;
      passive[static_cast<std::size_t>(leave)] = 0;
      x(leave) = 0.0;
      for (Index q : P) {
        if (passive[static_cast<std::size_t>(q)] && x(q) <= 0.0) {
          passive[static_cast<std::size_t>(q)] = 0;
          x(q) = 0.0;
        }
      }
    }
    if (moved) std::fill(blocked.begin(), blocked.end(), 0);
    w = M.transpose() * (b - M * x);
  }

  res.gradient = w;
  res.residual_norm = (M * x - b).norm();
  res.iterations = iters;
  return res;
}

LdpResult least_distance(const Matrix& G, const Vector& h, const NnlsOptions& opts) {
  if (G.rows() != h.size()) throw DimensionError("ldp: constraint count mismatch");
  const Index k = G.cols();
  const Index mc = G.rows();
  LdpResult out;
  if (mc == 0) {
    out.v = Vector::Zero(k);
    out.feasible = true;
    return out;
  }

  Matrix E(k + 1, mc);
  E.topRows(k) = G.transpose();
  E.row(k) = h.transpose();
  Vector F = Vector::Zero(k + 1);
  F(k) = 1.0;

  const NnlsResult sol = nnls(E, F, opts);
  if (!sol.converged) {
    throw ConvergenceError("least distance subproblem did not converge", sol.x, sol.residual_norm);
  }
  const Vector r = E * sol.x - F;
  // ||r|| == 0 means the constraints are inconsistent; r(k) = h^T u - 1 < 0 otherwise.
  if (!(r(k) < -64.0 * std::numeric_limits<double>::epsilon())) {
    out.v = Vector::Zero(k);
    out.feasible = false;
    return out;
  }
  out.v = -r.head(k) / r(k);
  out.feasible = true;
  return out;
}

}  // namespace lassopath
