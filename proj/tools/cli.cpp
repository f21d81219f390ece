#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lassopath/errors.hpp"
#include "lassopath/fixtures.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/io.hpp"
#include "lassopath/oracle.hpp"

namespace lassopath::cli {

namespace {

using io::format_double;

// Where a problem instance comes from: files, a builtin fixture, or a generator.
struct InstanceSource {
  std::string matrix;
  std::string rhs;
  std::string fixture;
  std::string gen;
  Index m = 0;
  Index n = 0;
  std::uint64_t seed = 0;
};

void add_instance_options(CLI::App* cmd, InstanceSource& src) {
  auto* mat = cmd->add_option("--matrix", src.matrix, "Matrix file (Matrix Market or CSV)");
  auto* rhs = cmd->add_option("--rhs", src.rhs, "Data vector file");
  auto* fix = cmd->add_option("--fixture", src.fixture, "Builtin instance instead of files");
  auto* gen = cmd->add_option("--gen", src.gen, "Random instance: gaussian or bernoulli")
                  ->check(CLI::IsMember({"gaussian", "bernoulli"}));
  cmd->add_option("--m", src.m, "Rows of a generated instance");
  cmd->add_option("--n", src.n, "Columns of a generated instance");
  cmd->add_option("--seed", src.seed, "Generator seed");
  mat->needs(rhs);
  rhs->needs(mat);
  fix->excludes(mat)->excludes(gen);
  gen->excludes(mat);
}

ProblemInstance builtin_instance(const std::string& name) {
  if (name == "loris") return fixtures::loris();
  if (name == "tibshirani") return fixtures::tibshirani();
  if (name == "infinite-kinks" || name == "infinite-kinks-adversarial") return fixtures::infinite_kinks();
  if (name == "gaussian-3x6") return fixtures::gaussian(3, 6, 7);
  throw Error("unknown fixture '" + name + "'");
}

ProblemInstance load_instance(const InstanceSource& src) {
  if (!src.fixture.empty()) return builtin_instance(src.fixture);
  if (!src.gen.empty()) {
    if (src.m < 1 || src.n < 1) throw Error("--gen needs --m and --n");
    return src.gen == "gaussian" ? fixtures::gaussian(src.m, src.n, src.seed)
                                 : fixtures::bernoulli(src.m, src.n, src.seed);
  }
  if (src.matrix.empty()) throw Error("no instance given: use --matrix/--rhs, --fixture or --gen");
  return {io::read_matrix(std::filesystem::path(src.matrix)), io::read_vector(std::filesystem::path(src.rhs))};
}

// solve

struct SolveArgs {
  InstanceSource src;
  std::string algorithm = "generalized";
  std::string out;
  double eq_tol = Tolerances{}.eq_tol;
  double kkt_tol = Tolerances{}.kkt_tol;
  std::size_t max_iters = Tolerances{}.max_iters;
  std::size_t loop_cap = HomotopyConfig{}.loop_cap;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const ProblemInstance inst = load_instance(a.src);
  HomotopyConfig cfg;
  cfg.algorithm = a.algorithm == "standard"  ? Algorithm::Standard
                  : a.algorithm == "looping" ? Algorithm::Looping
                                             : Algorithm::Generalized;
  cfg.tol.eq_tol = a.eq_tol;
  cfg.tol.kkt_tol = a.kkt_tol;
  cfg.tol.max_iters = a.max_iters;
  cfg.loop_cap = a.loop_cap;

  SolutionPath path = [&] {
    try {
      return run_homotopy(inst, cfg);
    } catch (const LoopCapExceeded& e) {
      err << "error: " << e.what() << '\n';
      throw;
    }
  }();
  const PathRecord rec = to_record(path);
  if (a.out.empty()) {
    out << io::path_to_json(rec);
  } else {
    io::write_path(a.out, rec);
    out << "kinks: " << rec.kinks.size() << "\ntermination: " << to_string(rec.termination.kind) << '\n';
    if (!a.src.gen.empty()) out << "seed: " << a.src.seed << '\n';
  }
  switch (path.termination.kind) {
    case TerminationKind::ReachedZero: return kOk;
    case TerminationKind::SignInconsistency:
      err << "sign inconsistency: index " << path.termination.index << " at t = "
          << format_double(path.termination.t) << '\n';
      return kSignInconsistency;
    case TerminationKind::IterationCap:
      err << "iteration cap reached at t = " << format_double(path.termination.t) << '\n';
      return kCapReached;
  }
  return kError;
}

// eval

struct EvalArgs {
  std::string path;
  std::optional<double> t;
  std::optional<std::size_t> grid;
};

void write_row(std::ostream& out, double t, const Vector& u) {
  out << format_double(t);
  for (Index i = 0; i < u.size(); ++i) out << ',' << format_double(u(i));
  out << '\n';
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const PathRecord rec = io::read_path(a.path);
  std::vector<double> ts;
  if (a.t) {
    if (!(*a.t >= 0.0)) throw Error("--t must be nonnegative");
    ts.push_back(*a.t);
  } else {
    // K log-spaced values over three decades below t0, plus every kink.
    const std::size_t K = *a.grid;
    const double t0 = rec.t0;
    if (t0 > 0.0) {
      for (std::size_t k = 0; k < K; ++k) {
        const double frac = K == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(K - 1);
        ts.push_back(t0 * std::pow(10.0, -3.0 * frac));
      }
    }
    for (const auto& k : rec.kinks) ts.push_back(k.t);
    std::sort(ts.begin(), ts.end(), std::greater<>());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }
  out << 't';
  for (Index i = 1; i <= rec.n; ++i) out << ",u_" << i;
  out << '\n';
  for (double t : ts) write_row(out, t, eval_path(rec, t).u);
  return kOk;
}

// check

struct CheckArgs {
  InstanceSource src;
  std::string path;
  std::string out;
  std::size_t samples = 100;
  double tol = VerifyConfig{}.kkt_tol;
  double obj_tol = VerifyConfig{}.obj_tol;
  std::uint64_t sample_seed = 0;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  const ProblemInstance inst = load_instance(a.src);
  const PathRecord rec = io::read_path(a.path);
  const SolutionPath path = from_record(rec, inst, Tolerances{});
  VerifyConfig cfg;
  cfg.n_samples = a.samples;
  cfg.kkt_tol = a.tol;
  cfg.obj_tol = a.obj_tol;
  cfg.seed = a.sample_seed;
  const VerificationReport rep = verify_path(path, cfg);
  if (a.out.empty()) {
    out << io::report_to_json(rep);
  } else {
    std::ofstream f(a.out);
    if (!f) throw Error("cannot open '" + a.out + "' for writing");
    f << io::report_to_json(rep);
    out << (rep.pass ? "pass" : "fail") << "\nworst_t: " << format_double(rep.worst_t) << '\n';
  }
  if (!rep.pass) {
    err << "verification failed; worst_t = " << format_double(rep.worst_t) << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

// fixtures

class Checklist {
 public:
  explicit Checklist(std::ostream& out) : out_(out) {}

  void expect(bool ok, const std::string& what) {
    out_ << (ok ? "[PASS] " : "[FAIL] ") << what << '\n';
    all_ = all_ && ok;
  }
  bool all() const { return all_; }

 private:
  std::ostream& out_;
  bool all_ = true;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool near(const Vector& a, const Vector& b, double tol) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

bool verifies(const SolutionPath& path, std::size_t samples) {
  VerifyConfig cfg;
  cfg.n_samples = samples;
  return verify_path(path, cfg).pass;
}

void run_loris(Checklist& c) {
  const ProblemInstance inst = fixtures::loris();
  const SolutionPath gen = run_generalized(inst);
  c.expect(gen.kinks[0].t == 192.0, "generalized: t0 = 192");
  c.expect(gen.kinks.size() > 1 && near(gen.kinks[1].t, 63.0, 1e-9), "generalized: second kink at t = 63");
  c.expect(gen.termination.kind == TerminationKind::ReachedZero, "generalized: reaches t = 0");
  c.expect(near(eval_path(gen, 96.0).u, make_vector({0, 0, 2}), 1e-12), "generalized: u(96) = (0, 0, 2)");
  c.expect(verifies(gen, 200), "generalized: path verifies at 200 samples");
  const SolutionPath std_path = run_standard(inst);
  c.expect(std_path.termination.kind == TerminationKind::SignInconsistency &&
               near(std_path.termination.t, 192.0, 1e-9),
           "standard: sign inconsistency at t = 192 (index " + std::to_string(std_path.termination.index) + ")");
  const SolutionPath loop = run_looping(inst);
  c.expect(loop.termination.kind == TerminationKind::ReachedZero && verifies(loop, 200),
           "looping: reaches t = 0 and verifies");
}

void run_tibshirani(Checklist& c) {
  const ProblemInstance inst = fixtures::tibshirani();
  const Tolerances tol;
  const Vector u2 = make_vector({0, 0, -1, 0});
  c.expect(kkt_check(inst, 2.0, u2, tol) <= 1e-12, "u(2) = (0, 0, -1, 0) satisfies the optimality conditions");
  c.expect(equicorrelation_set(inst, 2.0, u2, tol).size() == 4, "all four correlations tie at t = 2");
  const Vector beta = tibshirani_beta(inst, 2.0, u2, tol);
  c.expect(near(beta, make_vector({-0.25, -0.25, -0.75, -0.25}), 1e-10), "beta(2) = (-1/4, -1/4, -3/4, -1/4)");
  c.expect(kkt_check(inst, 2.0, beta, tol) >= 0.5, "beta(2) is not a solution (wrong sign on component 2)");
  const SolutionPath gen = run_generalized(inst);
  c.expect(gen.termination.kind == TerminationKind::ReachedZero && verifies(gen, 100),
           "generalized: reaches t = 0 and verifies");
  c.expect(!one_at_a_time_report(gen).holds, "one-at-a-time condition fails");
}

void run_infinite(Checklist& c) {
  const SolutionPath gen = run_generalized(fixtures::infinite_kinks());
  std::vector<double> ts;
  for (const auto& k : gen.kinks) ts.push_back(k.t);
  c.expect(ts.size() == 3 && near(ts[0], 2, 1e-10) && near(ts[1], 1, 1e-10) && ts[2] == 0.0,
           "generalized: exactly three kinks t = 2, 1, 0");
  c.expect(near(gen.kinks.back().u, make_vector({2.0 / 3, 2.0 / 3, 2.0 / 3, 1}), 1e-10),
           "generalized: u(0) = (2/3, 2/3, 2/3, 1)");
  c.expect(verifies(gen, 100), "generalized: path verifies");
}

void run_adversarial(Checklist& c, std::size_t max_kinks, std::ostream& out) {
  const SolutionPath demo = adversarial_demo(max_kinks);
  bool halving = demo.kinks.size() == max_kinks;
  bool identities = true;
  for (std::size_t k = 0; k < demo.kinks.size(); ++k) {
    const PathPoint& pt = demo.kinks[k];
    out << "kink " << k << ": t = " << format_double(pt.t) << '\n';
    halving = halving && near(pt.t, std::ldexp(1.0, 1 - static_cast<int>(k)), 1e-10);
    if (pt.t <= 1.0) {
      identities = identities && near(pt.u(0) + pt.u(1) + pt.u(2), 2.0 - pt.t, 1e-10) &&
                   near(pt.u(3), 1.0 - pt.t, 1e-10);
    }
  }
  c.expect(halving, "kinks at t = 2, 1, 1/2, ..., 2^(2 - max_kinks)");
  c.expect(identities, "u1 + u2 + u3 = 2 - t and u4 = 1 - t below t = 1");
  c.expect(demo.termination.kind == TerminationKind::IterationCap, "never reaches t = 0");
}

void run_gaussian(Checklist& c) {
  const ProblemInstance inst = fixtures::gaussian(3, 6, 7);
  const SolutionPath gen = run_generalized(inst);
  c.expect(gen.termination.kind == TerminationKind::ReachedZero && verifies(gen, 100),
           "generalized: reaches t = 0 and verifies");
  const bool oaat = one_at_a_time_report(gen).holds;
  c.expect(oaat, "one-at-a-time condition holds");
  if (oaat) {
    const SolutionPath std_path = run_standard(inst);
    bool same = std_path.kinks.size() == gen.kinks.size();
    for (std::size_t k = 0; same && k < gen.kinks.size(); ++k) {
      same = near(std_path.kinks[k].t, gen.kinks[k].t, 1e-8) && near(std_path.kinks[k].u, gen.kinks[k].u, 1e-8);
    }
    c.expect(same, "standard and generalized kinks coincide");
  }
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"loris", "tibshirani", "infinite-kinks",
                                              "infinite-kinks-adversarial", "gaussian-3x6"};
  return names;
}

struct FixturesArgs {
  bool list = false;
  std::string run;
  std::size_t max_kinks = 6;
};

int cmd_fixtures(const FixturesArgs& a, std::ostream& out, std::ostream& err) {
  if (a.list || a.run.empty()) {
    for (const auto& n : fixture_names()) out << n << '\n';
    return kOk;
  }
  Checklist c(out);
  if (a.run == "loris") {
    run_loris(c);
  } else if (a.run == "tibshirani") {
    run_tibshirani(c);
  } else if (a.run == "infinite-kinks") {
    run_infinite(c);
  } else if (a.run == "infinite-kinks-adversarial") {
    if (a.max_kinks < 1) throw Error("--max-kinks must be at least 1");
    run_adversarial(c, a.max_kinks, out);
  } else if (a.run == "gaussian-3x6") {
    run_gaussian(c);
  } else {
    err << "error: unknown fixture '" << a.run << "' (see --list)\n";
    return kError;
  }
  return c.all() ? kOk : kVerificationFailed;
}

// gen

struct GenArgs {
  std::string kind = "gaussian";
  Index m = 0;
  Index n = 0;
  std::uint64_t seed = 0;
  std::string matrix_out;
  std::string rhs_out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const ProblemInstance inst =
      a.kind == "gaussian" ? fixtures::gaussian(a.m, a.n, a.seed) : fixtures::bernoulli(a.m, a.n, a.seed);
  std::ofstream mf(a.matrix_out);
  if (!mf) throw Error("cannot open '" + a.matrix_out + "' for writing");
  mf << "%%MatrixMarket matrix array real general\n% generated: " << a.kind << " seed " << a.seed << '\n';
  mf << inst.rows() << ' ' << inst.cols() << '\n';
  for (Index j = 0; j < inst.cols(); ++j) {
    for (Index i = 0; i < inst.rows(); ++i) mf << format_double(inst.A()(i, j)) << '\n';
  }
  std::ofstream vf(a.rhs_out);
  if (!vf) throw Error("cannot open '" + a.rhs_out + "' for writing");
  io::write_vector(vf, inst.f());
  out << "seed: " << a.seed << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lasso solution paths by homotopy", "lassopath"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Compute a solution path");
  add_instance_options(s, solve.src);
  s->add_option("--algorithm", solve.algorithm, "generalized, standard or looping")
      ->check(CLI::IsMember({"generalized", "standard", "looping"}));
  s->add_option("--out", solve.out, "Path JSON output (stdout if omitted)");
  s->add_option("--eq-tol", solve.eq_tol)->check(CLI::PositiveNumber);
  s->add_option("--kkt-tol", solve.kkt_tol)->check(CLI::PositiveNumber);
  s->add_option("--max-iters", solve.max_iters)->check(CLI::PositiveNumber);
  s->add_option("--loop-cap", solve.loop_cap);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Evaluate a path as CSV");
  e->add_option("--path", eval.path, "Path JSON")->required();
  auto* et = e->add_option("--t", eval.t, "Single parameter value");
  auto* eg = e->add_option("--grid", eval.grid, "K log-spaced values plus every kink")->check(CLI::PositiveNumber);
  et->excludes(eg);
  e->require_option(1, 2);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Verify a path against an independent solver");
  add_instance_options(c, check.src);
  c->add_option("--path", check.path, "Path JSON")->required();
  c->add_option("--samples", check.samples, "Number of sampled parameters");
  c->add_option("--tol", check.tol, "Optimality residual tolerance")->check(CLI::PositiveNumber);
  c->add_option("--obj-tol", check.obj_tol, "Relative objective gap tolerance")->check(CLI::PositiveNumber);
  c->add_option("--sample-seed", check.sample_seed, "Seed for random sample parameters");
  c->add_option("--out", check.out, "Report JSON output (stdout if omitted)");

  FixturesArgs fix;
  auto* f = app.add_subcommand("fixtures", "List or run the builtin instances");
  auto* fl = f->add_flag("--list", fix.list);
  auto* fr = f->add_option("--run", fix.run, "Fixture name");
  fl->excludes(fr);
  f->add_option("--max-kinks", fix.max_kinks, "Kinks to replay for the adversarial fixture");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a random instance");
  g->add_option("--kind,--gen", gen.kind)->check(CLI::IsMember({"gaussian", "bernoulli"}));
  g->add_option("--m", gen.m)->required()->check(CLI::PositiveNumber);
  g->add_option("--n", gen.n)->required()->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed);
  g->add_option("--matrix-out", gen.matrix_out)->required();
  g->add_option("--rhs-out", gen.rhs_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (s->parsed()) return cmd_solve(solve, out, err);
    if (e->parsed()) return cmd_eval(eval, out);
    if (c->parsed()) return cmd_check(check, out, err);
    if (f->parsed()) return cmd_fixtures(fix, out, err);
    if (g->parsed()) return cmd_gen(gen, out);
  } catch (const LoopCapExceeded&) {
    return kCapReached;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace lassopath::cli
