#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grane/solvers.hpp"
#include "oracles.hpp"

using namespace grane;

namespace {

std::vector<double> random_point(Sampler& s, std::size_t n, double r) {
  std::vector<double> x(n);
  for (auto& v : x) v = s.uniform(-r, r);
  return x;
}

Matrix random_matrix(Sampler& s, Eigen::Index n, double r) {
  Matrix X(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) X(i, j) = s.uniform(-r, r);
  }
  return X;
}

QuadraticGame random_game(std::uint64_t seed, std::size_t n, double c = 0.1) {
  QuadraticFamily f;
  f.n = n;
  f.seed = seed;
  f.c_range = {-c, c};
  return make_quadratic_game(f);
}

double dot(const Vector& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += a[static_cast<Eigen::Index>(i)] * b[i];
  return s;
}

}  // namespace

TEST_CASE("antisymmetric games are monotone with modulus min a") {
  Sampler s(1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto q = random_game(seed, 3 + seed, 0.8);
    const auto g = q.to_game();
    const double mu = g.constants().mu_r;
    CHECK(mu == doctest::Approx(q.a.minCoeff()));
    for (int t = 0; t < 1000; ++t) {
      const auto x = random_point(s, q.players(), 10);
      const auto y = random_point(s, q.players(), 10);
      const Vector d = g.mapping(x) - g.mapping(y);
      std::vector<double> diff(x.size());
      double sq = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        diff[i] = x[i] - y[i];
        sq += diff[i] * diff[i];
      }
      REQUIRE(dot(d, diff) >= mu * sq - 1e-9);
    }
  }
}

TEST_CASE("per-player Lipschitz constants") {
  Sampler s(2);
  const auto q = random_game(11, 6, 0.5);
  const auto g = q.to_game();
  const auto& k = g.constants();
  for (int t = 0; t < 1000; ++t) {
    const auto x = random_point(s, 6, 10);
    const auto y = random_point(s, 6, 10);
    for (std::size_t i = 0; i < 6; ++i) {
      auto own = x;
      own[i] = y[i];
      REQUIRE(std::abs(g.partial_gradient(i, x) - g.partial_gradient(i, own)) <=
              k.L_own[i] * std::abs(x[i] - y[i]) + 1e-9);
      auto other = y;
      other[i] = x[i];
      double dist = 0.0;
      for (std::size_t j = 0; j < 6; ++j) dist += j == i ? 0.0 : (x[j] - y[j]) * (x[j] - y[j]);
      REQUIRE(std::abs(g.partial_gradient(i, x) - g.partial_gradient(i, other)) <=
              k.L_other[i] * std::sqrt(dist) + 1e-9);
    }
  }
}

TEST_CASE("partial gradients match finite differences of the costs") {
  Sampler s(3);
  const auto q = random_game(5, 7, 0.5);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_point(s, 7, 5);
    for (std::size_t i = 0; i < 7; ++i) {
      const double exact = q.partial_gradient(i, x);
      const double fd = oracle::fd_partial(q, i, x, 1e-5);
      REQUIRE(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("box projection is idempotent and non-expansive") {
  Sampler s(4);
  const auto q = random_game(2, 5);
  for (int t = 0; t < 1000; ++t) {
    const auto u = random_point(s, 5, 10);
    const auto v = random_point(s, 5, 10);
    const Vector pu = project_box(q.boxes, u);
    const Vector pv = project_box(q.boxes, v);
    REQUIRE(project_box(q.boxes, std::span<const double>(pu.data(), 5)) == pu);
    double d = 0.0;
    for (std::size_t i = 0; i < 5; ++i) d += (u[i] - v[i]) * (u[i] - v[i]);
    REQUIRE((pu - pv).norm() <= std::sqrt(d) + 1e-12);
  }
}

TEST_CASE("generated mixing matrices satisfy the structural bounds") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 2 + seed;
    for (const auto& g : {random_tree(n, seed), path_graph(n), complete_graph(n), star_graph(n)}) {
      for (const auto& m : {mixing_from_laplacian(g), mixing_metropolis(g)}) {
        const auto N = m.W.rows();
        REQUIRE((m.W * Vector::Ones(N) - Vector::Ones(N)).lpNorm<Eigen::Infinity>() <= 1e-12);
        REQUIRE((m.W - m.W.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        const Eigen::MatrixXd IW = Eigen::MatrixXd::Identity(N, N) - Eigen::MatrixXd(m.W);
        const Vector ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(IW).eigenvalues();
        REQUIRE(ev[0] >= -1e-10);
        REQUIRE(ev[1] >= 1e-10);
        REQUIRE(std::abs(m.sigma_max_IW - oracle::sigma_max(IW)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("I - W annihilates consensual matrices") {
  Sampler s(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = mixing_metropolis(random_tree(3 + seed, seed));
    const auto n = m.W.rows();
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = s.uniform(-10, 10);
    const Matrix X = oracle::replicate(x);
    REQUIRE((X - m.W * X).norm() <= 1e-12);
  }
}

TEST_CASE("F_a vanishes at the equilibrium matrix of interior games") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto q = random_game(seed, 6);
    for (auto& b : q.boxes) b = Box{-1e3, 1e3};
    const auto g = q.to_game();
    const auto m = mixing_from_laplacian(random_tree(6, seed));
    const std::vector<double> alpha(6, 0.7);
    const Matrix Xs = oracle::replicate(oracle::quadratic_ne(q));
    REQUIRE(eval_F_a(g, m, alpha, Xs).norm() <= 1e-12);
  }
}

TEST_CASE("consensual decomposition is orthogonal") {
  Sampler s(6);
  for (int t = 0; t < 200; ++t) {
    const Matrix X = random_matrix(s, 6, 10);
    Vector xs(6);
    for (Eigen::Index i = 0; i < 6; ++i) xs[i] = s.uniform(-10, 10);
    const Matrix Xs = oracle::replicate(xs);
    const Matrix C = consensual_part(X);
    const Matrix N = X - C;
    REQUIRE(std::abs(fro_inner(C - Xs, N)) <= 1e-10 * (1.0 + X.squaredNorm()));
    REQUIRE(std::abs((X - Xs).squaredNorm() - (C - Xs).squaredNorm() - N.squaredNorm()) <=
            1e-10 * (1.0 + (X - Xs).squaredNorm()));
  }
}

TEST_CASE("L_Fa bounds the sampled Lipschitz ratio of F_a") {
  Sampler s(7);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t n = 2 + seed;
    const auto q = random_game(seed, n, 0.5);
    const auto g = q.to_game();
    const auto m = mixing_metropolis(random_tree(n, seed + 100));
    std::vector<double> alpha(n);
    for (auto& a : alpha) a = s.uniform(0.05, 2.0);
    const double L = lipschitz_Fa(g.constants(), m, alpha);
    REQUIRE(L >= oracle::operator_norm(oracle::augmented_operator(q, m.W, alpha)) - 1e-12);
    for (int t = 0; t < 1000; ++t) {
      const Matrix X = random_matrix(s, static_cast<Eigen::Index>(n), 10);
      const Matrix Y = random_matrix(s, static_cast<Eigen::Index>(n), 10);
      REQUIRE((eval_F_a(g, m, alpha, X) - eval_F_a(g, m, alpha, Y)).norm() <= L * (X - Y).norm() + 1e-9);
    }
  }
}

TEST_CASE("restricted constant is a valid lower bound") {
  Sampler s(8);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t n = 2 + seed;
    const auto q = random_game(seed, n, 1.0);
    const auto g = q.to_game();
    const auto m = mixing_from_laplacian(random_tree(n, seed + 7));
    const auto r = restricted_mono_Fa(g.constants(), m);
    REQUIRE(r.mu_r_Fa > 0.0);
    const std::vector<double> alpha(n, r.alpha);
    const Matrix Xs = oracle::replicate(oracle::quadratic_ne(q));
    for (int t = 0; t < 1000; ++t) {
      const Matrix X = project_Omega_a(g.boxes(), random_matrix(s, static_cast<Eigen::Index>(n), 10));
      REQUIRE(fro_inner(eval_F_a(g, m, alpha, X), X - Xs) >= r.mu_r_Fa * (X - Xs).squaredNorm() - 1e-9);
    }
  }
}

TEST_CASE("sampled strong-monotonicity certificate") {
  Sampler s(9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + seed % 10;
    const auto q = random_game(seed, n, 0.05);
    const auto g = q.to_game();
    const auto m = mixing_from_laplacian(random_tree(n, seed + 3));
    const std::vector<double> alpha(n, s.uniform(0.01, 0.1));
    const auto mu = strong_mono_Fa(g.constants(), m, alpha);
    if (!mu) continue;
    INFO("seed " << seed << " n " << n << " alpha " << alpha[0]);
    for (int t = 0; t < 1000; ++t) {
      const Matrix X = random_matrix(s, static_cast<Eigen::Index>(n), 10);
      const Matrix Y = random_matrix(s, static_cast<Eigen::Index>(n), 10);
      const Matrix D = X - Y;
      REQUIRE(fro_inner(eval_F_a(g, m, alpha, X) - eval_F_a(g, m, alpha, Y), D) >= *mu * D.squaredNorm() - 1e-9);
    }
  }
}

TEST_CASE("GRANE contracts per step when the modulus is valid") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t n = 3 + seed;
    const auto q = random_game(seed, n, 0.02);
    const auto g = q.to_game();
    const auto m = mixing_from_laplacian(random_tree(n, seed));
    const auto cfg = make_augmented_config(g.constants(), m, AlphaPolicy{AlphaPolicy::Kind::uniform, 0.01, {}},
                                           MonotonicityPath::strong);
    // Only games on which the claimed modulus is a true lower bound qualify.
    if (cfg.mu_Fa.value() > oracle::monotonicity_modulus(oracle::augmented_operator(q, m.W, cfg.alpha))) continue;
    ++checked;
    const Matrix Xs = oracle::replicate(oracle::quadratic_ne(q));
    SolverConfig sc;
    sc.max_iters = 3000;
    const auto r = grane_run(g, m, cfg, sc, Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), &Xs);
    const double rho = 1.0 - 1.0 / (cfg.gamma * cfg.gamma);
    for (std::size_t k = 1; k < r.trace.records.size(); ++k) {
      const double prev = r.trace.records[k - 1].fro_residual;
      const double cur = r.trace.records[k].fro_residual;
      REQUIRE(cur * cur <= (rho + 1e-9) * prev * prev);
      REQUIRE(r.trace.records[k].relative_error <= r.trace.records[k - 1].relative_error);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("runs are bit-reproducible across backends") {
  const auto q = random_game(77, 50, 0.01);
  const auto g = q.to_game();
  const auto m = mixing_metropolis(random_tree(50, 1));
  const auto cfg = make_augmented_config(g.constants(), m, AlphaPolicy{AlphaPolicy::Kind::uniform, 0.05, {}},
                                         MonotonicityPath::strong);
  SolverConfig sc;
  sc.max_iters = 200;
  sc.backend = kernels::Backend::serial;
  const Matrix X0 = Matrix::Zero(50, 50);
  const auto a = grane_run(g, m, cfg, sc, X0);
  const auto a2 = grane_run(g, m, cfg, sc, X0);
  sc.backend = kernels::Backend::parallel;
  const auto b = grane_run(g, m, cfg, sc, X0);
  CHECK(a.X == a2.X);
  CHECK(a.X == b.X);
  const auto c = acc_grane_run(g, m, cfg, sc, X0);
  sc.backend = kernels::Backend::serial;
  const auto d = acc_grane_run(g, m, cfg, sc, X0);
  CHECK(c.X == d.X);
}
