#include "grane/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace grane {

namespace {

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + ": non-finite input");
    }
  }
}

}  // namespace

double GameConstants::joint_lipschitz() const {
  double out = 0.0;
  for (std::size_t i = 0; i < L_own.size(); ++i) {
    const double other = i < L_other.size() ? L_other[i] : 0.0;
    out = std::max(out, std::hypot(L_own[i], other));
  }
  return out;
}

double GameConstants::max_other() const {
  double out = 0.0;
  for (double v : L_other) out = std::max(out, v);
  return out;
}

Game::Game(std::size_t n, PartialGradient gradient, std::vector<Box> boxes, GameConstants constants)
    : n_(n), gradient_(std::move(gradient)), boxes_(std::move(boxes)), constants_(std::move(constants)) {
  if (n_ == 0) throw InvalidArgument("game needs at least one player");
  if (!gradient_) throw InvalidArgument("game needs a gradient evaluator");
  if (boxes_.size() != n_) throw InvalidArgument("one box per player required");
  for (const Box& b : boxes_) {
    if (!(b.lo <= b.hi)) throw InvalidArgument("box with lo > hi");
  }
  if (constants_.L_own.empty()) constants_.L_own.assign(n_, 0.0);
  if (constants_.L_other.empty()) constants_.L_other.assign(n_, 0.0);
  if (constants_.L_own.size() != n_ || constants_.L_other.size() != n_) {
    throw InvalidArgument("per-player Lipschitz constants must have length n");
  }
  const auto negative = [](double v) { return v < 0.0 || std::isnan(v); };
  if (negative(constants_.mu_F) || negative(constants_.mu_r) ||
      std::any_of(constants_.L_own.begin(), constants_.L_own.end(), negative) ||
      std::any_of(constants_.L_other.begin(), constants_.L_other.end(), negative)) {
    throw InvalidArgument("game constants must be nonnegative");
  }
}

double Game::partial_gradient(std::size_t i, std::span<const double> x) const {
  if (i >= n_) {
    std::ostringstream msg;
    msg << "player index " << i << " out of range for n=" << n_;
    throw InvalidArgument(msg.str());
  }
  if (x.size() != n_) throw InvalidArgument("joint action has wrong length");
  require_finite(x, "partial_gradient");
  return gradient_(i, x);
}

Vector Game::mapping(std::span<const double> x) const {
  if (x.size() != n_) throw InvalidArgument("joint action has wrong length");
  require_finite(x, "mapping");
  Vector out(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) out[static_cast<Eigen::Index>(i)] = gradient_(i, x);
  return out;
}

Vector project_box(std::span<const Box> boxes, std::span<const double> v) {
  if (boxes.size() != v.size()) throw InvalidArgument("project_box: dimension mismatch");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = boxes[i].clamp(v[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Quadratic family

double QuadraticGame::partial_gradient(std::size_t i, std::span<const double> x) const {
  const auto n = players();
  const auto ii = static_cast<Eigen::Index>(i);
  double coupling = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) coupling += C(ii, static_cast<Eigen::Index>(j)) * x[j];
  }
  return a[ii] * x[i] + b[ii] + coupling;
}

double QuadraticGame::cost(std::size_t i, std::span<const double> x) const {
  const auto n = players();
  const auto ii = static_cast<Eigen::Index>(i);
  double coupling = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) coupling += C(ii, static_cast<Eigen::Index>(j)) * x[j];
  }
  return 0.5 * a[ii] * x[i] * x[i] + b[ii] * x[i] + coupling * x[i];
}

Matrix QuadraticGame::jacobian() const {
  Matrix J = C;
  J.diagonal() = a;
  return J;
}

void QuadraticGame::validate() const {
  const auto n = a.size();
  if (n < 1) throw InvalidArgument("quadratic game needs n >= 1");
  if (b.size() != n || C.rows() != n || C.cols() != n) {
    throw InvalidArgument("quadratic game: a, b, C dimensions disagree");
  }
  if (boxes.size() != static_cast<std::size_t>(n)) throw InvalidArgument("quadratic game: one box per player");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(a[i] > 0.0) || !std::isfinite(a[i])) throw InvalidArgument("quadratic game: a_i must be > 0");
    if (!std::isfinite(b[i])) throw InvalidArgument("quadratic game: b_i must be finite");
    if (C(i, i) != 0.0) throw InvalidArgument("quadratic game: C must have zero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(C(i, j))) throw InvalidArgument("quadratic game: C must be finite");
      if (antisymmetric && C(i, j) != -C(j, i)) {
        throw InvalidArgument("quadratic game: antisymmetric flag set but C != -C^T");
      }
    }
    const Box& box = boxes[static_cast<std::size_t>(i)];
    if (!(box.lo <= box.hi)) throw InvalidArgument("quadratic game: box with lo > hi");
  }
}

Game QuadraticGame::to_game() const {
  validate();
  auto shared = std::make_shared<const QuadraticGame>(*this);
  return Game(
      players(),
      [shared](std::size_t i, std::span<const double> x) { return shared->partial_gradient(i, x); },
      boxes, quadratic_constants(*this));
}

QuadraticGame make_quadratic_game(const QuadraticFamily& f) {
  const auto bad = [](const Range& r) { return !(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi); };
  if (f.n < 2) throw InvalidArgument("make_quadratic_game: n >= 2 required");
  if (bad(f.a_range) || bad(f.b_range) || bad(f.c_range) || bad(f.box_lo_range) || bad(f.box_width_range)) {
    throw InvalidArgument("make_quadratic_game: invalid range");
  }
  if (!(f.a_range.lo > 0.0)) throw InvalidArgument("make_quadratic_game: a-range must be strictly positive");
  if (f.box_width_range.lo < 0.0) throw InvalidArgument("make_quadratic_game: box widths must be nonnegative");

  const auto n = static_cast<Eigen::Index>(f.n);
  Sampler rng(f.seed);
  QuadraticGame q;
  q.antisymmetric = f.antisymmetric;
  q.a.resize(n);
  q.b.resize(n);
  q.C = Matrix::Zero(n, n);
  // Draw order is part of the reproducibility contract: a, b, upper triangle
  // of C (row-major), lower triangle when not antisymmetric, then boxes.
  for (Eigen::Index i = 0; i < n; ++i) q.a[i] = rng.uniform(f.a_range.lo, f.a_range.hi);
  for (Eigen::Index i = 0; i < n; ++i) q.b[i] = rng.uniform(f.b_range.lo, f.b_range.hi);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) q.C(i, j) = rng.uniform(f.c_range.lo, f.c_range.hi);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      q.C(i, j) = f.antisymmetric ? -q.C(j, i) : rng.uniform(f.c_range.lo, f.c_range.hi);
    }
  }
  q.boxes.resize(f.n);
  for (auto& box : q.boxes) {
    box.lo = rng.uniform(f.box_lo_range.lo, f.box_lo_range.hi);
    box.hi = box.lo + rng.uniform(f.box_width_range.lo, f.box_width_range.hi);
  }
  return q;
}

GameConstants quadratic_constants(const QuadraticGame& q) {
  const auto n = static_cast<Eigen::Index>(q.players());
  GameConstants k;
  k.L_own.resize(q.players());
  k.L_other.resize(q.players());
  for (Eigen::Index i = 0; i < n; ++i) {
    k.L_own[static_cast<std::size_t>(i)] = q.a[i];
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) row += q.C(i, j) * q.C(i, j);
    }
    k.L_other[static_cast<std::size_t>(i)] = std::sqrt(row);
  }

  double modulus = 0.0;
  if (q.antisymmetric) {
    // The antisymmetric part contributes nothing to <F(x)-F(y), x-y>.
    modulus = q.a.minCoeff();
  } else {
    const Eigen::MatrixXd J = q.jacobian();
    const Eigen::MatrixXd sym = 0.5 * (J + J.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    modulus = eig.eigenvalues().minCoeff();
  }
  if (modulus < 0.0) {
    k.mu_F_clamped = true;
    modulus = 0.0;
  }
  // For an affine mapping the restricted modulus equals the global one.
  k.mu_F = modulus;
  k.mu_r = modulus;
  return k;
}

// ---------------------------------------------------------------------------

double Sampler::unit() {
  // 53 high bits -> [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t Sampler::below(std::size_t bound) {
  if (bound == 0) throw InvalidArgument("Sampler::below: empty range");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t r = next_u64();
  while (r >= limit) r = next_u64();
  return static_cast<std::size_t>(r % b);
}

}  // namespace grane
