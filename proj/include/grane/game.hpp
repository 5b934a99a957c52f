#pragma once

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace grane {

/// Dense matrices are row-major so that row i (player i's estimate of the
/// joint action) is contiguous and can be handed to gradient evaluators.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Action interval of one player.
struct Box {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
};

/// Regularity constants of the game mapping.
///   mu_F     strong monotonicity of F on the whole space
///   L_own    Lipschitz constant of grad_i J_i in x_i
///   L_other  Lipschitz constant of grad_i J_i in x_{-i}
///   mu_r     restricted strong monotonicity with respect to the equilibrium
struct GameConstants {
  double mu_F = 0.0;
  std::vector<double> L_own;
  std::vector<double> L_other;
  double mu_r = 0.0;
  // Set when the computed strong monotonicity modulus was negative and got clamped to 0.
  bool mu_F_clamped = false;

  /// max_i sqrt(L_i^2 + L_{-i}^2), the Lipschitz constant of the stacked
  /// per-row gradient map.
  double joint_lipschitz() const;
  /// max_i L_{-i}
  double max_other() const;
};

/// A convex game with scalar actions, given through per-player partial
/// gradients. Immutable after construction.
class Game {
 public:
  using PartialGradient = std::function<double(std::size_t, std::span<const double>)>;

  Game(std::size_t n, PartialGradient gradient, std::vector<Box> boxes, GameConstants constants);

  std::size_t players() const { return n_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  const GameConstants& constants() const { return constants_; }

  /// grad_i J_i(x). Checks the index and that x is finite.
  double partial_gradient(std::size_t i, std::span<const double> x) const;
  /// Same as partial_gradient without argument checks, for inner loops.
  double partial_gradient_unchecked(std::size_t i, std::span<const double> x) const {
    return gradient_(i, x);
  }
  /// Game mapping F(x) = (grad_1 J_1(x), ..., grad_n J_n(x)).
  Vector mapping(std::span<const double> x) const;

 private:
  std::size_t n_;
  PartialGradient gradient_;
  std::vector<Box> boxes_;
  GameConstants constants_;
};

/// Component-wise clamp of v onto the product of boxes.
Vector project_box(std::span<const Box> boxes, std::span<const double> v);

/// J_i(x) = 0.5 a_i x_i^2 + b_i x_i + (sum_{j != i} c_ij x_j) x_i
struct QuadraticGame {
  Vector a;
  Vector b;
  Matrix C;  // zero diagonal
  std::vector<Box> boxes;
  bool antisymmetric = false;

  std::size_t players() const { return static_cast<std::size_t>(a.size()); }
  double cost(std::size_t i, std::span<const double> x) const;
  double partial_gradient(std::size_t i, std::span<const double> x) const;
  /// Jacobian of the (affine) game mapping, diag(a) + C.
  Matrix jacobian() const;
  /// Checks the structural invariants; throws InvalidArgument.
  void validate() const;
  /// Wraps this game (copied) as a gradient-evaluator Game with its exact constants.
  Game to_game() const;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Parameters of the seeded random quadratic family. Box i is
/// [lo_i, lo_i + width_i] with lo_i and width_i drawn from the ranges below.
struct QuadraticFamily {
  std::size_t n = 2;
  std::uint64_t seed = 0;
  Range a_range{1.0, 2.0};
  Range b_range{-1.0, 1.0};
  Range c_range{-0.1, 0.1};
  Range box_lo_range{-2.0, -1.0};
  Range box_width_range{2.0, 4.0};
  bool antisymmetric = true;
};

QuadraticGame make_quadratic_game(const QuadraticFamily& family);

/// Exact constants of a quadratic game (the mapping is affine).
GameConstants quadratic_constants(const QuadraticGame& q);

/// Deterministic uniform sampling used everywhere a seed is taken. The bit
/// stream comes from std::mt19937_64 and is mapped to doubles by hand so that
/// outputs do not depend on the standard library's distribution classes.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double unit();
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace grane
