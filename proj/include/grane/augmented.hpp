#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grane/game.hpp"
#include "grane/kernels.hpp"
#include "grane/network.hpp"

namespace grane {

/// Which monotonicity result backs the step size and condition number.
enum class MonotonicityPath {
  strong,      // full strong monotonicity of F_a (requires mu_F > sqrt(n-1) L_{-i})
  restricted,  // restricted strong monotonicity towards the equilibrium matrix
};

/// Per-player scalings and the derived constants of
///   F_a(X) = (I - W) X + Diag(alpha) Ftilde(X).
struct AugmentedConfig {
  std::vector<double> alpha;
  double L_Fa = 0.0;
  std::optional<double> mu_Fa;
  std::optional<double> mu_r_Fa;
  std::optional<double> beta;  // restricted path only
  MonotonicityPath path = MonotonicityPath::strong;
  double gamma = 0.0;

  /// The modulus matching `path`.
  double modulus() const { return path == MonotonicityPath::strong ? mu_Fa.value() : mu_r_Fa.value(); }
  /// mu / L_Fa^2
  double auto_step() const { return modulus() / (L_Fa * L_Fa); }
};

// --- mapping evaluation -----------------------------------------------------

/// Component i is grad_i J_i at row i of X.
Vector eval_tilde_F(const Game& game, const Matrix& X);

Matrix eval_F_a(const Game& game, const MixingMatrix& m, std::span<const double> alpha, const Matrix& X,
                kernels::Backend backend = kernels::Backend::parallel);

/// Clamps the diagonal onto the boxes. Off-diagonal entries are unconstrained.
Matrix project_Omega_a(std::span<const Box> boxes, Matrix X);
bool in_Omega_a(std::span<const Box> boxes, const Matrix& X);

/// Column-mean matrix: orthogonal projection onto consensual (equal-row) matrices.
Matrix consensual_part(const Matrix& X);

/// Frobenius inner product.
double fro_inner(const Matrix& A, const Matrix& B);

// --- constants --------------------------------------------------------------

/// L_Fa = max_i alpha_i sqrt(L_i^2 + L_{-i}^2) + sigma_max(I - W)
double lipschitz_Fa(const GameConstants& k, const MixingMatrix& m, std::span<const double> alpha);

struct StrongMonotonicityTerms {
  double a1 = 0.0;  // lambda~_min(I-W) - 0.5 max_i alpha_i (sqrt(mu_F^2 + L_{-i}^2) - mu_F)
  double a2 = 0.0;  // min_i (alpha_i / n) (mu_F - L_{-i} sqrt(n - 1))
};
StrongMonotonicityTerms strong_mono_terms(const GameConstants& k, const MixingMatrix& m,
                                          std::span<const double> alpha);

/// min(a1, a2) when both are positive and mu_F > 0, otherwise nothing.
std::optional<double> strong_mono_Fa(const GameConstants& k, const MixingMatrix& m, std::span<const double> alpha);

struct RestrictedSetting {
  double alpha = 0.0;
  double beta = 0.0;
  double L_F = 0.0;  // max_i sqrt(L_i^2 + L_{-i}^2)
  double b1 = 0.0;
  double b2 = 0.0;
  double mu_r_Fa = 0.0;  // min(b1, b2)
};

/// Restricted constant for a given uniform alpha and free parameter beta > 0.
/// Does not check positivity of the result.
RestrictedSetting restricted_constant(const GameConstants& k, const MixingMatrix& m, double alpha, double beta);

/// The beta solving beta^2 + 2 beta = mu_r / (2 n L_F), positive root.
double restricted_default_beta(const GameConstants& k, std::size_t n);

/// Automatic uniform alpha: beta from restricted_default_beta (unless
/// overridden), alpha = lambda~_min / (2 L_F (1 + 1/beta^2)). Throws when
/// mu_r <= 0 or L_F <= 0.
RestrictedSetting restricted_mono_Fa(const GameConstants& k, const MixingMatrix& m,
                                     std::optional<double> beta_override = std::nullopt);

/// How alpha is chosen.
struct AlphaPolicy {
  enum class Kind { explicit_values, uniform, restricted_auto };
  Kind kind = Kind::uniform;
  double value = 1.0;          // uniform
  std::vector<double> values;  // explicit_values
};

class MissingConstant : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolves alpha and all derived constants. Throws MissingConstant when the
/// selected path's modulus is undefined (for example a2 <= 0 on the strong
/// path) and InvalidArgument for malformed inputs.
AugmentedConfig make_augmented_config(const GameConstants& k, const MixingMatrix& m, const AlphaPolicy& policy,
                                      MonotonicityPath path, std::optional<double> beta = std::nullopt);

struct ConditionReport {
  double gamma = 0.0;  // L_Fa / modulus of the configured path
  std::optional<double> C;                  // 16 (n-1) lambda~_min / mu_F
  std::optional<double> alpha_recommended;  // C / 9
  double H = 0.0;                           // max_i L_{-i}
  bool small_coupling = false;              // H <= 0.5 mu_F / sqrt(n-1)
  bool alpha_is_recommended = false;        // config uses uniform alpha == C/9
  std::optional<double> gamma_at_recommended;
  std::optional<double> bound;            // 2n L_F/mu_F + (9/8) lambda_max/lambda~_min
  std::optional<double> bound_corrected;  // same with the n/(n-1) factor on the graph term
  std::optional<bool> bound_holds;        // gamma_at_recommended <= bound
  std::optional<bool> bound_corrected_holds;
};

ConditionReport condition_numbers(const AugmentedConfig& cfg, const GameConstants& k, const MixingMatrix& m);

struct CertificateReport {
  bool consensus = false;
  bool variational_inequality = false;
  bool stationarity = false;
  double consensus_gap = 0.0;
  double worst_vi_value = 0.0;
  double worst_stationarity_value = 0.0;
  std::vector<std::string> issues;
  bool ok() const { return consensus && variational_inequality && stationarity; }
};

struct CertificateOptions {
  std::size_t samples = 1000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  // Off-diagonal samples are drawn from X*_ij + U[-radius, radius]; unbounded
  // box sides are replaced by x*_i +- radius.
  double radius = 10.0;
};

/// Equilibrium-matrix certificate: consensus of the rows, the variational
/// inequality <F_a(X*), X - X*> >= -tol on sampled X in Omega_a, and
/// per-player stationarity at the box extremes. Throws when X* is infeasible.
CertificateReport ne_certificate(const Game& game, const MixingMatrix& m, const AugmentedConfig& cfg,
                                 const Matrix& X_star, const CertificateOptions& options = {});

std::string to_string(MonotonicityPath path);

}  // namespace grane
