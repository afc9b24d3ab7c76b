#pragma once

// Confidence radii, constants and parameter solvers.
//
// Rewards are Bernoulli, hence 1/2-sub-gaussian; the sub-gaussian scale is
// fixed and not exposed as a parameter.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lilhdoc {

inline constexpr double kSubGaussianSigma = 0.5;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw std::domain_error(message);
}

inline void require_epsilon(double eps) {
  require(eps > 0.0 && eps <= 1.0, "epsilon must lie in (0, 1]");
}

}  // namespace detail

/// (1 + sqrt(eps))^2 (1 + eps): the exponent relating the LIL radius to the
/// HDoC radius. Strictly increasing in eps.
inline double lil_exponent(double eps) {
  const double s = 1.0 + std::sqrt(eps);
  return s * s * (1.0 + eps);
}

/// Union-bound constant of the finite LIL bound:
/// ((2 + eps) / eps) * (1 / log(1 + eps))^(1 + eps).
inline double c_epsilon(double eps) {
  detail::require_epsilon(eps);
  return ((2.0 + eps) / eps) * std::pow(1.0 / std::log1p(eps), 1.0 + eps);
}

/// Finite-LIL confidence radius after n samples with failure parameter omega:
///
///   (1 + sqrt(eps)) * sqrt((2 sigma^2 (1 + eps) / n) * log(log((1 + eps) n) / omega))
///
/// with sigma = 1/2. When log((1 + eps) n) / omega < 1 the outer log is
/// negative and no real radius exists; +infinity is returned, which makes
/// identification impossible at that n.
inline double lil_radius(std::uint64_t n, double omega, double eps) {
  detail::require(n >= 1, "lil_radius needs at least one sample");
  detail::require(omega > 0.0, "omega must be positive");
  detail::require_epsilon(eps);
  const double nd = static_cast<double>(n);
  const double iterated = std::log((1.0 + eps) * nd);
  const double ratio = iterated / omega;
  if (!(ratio >= 1.0)) return kInfinity;
  const double variance_term =
      2.0 * kSubGaussianSigma * kSubGaussianSigma * (1.0 + eps) / nd;
  return (1.0 + std::sqrt(eps)) * std::sqrt(variance_term * std::log(ratio));
}

/// Identification radius shared by HDoC and LUCB-G: sqrt(log(4 K n^2 / delta) / (2 n)).
inline double hdoc_id_radius(std::uint64_t n, std::uint64_t arms, double delta) {
  detail::require(n >= 1, "hdoc_id_radius needs at least one sample");
  detail::require(arms >= 1, "arm count must be positive");
  detail::require(delta > 0.0, "delta must be positive");
  const double nd = static_cast<double>(n);
  const double k = static_cast<double>(arms);
  detail::require(4.0 * k * nd * nd > delta, "hdoc_id_radius log argument must exceed one");
  return std::sqrt(std::log(4.0 * k * nd * nd / delta) / (2.0 * nd));
}

namespace detail {

// Hot-loop form of the UCB bonus taking log(t) precomputed; the expression is
// the same as ucb_sampling_bonus so both agree bit for bit.
inline double ucb_bonus_from_log(double n, double log_t) {
  return std::sqrt(log_t / (2.0 * n));
}

}  // namespace detail

/// UCB exploration bonus sqrt(log t / (2 n)) used by HDoC and lil'HDoC sampling.
inline double ucb_sampling_bonus(std::uint64_t n, double t) {
  detail::require(n >= 1, "ucb bonus needs at least one sample");
  detail::require(t >= 1.0, "round counter must be at least 1");
  return detail::ucb_bonus_from_log(static_cast<double>(n), std::log(t));
}

/// log log x / log x, the per-term ceiling on lil_exponent(eps) - 1.
inline double iterated_log_ratio(double x) {
  const double lx = std::log(x);
  return std::log(lx) / lx;
}

/// Right-hand side of the epsilon constraint:
/// min(loglog B / log B, loglog C / log C), B = K + 1, C = max(1/delta, e).
inline double epsilon_constraint(std::uint64_t arms, double delta) {
  const double b = static_cast<double>(arms) + 1.0;
  const double c = std::max(1.0 / delta, std::numbers::e);
  return std::min(iterated_log_ratio(b), iterated_log_ratio(c));
}

namespace detail {

inline void require_lil_inputs(std::uint64_t arms, double delta) {
  if (arms < 2) {
    throw std::domain_error("instance too small for lil'HDoC parameterization");
  }
  if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
  if (!(delta < 1.0 / std::numbers::e)) {
    throw std::domain_error("delta must be strictly below 1/e");
  }
}

}  // namespace detail

inline constexpr double kEpsilonRelativeTolerance = 1e-9;

/// Largest eps in (0, 1] with lil_exponent(eps) - 1 <= epsilon_constraint(K, delta).
/// Bisection keeps the lower end feasible, so the result never violates the
/// constraint.
inline double solve_epsilon(std::uint64_t arms, double delta) {
  detail::require_lil_inputs(arms, delta);
  const double bound = epsilon_constraint(arms, delta);
  const auto feasible = [bound](double eps) { return lil_exponent(eps) - 1.0 <= bound; };
  if (feasible(1.0)) return 1.0;  // unreachable: the bound never exceeds 1/e
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kEpsilonRelativeTolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

/// The initialization criterion t^2 / log((1 + eps) t)^r >= RHS with
/// RHS = (1/4) K^(r-1) (1/delta)^(r-1) c_eps^r, compared in log space.
class InitPullCriterion {
 public:
  InitPullCriterion(std::uint64_t arms, double delta, double eps)
      : eps_(eps), r_(lil_exponent(eps)) {
    detail::require_epsilon(eps);
    const double k = static_cast<double>(arms);
    log_rhs_ = std::log(0.25) + (r_ - 1.0) * std::log(k) +
               (r_ - 1.0) * std::log(1.0 / delta) + r_ * std::log(c_epsilon(eps));
  }

  /// log of the left-hand side; -infinity when log((1 + eps) t) <= 0.
  double log_lhs(std::uint64_t t) const {
    const double td = static_cast<double>(t);
    const double l = std::log((1.0 + eps_) * td);
    if (!(l > 0.0)) return -kInfinity;
    return 2.0 * std::log(td) - r_ * std::log(l);
  }

  double log_rhs() const { return log_rhs_; }
  bool satisfied(std::uint64_t t) const { return log_lhs(t) >= log_rhs_; }

 private:
  double eps_;
  double r_;
  double log_rhs_;
};

inline constexpr std::uint64_t kMinInitPulls = 2;

/// Least integer T >= 2 meeting the initialization criterion. Exponential
/// bracketing followed by binary search; the criterion is nondecreasing in T.
inline std::uint64_t solve_T(std::uint64_t arms, double delta, double eps) {
  detail::require_lil_inputs(arms, delta);
  const InitPullCriterion criterion(arms, delta, eps);
  if (criterion.satisfied(kMinInitPulls)) return kMinInitPulls;
  std::uint64_t lo = kMinInitPulls;  // invariant: !satisfied(lo)
  std::uint64_t hi = 2 * kMinInitPulls;
  while (!criterion.satisfied(hi)) {
    if (hi > (std::uint64_t{1} << 62)) throw std::overflow_error("solve_T diverged");
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {  // invariant: !satisfied(lo) && satisfied(hi)
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (criterion.satisfied(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Every constant lil'HDoC needs for a given (K, delta).
struct LilParams {
  std::uint64_t arms = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  double r = 0.0;            // lil_exponent(epsilon)
  double c_eps = 0.0;        // c_epsilon(epsilon)
  double arm_scale = 0.0;    // B = K + 1
  double confidence_scale = 0.0;  // C = max(1/delta, e)
  double omega = 0.0;        // delta / (c_eps K)
  std::uint64_t init_pulls = 0;   // T

  friend bool operator==(const LilParams&, const LilParams&) = default;
};

/// Solves epsilon and T and derives the remaining constants. Fails if omega
/// falls outside (0, log(1 + eps) / e), where the LIL bound is not valid.
inline LilParams lil_params(std::uint64_t arms, double delta) {
  LilParams p;
  p.arms = arms;
  p.delta = delta;
  p.epsilon = solve_epsilon(arms, delta);
  p.r = lil_exponent(p.epsilon);
  p.c_eps = c_epsilon(p.epsilon);
  p.arm_scale = static_cast<double>(arms) + 1.0;
  p.confidence_scale = std::max(1.0 / delta, std::numbers::e);
  p.omega = delta / (p.c_eps * static_cast<double>(arms));
  const double omega_ceiling = std::log1p(p.epsilon) / std::numbers::e;
  if (!(p.omega > 0.0 && p.omega < omega_ceiling)) {
    throw std::domain_error("omega = " + std::to_string(p.omega) +
                            " is outside the LIL range (0, " +
                            std::to_string(omega_ceiling) + ")");
  }
  p.init_pulls = solve_T(arms, delta, p.epsilon);
  return p;
}

/// Upper bound on any t >= 1 with (1/t) log(log((1 + eps) t) / omega) >= c:
///
///   (1/c) log(2 log((1 + eps) / (c omega)) / omega)
///
/// +infinity when an inner log argument is not positive.
inline double iterated_log_inversion_bound(double c, double omega, double eps) {
  detail::require(c > 0.0, "c must be positive");
  detail::require(omega > 0.0 && omega < 1.0, "omega must lie in (0, 1)");
  detail::require(eps > 0.0 && eps < 1.0, "epsilon must lie in (0, 1)");
  const double inner = (1.0 + eps) / (c * omega);
  if (!(inner > 1.0)) return kInfinity;
  const double outer = 2.0 * std::log(inner) / omega;
  if (!(outer > 0.0)) return kInfinity;
  return std::log(outer) / c;
}

/// Predicted per-arm sample count for identifying an arm with threshold gap
/// `gap` (valid with probability >= 1 - delta for a single initial pull):
///
///   2(1+eps)(1+sqrt eps)^2 / gap^2
///     * log(2 c_eps K log(2 c_eps K (1+sqrt eps)^2 (1+eps)^2 / (delta gap^2)) / delta)
///
/// Diagnostic only. A zero gap yields +infinity.
inline double per_arm_sample_bound(double gap, std::uint64_t arms, double delta, double eps) {
  if (!(gap > 0.0)) return kInfinity;
  detail::require_epsilon(eps);
  detail::require(arms >= 1, "arm count must be positive");
  detail::require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  const double s = 1.0 + std::sqrt(eps);
  const double ce = c_epsilon(eps);
  const double k = static_cast<double>(arms);
  const double gap2 = gap * gap;
  const double prefactor = 2.0 * (1.0 + eps) * s * s / gap2;
  const double inner = 2.0 * ce * k * s * s * (1.0 + eps) * (1.0 + eps) / (delta * gap2);
  return prefactor * std::log(2.0 * ce * k * std::log(inner) / delta);
}

}  // namespace lilhdoc
