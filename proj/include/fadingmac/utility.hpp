#ifndef FADINGMAC_UTILITY_HPP
#define FADINGMAC_UTILITY_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fadingmac/capacity_region.hpp"
#include "fadingmac/errors.hpp"

namespace fadingmac {

enum class UtilityFamily { weighted_log, weighted_linear };

inline std::string_view to_string(UtilityFamily f) {
  return f == UtilityFamily::weighted_log ? "weighted-log" : "weighted-linear";
}

inline UtilityFamily parse_utility_family(std::string_view tag) {
  if (tag == "weighted-log") return UtilityFamily::weighted_log;
  if (tag == "weighted-linear") return UtilityFamily::weighted_linear;
  throw config_error("unknown utility family '" + std::string(tag) + "'");
}

/// Concave, nondecreasing utility. weighted-log: sum w_i ln(1 + r_i);
/// weighted-linear: sum w_i r_i. The box holds the per-user rate ceilings
/// R_i^max over which the growth constant A is certified.
class UtilityModel {
 public:
  UtilityModel(UtilityFamily family, Eigen::VectorXd weights, Eigen::VectorXd box)
      : family_(family), weights_(std::move(weights)), box_(std::move(box)) {
    if (weights_.size() == 0) throw domain_error("UtilityModel: no weights");
    if (!(weights_.array() > 0.0).all() || !weights_.allFinite())
      throw domain_error("UtilityModel: weights must be finite and > 0");
    if (box_.size() != weights_.size()) throw domain_error("UtilityModel: box must have one bound per user");
    if (!(box_.array() >= 0.0).all() || !box_.allFinite()) throw domain_error("UtilityModel: box bounds must be >= 0");
  }

  UtilityFamily family() const { return family_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& box() const { return box_; }
  std::size_t users() const { return static_cast<std::size_t>(weights_.size()); }

 private:
  UtilityFamily family_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd box_;
};

/// Singleton-rank ceilings of the best region reachable with gains <= h_max.
/// Every region with gains in [0, h_max] lies inside this box.
inline Eigen::VectorXd certified_box(const PowerProfile& profile, double h_max) {
  Eigen::VectorXd box(static_cast<Eigen::Index>(profile.users()));
  for (std::size_t i = 0; i < profile.users(); ++i)
    box[static_cast<Eigen::Index>(i)] = awgn_capacity(h_max * profile.power(i), profile.noise());
  return box;
}

inline void require_rates(const UtilityModel& u, const RateVector& r, const char* where) {
  if (static_cast<std::size_t>(r.size()) != u.users())
    throw domain_error(std::string(where) + ": rate vector length does not match utility");
}

inline double value(const UtilityModel& u, const RateVector& r) {
  require_rates(u, r, "value");
  if ((r.array() < 0.0).any()) throw domain_error("value: rates must be >= 0");
  if (u.family() == UtilityFamily::weighted_linear) return u.weights().dot(r);
  return (u.weights().array() * r.array().log1p()).sum();
}

/// Gradient for weighted-log (unique), the weight vector for weighted-linear.
inline Eigen::VectorXd subgradient(const UtilityModel& u, const RateVector& r) {
  require_rates(u, r, "subgradient");
  if ((r.array() < 0.0).any()) throw domain_error("subgradient: rates must be >= 0");
  if (u.family() == UtilityFamily::weighted_linear) return u.weights();
  return (u.weights().array() / (1.0 + r.array())).matrix();
}

struct UtilityConstants {
  double B = 0.0;            // sup of the subgradient norm over the orthant
  std::optional<double> A;   // quadratic growth around the maximizer; absent for weighted-linear

  double growth() const {
    if (!A) throw domain_error("growth constant A is undefined for a weighted-linear utility");
    return *A;
  }
};

/// weighted-log: B = ||w|| (gradient at the origin) and A = min_i w_i / (2 (1 + R_i^max)^2),
/// half the smallest Hessian curvature on the box. At a constrained maximizer the
/// first-order term is nonpositive, so u(R*) - u(R) >= A ||R* - R||^2 there.
inline UtilityConstants constants(const UtilityModel& u, const Eigen::VectorXd& box) {
  if (box.size() != u.weights().size()) throw domain_error("constants: box must have one bound per user");
  if (!(box.array() >= 0.0).all()) throw domain_error("constants: box bounds must be >= 0");
  UtilityConstants c;
  c.B = u.weights().norm();
  if (u.family() == UtilityFamily::weighted_log)
    c.A = 0.5 * (u.weights().array() / (1.0 + box.array()).square()).minCoeff();
  return c;
}

inline UtilityConstants constants(const UtilityModel& u) { return constants(u, u.box()); }

}  // namespace fadingmac

#endif  // FADINGMAC_UTILITY_HPP
