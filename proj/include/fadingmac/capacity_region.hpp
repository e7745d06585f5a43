#ifndef FADINGMAC_CAPACITY_REGION_HPP
#define FADINGMAC_CAPACITY_REGION_HPP

// Gaussian multiple-access capacity regions viewed as polymatroids
//   { R >= 0 : sum_{i in S} R_i <= f(S) for every nonempty S }
// with f(S) = 1/2 ln(1 + sum_{i in S} H_i P_i / N0) in nats.
//
// Users are 0-based throughout the C++ interface; a subset is a bitmask with
// bit i set when user i belongs to it.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fadingmac/errors.hpp"

namespace fadingmac {

using RateVector = Eigen::VectorXd;

inline constexpr std::size_t kMaxUsers = 20;
/// Absolute feasibility tolerance (nats) used by every caller that checks membership.
inline constexpr double kFeasibilityTol = 1e-9;
/// Residual violation below which approximate_project stops projecting.
inline constexpr double kProjectionTol = 1e-12;
inline constexpr std::size_t kProjectionCap = 1'000'000;
inline constexpr std::size_t kDykstraCycleCap = 1'000'000;
inline constexpr double kDykstraStepTol = 1e-10;

struct SubsetId {
  std::uint32_t mask = 0;

  std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask)); }
  bool contains(std::size_t user) const { return (mask >> user) & 1u; }

  static SubsetId full(std::size_t users) { return {static_cast<std::uint32_t>((1u << users) - 1u)}; }
  static SubsetId single(std::size_t user) { return {static_cast<std::uint32_t>(1u << user)}; }

  friend bool operator==(SubsetId, SubsetId) = default;
};

/// 1-based listing, e.g. "{1,3}".
inline std::string to_string(SubsetId s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < 32; ++i) {
    if (!s.contains(i)) continue;
    if (!first) out += ',';
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

/// Shannon capacity of an AWGN channel, 1/2 ln(1 + power/noise) nats.
inline double awgn_capacity(double power, double noise) {
  if (!std::isfinite(power) || !std::isfinite(noise) || power < 0.0 || noise <= 0.0)
    throw domain_error("awgn_capacity: need finite power >= 0 and noise > 0");
  return 0.5 * std::log1p(power / noise);
}

class PowerProfile {
 public:
  PowerProfile(std::vector<double> powers, double noise) : powers_(std::move(powers)), noise_(noise) {
    if (powers_.empty() || powers_.size() > kMaxUsers)
      throw domain_error("PowerProfile: user count must be in [1, " + std::to_string(kMaxUsers) + "]");
    for (double p : powers_)
      if (!std::isfinite(p) || p <= 0.0) throw domain_error("PowerProfile: powers must be finite and > 0");
    if (!std::isfinite(noise_) || noise_ <= 0.0) throw domain_error("PowerProfile: noise must be finite and > 0");
  }

  std::size_t users() const { return powers_.size(); }
  const std::vector<double>& powers() const { return powers_; }
  double power(std::size_t i) const { return powers_[i]; }
  double noise() const { return noise_; }

  friend bool operator==(const PowerProfile&, const PowerProfile&) = default;

 private:
  std::vector<double> powers_;
  double noise_;
};

class ChannelState {
 public:
  explicit ChannelState(std::vector<double> gains) : gains_(std::move(gains)) {
    if (gains_.empty() || gains_.size() > kMaxUsers) throw domain_error("ChannelState: bad user count");
    for (double h : gains_)
      if (!std::isfinite(h) || h < 0.0) throw domain_error("ChannelState: gains must be finite and >= 0");
  }

  std::size_t users() const { return gains_.size(); }
  const std::vector<double>& gains() const { return gains_; }
  double gain(std::size_t i) const { return gains_[i]; }

  friend bool operator==(const ChannelState&, const ChannelState&) = default;

 private:
  std::vector<double> gains_;
};

/// Constraint system { x >= 0 : sum_{i in S} x_i <= f(S) } given by a rank table
/// indexed by subset mask (entry 0 is the empty set and is always 0).
class Polymatroid {
 public:
  Polymatroid(std::size_t users, std::vector<double> ranks) : users_(users), ranks_(std::move(ranks)) {
    if (users_ == 0 || users_ > kMaxUsers) throw domain_error("Polymatroid: bad user count");
    if (ranks_.size() != (std::size_t{1} << users_)) throw domain_error("Polymatroid: rank table size must be 2^M");
    ranks_[0] = 0.0;
  }

  std::size_t users() const { return users_; }
  std::size_t subset_count() const { return ranks_.size() - 1; }

  double rank(SubsetId s) const {
    if (s.mask == 0 || s.mask >= ranks_.size()) throw domain_error("rank: subset must be nonempty and within 1..2^M-1");
    return ranks_[s.mask];
  }

  std::span<const double> rank_table() const { return ranks_; }

 private:
  std::size_t users_;
  std::vector<double> ranks_;
};

/// Instantaneous capacity region C_g(P, H). Immutable once built.
class GaussianMacRegion : public Polymatroid {
 public:
  GaussianMacRegion(PowerProfile profile, ChannelState state)
      : Polymatroid(check_users(profile, state), rank_table_for(profile, state)),
        profile_(std::move(profile)),
        state_(std::move(state)) {}

  const PowerProfile& profile() const { return profile_; }
  const ChannelState& state() const { return state_; }

 private:
  static std::size_t check_users(const PowerProfile& p, const ChannelState& s) {
    if (p.users() != s.users()) throw domain_error("GaussianMacRegion: gains and powers differ in length");
    return p.users();
  }

  static std::vector<double> rank_table_for(const PowerProfile& p, const ChannelState& s) {
    const std::size_t m = p.users();
    std::vector<double> received(std::size_t{1} << m, 0.0);
    std::vector<double> ranks(received.size(), 0.0);
    for (std::uint32_t mask = 1; mask < received.size(); ++mask) {
      const std::uint32_t low = mask & (~mask + 1u);
      const auto user = static_cast<std::size_t>(std::countr_zero(low));
      received[mask] = received[mask ^ low] + s.gain(user) * p.power(user);
      ranks[mask] = awgn_capacity(received[mask], p.noise());
    }
    return ranks;
  }

  PowerProfile profile_;
  ChannelState state_;
};

/// sums[mask] = sum_{i in mask} x_i for every mask.
inline std::vector<double> subset_sums(const RateVector& x) {
  const auto m = static_cast<std::size_t>(x.size());
  std::vector<double> sums(std::size_t{1} << m, 0.0);
  for (std::uint32_t mask = 1; mask < sums.size(); ++mask) {
    const std::uint32_t low = mask & (~mask + 1u);
    sums[mask] = sums[mask ^ low] + x[std::countr_zero(low)];
  }
  return sums;
}

inline void require_users(const Polymatroid& region, const RateVector& x, const char* where) {
  if (static_cast<std::size_t>(x.size()) != region.users())
    throw domain_error(std::string(where) + ": vector length does not match user count");
}

struct Violation {
  SubsetId subset;
  double amount;
};

/// Every subset constraint exceeded by more than tol, largest excess first
/// (ties broken by ascending mask).
inline std::vector<Violation> violations(const Polymatroid& region, const RateVector& r, double tol) {
  require_users(region, r, "violations");
  if (!(tol >= 0.0)) throw domain_error("violations: tol must be >= 0");
  const auto sums = subset_sums(r);
  const auto ranks = region.rank_table();
  std::vector<Violation> out;
  for (std::uint32_t mask = 1; mask < sums.size(); ++mask) {
    const double excess = sums[mask] - ranks[mask];
    if (excess > tol) out.push_back({{mask}, excess});
  }
  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) { return a.amount > b.amount; });
  return out;
}

/// Largest constraint excess including the orthant (-min_i r_i); <= 0 means feasible.
inline double max_violation(const Polymatroid& region, const RateVector& r) {
  require_users(region, r, "max_violation");
  const auto sums = subset_sums(r);
  const auto ranks = region.rank_table();
  double worst = -r.minCoeff();
  for (std::size_t mask = 1; mask < sums.size(); ++mask) worst = std::max(worst, sums[mask] - ranks[mask]);
  return worst;
}

inline bool is_feasible(const Polymatroid& region, const RateVector& r, double tol = kFeasibilityTol) {
  return max_violation(region, r) <= tol;
}

inline void require_permutation(std::span<const std::size_t> order, std::size_t users) {
  if (order.size() != users) throw domain_error("order must list every user exactly once");
  std::vector<bool> seen(users, false);
  for (std::size_t u : order) {
    if (u >= users || seen[u]) throw domain_error("order must be a permutation of the users");
    seen[u] = true;
  }
}

/// Chain vertex: R_{order[j]} = f(order[0..j]) - f(order[0..j-1]).
inline RateVector dominant_face_vertex(const Polymatroid& region, std::span<const std::size_t> order) {
  require_permutation(order, region.users());
  const auto ranks = region.rank_table();
  RateVector r(static_cast<Eigen::Index>(region.users()));
  std::uint32_t prefix = 0;
  for (std::size_t user : order) {
    const std::uint32_t next = prefix | (1u << user);
    r[static_cast<Eigen::Index>(user)] = ranks[next] - ranks[prefix];
    prefix = next;
  }
  return r;
}

/// Approximate projection: exact projections onto the hyperplanes of violated
/// subset constraints, always taking the currently most violated one and
/// re-scanning after each, then clamping negative coordinates and re-scanning.
/// Each step is a projection onto a half-space containing the region, so the
/// result is never farther than y from any feasible point.
inline RateVector approximate_project(const Polymatroid& region, const RateVector& y, double tol = kProjectionTol) {
  require_users(region, y, "approximate_project");
  if (!y.allFinite()) throw domain_error("approximate_project: input must be finite");
  const auto ranks = region.rank_table();
  RateVector x = y;
  std::size_t projections = 0;
  for (;;) {
    for (;;) {
      const auto sums = subset_sums(x);
      std::uint32_t worst = 0;
      double excess = tol;
      for (std::uint32_t mask = 1; mask < sums.size(); ++mask) {
        const double e = sums[mask] - ranks[mask];
        if (e > excess) {
          excess = e;
          worst = mask;
        }
      }
      if (worst == 0) break;
      if (++projections > kProjectionCap)
        throw nonconvergence_error("approximate_project: projection cap exceeded");
      const SubsetId s{worst};
      const double shift = excess / static_cast<double>(s.size());
      for (std::size_t i = 0; i < region.users(); ++i)
        if (s.contains(i)) x[static_cast<Eigen::Index>(i)] -= shift;
    }
    if (x.minCoeff() >= 0.0) return x;
    x = x.cwiseMax(0.0);
  }
}

/// Euclidean projection onto the region by Dykstra's corrected alternating
/// projections over all subset half-spaces plus the orthant. Test oracle;
/// intended for M <= 4. Stops once a full cycle moves the iterate and every
/// correction term by less than step_tol in total (x alone can stall while
/// the corrections are still moving).
inline RateVector exact_project_oracle(const Polymatroid& region, const RateVector& y,
                                       double step_tol = kDykstraStepTol,
                                       std::size_t cycle_cap = kDykstraCycleCap) {
  require_users(region, y, "exact_project_oracle");
  if (!y.allFinite()) throw domain_error("exact_project_oracle: input must be finite");
  const auto m = static_cast<Eigen::Index>(region.users());
  const auto ranks = region.rank_table();
  const std::size_t sets = region.subset_count();
  // Correction terms: one per half-space, the last one for the orthant.
  std::vector<RateVector> corr(sets + 1, RateVector::Zero(m));
  RateVector x = y;
  RateVector z(m);
  for (std::size_t cycle = 0; cycle < cycle_cap; ++cycle) {
    double moved = 0.0;
    const RateVector start = x;
    for (std::uint32_t mask = 1; mask <= sets; ++mask) {
      RateVector& p = corr[mask - 1];
      z = x + p;
      const SubsetId s{mask};
      double sum = 0.0;
      for (Eigen::Index i = 0; i < m; ++i)
        if (s.contains(static_cast<std::size_t>(i))) sum += z[i];
      x = z;
      const double excess = sum - ranks[mask];
      if (excess > 0.0) {
        const double shift = excess / static_cast<double>(s.size());
        for (Eigen::Index i = 0; i < m; ++i)
          if (s.contains(static_cast<std::size_t>(i))) x[i] -= shift;
      }
      moved += (z - x - p).squaredNorm();
      p = z - x;
    }
    RateVector& p = corr[sets];
    z = x + p;
    x = z.cwiseMax(0.0);
    moved += (z - x - p).squaredNorm();
    p = z - x;
    moved += (x - start).squaredNorm();
    if (std::sqrt(moved) < step_tol) return x;
  }
  throw nonconvergence_error("exact_project_oracle: cycle cap exceeded");
}

/// Expansion by delta: every subset bound relaxed to f(S) + delta, orthant unchanged.
inline Polymatroid expand(const Polymatroid& region, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw domain_error("expand: delta must be finite and >= 0");
  std::vector<double> ranks(region.rank_table().begin(), region.rank_table().end());
  for (std::size_t mask = 1; mask < ranks.size(); ++mask) ranks[mask] += delta;
  return Polymatroid(region.users(), std::move(ranks));
}

/// Smallest d with mutual containment under d-expansion. Both systems share
/// their constraint normals, so this is the largest per-subset rank gap.
inline double region_distance(const Polymatroid& a, const Polymatroid& b) {
  if (a.users() != b.users()) throw domain_error("region_distance: user counts differ");
  const auto ra = a.rank_table();
  const auto rb = b.rank_table();
  double d = 0.0;
  for (std::size_t mask = 1; mask < ra.size(); ++mask) d = std::max(d, std::abs(ra[mask] - rb[mask]));
  return d;
}

inline double region_distance(const GaussianMacRegion& a, const GaussianMacRegion& b) {
  if (a.users() != b.users()) throw domain_error("region_distance: user counts differ");
  if (!(a.profile() == b.profile())) throw domain_error("region_distance: regions must share a power profile");
  return region_distance(static_cast<const Polymatroid&>(a), static_cast<const Polymatroid&>(b));
}

/// Maps a chain vertex of expand(region, delta) to a point of the original
/// dominant face by lowering the coordinate of the chain's first user by delta.
inline RateVector expansion_face_witness(const Polymatroid& region, double delta, const RateVector& vertex,
                                         std::span<const std::size_t> order) {
  require_users(region, vertex, "expansion_face_witness");
  const RateVector expected = dominant_face_vertex(expand(region, delta), order);
  const double scale = 1.0 + expected.cwiseAbs().maxCoeff();
  if ((vertex - expected).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw domain_error("expansion_face_witness: input is not the chain vertex of the expanded region for this order");
  RateVector witness = vertex;
  witness[static_cast<Eigen::Index>(order.front())] -= delta;
  return witness;
}

}  // namespace fadingmac

#endif  // FADINGMAC_CAPACITY_REGION_HPP
