#ifndef FADINGMAC_REPORT_HPP
#define FADINGMAC_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

namespace fadingmac {

/// One checked inequality. kind "le": observed <= bound + tolerance.
/// kind "near": |observed - bound| <= tolerance (bound is the target).
struct Claim {
  std::string id;
  std::string kind = "le";
  double observed = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
  bool asserted = true;  // false: reported only, never fails a run
};

inline Claim claim_le(std::string id, double observed, double bound, double tol, std::string note = {}) {
  Claim c{std::move(id), "le", observed, bound, tol, false, std::move(note)};
  c.pass = std::isfinite(observed) && observed <= bound + tol;
  return c;
}

inline Claim claim_near(std::string id, double observed, double target, double tol, std::string note = {}) {
  Claim c{std::move(id), "near", observed, target, tol, false, std::move(note)};
  c.pass = std::isfinite(observed) && std::abs(observed - target) <= tol;
  return c;
}

struct VerificationReport {
  std::vector<Claim> claims;

  bool all_pass() const {
    for (const auto& c : claims)
      if (c.asserted && !c.pass) return false;
    return true;
  }
  const Claim* find(std::string_view id) const {
    for (const auto& c : claims)
      if (c.id == id) return &c;
    return nullptr;
  }
  void append(const VerificationReport& other) { claims.insert(claims.end(), other.claims.begin(), other.claims.end()); }
};

/// Non-finite observations become null so the document stays valid JSON.
inline nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json to_json(const Claim& c) {
  nlohmann::json j;
  j["id"] = c.id;
  j["kind"] = c.kind;
  j["observed"] = json_number(c.observed);
  j["bound"] = json_number(c.bound);
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  j["asserted"] = c.asserted;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : r.claims) arr.push_back(to_json(c));
  return nlohmann::json{{"claims", arr}, {"pass", r.all_pass()}};
}

inline std::string format_claim(const Claim& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-4s %-24s observed=%.6g %s%.6g (tol %.1g)", !c.asserted ? "INFO" : c.pass ? "PASS" : "FAIL", c.id.c_str(),
                c.observed, c.kind == "le" ? "bound=" : "target=", c.bound, c.tolerance);
  std::string s(buf);
  if (!c.note.empty()) s += "  " + c.note;
  return s;
}

}  // namespace fadingmac

#endif  // FADINGMAC_REPORT_HPP
