#ifndef FADINGMAC_ERRORS_HPP
#define FADINGMAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fadingmac {

/// Invalid argument value: negative power, empty subset, mismatched user count, ...
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative routine hit its safety cap before meeting its stopping rule.
class nonconvergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment / fading configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fadingmac

#endif  // FADINGMAC_ERRORS_HPP
