#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace varlp {

// Invalid input or violated precondition.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure could not deliver a result.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature did not reach its tolerance. Carries the partial result.
class integration_error : public numerical_error {
 public:
  integration_error(const std::string& what, double partial, double error)
      : numerical_error(what), partial_(partial), error_(error) {}

  double partial_value() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double partial_;
  double error_;
};

// The integral is +infinity (non-integrable endpoint behaviour or overflow).
class divergence_error : public integration_error {
 public:
  divergence_error(const std::string& what, double partial)
      : integration_error(what, partial, partial) {}
};

// The integrand produced NaN, or an operator input could not be evaluated.
class evaluation_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

// The modular stays above one for every tested lambda.
class not_in_space_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// Seed of the successive approximation violates the starting inequality.
class rejected_seed_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// y > 0, y' > 0 fails at some node.
class side_condition_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// Successive approximation degenerated (iterate hit zero or blew up).
class iteration_fault : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

// Malformed structured-text input; `field` names the offending option.
class parse_error : public domain_error {
 public:
  parse_error(std::string field, const std::string& what)
      : domain_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace varlp
