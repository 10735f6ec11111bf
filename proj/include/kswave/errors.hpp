#pragma once

#include <stdexcept>
#include <string>

namespace kswave {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A parameter that must be positive (or non-negative) is not.
class NonPositiveParameter : public Error {
public:
  explicit NonPositiveParameter(const std::string& field)
      : Error("parameter '" + field + "' is out of range (must be positive and finite)"),
        field_(field) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

/// The closed-form wave requires d_w < chi.
struct DiffusionExceedsChi : Error {
  using Error::Error;
  DiffusionExceedsChi() : Error("closed-form wave requires d_w < chi") {}
};

/// The closed-form wave requires d_w > 0 (use the limit profile at d_w = 0).
struct DiffusionZero : Error {
  using Error::Error;
  DiffusionZero() : Error("closed-form wave requires d_w > 0") {}
};

/// A phase-space evaluation hit u <= 0 where the model divides by u.
struct SingularState : Error {
  using Error::Error;
  SingularState() : Error("state left the domain u > 0") {}
};

/// Branch points of the critical manifold are defined for u_tilde >= 0 only.
struct NegativeUTilde : Error {
  using Error::Error;
  NegativeUTilde() : Error("u_tilde must be non-negative on the critical manifold") {}
};

/// The two branches meet at u_tilde = 0, where no stability verdict exists.
struct OnIntersection : Error {
  using Error::Error;
  OnIntersection() : Error("u_tilde = 0 lies on the branch intersection; no classification") {}
};

/// The fibre normalization constant must be positive.
struct NonPositiveBeta : Error {
  using Error::Error;
  NonPositiveBeta() : Error("fibre constant beta must be positive") {}
};

/// A fibre integration did not reach the attracting branch.
struct NoLanding : Error {
  using Error::Error;
  NoLanding() : Error("fibre integration did not land on the attracting branch") {}
};

/// A shot left the bounded region (typically a wrong displacement sign).
struct BlowUp : Error {
  using Error::Error;
  BlowUp() : Error("trajectory blew up instead of landing") {}
};

/// The perturbed-branch formulas lose meaning when a denominator crosses zero.
struct DegenerateDenominator : Error {
  using Error::Error;
  DegenerateDenominator() : Error("perturbed branch denominator is not positive") {}
};

/// Adaptive integration drove the step size below representable resolution.
struct StepSizeUnderflow : Error {
  using Error::Error;
  StepSizeUnderflow() : Error("step size underflow in adaptive integration") {}
};

/// Adaptive integration exceeded its step budget.
struct MaxStepsExceeded : Error {
  using Error::Error;
  MaxStepsExceeded() : Error("maximum number of integration steps exceeded") {}
};

/// A required event never produced a sign change over the span.
struct EventNotBracketed : Error {
  using Error::Error;
  EventNotBracketed() : Error("required event was not bracketed over the integration span") {}
};

/// A least-squares fit was requested on degenerate data.
struct FitIllConditioned : Error {
  using Error::Error;
  FitIllConditioned() : Error("fit is ill-conditioned (too few points, too small a span, or values at noise floor)") {}
};

/// An explicit time step produced a non-finite field value.
struct UnstableStep : Error {
  using Error::Error;
  UnstableStep() : Error("time step produced a non-finite field value") {}
};

/// The tracking level is never crossed by a snapshot.
struct LevelNotCrossed : Error {
  using Error::Error;
  LevelNotCrossed() : Error("tracking level not crossed inside the domain") {}
};

/// The tracked front sits too close to a domain boundary to be trusted.
struct FrontLeftDomain : Error {
  using Error::Error;
  FrontLeftDomain() : Error("tracked front reached the domain boundary") {}
};

/// Profile comparison found no usable overlap between the two profiles.
struct NoOverlap : Error {
  using Error::Error;
  NoOverlap() : Error("profiles do not overlap for any admissible shift") {}
};

}  // namespace kswave
