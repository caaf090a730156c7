#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ghzlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or search would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double required, double budget)
      : Error(what + ": requires " + format(required) + ", budget " + format(budget)),
        required_(required),
        budget_(budget) {}

  double required() const { return required_; }
  double budget() const { return budget_; }

 private:
  static std::string format(double v);
  double required_;
  double budget_;
};

#define GHZLAB_DEFINE_ERROR(Name)    \
  class Name : public Error {        \
   public:                           \
    using Error::Error;              \
  }

GHZLAB_DEFINE_ERROR(NoZeroSubset);
GHZLAB_DEFINE_ERROR(NotSubspaceOf);
GHZLAB_DEFINE_ERROR(ZeroMassEvent);
GHZLAB_DEFINE_ERROR(PartialFunction);
GHZLAB_DEFINE_ERROR(UniverseMismatch);
GHZLAB_DEFINE_ERROR(DomainError);
GHZLAB_DEFINE_ERROR(PreconditionFailed);
GHZLAB_DEFINE_ERROR(ShapeMismatch);
GHZLAB_DEFINE_ERROR(UnsupportedDistribution);
GHZLAB_DEFINE_ERROR(EmptyIntersection);
GHZLAB_DEFINE_ERROR(NotEmbeddable);
GHZLAB_DEFINE_ERROR(VerificationFailed);
GHZLAB_DEFINE_ERROR(ExactSearchInfeasible);
GHZLAB_DEFINE_ERROR(RankDeficient);
GHZLAB_DEFINE_ERROR(NonProductEvent);
GHZLAB_DEFINE_ERROR(ParseError);

#undef GHZLAB_DEFINE_ERROR

}  // namespace ghzlab
