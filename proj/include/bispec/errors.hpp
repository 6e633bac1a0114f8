#pragma once

#include <stdexcept>
#include <string>

namespace bispec {

// Every library failure derives from Error; the class name is the error kind.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define BISPEC_ERROR(Name)                                        \
  struct Name : Error {                                           \
    explicit Name(const std::string& what) : Error(what) {}       \
    const char* kind() const noexcept override { return #Name; }  \
  }

BISPEC_ERROR(UnsplitDenominator);
BISPEC_ERROR(NotInvertible);
BISPEC_ERROR(NotDifferential);
BISPEC_ERROR(NotRegularAtInfinity);
BISPEC_ERROR(DependentBasis);
BISPEC_ERROR(DegenerateFlag);
BISPEC_ERROR(NotDivisible);
BISPEC_ERROR(IrrationalSingularPoint);
BISPEC_ERROR(DegreePatternMismatch);
BISPEC_ERROR(NonPolynomialAtStep4);
BISPEC_ERROR(NotDifferentialAtStep5);
BISPEC_ERROR(NotMonicOrderL);
BISPEC_ERROR(NoSolutionFound);
BISPEC_ERROR(ResidueMismatch);
BISPEC_ERROR(IndexOutOfRange);
BISPEC_ERROR(NotInZ);
BISPEC_ERROR(CoincidingParameters);
BISPEC_ERROR(PoleOrderExceeded);
BISPEC_ERROR(IdentityFailed);
BISPEC_ERROR(Degenerate);
BISPEC_ERROR(NotCommuting);
BISPEC_ERROR(IncompleteTable);
BISPEC_ERROR(InvalidInput);

#undef BISPEC_ERROR

}  // namespace bispec
