#ifndef ARTIFACT_ERRORS_HPP
#define ARTIFACT_ERRORS_HPP

#include <stdexcept>
#include <string>

// Exception taxonomy shared by all modules. Every refusal path in the library
// throws one of these; tests and the CLI key off the concrete type.
namespace errors
{

#define ARTIFACT_DEFINE_ERROR(Name)                                         \
   struct Name : std::runtime_error {                                       \
      explicit Name(const std::string &msg) : std::runtime_error(msg) {}    \
   }

// bessel
ARTIFACT_DEFINE_ERROR(OrderOutOfStrip);
ARTIFACT_DEFINE_ERROR(QuadratureFailure);

// cross_section
ARTIFACT_DEFINE_ERROR(UnsupportedKind);
ARTIFACT_DEFINE_ERROR(ParseError);
ARTIFACT_DEFINE_ERROR(InvariantViolation);

// mode_resolvent
ARTIFACT_DEFINE_ERROR(ContinuationOutOfRange);
ARTIFACT_DEFINE_ERROR(SupportViolation);
ARTIFACT_DEFINE_ERROR(ZeroDenominator);

// weighted_operator
ARTIFACT_DEFINE_ERROR(DimensionTooLarge);
ARTIFACT_DEFINE_ERROR(TailNotConverged);
ARTIFACT_DEFINE_ERROR(EmptyScan);

// hyperbolic_space
ARTIFACT_DEFINE_ERROR(SingularDiagonal);
ARTIFACT_DEFINE_ERROR(TailNotCertified);

// parametrix
ARTIFACT_DEFINE_ERROR(GridTooNarrow);
ARTIFACT_DEFINE_ERROR(NearDiagonalDividedDifference);
ARTIFACT_DEFINE_ERROR(NotInvertible);
ARTIFACT_DEFINE_ERROR(EvidenceFailure);

// metric_check
ARTIFACT_DEFINE_ERROR(CollarViolation);

#undef ARTIFACT_DEFINE_ERROR

} // namespace errors

#endif // ARTIFACT_ERRORS_HPP
