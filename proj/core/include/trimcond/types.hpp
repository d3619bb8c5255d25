#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace trimcond {

// Extended-precision scalar for assembly and conditioning work. Condition
// numbers in trimmed discretizations routinely exceed 1e14, which double
// entries cannot represent faithfully; 80-bit floats keep ~18 digits.
using Real = long double;
using Index = std::int64_t;

using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VecD = Eigen::VectorXd;
using MatD = Eigen::MatrixXd;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define TRIMCOND_ERROR(Name)                                        \
  struct Name : Error {                                             \
    explicit Name(const std::string& w) : Error(#Name ": " + w) {}  \
  }

TRIMCOND_ERROR(InvalidContinuity);
TRIMCOND_ERROR(NonMonotoneBreakpoints);
TRIMCOND_ERROR(OutOfDomain);
TRIMCOND_ERROR(DuplicateNodes);
TRIMCOND_ERROR(SingularCollocation);
TRIMCOND_ERROR(DegenerateDomain);
TRIMCOND_ERROR(DepthExceeded);
TRIMCOND_ERROR(EmptyActiveSet);
TRIMCOND_ERROR(DimensionMismatch);
TRIMCOND_ERROR(NonInterpolatoryDof);
TRIMCOND_ERROR(NonpositiveDiagonal);
TRIMCOND_ERROR(BlockFactorizationFailure);
TRIMCOND_ERROR(CoarseFactorizationFailure);
TRIMCOND_ERROR(CoarseSolveFailure);
TRIMCOND_ERROR(BoundViolation);
TRIMCOND_ERROR(DenseCapExceeded);
TRIMCOND_ERROR(GeneralizedNotSPD);
TRIMCOND_ERROR(NonpositiveSample);
TRIMCOND_ERROR(UnknownGeometry);
TRIMCOND_ERROR(ParameterOutOfRange);

#undef TRIMCOND_ERROR

}  // namespace trimcond
