#pragma once

#include <stdexcept>
#include <string>

namespace lrnn {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LRNN_ERROR_TYPE(Name)     \
  class Name : public Error {     \
   public:                        \
    using Error::Error;           \
  }

LRNN_ERROR_TYPE(PointOutsideDomain);
LRNN_ERROR_TYPE(AmbiguousPoint);
LRNN_ERROR_TYPE(NotOnInterface);
LRNN_ERROR_TYPE(InvalidGeometry);
LRNN_ERROR_TYPE(InvalidShape);
LRNN_ERROR_TYPE(DimensionMismatch);
LRNN_ERROR_TYPE(NoTimeAxis);
LRNN_ERROR_TYPE(UnsupportedDepth);
LRNN_ERROR_TYPE(InfeasiblePlan);
LRNN_ERROR_TYPE(EmptyRegion);
LRNN_ERROR_TYPE(UnsupportedDimension);
LRNN_ERROR_TYPE(MissingInitialCondition);
LRNN_ERROR_TYPE(NonFiniteInput);
LRNN_ERROR_TYPE(ZeroDenominator);
LRNN_ERROR_TYPE(UnknownExample);
LRNN_ERROR_TYPE(InvalidConfig);

#undef LRNN_ERROR_TYPE

}  // namespace lrnn
