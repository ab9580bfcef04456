#pragma once

#include <stdexcept>
#include <string>

namespace pndp {

/// Base of every exception raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PNDP_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(what) {}       \
  };

// symbolic core
PNDP_DEFINE_ERROR(UnboundSymbol)
PNDP_DEFINE_ERROR(DomainError)
PNDP_DEFINE_ERROR(NoValidSamples)
PNDP_DEFINE_ERROR(ParseError)
PNDP_DEFINE_ERROR(InvalidArgument)

// geometry
PNDP_DEFINE_ERROR(DegenerateMetric)
PNDP_DEFINE_ERROR(InvalidChart)
PNDP_DEFINE_ERROR(AsymmetricMetric)
PNDP_DEFINE_ERROR(SymbolCollision)
PNDP_DEFINE_ERROR(RankTooSmall)
PNDP_DEFINE_ERROR(NonPositiveWarp)
PNDP_DEFINE_ERROR(UnsupportedFiberDim)
PNDP_DEFINE_ERROR(ForeignWarpSymbol)

// verification
PNDP_DEFINE_ERROR(RegimeMismatch)
PNDP_DEFINE_ERROR(NotValidated)
PNDP_DEFINE_ERROR(ThroatUndefined)

// manifests and catalog
PNDP_DEFINE_ERROR(ValidationError)
PNDP_DEFINE_ERROR(UnknownExample)

#undef PNDP_DEFINE_ERROR

}  // namespace pndp
