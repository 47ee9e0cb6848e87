#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace albert {

// Every failure the library can signal. The kebab-case names returned by
// errc_name() appear verbatim in reports and CLI diagnostics.
enum class Errc {
  DivisionByZero,
  IncompatibleParents,
  PoleAtPoint,
  NotInvertible,
  InseparableCubic,
  NotEtale,
  ZeroParameter,
  NotNormOne,
  NoInvolutionAttached,
  InvalidInvolution,
  InvalidAutomorphism,
  ZeroLambda,
  InadmissiblePair,
  IdentificationFailed,
  NotASimilarity,
  SingularMatrix,
  NormMismatch,
  NormConstraintViolated,
  NotASimilitude,
  BadQNorm,
  MembershipFailure,
  NormProductFailure,
  FactorizationMismatch,
  GenericFiberFailure,
  PoleAtEndpoint,
  MultiplierVanishesAtEndpoint,
  NonSplitCoordinates,
  DimensionMismatch,
  Unsupported,
  InvalidArgument,
  ParseError,
  UnresolvedReference,
  IoError,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace albert
