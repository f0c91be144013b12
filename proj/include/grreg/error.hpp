#pragma once

#include <stdexcept>
#include <string>

namespace grreg {

enum class Errc {
  DescriptorMismatch,
  NotEssentialDomain,
  NotOrthogonallyClosed,
  NotGraphRegular,
  AxiomsFailed,
  KernelNotTrivial,
  RangeNotOrthoClosed,
  NotNormal,
  NonCommutingPair,
  SyntaxError,
  DeclarationMismatch,
  Inconclusive,
  UnverifiedDeclaration,
  ClassCheckFailed,
  CircleRoot,
  NotCoprime,
  InnerRoot,
  DegreeTooLarge,
  LambdaInSpectrum,
  EpsilonBelowGrid,
  BadParameters,
  InvalidInput
};

const char* errc_name(Errc c);

// Every library failure surfaces as this type; the code tells the CLI
// whether it was bad input or a verified mathematical failure.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

// Syntax errors also carry the byte offset into the source text.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t pos, const std::string& what)
      : Error(Errc::SyntaxError, what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

private:
  std::size_t pos_;
};

}  // namespace grreg
