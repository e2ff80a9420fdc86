#pragma once

#include <stdexcept>
#include <string>

namespace rbc {

// Base class for everything the library throws on bad input or a failed
// certificate. The CLI maps InputError to exit code 2 and every other
// Error (failed certificates and their preconditions) to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input: wrong shapes, bad schema, bad config.
class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

struct CertificationWitness {
  std::string description;
  long index_a = -1;  // basis/trial index of the left probe, -1 if n/a
  long index_b = -1;
  double residual = 0.0;
};

class CertificationFailed : public Error {
 public:
  CertificationFailed(const std::string& what, CertificationWitness witness)
      : Error(what), witness_(std::move(witness)) {}
  const CertificationWitness& witness() const { return witness_; }

 private:
  CertificationWitness witness_;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

class WeightMismatch : public InputError {
 public:
  using InputError::InputError;
};

class NonRealWeight : public InputError {
 public:
  using InputError::InputError;
};

class NotMatching : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class NotSymmetric : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class NotIdempotent : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class NotCommutative : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class NotDirectSum : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class NotSubalgebra : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class NotInvariant : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class SupportViolation : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class NotProjection : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class NotMultiplicative : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class NotInvolutive : public CertificationFailed {
 public:
  using CertificationFailed::CertificationFailed;
};

class WrongWeight : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace rbc
