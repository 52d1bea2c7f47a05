#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lspec {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorKind {
  Config,
  Dimension,
  Domain,
  Decomposition,
  Accuracy,
  DegenerateSpectrum,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorKind::Dimension, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Eigensolver or SVD did not converge. `index` is the LAPACK info value.
class DecompositionError : public Error {
 public:
  DecompositionError(const std::string& what, std::ptrdiff_t index)
      : Error(ErrorKind::Decomposition, what), index_(index) {}
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

/// Time propagation lost trace beyond tolerance at `step`.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, std::size_t step)
      : Error(ErrorKind::Accuracy, what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class DegenerateSpectrumError : public Error {
 public:
  explicit DegenerateSpectrumError(const std::string& what)
      : Error(ErrorKind::DegenerateSpectrum, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace lspec
