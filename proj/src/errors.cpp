#include "lspec/errors.hpp"

namespace lspec {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Decomposition: return "decomposition";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::DegenerateSpectrum: return "degenerate_spectrum";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace lspec
