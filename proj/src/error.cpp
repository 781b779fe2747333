#include "finsler/error.hpp"

namespace finsler {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::input: return "input";
    case ErrorKind::model: return "model";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::precision: return "precision";
    case ErrorKind::search: return "search";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::integration: return "integration";
    case ErrorKind::admissibility: return "admissibility";
    case ErrorKind::efficiency: return "efficiency";
  }
  return "unknown";
}

}  // namespace finsler
