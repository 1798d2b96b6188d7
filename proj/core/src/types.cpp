#include "hyperfact/types.hpp"

namespace hyperfact {

void ensure_finite(const CMatrix& m, const std::string& what) {
  if (!m.allFinite()) {
    throw PreconditionError(what + ": matrix contains NaN or Inf entries");
  }
}

void ensure_square(const CMatrix& m, const std::string& what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(what + ": expected a square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace hyperfact
