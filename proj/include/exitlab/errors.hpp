#pragma once

#include <stdexcept>
#include <string>

namespace exitlab {

// Typed failure modes surfaced by the numeric kernels. Callers that can
// recover (e.g. fall back to the numeric inversion path) catch the specific
// type; everything else propagates.

struct PoleError : std::runtime_error {
  explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalBlowup : std::runtime_error {
  explicit NumericalBlowup(const std::string& what) : std::runtime_error(what) {}
};

struct TailUnbounded : std::runtime_error {
  explicit TailUnbounded(const std::string& what) : std::runtime_error(what) {}
};

struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ClosedFormUnavailable : std::runtime_error {
  explicit ClosedFormUnavailable(const std::string& what) : std::runtime_error(what) {}
};

struct DivergentCumulant : std::runtime_error {
  explicit DivergentCumulant(const std::string& what) : std::runtime_error(what) {}
};

struct MarginalUnavailable : std::runtime_error {
  explicit MarginalUnavailable(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateMoments : std::runtime_error {
  explicit DegenerateMoments(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptySeries : std::runtime_error {
  explicit EmptySeries(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace exitlab
