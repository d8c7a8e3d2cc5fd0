#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tlab {

/// Category of a rejected input or failed computation.
enum class ErrorCode {
  InvalidArgument,
  Parse,
  Symmetry,
  ZeroDiagonal,
  TriangleInequality,
  Positivity,
  Connectivity,
  BoundaryWeights,
  Convergence,
  Unsupported,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Symmetry: return "distance matrix not symmetric";
    case ErrorCode::ZeroDiagonal: return "distance matrix has nonzero diagonal";
    case ErrorCode::TriangleInequality: return "triangle inequality violated";
    case ErrorCode::Positivity: return "positivity violated";
    case ErrorCode::Connectivity: return "conductance graph disconnected";
    case ErrorCode::BoundaryWeights: return "boundary weight on non-conducting edge";
    case ErrorCode::Convergence: return "solver did not converge";
    case ErrorCode::Unsupported: return "unsupported";
  }
  return "error";
}

}  // namespace tlab
