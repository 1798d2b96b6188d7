#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hyperfact {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Default tolerances, shared across the library. Positivity and rank
// decisions are always relative to the scale of the input.
namespace tol {
inline constexpr double kPsd = 1e-9;          // PSD verdict, x max(1, ||M||)
inline constexpr double kRank = 1e-10;        // numerical rank, x sigma_max
inline constexpr double kHermitian = 1e-8;    // accepted Hermitian asymmetry
inline constexpr double kUnitary = 1e-10;     // ||U*U - I|| bound
inline constexpr double kCommute = 1e-10;     // commutator, relative
inline constexpr double kDouglas = 1e-8;      // factorization residual
inline constexpr double kConvergence = 1e-10; // limit iteration step size
inline constexpr double kPure = 1e-10;        // spectral-radius margin
inline constexpr double kVerify = 1e-7;       // dilation residual reports
}  // namespace tol

inline constexpr int kLimitMaxIterations = 10000;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or value of an argument violates an operation's contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Exact integer arithmetic would wrap; never silently truncated.
class OverflowError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A factorization was solvable in principle but the computed factor
// failed its residual or norm bound.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

// Rejects NaN/Inf entries before they reach any solver.
void ensure_finite(const CMatrix& m, const std::string& what);

void ensure_square(const CMatrix& m, const std::string& what);

}  // namespace hyperfact
