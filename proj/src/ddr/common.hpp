// Shared scalar types, error classes and small helpers of the DDR core.

#ifndef DDR_COMMON_HPP
#define DDR_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddr {

using Vec3 = Eigen::Vector3d;
using Points = Eigen::Matrix<double, 3, Eigen::Dynamic>;

/// Base class of all errors thrown by the library
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent mesh data
class MeshError : public Error {
public:
  using Error::Error;
};

/// Singular or badly conditioned local system, rank mismatch
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Invalid argument passed by the caller
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Binomial coefficient C(n, k), 0 when k < 0 or k > n
inline long binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Dimension of P^degree in nvars variables (0 for negative degree)
inline int poly_dim(int nvars, int degree) {
  if (degree < 0) return 0;
  return static_cast<int>(binomial(degree + nvars, nvars));
}

} // namespace ddr

#endif
