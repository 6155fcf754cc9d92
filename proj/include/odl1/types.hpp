#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace odl1 {

// The library works over complex double precision throughout; real-valued
// inputs embed with zero imaginary part and (.)* is the conjugate transpose.
using Scalar = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

using Index = Eigen::Index;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define ODL1_ERROR_TYPE(Name)                                   \
  struct Name : Error {                                         \
    explicit Name(const std::string& what) : Error(what) {}     \
  }

ODL1_ERROR_TYPE(NotPositiveDefinite);
ODL1_ERROR_TYPE(NonHermitian);
ODL1_ERROR_TYPE(ShapeMismatch);
ODL1_ERROR_TYPE(RankDeficient);
ODL1_ERROR_TYPE(BadLattice);
ODL1_ERROR_TYPE(DegenerateFrame);
ODL1_ERROR_TYPE(BadShape);
ODL1_ERROR_TYPE(ZeroSignal);
ODL1_ERROR_TYPE(SingularSystem);
ODL1_ERROR_TYPE(NonFinite);
ODL1_ERROR_TYPE(NoProgress);
ODL1_ERROR_TYPE(NotSorted);
ODL1_ERROR_TYPE(BadBlockSizes);
ODL1_ERROR_TYPE(TooLarge);
ODL1_ERROR_TYPE(BadParams);
ODL1_ERROR_TYPE(RhoTooLarge);
ODL1_ERROR_TYPE(NegativeBracket);
ODL1_ERROR_TYPE(ConditionFails);
ODL1_ERROR_TYPE(ConfigError);

#undef ODL1_ERROR_TYPE

}  // namespace odl1
