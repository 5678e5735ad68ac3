#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hsde {

using cplx = std::complex<double>;
using MatR = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;
using VecR = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;

// Error categories map onto CLI exit codes 2, 3 and 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

}  // namespace hsde
