// types.hpp — Scalar aliases, physical constants, version tag

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

namespace sqz {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<cd>; // column-major

inline constexpr cd I_UNIT{0.0, 1.0};

inline constexpr const char* ARTIFACT_VERSION = "0.1.0";

// SI constants (2018 CODATA exact where applicable)
namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J/K
// electron gyromagnetic ratio for the spin defect, rad/s per tesla
inline constexpr double gamma_B_default = 2.0 * 3.14159265358979323846 * 28.0e9;
// zero-field splitting, rad/s
inline constexpr double zfs_default = 2.0 * 3.14159265358979323846 * 2.87e9;
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
}  // namespace constants

}  // namespace sqz
