#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace elastidg {

// Small fixed-capacity types; spatial dimension is 2 or 3 at runtime.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

using SpMat = Eigen::SparseMatrix<double>;

/// Raised when a mesh cannot be built (degenerate element, non-manifold facet).
class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a reference-element table is requested inconsistently.
class ReferenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace elastidg
