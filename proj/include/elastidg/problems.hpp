#pragma once

#include "elastidg/types.hpp"

#include <array>
#include <functional>
#include <string>

namespace elastidg {

/// Value, gradient and Hessian of a vector field at a point.
struct VectorJet {
    Vec value;
    Mat gradient;               // (a, b) = d u_a / d x_b
    std::array<Mat, 3> hessian;  // hessian[a](b, c) = d^2 u_a / d x_b d x_c
};

/// sigma = 2 mu eps + lambda tr(eps) I
[[nodiscard]] Mat stiffness_apply(double mu, double lambda, const Mat& strain);

/// Manufactured displacement with homogeneous Dirichlet data; stress and
/// load follow from sigma = C eps(u) and f = div sigma.
class ManufacturedProblem {
public:
    ManufacturedProblem(std::string name, int dim, double mu, double lambda,
                        std::function<VectorJet(const Vec&)> jet);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] double mu() const { return mu_; }
    [[nodiscard]] double lambda() const { return lambda_; }

    [[nodiscard]] Vec u(const Vec& x) const;
    [[nodiscard]] Mat grad_u(const Vec& x) const;
    [[nodiscard]] Mat strain(const Vec& x) const;
    [[nodiscard]] Mat sigma(const Vec& x) const;
    /// div sigma = mu lap(u) + (mu + lambda) grad(div u), from exact second derivatives.
    [[nodiscard]] Vec f(const Vec& x) const;

private:
    std::string name_;
    int dim_;
    double mu_;
    double lambda_;
    std::function<VectorJet(const Vec&)> jet_;
};

/// u = (e^{x-y} x y (1-x)(1-y), sin(pi x) sin(pi y)) on the unit square.
[[nodiscard]] ManufacturedProblem problem_2d(double mu = 0.5, double lambda = 1.0);

/// u = (2^4, 2^5, 2^6) x(1-x) y(1-y) z(1-z) on the unit cube.
[[nodiscard]] ManufacturedProblem problem_3d(double mu = 0.5, double lambda = 1.0);

/// Quartic bubble u = (1, -2) x(1-x) y(1-y); lies in P_4 and vanishes on the boundary.
[[nodiscard]] ManufacturedProblem polynomial_problem_2d(double mu = 0.5, double lambda = 1.0);

/// u = 0.
[[nodiscard]] ManufacturedProblem zero_problem(int dim, double mu = 0.5, double lambda = 1.0);

}  // namespace elastidg
