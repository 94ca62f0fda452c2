#pragma once

#include <variant>
#include <vector>

#include "hawkes/errors.hpp"

namespace hawkes {

struct ExponentialShape {
    double alpha; // amplitude, 1/time^2
    double beta;  // decay rate, 1/time
};

struct PowerLawShape {
    double alpha;
    double c;     // offset, > 0
    double gamma; // tail exponent, > 1
};

struct TabulatedShape {
    double step;                // node spacing, > 0
    std::vector<double> values; // nonnegative densities at k*step; zero beyond the last node
};

/// Nonnegative excitation kernel Phi with ||Phi||_1 < 1.
///
/// The L1 norm is computed at construction and construction fails with
/// stability_error if it is not strictly below one.
class Kernel {
public:
    using Shape = std::variant<ExponentialShape, PowerLawShape, TabulatedShape>;

    static Kernel exponential(double alpha, double beta);
    static Kernel power_law(double alpha, double c, double gamma);
    static Kernel tabulated(double step, std::vector<double> values);
    /// Identically-zero kernel (plain Poisson case).
    static Kernel zero();

    /// Phi(t). Tabulated shapes interpolate linearly and are zero beyond
    /// their last node. Throws std::invalid_argument for t < 0.
    double operator()(double t) const;

    double l1_norm() const { return l1_; }

    /// Largest t with Phi possibly nonzero; +inf for exponential/power-law.
    double support_end() const;

    /// True if Phi is nonincreasing on [0, inf) (needed by the thinning
    /// simulator's majorant).
    bool is_nonincreasing() const;

    const Shape& shape() const { return shape_; }

private:
    explicit Kernel(Shape shape);

    Shape shape_;
    double l1_ = 0.0;
};

struct ModelParams {
    double mu; // baseline intensity, > 0
    Kernel kernel;

    ModelParams(double mu_, Kernel kernel_);

    /// Bypasses the mu > 0 check (mu >= 0 only); used by tests that exercise
    /// the no-immigrant edge case.
    static ModelParams unchecked(double mu_, Kernel kernel_);

private:
    struct unchecked_tag {};
    ModelParams(unchecked_tag, double mu_, Kernel kernel_);
};

} // namespace hawkes
