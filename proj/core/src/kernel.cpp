#include "hawkes/kernel.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace hawkes {

namespace {

double tabulated_value(const TabulatedShape& s, double t) {
    const double last = s.step * static_cast<double>(s.values.size() - 1);
    if (t >= last) {
        return t == last ? s.values.back() : 0.0;
    }
    const auto k = static_cast<std::size_t>(t / s.step);
    const double frac = t / s.step - static_cast<double>(k);
    return s.values[k] + frac * (s.values[k + 1] - s.values[k]);
}

double tabulated_l1(const TabulatedShape& s) {
    // exact for the piecewise-linear density
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < s.values.size(); ++k) {
        sum += 0.5 * (s.values[k] + s.values[k + 1]);
    }
    return sum * s.step;
}

double power_law_l1(const PowerLawShape& s) {
    // trapezoid on [0, H] plus the analytic tail alpha*(c+H)^{1-gamma}/(gamma-1)
    const double H = 50.0 * s.c;
    const std::size_t n = 200000;
    const double h = H / static_cast<double>(n);
    double sum = 0.5 * (std::pow(s.c, -s.gamma) + std::pow(s.c + H, -s.gamma));
    for (std::size_t k = 1; k < n; ++k) {
        sum += std::pow(s.c + h * static_cast<double>(k), -s.gamma);
    }
    const double head = s.alpha * h * sum;
    const double tail = s.alpha * std::pow(s.c + H, 1.0 - s.gamma) / (s.gamma - 1.0);
    return head + tail;
}

} // namespace

Kernel::Kernel(Shape shape) : shape_(std::move(shape)) {
    if (const auto* e = std::get_if<ExponentialShape>(&shape_)) {
        if (!(e->alpha >= 0.0) || !(e->beta > 0.0)) {
            throw std::invalid_argument("exponential kernel requires alpha >= 0 and beta > 0");
        }
        l1_ = e->alpha / e->beta;
    } else if (const auto* p = std::get_if<PowerLawShape>(&shape_)) {
        if (!(p->alpha >= 0.0) || !(p->c > 0.0) || !(p->gamma > 1.0)) {
            throw std::invalid_argument("power-law kernel requires alpha >= 0, c > 0, gamma > 1");
        }
        l1_ = power_law_l1(*p);
    } else {
        const auto& t = std::get<TabulatedShape>(shape_);
        if (!(t.step > 0.0)) {
            throw std::invalid_argument("tabulated kernel requires step > 0");
        }
        if (t.values.size() < 2) {
            throw std::invalid_argument("tabulated kernel requires at least two nodes");
        }
        for (double v : t.values) {
            if (!std::isfinite(v) || v < 0.0) {
                throw std::invalid_argument("tabulated kernel values must be finite and nonnegative");
            }
        }
        l1_ = tabulated_l1(t);
    }
    if (!(l1_ < 1.0)) {
        std::ostringstream msg;
        msg << "stability condition violated: ||Phi||_1 = " << l1_ << " must be strictly below 1";
        throw stability_error(msg.str());
    }
}

Kernel Kernel::exponential(double alpha, double beta) {
    return Kernel(ExponentialShape{alpha, beta});
}

Kernel Kernel::power_law(double alpha, double c, double gamma) {
    return Kernel(PowerLawShape{alpha, c, gamma});
}

Kernel Kernel::tabulated(double step, std::vector<double> values) {
    return Kernel(TabulatedShape{step, std::move(values)});
}

Kernel Kernel::zero() {
    return Kernel(TabulatedShape{1.0, {0.0, 0.0}});
}

double Kernel::operator()(double t) const {
    if (t < 0.0) {
        throw std::invalid_argument("kernel evaluated at negative time");
    }
    if (const auto* e = std::get_if<ExponentialShape>(&shape_)) {
        return e->alpha * std::exp(-e->beta * t);
    }
    if (const auto* p = std::get_if<PowerLawShape>(&shape_)) {
        return p->alpha * std::pow(p->c + t, -p->gamma);
    }
    return tabulated_value(std::get<TabulatedShape>(shape_), t);
}

double Kernel::support_end() const {
    if (const auto* t = std::get_if<TabulatedShape>(&shape_)) {
        return t->step * static_cast<double>(t->values.size() - 1);
    }
    return std::numeric_limits<double>::infinity();
}

bool Kernel::is_nonincreasing() const {
    if (const auto* t = std::get_if<TabulatedShape>(&shape_)) {
        for (std::size_t k = 0; k + 1 < t->values.size(); ++k) {
            if (t->values[k + 1] > t->values[k]) {
                return false;
            }
        }
        return true;
    }
    return true; // exponential and power-law decay monotonically
}

ModelParams::ModelParams(double mu_, Kernel kernel_) : mu(mu_), kernel(std::move(kernel_)) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("baseline intensity mu must be positive");
    }
}

ModelParams::ModelParams(unchecked_tag, double mu_, Kernel kernel_)
    : mu(mu_), kernel(std::move(kernel_)) {}

ModelParams ModelParams::unchecked(double mu_, Kernel kernel_) {
    if (!(mu_ >= 0.0)) {
        throw std::invalid_argument("baseline intensity mu must be nonnegative");
    }
    return ModelParams(unchecked_tag{}, mu_, std::move(kernel_));
}

} // namespace hawkes
