#pragma once

#include <cmath>
#include <vector>

#include "error.hpp"

namespace momentkit {

// Orthonormal polynomials on [0, 1] for the weight s^b (1 - s)^a, generated by the
// three-term recurrence of the Jacobi family shifted from [-1, 1].
class ShiftedJacobi {
public:
    ShiftedJacobi() = default;
    ShiftedJacobi(double a, double b, int n_max) : a_(a), b_(b), n_max_(n_max) {
        if (!(a > -1.0) || !(b > -1.0)) throw DomainError("Jacobi weight exponents must exceed -1");
        if (n_max < 0) throw DomainError("n_max must be >= 0");
        const auto count = static_cast<std::size_t>(n_max) + 1;
        centre_.resize(count);
        off_.resize(count + 1);
        for (int n = 0; n <= n_max; ++n) {
            double alpha;
            if (n == 0) {
                alpha = (b - a) / (a + b + 2.0);
            } else {
                const double t = 2.0 * n + a + b;
                alpha = (b * b - a * a) / (t * (t + 2.0));
            }
            centre_[static_cast<std::size_t>(n)] = 0.5 * (1.0 + alpha);
        }
        off_[0] = 0.0;
        for (int n = 1; n <= n_max + 1; ++n) {
            double beta;
            if (n == 1) {
                const double t = 2.0 + a + b;
                beta = 4.0 * (1.0 + a) * (1.0 + b) / (t * t * (t + 1.0));
            } else {
                const double t = 2.0 * n + a + b;
                beta = 4.0 * n * (n + a) * (n + b) * (n + a + b) / (t * t * (t + 1.0) * (t - 1.0));
            }
            off_[static_cast<std::size_t>(n)] = std::sqrt(0.25 * beta);
        }
        phi0_ = 1.0 / std::sqrt(std::beta(a + 1.0, b + 1.0));
    }

    int n_max() const { return n_max_; }
    double a() const { return a_; }
    double b() const { return b_; }

    // out[0..n_max] = phi_n(s)
    void evaluate(double s, double* out) const {
        double prev = 0.0;
        double cur = phi0_;
        out[0] = cur;
        for (int n = 0; n < n_max_; ++n) {
            const auto k = static_cast<std::size_t>(n);
            const double next = ((s - centre_[k]) * cur - off_[k] * prev) / off_[k + 1];
            prev = cur;
            cur = next;
            out[k + 1] = cur;
        }
    }

private:
    double a_ = 0.0;
    double b_ = 0.0;
    int n_max_ = 0;
    double phi0_ = 1.0;
    std::vector<double> centre_;  // recurrence diagonal
    std::vector<double> off_;     // off_[n] = sqrt(beta_n) on [0, 1]
};

}  // namespace momentkit
