#include "octseg/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "octseg/errors.hpp"

namespace octseg {

EvolutionSystem::EvolutionSystem(std::size_t m, double alpha, double beta, double dt)
    : m_(m), alpha_(alpha), beta_(beta), dt_(dt) {
    if (m < 5) throw SizeError("evolution system needs M >= 5, got " + std::to_string(m));
    if (!(alpha >= 0.0) || !(beta >= 0.0) || (alpha == 0.0 && beta == 0.0)) {
        throw InputError("alpha and beta must be >= 0 and not both zero");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("dt must be positive");

    auto& d0 = diag_[0];
    auto& d1 = diag_[1];
    auto& d2 = diag_[2];
    d0.assign(m, -2.0 * alpha - 6.0 * beta);
    d1.assign(m - 1, alpha + 4.0 * beta);
    d2.assign(m - 2, -beta);
    d0[0] = d0[m - 1] = -alpha - 2.0 * beta;
    d1[0] = d1[m - 2] = alpha + 3.0 * beta;

    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = (i >= 2 ? i - 2 : 0); j < std::min(m, i + 3); ++j) row += a(i, j);
        if (std::abs(row) > 1e-12 * (1.0 + alpha + beta)) {
            throw NumericalError("row " + std::to_string(i) + " of A does not sum to zero");
        }
    }

    // Band LU of B = I - dt*A.
    l1_.assign(m, 0.0);
    l2_.assign(m, 0.0);
    u0_.assign(m, 0.0);
    u1_.assign(m, 0.0);
    u2_.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double b_sub2 = i >= 2 ? -dt * d2[i - 2] : 0.0;
        double b_sub1 = i >= 1 ? -dt * d1[i - 1] : 0.0;
        double b_diag = 1.0 - dt * d0[i];
        const double b_sup1 = i + 1 < m ? -dt * d1[i] : 0.0;
        const double b_sup2 = i + 2 < m ? -dt * d2[i] : 0.0;

        if (i >= 2) {
            l2_[i] = b_sub2 / u0_[i - 2];
            b_sub1 -= l2_[i] * u1_[i - 2];
            b_diag -= l2_[i] * u2_[i - 2];
        }
        if (i >= 1) {
            l1_[i] = b_sub1 / u0_[i - 1];
            b_diag -= l1_[i] * u1_[i - 1];
        }
        double sup1 = b_sup1;
        if (i >= 1) sup1 -= l1_[i] * u2_[i - 1];
        if (!(std::abs(b_diag) > 0.0) || !std::isfinite(b_diag)) {
            throw NumericalError("singular pivot at row " + std::to_string(i));
        }
        u0_[i] = b_diag;
        u1_[i] = sup1;
        u2_[i] = b_sup2;
    }
}

double EvolutionSystem::a(std::size_t i, std::size_t j) const {
    const std::size_t lo = std::min(i, j);
    const std::size_t k = i > j ? i - j : j - i;
    if (k > 2 || i >= m_ || j >= m_) return 0.0;
    return diag_[k][lo];
}

std::vector<double> EvolutionSystem::dense_a() const {
    std::vector<double> out(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t j = 0; j < m_; ++j) out[i * m_ + j] = a(i, j);
    }
    return out;
}

std::vector<double> EvolutionSystem::solve_banded(std::span<const double> rhs) const {
    if (rhs.size() != m_) {
        throw InputError("rhs length " + std::to_string(rhs.size()) + " != M " +
                         std::to_string(m_));
    }
    std::vector<double> w(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < m_; ++i) {
        if (!std::isfinite(w[i])) throw InputError("rhs entry " + std::to_string(i) + " is not finite");
        if (i >= 1) w[i] -= l1_[i] * w[i - 1];
        if (i >= 2) w[i] -= l2_[i] * w[i - 2];
    }
    for (std::size_t i = m_; i-- > 0;) {
        double v = w[i];
        if (i + 1 < m_) v -= u1_[i] * w[i + 1];
        if (i + 2 < m_) v -= u2_[i] * w[i + 2];
        w[i] = v / u0_[i];
    }
    return w;
}

std::vector<Point2> EvolutionSystem::step_points(const OpenContour& contour,
                                                 const NormalField& normals,
                                                 std::span<const double> q_values) const {
    if (contour.size() != m_ || normals.size() != m_ || q_values.size() != m_) {
        throw InputError("step inputs must all have length M = " + std::to_string(m_));
    }
    std::vector<double> rx(m_), ry(m_);
    for (std::size_t i = 0; i < m_; ++i) {
        rx[i] = contour[i].x - dt_ * q_values[i] * normals[i].x;
        ry[i] = contour[i].y - dt_ * q_values[i] * normals[i].y;
    }
    const auto x = solve_banded(rx);
    const auto y = solve_banded(ry);
    std::vector<Point2> pts(m_);
    for (std::size_t i = 0; i < m_; ++i) pts[i] = {x[i], y[i]};
    return pts;
}

OpenContour EvolutionSystem::step(const OpenContour& contour, const NormalField& normals,
                                  std::span<const double> q_values) const {
    return OpenContour(step_points(contour, normals, q_values));
}

}  // namespace octseg
