#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "octseg/geometry.hpp"

namespace octseg {

/// Pentadiagonal regularization matrix A and the factored (I - dt*A).
///
/// A is stored by diagonals. The factorization is a banded LU without
/// pivoting (I - dt*A is symmetric positive definite), computed once in the
/// constructor and reused for every solve.
class EvolutionSystem {
public:
    EvolutionSystem(std::size_t m, double alpha, double beta, double dt);

    std::size_t size() const noexcept { return m_; }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double dt() const noexcept { return dt_; }

    /// Entry A(i, j); zero outside the five central diagonals.
    double a(std::size_t i, std::size_t j) const;

    /// Dense row-major copy of A, for inspection and tests.
    std::vector<double> dense_a() const;

    /// Solves (I - dt*A) w = rhs.
    std::vector<double> solve_banded(std::span<const double> rhs) const;

    /// One semi-implicit update of both coordinates. The raw variant returns
    /// the new points without contour validation.
    std::vector<Point2> step_points(const OpenContour& contour, const NormalField& normals,
                                    std::span<const double> q_values) const;
    OpenContour step(const OpenContour& contour, const NormalField& normals,
                     std::span<const double> q_values) const;

private:
    std::size_t m_;
    double alpha_;
    double beta_;
    double dt_;
    // diag_[k][i] = A(i, i + k) for k = 0, 1, 2; A is symmetric.
    std::array<std::vector<double>, 3> diag_;
    // Factors of I - dt*A: unit lower L with two subdiagonals, upper U with
    // the main diagonal and two superdiagonals.
    std::vector<double> l1_, l2_, u0_, u1_, u2_;
};

inline EvolutionSystem build_system(std::size_t m, double alpha, double beta, double dt) {
    return EvolutionSystem(m, alpha, beta, dt);
}

}  // namespace octseg
