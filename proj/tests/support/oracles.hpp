#pragma once

// Independent reference implementations and random generators shared by the
// unit and acceptance tests. Nothing here calls into the library's numerics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "octseg/geometry.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// A written out row by row from the displayed stencil.
inline Matrix reference_a(std::size_t m, double a, double b) {
    Matrix A(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 2; i + 2 < m; ++i) {
        A[i][i - 2] = -b;
        A[i][i - 1] = a + 4 * b;
        A[i][i] = -2 * a - 6 * b;
        A[i][i + 1] = a + 4 * b;
        A[i][i + 2] = -b;
    }
    A[0][0] = -a - 2 * b;
    A[0][1] = a + 3 * b;
    A[0][2] = -b;
    A[1][0] = a + 3 * b;
    A[1][1] = -2 * a - 6 * b;
    A[1][2] = a + 4 * b;
    A[1][3] = -b;
    A[m - 1][m - 1] = -a - 2 * b;
    A[m - 1][m - 2] = a + 3 * b;
    A[m - 1][m - 3] = -b;
    A[m - 2][m - 1] = a + 3 * b;
    A[m - 2][m - 2] = -2 * a - 6 * b;
    A[m - 2][m - 3] = a + 4 * b;
    A[m - 2][m - 4] = -b;
    return A;
}

inline Matrix identity_minus(const Matrix& A, double dt) {
    Matrix B = A;
    for (std::size_t i = 0; i < B.size(); ++i) {
        for (std::size_t j = 0; j < B.size(); ++j) B[i][j] = (i == j ? 1.0 : 0.0) - dt * A[i][j];
    }
    return B;
}

inline std::vector<double> multiply(const Matrix& A, const std::vector<double>& v) {
    std::vector<double> out(A.size(), 0.0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += A[i][j] * v[j];
    }
    return out;
}

/// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Matrix A, std::vector<double> b) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
        }
        if (A[pivot][col] == 0.0) throw std::runtime_error("singular matrix");
        std::swap(A[col], A[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= A[i][c] * x[c];
        x[i] = s / A[i][i];
    }
    return x;
}

struct EigenPairs {
    std::vector<double> values;  // descending
    Matrix vectors;              // vectors[k] is the k-th eigenvector
};

/// Cyclic Jacobi rotations on a dense symmetric matrix.
inline EigenPairs jacobi_eigen(Matrix A) {
    const std::size_t n = A.size();
    Matrix V(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) V[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                total += A[i][j] * A[i][j];
                if (i != j) off += A[i][j] * A[i][j];
            }
        }
        if (off <= 1e-30 * total || off == 0.0) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (A[p][q] == 0.0) continue;
                const double theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A[k][p];
                    const double akq = A[k][q];
                    A[k][p] = c * akp - s * akq;
                    A[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A[p][k];
                    const double aqk = A[q][k];
                    A[p][k] = c * apk - s * aqk;
                    A[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V[k][p];
                    const double vkq = V[k][q];
                    V[k][p] = c * vkp - s * vkq;
                    V[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return A[a][a] > A[b][b]; });
    EigenPairs out;
    for (auto k : order) {
        out.values.push_back(A[k][k]);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = V[i][k];
        out.vectors.push_back(std::move(v));
    }
    return out;
}

/// All-pairs Hausdorff distance.
inline double brute_hausdorff(const std::vector<octseg::Point2>& a,
                              const std::vector<octseg::Point2>& b) {
    auto directed = [](const auto& from, const auto& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) {
                best = std::min(best, (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y));
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::sqrt(std::max(directed(a, b), directed(b, a)));
}

/// Hand-rolled generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }
    std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
        return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1));
    }
    std::vector<double> vector(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }
    /// Left-to-right contour with strictly increasing x and wavy y.
    std::vector<octseg::Point2> contour(std::size_t m, double width, double y0, double wiggle) {
        std::vector<octseg::Point2> pts(m);
        double x = uniform(0.0, 5.0);
        const double step = width / static_cast<double>(m);
        for (auto& p : pts) {
            p = {x, y0 + uniform(-wiggle, wiggle)};
            x += step * uniform(0.5, 1.5);
        }
        return pts;
    }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace oracle
