#include "entac/linalg.hpp"

#include <stdexcept>

namespace entac {

Vector solve_dense(Matrix a, Vector b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw std::invalid_argument("solve_dense: shape mismatch");

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("solve_dense: singular matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a(r, col) * inv;
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }

    Vector x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t j = ri + 1; j < n; ++j) acc -= a(ri, j) * x[j];
        x[ri] = acc / a(ri, ri);
    }
    return x;
}

double solve_residual(const Matrix& a, const Vector& x, const Vector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        KahanSum row;
        for (std::size_t j = 0; j < a.cols(); ++j) row.add(a(i, j) * x[j]);
        worst = std::max(worst, std::abs(row.value() - b[i]));
    }
    return worst;
}

}  // namespace entac
