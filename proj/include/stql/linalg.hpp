#pragma once

// Small dense linear algebra: a row-major matrix, a cyclic Jacobi eigensolver for real
// symmetric matrices, Householder least squares and a bracketed 1-D minimizer. Sizes in
// this library never exceed a few dozen rows.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace stql {

template <std::floating_point T>
class BasicMatrix {
public:
    BasicMatrix() = default;
    BasicMatrix(std::size_t rows, std::size_t cols, T fill = T{0})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static BasicMatrix identity(std::size_t n) {
        BasicMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    const T& operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    [[nodiscard]] std::vector<T> column(std::size_t c) const {
        std::vector<T> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    [[nodiscard]] T trace() const {
        T t{0};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    [[nodiscard]] bool is_symmetric(T tol = T{0}) const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

    friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        BasicMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    [[nodiscard]] BasicMatrix transposed() const {
        BasicMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = BasicMatrix<double>;

template <std::floating_point T>
struct BasicEigenSystem {
    std::vector<T> values;      // ascending
    BasicMatrix<T> vectors;     // column k pairs with values[k]
};

using EigenSystem = BasicEigenSystem<double>;

/// Flips each column so that its largest-magnitude component is positive. Ties go to the
/// lowest index.
template <std::floating_point T>
void fix_eigenvector_signs(BasicMatrix<T>& vectors) {
    for (std::size_t c = 0; c < vectors.cols(); ++c) {
        std::size_t best = 0;
        for (std::size_t r = 1; r < vectors.rows(); ++r)
            if (std::abs(vectors(r, c)) > std::abs(vectors(best, c))) best = r;
        if (vectors(best, c) < T{0})
            for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, c) = -vectors(r, c);
    }
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix. Rotation angles come from
/// element differences, so tiny couplings between nearly degenerate diagonal entries are
/// resolved to full relative precision.
template <std::floating_point T>
BasicEigenSystem<T> symmetric_eigen(BasicMatrix<T> a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("symmetric_eigen: matrix not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (a(i, j) != a(j, i)) {
                const T scale = std::max(std::abs(a(i, j)), std::abs(a(j, i)));
                if (std::abs(a(i, j) - a(j, i)) > scale * 64 * std::numeric_limits<T>::epsilon())
                    throw std::invalid_argument("symmetric_eigen: matrix not symmetric");
                a(j, i) = a(i, j);
            }

    auto v = BasicMatrix<T>::identity(n);
    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        T off{0};
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off == T{0}) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const T apq = a(p, q);
                if (apq == T{0}) continue;
                const T app = a(p, p);
                const T aqq = a(q, q);
                // Skip rotations that cannot change either diagonal entry.
                if (sweep > 3 && std::abs(apq) * T{1e-3} * std::numeric_limits<T>::epsilon() == T{0}) {
                    a(p, q) = a(q, p) = T{0};
                    continue;
                }
                const T theta = (aqq - app) / (T{2} * apq);
                T t = T{1} / (std::abs(theta) + std::sqrt(theta * theta + T{1}));
                if (theta < T{0}) t = -t;
                if (!std::isfinite(theta)) t = T{0.5} / theta;  // |theta| overflowed: t ~ 1/(2 theta)
                const T c = T{1} / std::sqrt(t * t + T{1});
                const T s = t * c;
                const T tau = s / (T{1} + c);

                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = T{0};
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const T arp = a(r, p);
                    const T arq = a(r, q);
                    a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                    a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const T vrp = v(r, p);
                    const T vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
        if (sweep == max_sweeps - 1) throw std::runtime_error("symmetric_eigen: Jacobi sweeps did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    BasicEigenSystem<T> out{std::vector<T>(n), BasicMatrix<T>(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    fix_eigenvector_signs(out.vectors);
    return out;
}

/// Diagonalizes after removing the mean diagonal, which keeps small splittings between
/// large, nearly equal diagonal entries well resolved. Eigenvalues are shifted back.
template <std::floating_point T>
BasicEigenSystem<T> symmetric_eigen_shifted(BasicMatrix<T> a) {
    const std::size_t n = a.rows();
    if (n == 0) return {};
    const T shift = a.trace() / static_cast<T>(n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= shift;
    auto sys = symmetric_eigen(std::move(a));
    for (auto& e : sys.values) e += shift;
    return sys;
}

struct LeastSquaresFit {
    std::vector<double> coefficients;
    double residual_norm = 0.0;
    double condition_estimate = 0.0;  // max |R_ii| / min |R_ii| of the QR factor
};

/// Solves min ||design * c - rhs||_2 by Householder QR. Rejects rank-deficient or badly
/// conditioned designs (condition estimate above `max_condition`).
inline LeastSquaresFit least_squares(Matrix design, std::vector<double> rhs, double max_condition = 1e10) {
    const std::size_t m = design.rows();
    const std::size_t n = design.cols();
    if (rhs.size() != m) throw std::invalid_argument("least_squares: rhs length mismatch");
    if (m < n || n == 0) throw std::invalid_argument("least_squares: need at least as many rows as unknowns");

    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += design(i, k) * design(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) throw std::invalid_argument("least_squares: rank-deficient design");
        const double alpha = design(k, k) > 0 ? -norm : norm;
        std::vector<double> v(m - k);
        for (std::size_t i = k; i < m; ++i) v[i - k] = design(i, k);
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (double e : v) vnorm2 += e * e;
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = k; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i - k] * design(i, j);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) design(i, j) -= f * v[i - k];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i - k] * rhs[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) rhs[i] -= f * v[i - k];
    }

    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        rmax = std::max(rmax, std::abs(design(k, k)));
        rmin = std::min(rmin, std::abs(design(k, k)));
    }
    LeastSquaresFit fit;
    fit.condition_estimate = rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
    if (!(fit.condition_estimate <= max_condition))
        throw std::invalid_argument("least_squares: ill-conditioned design");

    fit.coefficients.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= design(k, j) * fit.coefficients[j];
        fit.coefficients[k] = s / design(k, k);
    }
    double res = 0.0;
    for (std::size_t i = n; i < m; ++i) res += rhs[i] * rhs[i];
    fit.residual_norm = std::sqrt(res);
    return fit;
}

/// Least squares fit of y ~ sum_k c_k * basis_k(x).
inline LeastSquaresFit fit_basis(std::span<const double> xs, std::span<const double> ys,
                                 const std::vector<std::function<double(double)>>& basis,
                                 double max_condition = 1e10) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_basis: x/y length mismatch");
    Matrix design(xs.size(), basis.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t k = 0; k < basis.size(); ++k) design(i, k) = basis[k](xs[i]);
    return least_squares(std::move(design), std::vector<double>(ys.begin(), ys.end()), max_condition);
}

/// Ordinary polynomial fit, coefficients in ascending powers.
inline LeastSquaresFit polyfit(std::span<const double> xs, std::span<const double> ys, int degree) {
    std::vector<std::function<double(double)>> basis;
    for (int p = 0; p <= degree; ++p) basis.emplace_back([p](double x) { return std::pow(x, p); });
    return fit_basis(xs, ys, basis);
}

/// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
double minimize_bracketed(F&& f, double lo, double hi, double tol = 1e-15) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace stql
