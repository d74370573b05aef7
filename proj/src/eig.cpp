#include "qrec/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qrec {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r + 1; c < n; ++c)
            s += 2.0 * std::norm(a(r, c));
    return std::sqrt(s);
}

ComplexMatrix symmetrized(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    ComplexMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            a(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
        a(r, r) = Complex(a(r, r).real(), 0.0);
    }
    return a;
}

// Diagonalizes in place; accumulates the rotations into *v when given.
// Returns the diagonal (unsorted) on success.
std::vector<double> jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* v) {
    const std::size_t n = a.rows();
    const double target = 1e-12 * a.frobenius_norm();

    int sweep = 0;
    double off = off_diagonal_norm(a);
    while (off > target) {
        if (sweep++ >= kMaxSweeps)
            throw ConvergenceError("herm_eig: Jacobi sweeps exhausted, residual " +
                                   std::to_string(off));
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0)
                    continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex phase = apq / mag; // e^{i beta}
                const Complex s_in = s * std::conj(phase);
                const Complex c_in = c * std::conj(phase);

                // Columns: A <- A G with G = [[c, s], [-s e^{-ib}, c e^{-ib}]].
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q)
                        continue;
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * c - akq * s_in;
                    a(k, q) = akp * s + akq * c_in;
                    // Rows mirror by hermiticity.
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                const double d_pp = app * c * c - 2.0 * mag * c * s + aqq * s * s;
                const double d_qq = app * s * s + 2.0 * mag * c * s + aqq * c * c;
                a(p, p) = d_pp;
                a(q, q) = d_qq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                if (v) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const Complex vkp = (*v)(k, p);
                        const Complex vkq = (*v)(k, q);
                        (*v)(k, p) = vkp * c - vkq * s_in;
                        (*v)(k, q) = vkp * s + vkq * c_in;
                    }
                }
            }
        }
        off = off_diagonal_norm(a);
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i)
        diag[i] = a(i, i).real();
    return diag;
}

void check_input(const ComplexMatrix& h, const char* who) {
    if (!h.is_square())
        throw DimensionError(std::string(who) + ": matrix must be square");
    if (h.rows() == 0)
        throw DimensionError(std::string(who) + ": empty matrix");
    if (h.hermiticity_error() > 1e-10 * h.max_abs())
        throw DomainError(std::string(who) + ": input is not Hermitian within tolerance");
}

} // namespace

EigenSystem herm_eig(const ComplexMatrix& h) {
    check_input(h, "herm_eig");
    const std::size_t n = h.rows();
    ComplexMatrix a = symmetrized(h);
    ComplexMatrix v = ComplexMatrix::identity(n);
    std::vector<double> diag = jacobi_diagonalize(a, &v);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = diag[order[k]];
        for (std::size_t r = 0; r < n; ++r)
            out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

std::vector<double> herm_eigenvalues(const ComplexMatrix& h) {
    check_input(h, "herm_eigenvalues");
    ComplexMatrix a = symmetrized(h);
    std::vector<double> diag = jacobi_diagonalize(a, nullptr);
    std::sort(diag.begin(), diag.end());
    return diag;
}

ComplexMatrix func_of_hermitian(const ComplexMatrix& h, const std::function<Complex(double)>& f) {
    EigenSystem es = herm_eig(h);
    const std::size_t n = h.rows();
    // W = V f(Lambda), result = W V^dagger.
    ComplexMatrix w = es.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex fk = f(es.values[k]);
        for (std::size_t r = 0; r < n; ++r)
            w(r, k) *= fk;
    }
    return w * es.vectors.adjoint();
}

ComplexMatrix sqrt_psd(const ComplexMatrix& h) {
    EigenSystem es = herm_eig(h);
    for (double& lam : es.values) {
        if (lam < -1e-10)
            throw DomainError("sqrt_psd: matrix not positive semidefinite (eigenvalue " +
                              std::to_string(lam) + ")");
        if (lam < 0.0)
            lam = 0.0;
    }
    const std::size_t n = h.rows();
    ComplexMatrix w = es.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(es.values[k]);
        for (std::size_t r = 0; r < n; ++r)
            w(r, k) *= s;
    }
    return w * es.vectors.adjoint();
}

double trace_norm_hermitian(const ComplexMatrix& m) {
    std::vector<double> eigs = herm_eigenvalues(m);
    double s = 0.0;
    for (double lam : eigs)
        s += std::abs(lam);
    return s;
}

} // namespace qrec
