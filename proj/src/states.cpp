#include "qrec/states.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "qrec/eig.hpp"

namespace qrec {

namespace {

int qubits_from_dim(std::size_t dim, const char* who) {
    int n = 0;
    std::size_t d = 1;
    while (d < dim) {
        d <<= 1;
        ++n;
    }
    if (d != dim || n < 1)
        throw DimensionError(std::string(who) + ": dimension is not a power of two >= 2");
    return n;
}

// Index layout: qubit q contributes bit (n-1-q), so qubit 0 is the most
// significant bit of the basis index.
void validate_keep(int n_qubits, const std::vector<int>& keep) {
    if (keep.empty())
        throw ArgumentError("partial trace: keep list is empty");
    std::uint64_t seen = 0;
    for (int q : keep) {
        if (q < 0 || q >= n_qubits)
            throw ArgumentError("partial trace: qubit index out of range");
        if (seen & (1ull << q))
            throw ArgumentError("partial trace: duplicate qubit index");
        seen |= 1ull << q;
    }
}

ComplexMatrix reduce_impl(const ComplexMatrix& mat, int n_qubits, const std::vector<int>& keep) {
    const int m = static_cast<int>(keep.size());
    const std::size_t dim_out = 1ull << m;
    const std::size_t dim_tr = 1ull << (n_qubits - m);

    std::vector<int> traced;
    std::uint64_t kept_mask = 0;
    for (int q : keep)
        kept_mask |= 1ull << q;
    for (int q = 0; q < n_qubits; ++q)
        if (!(kept_mask & (1ull << q)))
            traced.push_back(q);

    // Precompute the embedded index of every kept / traced bit pattern.
    std::vector<std::size_t> base_keep(dim_out, 0);
    for (std::size_t r = 0; r < dim_out; ++r)
        for (int k = 0; k < m; ++k)
            if (r & (1ull << (m - 1 - k)))
                base_keep[r] |= 1ull << (n_qubits - 1 - keep[k]);
    std::vector<std::size_t> base_tr(dim_tr, 0);
    for (std::size_t t = 0; t < dim_tr; ++t)
        for (std::size_t k = 0; k < traced.size(); ++k)
            if (t & (1ull << (traced.size() - 1 - k)))
                base_tr[t] |= 1ull << (n_qubits - 1 - traced[k]);

    const std::size_t dim = mat.rows();
    ComplexMatrix out(dim_out, dim_out);
    for (std::size_t r = 0; r < dim_out; ++r)
        for (std::size_t c = 0; c < dim_out; ++c) {
            Complex s = 0.0;
            for (std::size_t t = 0; t < dim_tr; ++t)
                s += mat.data()[(base_keep[r] | base_tr[t]) * dim + (base_keep[c] | base_tr[t])];
            out(r, c) = s;
        }
    return out;
}

} // namespace

DensityMatrix make_density(ComplexMatrix mat) {
    if (!mat.is_square())
        throw DimensionError("make_density: matrix must be square");
    const int n = qubits_from_dim(mat.rows(), "make_density");
    if (mat.hermiticity_error() > 1e-10)
        throw DomainError("make_density: matrix is not Hermitian to 1e-10");
    const Complex tr = mat.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > 1e-10)
        throw DomainError("make_density: trace differs from 1 by more than 1e-10");
    return DensityMatrix{std::move(mat), n};
}

void check_density_psd(const DensityMatrix& rho) {
    const std::vector<double> eigs = herm_eigenvalues(rho.mat);
    if (!eigs.empty() && eigs.front() < -1e-10)
        throw DomainError("density matrix has eigenvalue below -1e-10: " +
                          std::to_string(eigs.front()));
}

UnitaryOp make_unitary(ComplexMatrix mat, std::string tag) {
    if (!mat.is_square())
        throw DimensionError("make_unitary: matrix must be square");
    const int n = qubits_from_dim(mat.rows(), "make_unitary");
    const ComplexMatrix gram = mat.adjoint() * mat;
    if (max_abs_diff(gram, ComplexMatrix::identity(mat.rows())) > 1e-9)
        throw DomainError("make_unitary: U^dagger U deviates from identity beyond 1e-9");
    return UnitaryOp{std::move(mat), n, std::move(tag)};
}

ComplexMatrix random_state_vector(int n_qubits, Rng& rng) {
    if (n_qubits < 1)
        throw ArgumentError("random_state_vector: need at least one qubit");
    const std::size_t dim = 1ull << n_qubits;
    ComplexMatrix v(dim, 1);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            v(i, 0) = rng.complex_normal();
            norm2 += std::norm(v(i, 0));
        }
    } while (norm2 < 1e-100);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < dim; ++i)
        v(i, 0) *= inv;
    return v;
}

DensityMatrix random_pure_state(int n_qubits, Rng& rng) {
    const ComplexMatrix v = random_state_vector(n_qubits, rng);
    const std::size_t dim = v.rows();
    ComplexMatrix rho(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            rho(r, c) = v(r, 0) * std::conj(v(c, 0));
    return make_density(std::move(rho));
}

DensityMatrix random_mixed_state_bures(int n_qubits, Rng& rng) {
    if (n_qubits < 1)
        throw ArgumentError("random_mixed_state_bures: need at least one qubit");
    const std::size_t dim = 1ull << n_qubits;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const UnitaryOp u = random_unitary(n_qubits, rng);
        const ComplexMatrix a = ginibre(dim, rng);
        ComplexMatrix r = (ComplexMatrix::identity(dim) + u.mat) * a;
        ComplexMatrix m = r * r.adjoint();
        const double tr = m.trace().real();
        if (tr < 1e-14)
            continue;
        m *= Complex(1.0 / tr, 0.0);
        // Symmetrize away accumulated roundoff.
        ComplexMatrix sym(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                sym(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        return make_density(std::move(sym));
    }
    throw DomainError("random_mixed_state_bures: degenerate draw after 3 attempts");
}

UnitaryOp random_unitary(int n_qubits, Rng& rng, double scale) {
    if (n_qubits < 1)
        throw ArgumentError("random_unitary: need at least one qubit");
    if (scale <= 0.0)
        throw ArgumentError("random_unitary: scale must be positive");
    const std::size_t dim = 1ull << n_qubits;
    const ComplexMatrix m = ginibre(dim, rng);
    // Hermitian generator K = -i * scale * (M - M^dagger)/2, U = exp(iK).
    ComplexMatrix k(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            k(r, c) = Complex(0.0, -0.5 * scale) * (m(r, c) - std::conj(m(c, r)));
    ComplexMatrix u = func_of_hermitian(k, [](double x) { return Complex(std::cos(x), std::sin(x)); });
    return make_unitary(std::move(u), "random");
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    validate_keep(rho.n_qubits, keep);
    if (static_cast<int>(keep.size()) == rho.n_qubits) {
        bool natural = true;
        for (std::size_t i = 0; i < keep.size(); ++i)
            natural = natural && keep[i] == static_cast<int>(i);
        if (natural)
            return rho;
    }
    ComplexMatrix out = reduce_impl(rho.mat, rho.n_qubits, keep);
    return DensityMatrix{std::move(out), static_cast<int>(keep.size())};
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& mat, int n_qubits,
                                   const std::vector<int>& keep) {
    validate_keep(n_qubits, keep);
    return reduce_impl(mat, n_qubits, keep);
}

ComplexMatrix pure_state_reduced(const ComplexMatrix& state_vec, int n_qubits,
                                 const std::vector<int>& keep) {
    validate_keep(n_qubits, keep);
    const int m = static_cast<int>(keep.size());
    const std::size_t dim_out = 1ull << m;
    const std::size_t dim_tr = 1ull << (n_qubits - m);

    std::vector<int> traced;
    std::uint64_t kept_mask = 0;
    for (int q : keep)
        kept_mask |= 1ull << q;
    for (int q = 0; q < n_qubits; ++q)
        if (!(kept_mask & (1ull << q)))
            traced.push_back(q);

    std::vector<std::size_t> base_keep(dim_out, 0);
    for (std::size_t r = 0; r < dim_out; ++r)
        for (int k = 0; k < m; ++k)
            if (r & (1ull << (m - 1 - k)))
                base_keep[r] |= 1ull << (n_qubits - 1 - keep[k]);
    std::vector<std::size_t> base_tr(dim_tr, 0);
    for (std::size_t t = 0; t < dim_tr; ++t)
        for (std::size_t k = 0; k < traced.size(); ++k)
            if (t & (1ull << (traced.size() - 1 - k)))
                base_tr[t] |= 1ull << (n_qubits - 1 - traced[k]);

    ComplexMatrix out(dim_out, dim_out);
    for (std::size_t r = 0; r < dim_out; ++r)
        for (std::size_t c = 0; c < dim_out; ++c) {
            Complex s = 0.0;
            for (std::size_t t = 0; t < dim_tr; ++t)
                s += state_vec.data()[base_keep[r] | base_tr[t]] *
                     std::conj(state_vec.data()[base_keep[c] | base_tr[t]]);
            out(r, c) = s;
        }
    return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, char subsystem, int split) {
    if (subsystem != 'A' && subsystem != 'B')
        throw ArgumentError("partial_transpose: subsystem must be 'A' or 'B'");
    if (split < 1 || split >= rho.n_qubits)
        throw ArgumentError("partial_transpose: split out of range");
    const std::size_t da = 1ull << split;
    const std::size_t db = 1ull << (rho.n_qubits - split);
    ComplexMatrix out(da * db, da * db);
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t b = 0; b < db; ++b)
            for (std::size_t a2 = 0; a2 < da; ++a2)
                for (std::size_t b2 = 0; b2 < db; ++b2) {
                    const std::size_t r = a * db + b;
                    const std::size_t c = a2 * db + b2;
                    if (subsystem == 'A')
                        out(r, c) = rho.mat(a2 * db + b, a * db + b2);
                    else
                        out(r, c) = rho.mat(a * db + b2, a2 * db + b);
                }
    return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryOp& u) {
    if (rho.mat.rows() != u.mat.rows())
        throw DimensionError("apply_unitary: dimension mismatch");
    ComplexMatrix m = u.mat * rho.mat * u.mat.adjoint();
    const std::size_t dim = m.rows();
    ComplexMatrix sym(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            sym(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return DensityMatrix{std::move(sym), rho.n_qubits};
}

namespace {

void check_eps(double eps, const char* who) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw ArgumentError(std::string(who) + ": eps must lie in [0, 1]");
}

ComplexMatrix projector_from_vector(const std::vector<Complex>& v) {
    ComplexMatrix out(v.size(), v.size());
    for (std::size_t r = 0; r < v.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c)
            out(r, c) = v[r] * std::conj(v[c]);
    return out;
}

} // namespace

DensityMatrix rho_minus(double eps) {
    check_eps(eps, "rho_minus");
    const double s = 1.0 / std::sqrt(2.0);
    // |-> (x) |1> = (|01> - |11>)/sqrt(2)
    ComplexMatrix proj = projector_from_vector({0.0, s, 0.0, -s});
    ComplexMatrix m = Complex((1.0 - eps) / 4.0, 0.0) * ComplexMatrix::identity(4) +
                      Complex(eps, 0.0) * proj;
    return make_density(std::move(m));
}

DensityMatrix werner_state(double eps) {
    check_eps(eps, "werner_state");
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix proj = projector_from_vector({0.0, s, -s, 0.0});
    ComplexMatrix m = Complex((1.0 - eps) / 4.0, 0.0) * ComplexMatrix::identity(4) +
                      Complex(eps, 0.0) * proj;
    return make_density(std::move(m));
}

DensityMatrix singlet_state() { return werner_state(1.0); }

DensityMatrix bell_phi_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return make_density(projector_from_vector({s, 0.0, 0.0, s}));
}

UnitaryOp cnot_gate() {
    ComplexMatrix m(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return make_unitary(std::move(m), "cnot");
}

UnitaryOp tensor_product(const UnitaryOp& a, const UnitaryOp& b) {
    return UnitaryOp{kron(a.mat, b.mat), a.n_qubits + b.n_qubits, "local-product"};
}

} // namespace qrec
