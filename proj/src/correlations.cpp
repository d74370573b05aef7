#include "qrec/correlations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "qrec/eig.hpp"

namespace qrec {

namespace {

constexpr double kPi = std::numbers::pi;

double log2_safe(double x) { return std::log2(x); }

// Entropy of a spectrum that should be a probability distribution.  Strict
// mode rejects eigenvalues below -1e-10; tolerant mode clamps them (used for
// conditional states whose normalization can amplify harmless roundoff).
double entropy_from_spectrum(const std::vector<double>& eigs, bool strict) {
    double s = 0.0;
    for (double lam : eigs) {
        if (lam < -1e-10 && strict)
            throw DomainError("entropy: eigenvalue below -1e-10 (" + std::to_string(lam) + ")");
        if (lam > 0.0)
            s -= lam * log2_safe(lam);
    }
    return s;
}

std::vector<int> range_from(int lo, int hi) {
    std::vector<int> v(hi - lo);
    std::iota(v.begin(), v.end(), lo);
    return v;
}

} // namespace

MeasurementBasis MeasurementBasis::from_direction(double theta, double phi) {
    MeasurementBasis b;
    b.theta = theta;
    b.phi = phi;
    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    ComplexMatrix plus(2, 2);
    plus(0, 0) = 0.5 * (1.0 + nz);
    plus(0, 1) = 0.5 * Complex(nx, -ny);
    plus(1, 0) = 0.5 * Complex(nx, ny);
    plus(1, 1) = 0.5 * (1.0 - nz);
    b.proj_plus = plus;
    b.proj_minus = ComplexMatrix::identity(2) - plus;
    return b;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    if (std::abs(rho.mat.trace() - Complex(1.0, 0.0)) > 1e-8)
        throw DomainError("von_neumann_entropy: input trace differs from 1");
    return entropy_from_spectrum(herm_eigenvalues(rho.mat), /*strict=*/true);
}

double entanglement_entropy(const DensityMatrix& rho, int split) {
    if (split < 1 || split >= rho.n_qubits)
        throw ArgumentError("entanglement_entropy: split out of range");
    const double purity = rho.mat.frobenius_norm() * rho.mat.frobenius_norm();
    if (purity < 1.0 - 1e-8)
        throw PreconditionError("entanglement_entropy: state is not pure (Tr rho^2 = " +
                                std::to_string(purity) + ")");
    return von_neumann_entropy(partial_trace(rho, range_from(0, split)));
}

double negativity(const DensityMatrix& rho, int split) {
    const ComplexMatrix pt = partial_transpose(rho, 'A', split);
    const double tn = trace_norm_hermitian(pt);
    return std::max(0.0, 0.5 * (tn - 1.0));
}

double classical_correlation(const DensityMatrix& rho, const MeasurementBasis& basis) {
    const int n = rho.n_qubits;
    const std::size_t db = 1ull << (n - 1);
    const ComplexMatrix id_b = ComplexMatrix::identity(db);
    const std::vector<int> keep_b = range_from(1, n);

    const double s_b =
        entropy_from_spectrum(herm_eigenvalues(partial_trace_matrix(rho.mat, n, keep_b)), true);

    double j = s_b;
    for (const ComplexMatrix* proj : {&basis.proj_plus, &basis.proj_minus}) {
        const ComplexMatrix p_full = kron(*proj, id_b);
        const ComplexMatrix m = p_full * rho.mat * p_full;
        const double prob = m.trace().real();
        if (prob <= 1e-12)
            continue;
        ComplexMatrix cond = partial_trace_matrix(m, n, keep_b);
        cond *= Complex(1.0 / prob, 0.0);
        // Tolerant spectrum handling: division by small prob can amplify
        // roundoff into slightly negative eigenvalues.
        std::vector<double> eigs = herm_eigenvalues(cond);
        for (double& lam : eigs)
            lam = std::max(lam, 0.0);
        j -= prob * entropy_from_spectrum(eigs, /*strict=*/false);
    }
    return j;
}

namespace {

struct SearchPoint {
    double theta = 0.0;
    double phi = 0.0;
    double j = 0.0;
};

void canonicalize_angles(double& theta, double& phi) {
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0.0)
        theta += 2.0 * kPi;
    if (theta > kPi) {
        theta = 2.0 * kPi - theta;
        phi += kPi;
    }
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0)
        phi += 2.0 * kPi;
}

double eval_j(const DensityMatrix& rho, double theta, double phi) {
    canonicalize_angles(theta, phi);
    return classical_correlation(rho, MeasurementBasis::from_direction(theta, phi));
}

// Nelder-Mead ascent on J over (theta, phi).  Deterministic; the angle
// wrap happens inside the evaluation so the simplex can roam freely.
SearchPoint nelder_mead_max(const DensityMatrix& rho, SearchPoint start, int iters) {
    struct Vertex {
        double t, p, f; // f = -J (minimized)
    };
    auto eval = [&](double t, double p) { return -eval_j(rho, t, p); };
    std::array<Vertex, 3> simplex = {Vertex{start.theta, start.phi, -start.j},
                                     Vertex{start.theta + 0.15, start.phi, 0.0},
                                     Vertex{start.theta, start.phi + 0.15, 0.0}};
    simplex[1].f = eval(simplex[1].t, simplex[1].p);
    simplex[2].f = eval(simplex[2].t, simplex[2].p);

    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();
    for (int it = 0; it < iters; ++it) {
        const double ct = 0.5 * (simplex[0].t + simplex[1].t);
        const double cp = 0.5 * (simplex[0].p + simplex[1].p);
        Vertex refl{ct + (ct - simplex[2].t), cp + (cp - simplex[2].p), 0.0};
        refl.f = eval(refl.t, refl.p);
        if (refl.f < simplex[0].f) {
            Vertex expd{ct + 2.0 * (ct - simplex[2].t), cp + 2.0 * (cp - simplex[2].p), 0.0};
            expd.f = eval(expd.t, expd.p);
            simplex[2] = (expd.f < refl.f) ? expd : refl;
        } else if (refl.f < simplex[1].f) {
            simplex[2] = refl;
        } else {
            Vertex contr{ct + 0.5 * (simplex[2].t - ct), cp + 0.5 * (simplex[2].p - cp), 0.0};
            contr.f = eval(contr.t, contr.p);
            if (contr.f < simplex[2].f) {
                simplex[2] = contr;
            } else {
                for (int k = 1; k < 3; ++k) {
                    simplex[k].t = simplex[0].t + 0.5 * (simplex[k].t - simplex[0].t);
                    simplex[k].p = simplex[0].p + 0.5 * (simplex[k].p - simplex[0].p);
                    simplex[k].f = eval(simplex[k].t, simplex[k].p);
                }
            }
        }
        order();
    }
    double bt = simplex[0].t, bp = simplex[0].p;
    canonicalize_angles(bt, bp);
    return SearchPoint{bt, bp, -simplex[0].f};
}

} // namespace

DiscordResult discord_detail(const DensityMatrix& rho, const DiscordConfig& cfg) {
    if (rho.n_qubits < 2)
        throw ArgumentError("discord: need at least two qubits");
    if (cfg.n_directions < 2)
        throw ArgumentError("discord: n_directions must be at least 2");

    const int n = rho.n_qubits;
    const double s_a = von_neumann_entropy(partial_trace(rho, {0}));
    const double s_b = von_neumann_entropy(partial_trace(rho, range_from(1, n)));
    const double s_ab = von_neumann_entropy(rho);
    const double mutual_info = s_a + s_b - s_ab;

    // Fibonacci lattice over the hemisphere.
    constexpr double kGolden = 0.6180339887498949;
    SearchPoint best;
    bool first = true;
    for (int i = 0; i < cfg.n_directions; ++i) {
        const double z = (i + 0.5) / cfg.n_directions;
        const double theta = std::acos(z);
        const double phi = 2.0 * kPi * std::fmod(i * kGolden, 1.0);
        const double j = eval_j(rho, theta, phi);
        if (first || j > best.j) {
            best = SearchPoint{theta, phi, j};
            first = false;
        }
    }
    if (cfg.refine)
        best = nelder_mead_max(rho, best, cfg.refine_iters);

    DiscordResult out;
    out.raw = mutual_info - best.j;
    out.value = std::max(out.raw, 0.0);
    out.theta = best.theta;
    out.phi = best.phi;
    return out;
}

double discord(const DensityMatrix& rho, const DiscordConfig& cfg) {
    return discord_detail(rho, cfg).value;
}

double fidelity_pure(const DensityMatrix& psi, const UnitaryOp& u) {
    if (psi.mat.rows() != u.mat.rows())
        throw DimensionError("fidelity_pure: dimension mismatch");
    const double purity = psi.mat.frobenius_norm() * psi.mat.frobenius_norm();
    if (purity < 1.0 - 1e-8)
        throw PreconditionError("fidelity_pure: input state is not pure");
    // For rank-1 rho, Tr[rho U rho U^dagger] = |<psi|U|psi>|^2.
    const ComplexMatrix evolved = u.mat * psi.mat * u.mat.adjoint();
    Complex t = 0.0;
    for (std::size_t r = 0; r < psi.mat.rows(); ++r)
        for (std::size_t c = 0; c < psi.mat.cols(); ++c)
            t += psi.mat(r, c) * evolved(c, r);
    return std::clamp(t.real(), 0.0, 1.0);
}

double fidelity_pure_vec(const ComplexMatrix& psi, const UnitaryOp& u) {
    if (psi.rows() != u.mat.rows() || psi.cols() != 1)
        throw DimensionError("fidelity_pure_vec: expected a column state vector");
    Complex amp = 0.0;
    const std::size_t dim = psi.rows();
    for (std::size_t r = 0; r < dim; ++r) {
        Complex row = 0.0;
        for (std::size_t c = 0; c < dim; ++c)
            row += u.mat(r, c) * psi(c, 0);
        amp += std::conj(psi(r, 0)) * row;
    }
    return std::clamp(std::norm(amp), 0.0, 1.0);
}

double fidelity_uhlmann(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.mat.rows() != sigma.mat.rows())
        throw DimensionError("fidelity_uhlmann: dimension mismatch");
    const ComplexMatrix root = sqrt_psd(rho.mat);
    const ComplexMatrix inner = root * sigma.mat * root;
    const ComplexMatrix outer = sqrt_psd(inner);
    const double t = outer.trace().real();
    return std::clamp(t * t, 0.0, 1.0);
}

} // namespace qrec
