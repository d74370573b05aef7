#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qrec/correlations.hpp"
#include "qrec/eig.hpp"
#include "qrec/rng.hpp"
#include "qrec/states.hpp"

using namespace qrec;

namespace {

// Closed-form Werner-state discord, used as an independent oracle for the
// grid + refinement engine.
double werner_discord_closed_form(double z) {
    auto term = [](double w, double x) { return x > 0.0 ? w * std::log2(x) : 0.0; };
    return term((1.0 - z) / 4.0, 1.0 - z) + term((1.0 + 3.0 * z) / 4.0, 1.0 + 3.0 * z) -
           term((1.0 + z) / 2.0, 1.0 + z);
}

DensityMatrix product_state(Rng& rng) {
    const DensityMatrix a = random_mixed_state_bures(1, rng);
    const DensityMatrix b = random_mixed_state_bures(1, rng);
    return make_density(kron(a.mat, b.mat));
}

DensityMatrix two_amplitude_state(double p) {
    // sqrt(1-p)|00> + sqrt(p)|11>
    ComplexMatrix m(4, 4);
    const double a = std::sqrt(1.0 - p), b = std::sqrt(p);
    m(0, 0) = a * a;
    m(0, 3) = a * b;
    m(3, 0) = a * b;
    m(3, 3) = b * b;
    return make_density(m);
}

} // namespace

TEST_CASE("measurement basis projectors") {
    Rng rng(1);
    for (int i = 0; i < 10; ++i) {
        const MeasurementBasis b =
            MeasurementBasis::from_direction(rng.uniform(0.0, 3.14159), rng.uniform(0.0, 6.28));
        CHECK(max_abs_diff(b.proj_plus + b.proj_minus, ComplexMatrix::identity(2)) < 1e-14);
        CHECK(max_abs_diff(b.proj_plus * b.proj_plus, b.proj_plus) < 1e-14);
        CHECK(std::abs(b.proj_plus.trace() - Complex(1.0, 0.0)) < 1e-14);
    }
}

TEST_CASE("von Neumann entropy") {
    Rng rng(2);
    CHECK(von_neumann_entropy(random_pure_state(2, rng)) == doctest::Approx(0.0).epsilon(1e-9));

    const DensityMatrix maximally_mixed =
        make_density(Complex(0.25, 0.0) * ComplexMatrix::identity(4));
    CHECK(von_neumann_entropy(maximally_mixed) == doctest::Approx(2.0).epsilon(1e-12));

    ComplexMatrix d(2, 2);
    d(0, 0) = 0.25;
    d(1, 1) = 0.75;
    CHECK(von_neumann_entropy(make_density(d)) ==
          doctest::Approx(0.8112781244591328).epsilon(1e-12));
}

TEST_CASE("entropy is unitary invariant") {
    Rng rng(3);
    for (int i = 0; i < 5; ++i) {
        const DensityMatrix rho = random_mixed_state_bures(2, rng);
        const UnitaryOp u = random_unitary(2, rng);
        CHECK(std::abs(von_neumann_entropy(apply_unitary(rho, u)) - von_neumann_entropy(rho)) <
              1e-8);
    }
}

TEST_CASE("entanglement entropy") {
    CHECK(entanglement_entropy(bell_phi_plus(), 1) == doctest::Approx(1.0).epsilon(1e-10));

    ComplexMatrix m(4, 4);
    m(0, 0) = 1.0;
    CHECK(entanglement_entropy(make_density(m), 1) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(entanglement_entropy(two_amplitude_state(0.1), 1) ==
          doctest::Approx(0.46899559358928117).epsilon(1e-10));

    // S(Tr_B) equals S(Tr_A) for pure states.
    Rng rng(4);
    const DensityMatrix psi = random_pure_state(3, rng);
    const double sa = von_neumann_entropy(partial_trace(psi, {0}));
    const double sb = von_neumann_entropy(partial_trace(psi, {1, 2}));
    CHECK(std::abs(sa - sb) < 1e-8);

    CHECK_THROWS_AS(entanglement_entropy(werner_state(0.5), 1), PreconditionError);
}

TEST_CASE("negativity") {
    Rng rng(5);
    CHECK(negativity(product_state(rng), 1) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(negativity(bell_phi_plus(), 1) == doctest::Approx(0.5).epsilon(1e-10));
    // Entangled only above eps = 1/3.
    CHECK(negativity(werner_state(1.0 / 3.0), 1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(negativity(werner_state(0.4), 1) > 1e-3);
    CHECK(negativity(werner_state(0.2), 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("discord: product states carry none") {
    Rng rng(6);
    for (int i = 0; i < 3; ++i)
        CHECK(discord(product_state(rng)) <= 1e-6);
    // rho_minus is quantum uncorrelated for every eps.
    for (double eps : {0.2, 0.7})
        CHECK(discord(rho_minus(eps)) <= 1e-6);
}

TEST_CASE("discord: Bell state reaches the entanglement entropy") {
    const double d = discord(bell_phi_plus());
    CHECK(d == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(d - entanglement_entropy(bell_phi_plus(), 1)) < 1e-3);
}

TEST_CASE("discord: Werner closed form") {
    for (double eps : {0.2, 0.5, 0.8, 1.0}) {
        const double engine = discord(werner_state(eps));
        CHECK(engine == doctest::Approx(werner_discord_closed_form(eps)).epsilon(1e-4));
    }
    // Discordant below the entanglement threshold.
    CHECK(discord(werner_state(0.2)) > 0.0);
    CHECK(negativity(werner_state(0.2), 1) == doctest::Approx(0.0));
    CHECK(discord(werner_state(0.5)) == doctest::Approx(0.2624831837637343).epsilon(1e-4));
}

TEST_CASE("discord: local unitary invariance") {
    Rng rng(7);
    for (int i = 0; i < 4; ++i) {
        const DensityMatrix rho = random_mixed_state_bures(2, rng);
        const UnitaryOp local = tensor_product(random_unitary(1, rng), random_unitary(1, rng));
        const double d0 = discord(rho);
        const double d1 = discord(apply_unitary(rho, local));
        CHECK(std::abs(d0 - d1) <= 1e-6);

        const double n0 = negativity(rho, 1);
        const double n1 = negativity(apply_unitary(rho, local), 1);
        CHECK(std::abs(n0 - n1) <= 1e-9);
    }
}

TEST_CASE("discord: bounds on random states") {
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        const DensityMatrix rho = random_mixed_state_bures(2, rng);
        const double d = discord(rho);
        const double sa = von_neumann_entropy(partial_trace(rho, {0}));
        const double sb = von_neumann_entropy(partial_trace(rho, {1}));
        CHECK(d >= 0.0);
        CHECK(d <= std::min(sa, sb) + 1e-6);
    }
}

TEST_CASE("discord: 40-direction grid is adequate") {
    Rng rng(9);
    DiscordConfig coarse;
    DiscordConfig fine;
    fine.n_directions = 400;
    int within = 0;
    const int total = 200;
    for (int i = 0; i < total; ++i) {
        const DensityMatrix rho = random_mixed_state_bures(2, rng);
        if (std::abs(discord(rho, coarse) - discord(rho, fine)) <= 5e-3)
            ++within;
    }
    CHECK(within >= total * 95 / 100);
}

TEST_CASE("discord: three-qubit measurement on qubit A") {
    Rng rng(10);
    const DensityMatrix rho = random_mixed_state_bures(3, rng);
    const double d = discord(rho);
    CHECK(d >= 0.0);
    const double sa = von_neumann_entropy(partial_trace(rho, {0}));
    CHECK(d <= sa + 1e-6);
    CHECK_THROWS_AS(discord(random_mixed_state_bures(1, rng)), ArgumentError);
}

TEST_CASE("pure-state fidelity") {
    Rng rng(11);
    const DensityMatrix psi = random_pure_state(2, rng);
    CHECK(fidelity_pure(psi, make_unitary(ComplexMatrix::identity(4))) ==
          doctest::Approx(1.0).epsilon(1e-10));

    // |0> flipped by sigma_x is orthogonal.
    ComplexMatrix zero(2, 2);
    zero(0, 0) = 1.0;
    CHECK(fidelity_pure(make_density(zero), make_unitary(pauli_x())) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // |+> under sigma_z flips, under sigma_x is fixed.
    ComplexMatrix plus(2, 2);
    plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
    CHECK(fidelity_pure(make_density(plus), make_unitary(pauli_z())) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fidelity_pure(make_density(plus), make_unitary(pauli_x())) ==
          doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(fidelity_pure(werner_state(0.5), make_unitary(ComplexMatrix::identity(4))),
                    PreconditionError);

    // Vector path agrees with the density path.
    const ComplexMatrix vec = random_state_vector(2, rng);
    ComplexMatrix outer(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            outer(r, c) = vec(r, 0) * std::conj(vec(c, 0));
    const UnitaryOp u = random_unitary(2, rng);
    CHECK(std::abs(fidelity_pure_vec(vec, u) - fidelity_pure(make_density(outer), u)) < 1e-10);
}

TEST_CASE("Uhlmann fidelity") {
    Rng rng(12);
    const DensityMatrix rho = random_mixed_state_bures(2, rng);
    CHECK(fidelity_uhlmann(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));

    // The maximally mixed state is unitary invariant.
    const DensityMatrix mm = make_density(Complex(0.25, 0.0) * ComplexMatrix::identity(4));
    const UnitaryOp u = random_unitary(2, rng);
    CHECK(fidelity_uhlmann(mm, apply_unitary(mm, u)) == doctest::Approx(1.0).epsilon(1e-9));

    // Pure-pure reduction to the squared overlap.
    const ComplexMatrix v1 = random_state_vector(2, rng);
    const ComplexMatrix v2 = random_state_vector(2, rng);
    Complex overlap = 0.0;
    for (int i = 0; i < 4; ++i)
        overlap += std::conj(v1(i, 0)) * v2(i, 0);
    auto outer = [](const ComplexMatrix& v) {
        ComplexMatrix m(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                m(r, c) = v(r, 0) * std::conj(v(c, 0));
        return make_density(m);
    };
    CHECK(fidelity_uhlmann(outer(v1), outer(v2)) ==
          doctest::Approx(std::norm(overlap)).epsilon(1e-8));

    // Symmetry.
    const DensityMatrix sigma = random_mixed_state_bures(2, rng);
    CHECK(std::abs(fidelity_uhlmann(rho, sigma) - fidelity_uhlmann(sigma, rho)) < 1e-8);

    CHECK_THROWS_AS(fidelity_uhlmann(rho, random_mixed_state_bures(1, rng)), DimensionError);
}
