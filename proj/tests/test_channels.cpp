#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "qrec/channels.hpp"
#include "qrec/correlations.hpp"
#include "qrec/eig.hpp"
#include "qrec/rng.hpp"

using namespace qrec;

namespace {

const ChannelKind kAllKinds[] = {ChannelKind::BitFlip, ChannelKind::PhaseFlip,
                                 ChannelKind::BitPhaseFlip, ChannelKind::Depolarizing,
                                 ChannelKind::AmplitudeDamping};

DensityMatrix basis_state_11() {
    ComplexMatrix m(2, 2);
    m(1, 1) = 1.0;
    return make_density(m);
}

DensityMatrix apply_single(const DensityMatrix& rho, const KrausChannel& ch) {
    ComplexMatrix out(2, 2);
    for (const auto& k : ch.kraus)
        out += k * rho.mat * k.adjoint();
    return DensityMatrix{out, 1};
}

} // namespace

TEST_CASE("Kraus completeness for every kind and parameter") {
    Rng rng(1);
    for (const auto kind : kAllKinds) {
        for (double p : {0.0, 0.3, 1.0, rng.uniform01()}) {
            const KrausChannel ch = make_channel(kind, p);
            ComplexMatrix sum(2, 2);
            for (const auto& m : ch.kraus)
                sum += m.adjoint() * m;
            CHECK(max_abs_diff(sum, ComplexMatrix::identity(2)) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(make_channel(ChannelKind::BitFlip, 1.2), ArgumentError);
    CHECK_THROWS_AS(make_channel(ChannelKind::BitFlip, -0.1), ArgumentError);
}

TEST_CASE("bit-flip with x=1 is the identity channel") {
    Rng rng(2);
    const DensityMatrix rho = random_mixed_state_bures(1, rng);
    const KrausChannel ch = make_channel(ChannelKind::BitFlip, 1.0);
    CHECK(max_abs_diff(apply_single(rho, ch).mat, rho.mat) < 1e-14);
}

TEST_CASE("full amplitude damping decays |1> to |0>") {
    const KrausChannel ch = make_channel(ChannelKind::AmplitudeDamping, 1.0);
    const DensityMatrix out = apply_single(basis_state_11(), ch);
    CHECK(out.mat(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(out.mat(1, 1)) < 1e-14);
}

TEST_CASE("full depolarization yields the maximally mixed state") {
    Rng rng(3);
    const DensityMatrix rho = random_mixed_state_bures(1, rng);
    const KrausChannel ch = make_channel(ChannelKind::Depolarizing, 1.0);
    CHECK(max_abs_diff(apply_single(rho, ch).mat,
                       Complex(0.5, 0.0) * ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("identity channel pair leaves the state alone") {
    Rng rng(4);
    const DensityMatrix rho = random_mixed_state_bures(2, rng);
    const ChannelPair pair{make_channel(ChannelKind::BitFlip, 1.0),
                           make_channel(ChannelKind::PhaseFlip, 1.0)};
    CHECK(max_abs_diff(apply_channel_pair(rho, pair).mat, rho.mat) < 1e-13);
}

TEST_CASE("channel pairs are trace preserving and positive") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const DensityMatrix rho = random_mixed_state_bures(2, rng);
        const ChannelPair pair = random_channel_pair(rng);
        const DensityMatrix out = apply_channel_pair(rho, pair);
        CHECK(std::abs(out.mat.trace() - Complex(1.0, 0.0)) < 1e-12);
        CHECK(herm_eigenvalues(out.mat).front() >= -1e-10);
    }
}

TEST_CASE("Bell state under a one-sided phase flip mixture") {
    const ChannelPair pair{make_channel(ChannelKind::PhaseFlip, 0.5),
                           make_channel(ChannelKind::BitFlip, 1.0)};
    const DensityMatrix out = apply_channel_pair(bell_phi_plus(), pair);

    // Expected: 3/4 |Phi+><Phi+| + 1/4 |Phi-><Phi-|.
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix minus(4, 1);
    minus(0, 0) = s;
    minus(3, 0) = -s;
    ComplexMatrix expected(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            expected(r, c) = Complex(0.75, 0.0) * bell_phi_plus().mat(r, c) +
                             Complex(0.25, 0.0) * minus(r, 0) * std::conj(minus(c, 0));
    CHECK(max_abs_diff(out.mat, expected) < 1e-13);

    // Discord of this rank-2 Bell mixture: 1 - h(1/4).
    const double d = discord(out);
    CHECK(d == doctest::Approx(0.1887218755408672).epsilon(2e-3));
    CHECK(d < 1.0);
}

TEST_CASE("unital pairs fix the maximally mixed state exactly") {
    const DensityMatrix mm = make_density(Complex(0.25, 0.0) * ComplexMatrix::identity(4));
    Rng rng(6);
    for (const auto ka : {ChannelKind::BitFlip, ChannelKind::PhaseFlip, ChannelKind::BitPhaseFlip,
                          ChannelKind::Depolarizing}) {
        const ChannelPair pair{make_channel(ka, rng.uniform01()),
                               make_channel(ChannelKind::Depolarizing, rng.uniform01())};
        CHECK(max_abs_diff(apply_channel_pair(mm, pair).mat, mm.mat) < 1e-14);
    }
}

TEST_CASE("tensor composition flag applies the channels sequentially") {
    Rng rng(7);
    const DensityMatrix rho = random_mixed_state_bures(2, rng);
    const ChannelPair pair = random_channel_pair(rng);
    const DensityMatrix composed = apply_channel_pair(rho, pair, /*tensor_compose=*/true);

    const ComplexMatrix id = ComplexMatrix::identity(2);
    ComplexMatrix manual = rho.mat;
    {
        ComplexMatrix step(4, 4);
        for (const auto& m : pair.a.kraus) {
            const ComplexMatrix full = kron(m, id);
            step += full * manual * full.adjoint();
        }
        manual = step;
    }
    {
        ComplexMatrix step(4, 4);
        for (const auto& m : pair.b.kraus) {
            const ComplexMatrix full = kron(id, m);
            step += full * manual * full.adjoint();
        }
        manual = step;
    }
    CHECK(max_abs_diff(composed.mat, manual) < 1e-13);
}

TEST_CASE("random channel pairs: determinism and kind statistics") {
    Rng r1(8), r2(8);
    const ChannelPair a = random_channel_pair(r1);
    const ChannelPair b = random_channel_pair(r2);
    CHECK(a.a.kind == b.a.kind);
    CHECK(a.a.p == b.a.p);
    CHECK(a.b.kind == b.b.kind);
    CHECK(a.b.p == b.b.p);

    Rng rng(9);
    std::map<std::pair<int, int>, int> counts;
    const int total = 10000;
    for (int i = 0; i < total; ++i) {
        const ChannelPair pair = random_channel_pair(rng);
        CHECK(pair.a.p >= 0.0);
        CHECK(pair.a.p <= 1.0);
        ++counts[{static_cast<int>(pair.a.kind), static_cast<int>(pair.b.kind)}];
    }
    CHECK(counts.size() == 25);
    for (const auto& [combo, count] : counts) {
        const double freq = static_cast<double>(count) / total;
        CHECK(freq == doctest::Approx(0.04).epsilon(0.25)); // 0.04 +/- 0.01
    }
}
