#include "qrec/channels.hpp"

#include <cmath>

namespace qrec {

const char* to_string(ChannelKind kind) {
    switch (kind) {
    case ChannelKind::BitFlip:
        return "X";
    case ChannelKind::PhaseFlip:
        return "Z";
    case ChannelKind::BitPhaseFlip:
        return "Y";
    case ChannelKind::Depolarizing:
        return "D";
    case ChannelKind::AmplitudeDamping:
        return "A";
    }
    return "?";
}

ChannelKind channel_kind_from_string(const std::string& s) {
    if (s == "X")
        return ChannelKind::BitFlip;
    if (s == "Z")
        return ChannelKind::PhaseFlip;
    if (s == "Y")
        return ChannelKind::BitPhaseFlip;
    if (s == "D")
        return ChannelKind::Depolarizing;
    if (s == "A")
        return ChannelKind::AmplitudeDamping;
    throw ArgumentError("unknown channel kind: " + s);
}

KrausChannel make_channel(ChannelKind kind, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ArgumentError("make_channel: probability parameter must lie in [0, 1]");
    KrausChannel ch;
    ch.kind = kind;
    ch.p = p;
    const ComplexMatrix id = ComplexMatrix::identity(2);
    switch (kind) {
    case ChannelKind::BitFlip:
        ch.kraus = {Complex(std::sqrt(p), 0.0) * id, Complex(std::sqrt(1.0 - p), 0.0) * pauli_x()};
        break;
    case ChannelKind::PhaseFlip:
        ch.kraus = {Complex(std::sqrt(p), 0.0) * id, Complex(std::sqrt(1.0 - p), 0.0) * pauli_z()};
        break;
    case ChannelKind::BitPhaseFlip:
        ch.kraus = {Complex(std::sqrt(p), 0.0) * id, Complex(std::sqrt(1.0 - p), 0.0) * pauli_y()};
        break;
    case ChannelKind::Depolarizing: {
        const double w = std::sqrt(p) / 2.0;
        ch.kraus = {Complex(std::sqrt(1.0 - 0.75 * p), 0.0) * id, Complex(w, 0.0) * pauli_x(),
                    Complex(w, 0.0) * pauli_y(), Complex(w, 0.0) * pauli_z()};
        break;
    }
    case ChannelKind::AmplitudeDamping: {
        ComplexMatrix m1(2, 2), m2(2, 2);
        m1(0, 0) = 1.0;
        m1(1, 1) = std::sqrt(1.0 - p);
        m2(0, 1) = std::sqrt(p);
        ch.kraus = {m1, m2};
        break;
    }
    }

    ComplexMatrix completeness(2, 2);
    for (const auto& m : ch.kraus)
        completeness += m.adjoint() * m;
    if (max_abs_diff(completeness, id) > 1e-12)
        throw DomainError("make_channel: Kraus operators are not trace preserving");
    return ch;
}

namespace {

DensityMatrix apply_one_sided(const DensityMatrix& rho, const KrausChannel& ch, bool on_a) {
    const ComplexMatrix id = ComplexMatrix::identity(2);
    ComplexMatrix out(4, 4);
    for (const auto& m : ch.kraus) {
        const ComplexMatrix full = on_a ? kron(m, id) : kron(id, m);
        out += full * rho.mat * full.adjoint();
    }
    return DensityMatrix{std::move(out), 2};
}

} // namespace

DensityMatrix apply_channel_pair(const DensityMatrix& rho, const ChannelPair& pair,
                                 bool tensor_compose) {
    if (rho.mat.rows() != 4)
        throw ArgumentError("apply_channel_pair: state must be two qubits");
    if (tensor_compose) {
        DensityMatrix mid = apply_one_sided(rho, pair.a, true);
        return apply_one_sided(mid, pair.b, false);
    }
    const DensityMatrix on_a = apply_one_sided(rho, pair.a, true);
    const DensityMatrix on_b = apply_one_sided(rho, pair.b, false);
    ComplexMatrix out = Complex(0.5, 0.0) * on_a.mat + Complex(0.5, 0.0) * on_b.mat;
    // Hygiene: keep the stored state exactly Hermitian.
    ComplexMatrix sym(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            sym(i, j) = 0.5 * (out(i, j) + std::conj(out(j, i)));
    return DensityMatrix{std::move(sym), 2};
}

ChannelPair random_channel_pair(Rng& rng) {
    const auto draw = [&rng]() {
        const auto kind = static_cast<ChannelKind>(rng.below(5));
        const double p = rng.uniform01_closed();
        return make_channel(kind, p);
    };
    KrausChannel a = draw();
    KrausChannel b = draw();
    return ChannelPair{std::move(a), std::move(b)};
}

} // namespace qrec
