#pragma once

#include <string>
#include <vector>

#include "qrec/rng.hpp"
#include "qrec/states.hpp"

namespace qrec {

enum class ChannelKind { BitFlip, PhaseFlip, BitPhaseFlip, Depolarizing, AmplitudeDamping };

const char* to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& s);

/// Single-qubit Kraus channel.  The probability parameter follows the
/// per-kind convention (x, z, y, d, a); p = 1 is the identity channel for
/// the flip kinds, p = 0 for depolarizing and amplitude damping.
struct KrausChannel {
    ChannelKind kind = ChannelKind::BitFlip;
    double p = 1.0;
    std::vector<ComplexMatrix> kraus;
};

/// Builds the channel and verifies trace preservation
/// (sum M_k^dagger M_k = 1 to 1e-12).
KrausChannel make_channel(ChannelKind kind, double p);

struct ChannelPair {
    KrausChannel a;
    KrausChannel b;
};

/// Two-qubit nonunitary evolution: the equal-weight mixture
///   1/2 sum_k (M_k (x) 1) rho (M_k (x) 1)^dagger
/// + 1/2 sum_l (1 (x) M_l) rho (1 (x) M_l)^dagger.
/// With tensor_compose set, applies channel A then channel B sequentially
/// (the product map E_A (x) E_B) instead of the mixture.
DensityMatrix apply_channel_pair(const DensityMatrix& rho, const ChannelPair& pair,
                                 bool tensor_compose = false);

/// Kinds drawn uniformly from the five, probabilities uniform on [0, 1],
/// independently per side.  Draw order: kind A, p A, kind B, p B.
ChannelPair random_channel_pair(Rng& rng);

} // namespace qrec
