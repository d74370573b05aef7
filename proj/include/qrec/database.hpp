#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrec/channels.hpp"
#include "qrec/correlations.hpp"
#include "qrec/recommender.hpp"
#include "qrec/rng.hpp"
#include "qrec/states.hpp"

namespace qrec {

enum class Measure { Entropy, Negativity, Discord, Fidelity };
enum class StateKind { Pure, BuresMixed };
enum class EvolutionKind { Unitary, ChannelPair, LocalNonlocalMix };

const char* to_string(Measure m);
const char* to_string(StateKind k);
const char* to_string(EvolutionKind k);
Measure measure_from_string(const std::string& s);
StateKind state_kind_from_string(const std::string& s);
EvolutionKind evolution_kind_from_string(const std::string& s);

struct DatabaseSpec {
    int n_qubits = 2;
    int n_states = 0;
    int n_evolutions = 0;
    Measure measure = Measure::Entropy;
    StateKind state_kind = StateKind::Pure;
    EvolutionKind evolution_kind = EvolutionKind::Unitary;
    std::pair<int, int> part_p{0, 1}; // two-qubit part rated when n_qubits > 2
    std::uint64_t seed = 0;
    double unitary_scale = 1.0;
    DiscordConfig discord;
    // Rate the discord of the full register (measurement on qubit 0) instead
    // of reducing to part P first; used by the 3-qubit timing study.
    bool discord_full_register = false;
};

/// The generated quantum objects behind a database.  States are drawn from
/// stream 1 of the spec seed; evolution j from stream 2 + j, so ensembles
/// with equal seeds share evolutions regardless of state kind.
struct QuantumEnsemble {
    int n_qubits = 2;
    StateKind state_kind = StateKind::Pure;
    EvolutionKind evolution_kind = EvolutionKind::Unitary;
    std::vector<ComplexMatrix> state_vectors; // pure states
    std::vector<DensityMatrix> states;        // mixed states
    std::vector<UnitaryOp> unitaries;
    std::vector<ChannelPair> channel_pairs;
    std::vector<std::string> column_tags; // "local"/"nonlocal" for the mixed set

    std::size_t n_states() const {
        return state_kind == StateKind::Pure ? state_vectors.size() : states.size();
    }
    std::size_t n_evolutions() const {
        return evolution_kind == EvolutionKind::ChannelPair ? channel_pairs.size()
                                                            : unitaries.size();
    }
};

struct RatingDatabase {
    DatabaseSpec spec;
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> ratings;      // current table; masked cells read 0
    std::vector<std::uint8_t> known;  // 1 = known
    std::vector<double> truth;        // clean values for every cell
    std::vector<std::string> column_tags;
    std::vector<std::string> warnings;

    std::optional<std::uint64_t> mask_seed;
    std::size_t masked_count = 0;
    std::optional<double> noise_eta;
    std::optional<std::uint64_t> noise_seed;

    std::size_t index(std::size_t i, std::size_t j) const { return i * n_cols + j; }
    std::vector<RatingCell> known_cells() const;
    std::vector<RatingCell> hidden_truth_cells() const;
};

QuantumEnsemble generate_ensemble(const DatabaseSpec& spec);

/// Rates an already-generated ensemble under the spec's measure.  The
/// ensemble may carry extra appended rows/columns (the spec sizes must
/// match the ensemble).
RatingDatabase rate_database(const DatabaseSpec& spec, const QuantumEnsemble& ensemble);

RatingDatabase build_unitary_db(const DatabaseSpec& spec);
RatingDatabase build_nonunitary_db(const DatabaseSpec& spec);
RatingDatabase build_local_nonlocal_db(const DatabaseSpec& spec);
/// Dispatches on spec.evolution_kind.
RatingDatabase build_database(const DatabaseSpec& spec);

/// Hides n_r distinct uniformly chosen known cells; their clean values stay
/// in `truth` and their table entries are zeroed.
void mask_random(RatingDatabase& db, std::size_t n_r, Rng& rng);

/// Hides an explicit cell list (fixture experiments).
void mask_cells(RatingDatabase& db, const std::vector<std::pair<int, int>>& cells);

/// Restores every hidden cell from `truth`.
void unmask_all(RatingDatabase& db);

/// Blends known cells with independent uniform (-1, 1) noise:
/// value <- eta * s + (1 - eta) * value.  Hidden truths stay clean.
void inject_noise(RatingDatabase& db, double eta, Rng& rng);

struct WernerFixture {
    std::vector<double> epsilons;
    std::vector<DensityMatrix> rows; // rho_minus(eps)
    UnitaryOp column;                // CNOT
    std::vector<double> truth_2n;    // max(0, (3 eps - 1)/2)
    std::vector<double> truth_discord;
};

/// The CNOT-on-rho_minus showcase: the initial states carry no quantum
/// correlation, so the rating of the CNOT column equals the negativity or
/// discord of the Werner state itself.
WernerFixture build_werner_fixture(const std::vector<double>& epsilons,
                                   const DiscordConfig& cfg = {});

/// Writes <prefix>.csv, <prefix>.meta.json and <prefix>.truth.csv.
void write_database(const RatingDatabase& db, const std::string& prefix);
RatingDatabase read_database(const std::string& prefix);

void write_cells_csv(const std::vector<RatingCell>& cells, const std::string& path);
std::vector<RatingCell> read_cells_csv(const std::string& path);

/// Glue: train the recommender on the database's known cells.
TrainResult train_model(const RatingDatabase& db, const TrainConfig& cfg);

/// Predictions for every hidden cell, row-major order.
std::vector<RatingCell> predict_hidden(const FactorModel& model, const RatingDatabase& db);

} // namespace qrec
