#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "qrec/database.hpp"
#include "qrec/eig.hpp"

using namespace qrec;

namespace {

DatabaseSpec small_spec(Measure m, StateKind kind, int n = 12, int n_qubits = 2) {
    DatabaseSpec spec;
    spec.n_qubits = n_qubits;
    spec.n_states = n;
    spec.n_evolutions = n;
    spec.measure = m;
    spec.state_kind = kind;
    spec.seed = 99;
    return spec;
}

RatingDatabase synthetic_db(std::size_t n, std::uint64_t seed) {
    RatingDatabase db;
    db.spec = small_spec(Measure::Discord, StateKind::BuresMixed, static_cast<int>(n));
    db.n_rows = db.n_cols = n;
    Rng rng(seed);
    db.ratings.resize(n * n);
    for (double& v : db.ratings)
        v = rng.uniform(-0.5, 0.5);
    db.known.assign(n * n, 1);
    db.truth = db.ratings;
    return db;
}

} // namespace

TEST_CASE("rebuilding a database reproduces every cell bit-identically") {
    const DatabaseSpec spec = small_spec(Measure::Negativity, StateKind::BuresMixed, 10);
    const RatingDatabase a = build_database(spec);
    const RatingDatabase b = build_database(spec);
    CHECK(a.ratings == b.ratings);
    CHECK(a.truth == b.truth);
}

TEST_CASE("identity column rates zero change and unit fidelity") {
    DatabaseSpec spec = small_spec(Measure::Discord, StateKind::BuresMixed, 6);
    QuantumEnsemble ens = generate_ensemble(spec);
    ens.unitaries[0] = make_unitary(ComplexMatrix::identity(4));
    const RatingDatabase db = rate_database(spec, ens);
    for (std::size_t i = 0; i < db.n_rows; ++i)
        CHECK(std::abs(db.ratings[db.index(i, 0)]) <= 1e-6);

    DatabaseSpec fspec = spec;
    fspec.measure = Measure::Fidelity;
    const RatingDatabase fdb = rate_database(fspec, ens);
    for (std::size_t i = 0; i < fdb.n_rows; ++i)
        CHECK(fdb.ratings[fdb.index(i, 0)] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("local product columns leave discord unchanged") {
    DatabaseSpec spec = small_spec(Measure::Discord, StateKind::BuresMixed, 6);
    QuantumEnsemble ens = generate_ensemble(spec);
    Rng rng(4);
    ens.unitaries[0] = tensor_product(random_unitary(1, rng), random_unitary(1, rng));
    const RatingDatabase db = rate_database(spec, ens);
    for (std::size_t i = 0; i < db.n_rows; ++i)
        CHECK(std::abs(db.ratings[db.index(i, 0)]) <= 5e-3);
}

TEST_CASE("value ranges per measure") {
    const RatingDatabase entropy_db = build_database(small_spec(Measure::Entropy, StateKind::Pure, 8));
    for (double v : entropy_db.ratings) {
        CHECK(v >= -1.0 - 1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
    const RatingDatabase neg_db =
        build_database(small_spec(Measure::Negativity, StateKind::BuresMixed, 8));
    for (double v : neg_db.ratings) {
        CHECK(v >= -1.0 - 1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
    const RatingDatabase fid_db =
        build_database(small_spec(Measure::Fidelity, StateKind::Pure, 8));
    for (double v : fid_db.ratings) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("multi-qubit part-P reduction keeps cells in the two-qubit ranges") {
    DatabaseSpec spec = small_spec(Measure::Discord, StateKind::BuresMixed, 5, 4);
    const RatingDatabase db = build_database(spec);
    for (double v : db.ratings) {
        CHECK(std::isfinite(v));
        CHECK(std::abs(v) <= 2.0 + 1e-9);
    }

    DatabaseSpec espec = small_spec(Measure::Entropy, StateKind::Pure, 5, 4);
    const RatingDatabase edb = build_database(espec);
    for (double v : edb.ratings) {
        CHECK(v >= -1.0 - 1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("nonunitary databases") {
    DatabaseSpec spec = small_spec(Measure::Discord, StateKind::BuresMixed, 8);
    spec.evolution_kind = EvolutionKind::ChannelPair;
    QuantumEnsemble ens = generate_ensemble(spec);

    // Identity channel pair column: zero discord change, unit fidelity.
    ens.channel_pairs[0] = ChannelPair{make_channel(ChannelKind::BitFlip, 1.0),
                                       make_channel(ChannelKind::PhaseFlip, 1.0)};
    const RatingDatabase db = rate_database(spec, ens);
    for (std::size_t i = 0; i < db.n_rows; ++i)
        CHECK(std::abs(db.ratings[db.index(i, 0)]) <= 1e-6);

    // Decoherence only reduces the correlations in the generated ensemble.
    for (double v : db.ratings)
        CHECK(v <= 1e-6);

    DatabaseSpec fspec = spec;
    fspec.measure = Measure::Fidelity;
    const RatingDatabase fdb = rate_database(fspec, ens);
    for (std::size_t i = 0; i < fdb.n_rows; ++i)
        CHECK(fdb.ratings[fdb.index(i, 0)] == doctest::Approx(1.0).epsilon(1e-8));
    for (double v : fdb.ratings) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    // A maximally mixed input row has unit fidelity under unital pairs.
    QuantumEnsemble unital = ens;
    unital.states[0] = make_density(Complex(0.25, 0.0) * ComplexMatrix::identity(4));
    for (auto& pair : unital.channel_pairs) {
        if (pair.a.kind == ChannelKind::AmplitudeDamping)
            pair.a = make_channel(ChannelKind::BitFlip, pair.a.p);
        if (pair.b.kind == ChannelKind::AmplitudeDamping)
            pair.b = make_channel(ChannelKind::PhaseFlip, pair.b.p);
    }
    const RatingDatabase udb = rate_database(fspec, unital);
    for (std::size_t j = 0; j < udb.n_cols; ++j)
        CHECK(udb.ratings[udb.index(0, j)] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(build_database(small_spec(Measure::Entropy, StateKind::BuresMixed, 4)),
                    SpecError);

    DatabaseSpec chan = small_spec(Measure::Discord, StateKind::BuresMixed, 4, 3);
    chan.evolution_kind = EvolutionKind::ChannelPair;
    CHECK_THROWS_AS(build_database(chan), SpecError);

    DatabaseSpec odd = small_spec(Measure::Discord, StateKind::BuresMixed, 5);
    odd.evolution_kind = EvolutionKind::LocalNonlocalMix;
    CHECK_THROWS_AS(build_database(odd), SpecError);

    DatabaseSpec bad_part = small_spec(Measure::Discord, StateKind::BuresMixed, 4, 3);
    bad_part.part_p = {1, 1};
    CHECK_THROWS_AS(build_database(bad_part), SpecError);
}

TEST_CASE("local-nonlocal databases carry tags and near-zero local columns") {
    DatabaseSpec spec = small_spec(Measure::Negativity, StateKind::BuresMixed, 8);
    spec.evolution_kind = EvolutionKind::LocalNonlocalMix;
    const RatingDatabase db = build_database(spec);
    REQUIRE(db.column_tags.size() == db.n_cols);
    int local_count = 0;
    for (std::size_t j = 0; j < db.n_cols; ++j) {
        if (db.column_tags[j] == "local") {
            ++local_count;
            for (std::size_t i = 0; i < db.n_rows; ++i)
                CHECK(std::abs(db.ratings[db.index(i, j)]) <= 1e-8);
        }
    }
    CHECK(local_count == static_cast<int>(db.n_cols) / 2);

    // The same seed with a different state kind reuses the same unitaries.
    DatabaseSpec espec = spec;
    espec.measure = Measure::Entropy;
    espec.state_kind = StateKind::Pure;
    const QuantumEnsemble e1 = generate_ensemble(spec);
    const QuantumEnsemble e2 = generate_ensemble(espec);
    for (std::size_t j = 0; j < e1.unitaries.size(); ++j)
        CHECK(e1.unitaries[j].mat == e2.unitaries[j].mat);
}

TEST_CASE("masking") {
    RatingDatabase db = synthetic_db(10, 3);
    const std::vector<double> original = db.ratings;

    Rng rng(5);
    mask_random(db, 1, rng);
    CHECK(db.masked_count == 1);

    unmask_all(db);
    CHECK(db.ratings == original);
    CHECK(db.masked_count == 0);

    Rng rng2(6);
    mask_random(db, 90, rng2);
    CHECK(db.masked_count == 90);
    std::size_t hidden = 0;
    for (auto k : db.known)
        if (!k)
            ++hidden;
    CHECK(hidden == 90);
    // Hidden table entries read zero; the clean values survive in truth.
    for (std::size_t idx = 0; idx < db.ratings.size(); ++idx)
        if (!db.known[idx]) {
            CHECK(db.ratings[idx] == 0.0);
            CHECK(db.truth[idx] == original[idx]);
        }

    unmask_all(db);
    CHECK(db.ratings == original);

    Rng rng3(7);
    CHECK_THROWS_AS(mask_random(db, 0, rng3), ArgumentError);
    CHECK_THROWS_AS(mask_random(db, 100, rng3), ArgumentError);

    // Masking is reproducible from the seed.
    RatingDatabase a = synthetic_db(10, 3), b = synthetic_db(10, 3);
    Rng ra(11), rb(11);
    mask_random(a, 30, ra);
    mask_random(b, 30, rb);
    CHECK(a.known == b.known);
}

TEST_CASE("noise injection") {
    RatingDatabase db = synthetic_db(20, 4);
    const std::vector<double> original = db.ratings;

    Rng rng(8);
    inject_noise(db, 0.0, rng);
    CHECK(db.ratings == original); // untouched, no draws consumed

    RatingDatabase light = synthetic_db(20, 4);
    Rng rng2(9);
    inject_noise(light, 0.1, rng2);
    for (std::size_t idx = 0; idx < light.ratings.size(); ++idx)
        CHECK(std::abs(light.ratings[idx] - original[idx]) <=
              0.1 * (1.0 + std::abs(original[idx])));

    // eta = 1: entries inside (-1,1), uncorrelated with the originals.
    RatingDatabase wild = synthetic_db(200, 4);
    const std::vector<double> wild_orig = wild.ratings;
    Rng rng3(10);
    inject_noise(wild, 1.0, rng3);
    double sxy = 0.0, sxx = 0.0, syy = 0.0, sx = 0.0, sy = 0.0;
    const double n = static_cast<double>(wild.ratings.size());
    for (std::size_t idx = 0; idx < wild.ratings.size(); ++idx) {
        const double x = wild_orig[idx], y = wild.ratings[idx];
        CHECK(y > -1.0);
        CHECK(y < 1.0);
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double corr = (sxy - sx * sy / n) /
                        std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
    CHECK(std::abs(corr) <= 0.05);

    // Hidden truths stay clean.
    RatingDatabase masked = synthetic_db(10, 5);
    const std::vector<double> clean = masked.truth;
    Rng mr(12);
    mask_random(masked, 20, mr);
    Rng nr(13);
    inject_noise(masked, 0.5, nr);
    CHECK(masked.truth == clean);

    Rng rng4(11);
    CHECK_THROWS_AS(inject_noise(db, 1.5, rng4), ArgumentError);
}

TEST_CASE("werner fixture") {
    const WernerFixture fx = build_werner_fixture({0.0, 1.0 / 3.0, 1.0});
    CHECK(fx.truth_2n[0] == doctest::Approx(0.0));
    CHECK(fx.truth_discord[0] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(fx.truth_2n[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fx.truth_discord[1] > 0.05);
    CHECK(fx.truth_2n[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fx.truth_discord[2] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(fx.column.tag == "cnot");
    CHECK_THROWS_AS(build_werner_fixture({1.2}), ArgumentError);

    // The rated CNOT cell equals the engine discord of the Werner state.
    DatabaseSpec spec = small_spec(Measure::Discord, StateKind::BuresMixed, 3);
    QuantumEnsemble ens = generate_ensemble(spec);
    ens.states[0] = rho_minus(0.6);
    ens.unitaries[0] = cnot_gate();
    const RatingDatabase db = rate_database(spec, ens);
    CHECK(db.ratings[db.index(0, 0)] ==
          doctest::Approx(discord(werner_state(0.6))).epsilon(1e-6));
}

TEST_CASE("database files round-trip") {
    namespace fs = std::filesystem;
    const std::string prefix = (fs::temp_directory_path() / "qrec_test_db").string();

    RatingDatabase db = build_database(small_spec(Measure::Negativity, StateKind::BuresMixed, 6));
    Rng rng(3);
    mask_random(db, 7, rng);
    write_database(db, prefix);

    const RatingDatabase back = read_database(prefix);
    CHECK(back.n_rows == db.n_rows);
    CHECK(back.n_cols == db.n_cols);
    CHECK(back.ratings == db.ratings);
    CHECK(back.known == db.known);
    CHECK(back.truth == db.truth);
    CHECK(back.masked_count == db.masked_count);
    CHECK(back.spec.measure == db.spec.measure);
    CHECK(back.spec.seed == db.spec.seed);

    for (const char* suffix : {".csv", ".truth.csv", ".meta.json"})
        fs::remove(prefix + suffix);

    CHECK_THROWS_AS(read_database(prefix), IoError);

    // Column tags survive the round trip.
    DatabaseSpec tagged = small_spec(Measure::Negativity, StateKind::BuresMixed, 6);
    tagged.evolution_kind = EvolutionKind::LocalNonlocalMix;
    const RatingDatabase local_db = build_database(tagged);
    write_database(local_db, prefix);
    CHECK(read_database(prefix).column_tags == local_db.column_tags);
    for (const char* suffix : {".csv", ".truth.csv", ".meta.json"})
        fs::remove(prefix + suffix);
}

TEST_CASE("train glue and hidden prediction order") {
    RatingDatabase db = synthetic_db(8, 14);
    Rng rng(2);
    mask_random(db, 10, rng);
    TrainConfig cfg;
    cfg.latent_dim = 3;
    cfg.max_iters = 300;
    const TrainResult tr = train_model(db, cfg);
    const auto preds = predict_hidden(tr.model, db);
    const auto truths = db.hidden_truth_cells();
    REQUIRE(preds.size() == truths.size());
    for (std::size_t k = 0; k < preds.size(); ++k) {
        CHECK(preds[k].row == truths[k].row);
        CHECK(preds[k].col == truths[k].col);
    }
}
