#include "qrec/database.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "qrec/eig.hpp"
#include "qrec/version.hpp"

namespace qrec {

using nlohmann::json;

const char* to_string(Measure m) {
    switch (m) {
    case Measure::Entropy:
        return "entropy";
    case Measure::Negativity:
        return "negativity";
    case Measure::Discord:
        return "discord";
    case Measure::Fidelity:
        return "fidelity";
    }
    return "?";
}

const char* to_string(StateKind k) {
    return k == StateKind::Pure ? "pure" : "bures-mixed";
}

const char* to_string(EvolutionKind k) {
    switch (k) {
    case EvolutionKind::Unitary:
        return "unitary";
    case EvolutionKind::ChannelPair:
        return "channel-pair";
    case EvolutionKind::LocalNonlocalMix:
        return "local-nonlocal-mix";
    }
    return "?";
}

Measure measure_from_string(const std::string& s) {
    if (s == "entropy")
        return Measure::Entropy;
    if (s == "negativity")
        return Measure::Negativity;
    if (s == "discord")
        return Measure::Discord;
    if (s == "fidelity")
        return Measure::Fidelity;
    throw ArgumentError("unknown measure: " + s);
}

StateKind state_kind_from_string(const std::string& s) {
    if (s == "pure")
        return StateKind::Pure;
    if (s == "bures-mixed")
        return StateKind::BuresMixed;
    throw ArgumentError("unknown state kind: " + s);
}

EvolutionKind evolution_kind_from_string(const std::string& s) {
    if (s == "unitary")
        return EvolutionKind::Unitary;
    if (s == "channel-pair")
        return EvolutionKind::ChannelPair;
    if (s == "local-nonlocal-mix")
        return EvolutionKind::LocalNonlocalMix;
    throw ArgumentError("unknown evolution kind: " + s);
}

std::vector<RatingCell> RatingDatabase::known_cells() const {
    std::vector<RatingCell> out;
    out.reserve(ratings.size() - masked_count);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j)
            if (known[index(i, j)])
                out.push_back({static_cast<int>(i), static_cast<int>(j), ratings[index(i, j)]});
    return out;
}

std::vector<RatingCell> RatingDatabase::hidden_truth_cells() const {
    std::vector<RatingCell> out;
    out.reserve(masked_count);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j)
            if (!known[index(i, j)])
                out.push_back({static_cast<int>(i), static_cast<int>(j), truth[index(i, j)]});
    return out;
}

namespace {

// Stream layout under the spec seed: 1 = state draws, 2+j = evolution j,
// so columns are reproducible independently of each other and of the
// state kind.
constexpr std::uint64_t kStateStream = 1;
constexpr std::uint64_t kEvolutionStreamBase = 2;

void validate_spec(const DatabaseSpec& spec) {
    if (spec.n_states < 1 || spec.n_evolutions < 1)
        throw SpecError("database spec: need at least one state and one evolution");
    if (spec.n_qubits < 1)
        throw SpecError("database spec: need at least one qubit");
    if (spec.measure != Measure::Fidelity && spec.n_qubits < 2)
        throw SpecError("database spec: correlation measures need at least two qubits");
    if (spec.n_qubits > 2) {
        const auto [p0, p1] = spec.part_p;
        if (p0 == p1 || p0 < 0 || p1 < 0 || p0 >= spec.n_qubits || p1 >= spec.n_qubits)
            throw SpecError("database spec: part_p indices must be distinct and in range");
    }
    if (spec.measure == Measure::Entropy && spec.state_kind != StateKind::Pure)
        throw SpecError("database spec: entropy ratings require pure states");
    if (spec.evolution_kind == EvolutionKind::ChannelPair) {
        if (spec.n_qubits != 2)
            throw SpecError("database spec: channel-pair evolutions are two-qubit only");
        if (spec.state_kind != StateKind::BuresMixed)
            throw SpecError("database spec: channel-pair databases use Bures-mixed states");
        if (spec.measure != Measure::Discord && spec.measure != Measure::Fidelity)
            throw SpecError("database spec: channel-pair databases rate discord or fidelity");
    }
    if (spec.evolution_kind == EvolutionKind::LocalNonlocalMix) {
        if (spec.n_qubits != 2)
            throw SpecError("database spec: local/nonlocal mix is two-qubit only");
        if (spec.n_evolutions % 2 != 0)
            throw SpecError("database spec: local/nonlocal mix needs an even evolution count");
    }
}

std::vector<int> part_keep(const DatabaseSpec& spec) {
    return {spec.part_p.first, spec.part_p.second};
}

// Per-measure rating of a (possibly reduced) two-qubit state.
struct MeasureContext {
    const DatabaseSpec* spec;
    int count_raw_discord_warnings = 0;
};

double correlation_of(MeasureContext& ctx, const DensityMatrix& reduced) {
    switch (ctx.spec->measure) {
    case Measure::Entropy:
        // Declared multi-qubit convention: entropy of the single-qubit
        // reduction within part P (coincides with the entanglement entropy
        // for two-qubit pure states).
        return von_neumann_entropy(partial_trace(reduced, {0}));
    case Measure::Negativity:
        return 2.0 * negativity(reduced, 1); // reported doubled throughout
    case Measure::Discord: {
        const DiscordResult r = discord_detail(reduced, ctx.spec->discord);
        if (r.raw < -1e-6)
            ++ctx.count_raw_discord_warnings;
        return r.value;
    }
    case Measure::Fidelity:
        throw SpecError("correlation_of: fidelity is not a correlation measure");
    }
    return 0.0;
}

DensityMatrix reduce_to_part(const DatabaseSpec& spec, const DensityMatrix& full) {
    if (spec.n_qubits == 2)
        return full;
    return partial_trace(full, part_keep(spec));
}

DensityMatrix density_from_vector(const ComplexMatrix& vec, int n_qubits) {
    const std::size_t dim = vec.rows();
    ComplexMatrix rho(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            rho(r, c) = vec(r, 0) * std::conj(vec(c, 0));
    return DensityMatrix{std::move(rho), n_qubits};
}

ComplexMatrix apply_to_vector(const UnitaryOp& u, const ComplexMatrix& vec) {
    const std::size_t dim = vec.rows();
    ComplexMatrix out(dim, 1);
    for (std::size_t r = 0; r < dim; ++r) {
        Complex s = 0.0;
        const Complex* row = u.mat.data() + r * dim;
        for (std::size_t c = 0; c < dim; ++c)
            s += row[c] * vec(c, 0);
        out(r, 0) = s;
    }
    return out;
}

} // namespace

QuantumEnsemble generate_ensemble(const DatabaseSpec& spec) {
    validate_spec(spec);
    QuantumEnsemble ens;
    ens.n_qubits = spec.n_qubits;
    ens.state_kind = spec.state_kind;
    ens.evolution_kind = spec.evolution_kind;

    const Rng master(spec.seed);
    Rng state_rng = master.split(kStateStream);
    for (int i = 0; i < spec.n_states; ++i) {
        if (spec.state_kind == StateKind::Pure)
            ens.state_vectors.push_back(random_state_vector(spec.n_qubits, state_rng));
        else
            ens.states.push_back(random_mixed_state_bures(spec.n_qubits, state_rng));
    }

    for (int j = 0; j < spec.n_evolutions; ++j) {
        Rng col_rng = master.split(kEvolutionStreamBase + static_cast<std::uint64_t>(j));
        switch (spec.evolution_kind) {
        case EvolutionKind::Unitary:
            ens.unitaries.push_back(random_unitary(spec.n_qubits, col_rng, spec.unitary_scale));
            break;
        case EvolutionKind::ChannelPair:
            ens.channel_pairs.push_back(random_channel_pair(col_rng));
            break;
        case EvolutionKind::LocalNonlocalMix:
            if (j % 2 == 0) {
                UnitaryOp ua = random_unitary(1, col_rng, spec.unitary_scale);
                UnitaryOp ub = random_unitary(1, col_rng, spec.unitary_scale);
                ens.unitaries.push_back(tensor_product(ua, ub));
                ens.column_tags.push_back("local");
            } else {
                ens.unitaries.push_back(random_unitary(2, col_rng, spec.unitary_scale));
                ens.column_tags.push_back("nonlocal");
            }
            break;
        }
    }
    return ens;
}

RatingDatabase rate_database(const DatabaseSpec& spec, const QuantumEnsemble& ensemble) {
    validate_spec(spec);
    if (ensemble.n_states() != static_cast<std::size_t>(spec.n_states) ||
        ensemble.n_evolutions() != static_cast<std::size_t>(spec.n_evolutions))
        throw SpecError("rate_database: ensemble sizes differ from the spec");

    RatingDatabase db;
    db.spec = spec;
    db.n_rows = spec.n_states;
    db.n_cols = spec.n_evolutions;
    db.ratings.assign(db.n_rows * db.n_cols, 0.0);
    db.known.assign(db.n_rows * db.n_cols, 1);
    db.column_tags = ensemble.column_tags;

    MeasureContext ctx{&spec, 0};
    const bool pure = spec.state_kind == StateKind::Pure;
    const bool fidelity = spec.measure == Measure::Fidelity;
    const bool full_discord = spec.measure == Measure::Discord && spec.discord_full_register &&
                              spec.n_qubits > 2;

    // Initial correlations depend only on the row; compute them once.
    std::vector<double> c0(db.n_rows, 0.0);
    if (!fidelity) {
        for (std::size_t i = 0; i < db.n_rows; ++i) {
            if (full_discord) {
                const DensityMatrix full = pure
                    ? density_from_vector(ensemble.state_vectors[i], spec.n_qubits)
                    : ensemble.states[i];
                const DiscordResult r = discord_detail(full, spec.discord);
                if (r.raw < -1e-6)
                    ++ctx.count_raw_discord_warnings;
                c0[i] = r.value;
            } else if (pure) {
                const ComplexMatrix red =
                    pure_state_reduced(ensemble.state_vectors[i], spec.n_qubits,
                                       spec.n_qubits == 2 ? std::vector<int>{0, 1}
                                                          : part_keep(spec));
                c0[i] = correlation_of(ctx, DensityMatrix{red, 2});
            } else {
                c0[i] = correlation_of(ctx, reduce_to_part(spec, ensemble.states[i]));
            }
        }
    }

    int positive_dd_cells = 0;
    double max_dd = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < db.n_cols; ++j) {
        for (std::size_t i = 0; i < db.n_rows; ++i) {
            double value = 0.0;
            if (spec.evolution_kind == EvolutionKind::ChannelPair) {
                const DensityMatrix evolved =
                    apply_channel_pair(ensemble.states[i], ensemble.channel_pairs[j]);
                if (fidelity) {
                    value = fidelity_uhlmann(ensemble.states[i], evolved);
                } else {
                    const DiscordResult r = discord_detail(evolved, spec.discord);
                    if (r.raw < -1e-6)
                        ++ctx.count_raw_discord_warnings;
                    value = r.value - c0[i];
                    max_dd = std::max(max_dd, value);
                    if (value > 1e-6)
                        ++positive_dd_cells;
                }
            } else {
                const UnitaryOp& u = ensemble.unitaries[j];
                if (fidelity) {
                    // State fidelity is rated on the full register.
                    value = pure ? fidelity_pure_vec(ensemble.state_vectors[i], u)
                                 : fidelity_uhlmann(ensemble.states[i],
                                                    apply_unitary(ensemble.states[i], u));
                } else if (full_discord) {
                    const DensityMatrix full = pure
                        ? density_from_vector(ensemble.state_vectors[i], spec.n_qubits)
                        : ensemble.states[i];
                    const DensityMatrix evolved = apply_unitary(full, u);
                    const DiscordResult r = discord_detail(evolved, spec.discord);
                    if (r.raw < -1e-6)
                        ++ctx.count_raw_discord_warnings;
                    value = r.value - c0[i];
                } else if (pure) {
                    const ComplexMatrix evolved_vec =
                        apply_to_vector(u, ensemble.state_vectors[i]);
                    const ComplexMatrix red =
                        pure_state_reduced(evolved_vec, spec.n_qubits,
                                           spec.n_qubits == 2 ? std::vector<int>{0, 1}
                                                              : part_keep(spec));
                    value = correlation_of(ctx, DensityMatrix{red, 2}) - c0[i];
                } else {
                    const DensityMatrix evolved = apply_unitary(ensemble.states[i], u);
                    value = correlation_of(ctx, reduce_to_part(spec, evolved)) - c0[i];
                }
            }
            db.ratings[db.index(i, j)] = value;
        }
    }

    if (ctx.count_raw_discord_warnings > 0)
        db.warnings.push_back("discord raw value below -1e-6 in " +
                              std::to_string(ctx.count_raw_discord_warnings) + " evaluations");
    if (spec.evolution_kind == EvolutionKind::ChannelPair && spec.measure == Measure::Discord &&
        positive_dd_cells > 0)
        db.warnings.push_back("delta-discord above 1e-6 in " + std::to_string(positive_dd_cells) +
                              " cells (max " + std::to_string(max_dd) + ")");
    db.truth = db.ratings;
    return db;
}

RatingDatabase build_unitary_db(const DatabaseSpec& spec) {
    if (spec.evolution_kind != EvolutionKind::Unitary)
        throw SpecError("build_unitary_db: spec.evolution_kind must be unitary");
    return rate_database(spec, generate_ensemble(spec));
}

RatingDatabase build_nonunitary_db(const DatabaseSpec& spec) {
    if (spec.evolution_kind != EvolutionKind::ChannelPair)
        throw SpecError("build_nonunitary_db: spec.evolution_kind must be channel-pair");
    return rate_database(spec, generate_ensemble(spec));
}

RatingDatabase build_local_nonlocal_db(const DatabaseSpec& spec) {
    if (spec.evolution_kind != EvolutionKind::LocalNonlocalMix)
        throw SpecError("build_local_nonlocal_db: spec.evolution_kind must be local-nonlocal-mix");
    return rate_database(spec, generate_ensemble(spec));
}

RatingDatabase build_database(const DatabaseSpec& spec) {
    return rate_database(spec, generate_ensemble(spec));
}

void mask_random(RatingDatabase& db, std::size_t n_r, Rng& rng) {
    const std::size_t total = db.n_rows * db.n_cols;
    if (n_r < 1 || n_r > total - 1)
        throw ArgumentError("mask_random: count must lie in [1, total - 1]");
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t k = 0; k < n_r; ++k) {
        const std::size_t swap_with = k + rng.below(total - k);
        std::swap(idx[k], idx[swap_with]);
    }
    for (std::size_t k = 0; k < n_r; ++k) {
        if (db.known[idx[k]]) {
            db.known[idx[k]] = 0;
            ++db.masked_count;
        }
        db.ratings[idx[k]] = 0.0;
    }
    db.mask_seed = rng.seed();
}

void mask_cells(RatingDatabase& db, const std::vector<std::pair<int, int>>& cells) {
    for (const auto& [i, j] : cells) {
        if (i < 0 || static_cast<std::size_t>(i) >= db.n_rows || j < 0 ||
            static_cast<std::size_t>(j) >= db.n_cols)
            throw ArgumentError("mask_cells: cell out of range");
        const std::size_t idx = db.index(i, j);
        if (db.known[idx]) {
            db.known[idx] = 0;
            ++db.masked_count;
        }
        db.ratings[idx] = 0.0;
    }
}

void unmask_all(RatingDatabase& db) {
    db.ratings = db.truth;
    std::fill(db.known.begin(), db.known.end(), 1);
    db.masked_count = 0;
    db.mask_seed.reset();
}

void inject_noise(RatingDatabase& db, double eta, Rng& rng) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ArgumentError("inject_noise: eta must lie in [0, 1]");
    if (eta == 0.0)
        return;
    for (std::size_t idx = 0; idx < db.ratings.size(); ++idx) {
        if (!db.known[idx])
            continue;
        double s = 0.0;
        do {
            s = 2.0 * rng.uniform01() - 1.0;
        } while (s <= -1.0 || s >= 1.0);
        db.ratings[idx] = eta * s + (1.0 - eta) * db.ratings[idx];
    }
    db.noise_eta = eta;
    db.noise_seed = rng.seed();
}

WernerFixture build_werner_fixture(const std::vector<double>& epsilons, const DiscordConfig& cfg) {
    WernerFixture fx;
    fx.epsilons = epsilons;
    fx.column = cnot_gate();
    for (double eps : epsilons) {
        fx.rows.push_back(rho_minus(eps));
        fx.truth_2n.push_back(std::max(0.0, (3.0 * eps - 1.0) / 2.0));
        fx.truth_discord.push_back(discord(werner_state(eps), cfg));
    }
    return fx;
}

namespace {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json spec_to_json(const DatabaseSpec& spec) {
    json j;
    j["qubits"] = spec.n_qubits;
    j["states"] = spec.n_states;
    j["evolutions"] = spec.n_evolutions;
    j["measure"] = to_string(spec.measure);
    j["state_kind"] = to_string(spec.state_kind);
    j["evolution_kind"] = to_string(spec.evolution_kind);
    j["part_p"] = {spec.part_p.first, spec.part_p.second};
    j["seed"] = spec.seed;
    j["unitary_scale"] = spec.unitary_scale;
    j["discord"] = {{"directions", spec.discord.n_directions},
                    {"refine", spec.discord.refine},
                    {"refine_iters", spec.discord.refine_iters}};
    j["discord_full_register"] = spec.discord_full_register;
    if (spec.state_kind == StateKind::BuresMixed)
        j["bures_construction"] = "R = (1 + U) A, rho = R R^dag / Tr[R R^dag]";
    return j;
}

DatabaseSpec spec_from_json(const json& j) {
    DatabaseSpec spec;
    spec.n_qubits = j.at("qubits").get<int>();
    spec.n_states = j.at("states").get<int>();
    spec.n_evolutions = j.at("evolutions").get<int>();
    spec.measure = measure_from_string(j.at("measure").get<std::string>());
    spec.state_kind = state_kind_from_string(j.at("state_kind").get<std::string>());
    spec.evolution_kind = evolution_kind_from_string(j.at("evolution_kind").get<std::string>());
    spec.part_p = {j.at("part_p")[0].get<int>(), j.at("part_p")[1].get<int>()};
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.unitary_scale = j.at("unitary_scale").get<double>();
    spec.discord.n_directions = j.at("discord").at("directions").get<int>();
    spec.discord.refine = j.at("discord").at("refine").get<bool>();
    spec.discord.refine_iters = j.at("discord").at("refine_iters").get<int>();
    spec.discord_full_register = j.value("discord_full_register", false);
    return spec;
}

} // namespace

void write_database(const RatingDatabase& db, const std::string& prefix) {
    {
        std::ofstream out(prefix + ".csv");
        if (!out)
            throw IoError("cannot write " + prefix + ".csv");
        out << "row,col,value,known\n";
        for (std::size_t i = 0; i < db.n_rows; ++i)
            for (std::size_t j = 0; j < db.n_cols; ++j) {
                const std::size_t idx = db.index(i, j);
                out << i << ',' << j << ',' << format_value(db.ratings[idx]) << ','
                    << (db.known[idx] ? 1 : 0) << '\n';
            }
        if (!out)
            throw IoError("write failed for " + prefix + ".csv");
    }
    {
        std::ofstream out(prefix + ".truth.csv");
        if (!out)
            throw IoError("cannot write " + prefix + ".truth.csv");
        out << "row,col,value\n";
        for (std::size_t i = 0; i < db.n_rows; ++i)
            for (std::size_t j = 0; j < db.n_cols; ++j) {
                const std::size_t idx = db.index(i, j);
                if (!db.known[idx])
                    out << i << ',' << j << ',' << format_value(db.truth[idx]) << '\n';
            }
    }
    {
        json meta;
        meta["version"] = kVersion;
        meta["spec"] = spec_to_json(db.spec);
        meta["rows"] = db.n_rows;
        meta["cols"] = db.n_cols;
        meta["masked"] = db.masked_count;
        if (db.mask_seed)
            meta["mask_seed"] = *db.mask_seed;
        if (db.noise_eta) {
            meta["noise_eta"] = *db.noise_eta;
            meta["noise_seed"] = *db.noise_seed;
        }
        if (!db.column_tags.empty())
            meta["column_tags"] = db.column_tags;
        if (!db.warnings.empty())
            meta["warnings"] = db.warnings;
        std::ofstream out(prefix + ".meta.json");
        if (!out)
            throw IoError("cannot write " + prefix + ".meta.json");
        out << meta.dump(2) << '\n';
    }
}

namespace {

std::vector<std::string> split_line(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

} // namespace

RatingDatabase read_database(const std::string& prefix) {
    RatingDatabase db;
    {
        std::ifstream in(prefix + ".meta.json");
        if (!in)
            throw IoError("cannot read " + prefix + ".meta.json");
        json meta = json::parse(in);
        db.spec = spec_from_json(meta.at("spec"));
        db.n_rows = meta.at("rows").get<std::size_t>();
        db.n_cols = meta.at("cols").get<std::size_t>();
        if (meta.contains("column_tags"))
            db.column_tags = meta.at("column_tags").get<std::vector<std::string>>();
        if (meta.contains("mask_seed"))
            db.mask_seed = meta.at("mask_seed").get<std::uint64_t>();
        if (meta.contains("noise_eta")) {
            db.noise_eta = meta.at("noise_eta").get<double>();
            db.noise_seed = meta.at("noise_seed").get<std::uint64_t>();
        }
    }
    db.ratings.assign(db.n_rows * db.n_cols, 0.0);
    db.known.assign(db.n_rows * db.n_cols, 1);
    {
        std::ifstream in(prefix + ".csv");
        if (!in)
            throw IoError("cannot read " + prefix + ".csv");
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            const auto parts = split_line(line, ',');
            if (parts.size() != 4)
                throw IoError("malformed line in " + prefix + ".csv: " + line);
            const std::size_t i = std::stoul(parts[0]);
            const std::size_t j = std::stoul(parts[1]);
            if (i >= db.n_rows || j >= db.n_cols)
                throw IoError("cell out of range in " + prefix + ".csv");
            db.ratings[db.index(i, j)] = std::strtod(parts[2].c_str(), nullptr);
            db.known[db.index(i, j)] = parts[3] == "1" ? 1 : 0;
        }
    }
    db.truth = db.ratings;
    db.masked_count = 0;
    for (auto k : db.known)
        if (!k)
            ++db.masked_count;
    {
        std::ifstream in(prefix + ".truth.csv");
        if (in) {
            std::string line;
            std::getline(in, line);
            while (std::getline(in, line)) {
                if (line.empty())
                    continue;
                const auto parts = split_line(line, ',');
                if (parts.size() != 3)
                    throw IoError("malformed line in " + prefix + ".truth.csv: " + line);
                const std::size_t i = std::stoul(parts[0]);
                const std::size_t j = std::stoul(parts[1]);
                if (i >= db.n_rows || j >= db.n_cols)
                    throw IoError("cell out of range in " + prefix + ".truth.csv");
                db.truth[db.index(i, j)] = std::strtod(parts[2].c_str(), nullptr);
            }
        }
    }
    return db;
}

void write_cells_csv(const std::vector<RatingCell>& cells, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << "row,col,value\n";
    for (const auto& c : cells)
        out << c.row << ',' << c.col << ',' << format_value(c.value) << '\n';
    if (!out)
        throw IoError("write failed for " + path);
}

std::vector<RatingCell> read_cells_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read " + path);
    std::vector<RatingCell> cells;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto parts = split_line(line, ',');
        if (parts.size() != 3)
            throw IoError("malformed line in " + path + ": " + line);
        cells.push_back({std::stoi(parts[0]), std::stoi(parts[1]),
                         std::strtod(parts[2].c_str(), nullptr)});
    }
    return cells;
}

TrainResult train_model(const RatingDatabase& db, const TrainConfig& cfg) {
    return train(db.n_rows, db.n_cols, db.known_cells(), cfg);
}

std::vector<RatingCell> predict_hidden(const FactorModel& model, const RatingDatabase& db) {
    std::vector<RatingCell> out;
    out.reserve(db.masked_count);
    for (std::size_t i = 0; i < db.n_rows; ++i)
        for (std::size_t j = 0; j < db.n_cols; ++j)
            if (!db.known[db.index(i, j)])
                out.push_back({static_cast<int>(i), static_cast<int>(j),
                               predict(model, static_cast<int>(i), static_cast<int>(j))});
    return out;
}

} // namespace qrec
