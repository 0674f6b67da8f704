// nestsimplex: command-line front end for the nested-simplex predicates,
// two-qubit state analysis, steering sampler and geometric oracle.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nestsim/geo_oracle.hpp"
#include "nestsim/nesting.hpp"
#include "nestsim/rng.hpp"
#include "nestsim/steering.hpp"
#include "nestsim/two_qubit.hpp"

using json = nlohmann::json;
using namespace nestsim;

namespace {

constexpr int kExitPositive = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("NESTED_SIMPLEX_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

Vec3 parse_vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error("field '" + field + "' must be a length-3 array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Mat3 parse_mat3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error("field '" + field + "' must be a 3x3 array");
    Mat3 m;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!j[i].is_array() || j[i].size() != 3)
            throw std::runtime_error("field '" + field + "' must be a 3x3 array");
        for (std::size_t k = 0; k < 3; ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

struct QueryInput {
    NestingQuery query;
    double tol = 1e-10;
};

QueryInput parse_query(const json& j) {
    QueryInput in;
    if (!j.contains("R")) throw std::runtime_error("missing field 'R'");
    in.query.big_radius = j.at("R").get<double>();
    if (!(in.query.big_radius > 0.0)) throw std::runtime_error("field 'R' must be positive");
    if (j.contains("tol")) in.tol = j.at("tol").get<double>();

    if (j.contains("Q")) {
        const Mat3 q = parse_mat3(j.at("Q"), "Q");
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = i + 1; k < 3; ++k)
                if (std::abs(q(i, k) - q(k, i)) > 1e-10)
                    throw std::runtime_error("field 'Q' is not symmetric");
        in.query.ellipsoid.q = SymMat3::from_mat3(q);
        in.query.ellipsoid.c = j.contains("c") ? parse_vec3(j.at("c"), "c") : Vec3{};
    } else if (j.contains("r")) {
        const double r = j.at("r").get<double>();
        if (r < 0.0) throw std::runtime_error("field 'r' must be nonnegative");
        in.query.ellipsoid.q = SymMat3::diag(r * r, r * r, r * r);
        const double d = j.contains("d") ? j.at("d").get<double>() : 0.0;
        in.query.ellipsoid.c = {d, 0.0, 0.0};
    } else {
        throw std::runtime_error("query needs either 'Q' or the sphere shorthand 'r'");
    }
    return in;
}

struct StateInput {
    TwoQubitState state;
    double tol = 1e-10;
};

StateInput parse_state(const json& j) {
    StateInput in;
    if (j.contains("tol")) in.tol = j.at("tol").get<double>();
    if (j.contains("rho")) {
        const json& rj = j.at("rho");
        if (!rj.is_array() || rj.size() != 4)
            throw std::runtime_error("field 'rho' must be a 4x4 array of [re, im] pairs");
        Mat4c rho;
        for (std::size_t i = 0; i < 4; ++i) {
            if (!rj[i].is_array() || rj[i].size() != 4)
                throw std::runtime_error("field 'rho' must be a 4x4 array of [re, im] pairs");
            for (std::size_t k = 0; k < 4; ++k) {
                const json& cell = rj[i][k];
                if (!cell.is_array() || cell.size() != 2)
                    throw std::runtime_error("field 'rho' entries must be [re, im] pairs");
                rho(i, k) = cplx(cell[0].get<double>(), cell[1].get<double>());
            }
        }
        if (std::abs(rho.trace() - cplx(1.0)) > 1e-10)
            throw std::runtime_error("field 'rho' is not unit trace");
        in.state.rho = rho;
        in.state.valid = is_psd(rho, in.tol);
    } else if (j.contains("d") && j.contains("S")) {
        CanonicalParams p;
        p.d = parse_vec3(j.at("d"), "d");
        p.s = parse_mat3(j.at("S"), "S");
        in.state = assemble_canonical(p, in.tol);
    } else {
        throw std::runtime_error("state needs either 'rho' or the canonical pair 'd'/'S'");
    }
    return in;
}

const char* branch_name(QuarticBranch b) {
    switch (b) {
        case QuarticBranch::lower: return "lower";
        case QuarticBranch::upper: return "upper";
        default: return "no-real-roots";
    }
}

json report_to_json(const NestingReport& rep) {
    return {{"u", rep.u},
            {"q", rep.q_coef},
            {"skew", rep.skew},
            {"quartic", rep.quartic},
            {"contained", rep.contained},
            {"max_radius", rep.max_radius},
            {"nested_exists", rep.nested_exists},
            {"degenerate", rep.degenerate},
            {"branch", branch_name(rep.branch)},
            {"upper_branch_anomaly", rep.upper_branch_anomaly}};
}

void print_report(const NestingReport& rep) {
    std::printf("u            = %.15g\n", rep.u);
    std::printf("q            = %.15g\n", rep.q_coef);
    std::printf("skew         = %.15g\n", rep.skew);
    std::printf("quartic      = %.15g\n", rep.quartic);
    std::printf("max_radius   = %.15g\n", rep.max_radius);
    std::printf("degenerate   = %s\n", rep.degenerate ? "yes (triangle suffices)" : "no");
    std::printf("branch       = %s\n", branch_name(rep.branch));
    if (rep.upper_branch_anomaly)
        std::printf("warning: quartic sign taken on the upper branch while contained\n");
    std::printf("nested simplex exists: %s\n", rep.nested_exists ? "YES" : "NO");
}

int cmd_check_nesting(const std::string& path, std::optional<double> tol_flag,
                      bool as_json) {
    QueryInput in;
    NestingReport rep;
    try {
        in = parse_query(load_json(path));
        if (tol_flag) in.tol = *tol_flag;
        rep = nesting_predicate(in.query, in.tol);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
    if (as_json) std::cout << report_to_json(rep).dump(2) << "\n";
    else print_report(rep);
    return rep.nested_exists ? kExitPositive : kExitNegative;
}

int cmd_check_state(const std::string& path, std::optional<double> tol_flag,
                    bool as_json) {
    StateInput in;
    SeparabilityVerdict verdict;
    PauliDecomposition dec;
    try {
        in = parse_state(load_json(path));
        if (tol_flag) in.tol = *tol_flag;
        if (!is_psd(in.state.rho, in.tol)) {
            std::cerr << "error: not a quantum state (rho has a negative eigenvalue)\n";
            return kExitError;
        }
        verdict = separability(in.state, in.tol);
        dec = pauli_decompose(in.state);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }

    const Ellipsoid ell = ellipsoid_from_params(dec.params);
    const EigenSystem3 es = eig_sym3(ell.q);
    std::optional<NestingReport> rep;
    if (dec.canonical) {
        try {
            rep = nesting_predicate({ell, 1.0}, in.tol);
        } catch (const containment_error&) {
            // valid states always fit in the Bloch sphere; leave unset otherwise
        }
    }

    if (as_json) {
        json out = {{"det_pt", verdict.det_pt},
                    {"separable", verdict.separable},
                    {"canonical", dec.canonical},
                    {"bob_bloch", {dec.bob_bloch.x, dec.bob_bloch.y, dec.bob_bloch.z}},
                    {"centre", {ell.c.x, ell.c.y, ell.c.z}},
                    {"semiaxes",
                     {std::sqrt(std::max(es.values[0], 0.0)),
                      std::sqrt(std::max(es.values[1], 0.0)),
                      std::sqrt(std::max(es.values[2], 0.0))}}};
        json axes = json::array();
        for (const Vec3& v : es.vectors) axes.push_back({v.x, v.y, v.z});
        out["axes"] = axes;
        if (rep) out["nesting"] = report_to_json(*rep);
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("det(rho^Gamma) = %.15g\n", verdict.det_pt);
        std::printf("separable      = %s\n", verdict.separable ? "YES" : "NO");
        if (!dec.canonical)
            std::printf("note: state is not canonical (Bob's Bloch vector |b| = %.3g)\n",
                        dec.bob_bloch.norm());
        std::printf("ellipsoid centre   = (%.15g, %.15g, %.15g)\n", ell.c.x, ell.c.y, ell.c.z);
        std::printf("ellipsoid semiaxes = (%.15g, %.15g, %.15g)\n",
                    std::sqrt(std::max(es.values[0], 0.0)),
                    std::sqrt(std::max(es.values[1], 0.0)),
                    std::sqrt(std::max(es.values[2], 0.0)));
        if (rep) {
            std::printf("-- nesting report at R = 1 --\n");
            print_report(*rep);
        }
    }
    return verdict.separable ? kExitPositive : kExitNegative;
}

int cmd_steer_sample(const std::string& path, std::size_t n, std::uint64_t seed,
                     const std::string& out_path, double weak_fraction) {
    try {
        const json j = load_json(path);
        CanonicalParams p;
        if (j.contains("d") && j.contains("S")) {
            p.d = parse_vec3(j.at("d"), "d");
            p.s = parse_mat3(j.at("S"), "S");
        } else if (j.contains("rho")) {
            const StateInput in = parse_state(j);
            const PauliDecomposition dec = pauli_decompose(in.state);
            if (!dec.canonical)
                throw std::runtime_error("state is not canonical; cannot sample steering");
            p = dec.params;
        } else {
            throw std::runtime_error("state needs either 'rho' or the canonical pair 'd'/'S'");
        }

        SamplerOptions opts;
        opts.weak_fraction = weak_fraction;
        const auto outcomes = sample_steered(p, n, seed, opts);

        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write file: " + out_path);
        out << "x,y,z,p\n";
        char buf[160];
        for (const SteeredOutcome& o : outcomes) {
            if (!o.defined) continue;
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", o.alice_bloch.x,
                          o.alice_bloch.y, o.alice_bloch.z, o.probability);
            out << buf;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
    return kExitPositive;
}

int cmd_oracle(const std::string& path, int restarts, std::uint64_t seed,
               const std::string& witness_path) {
    OracleResult result;
    try {
        const QueryInput in = parse_query(load_json(path));
        const NestingReport rep = nesting_predicate(in.query, in.tol);
        SearchBudget budget;
        if (restarts > 0) budget.restarts = restarts;
        result = rep.degenerate
                     ? search_triangle_3d(in.query.ellipsoid, in.query.big_radius,
                                          budget, seed)
                     : search_tetrahedron_3d(in.query.ellipsoid, in.query.big_radius,
                                             budget, seed);
        if (!witness_path.empty() && result.has_witness) {
            json w = {{"found", result.found},
                      {"min_slack", result.witness.min_slack},
                      {"face_slacks", result.witness.face_slacks}};
            json verts = json::array();
            for (const Vec3& v : result.witness.vertices) verts.push_back({v.x, v.y, v.z});
            w["vertices"] = verts;
            std::ofstream out(witness_path);
            if (!out) throw std::runtime_error("cannot write file: " + witness_path);
            out << w.dump(2) << "\n";
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
    std::printf("found          = %s\n", result.found ? "YES" : "NO");
    std::printf("best_min_slack = %.15g\n", result.best_min_slack);
    std::printf("restarts_used  = %d\n", result.restarts_used);
    return result.found ? kExitPositive : kExitNegative;
}

int cmd_sweep(const std::string& mode, double R, double lo, double hi, int steps,
              double s1, double s2, double s3, const std::string& out_path) {
    try {
        if (steps < 1) throw std::runtime_error("empty range: need at least one step");
        if (!(R > 0.0)) throw std::runtime_error("R must be positive");
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write file: " + out_path);
        char buf[200];

        auto quartic_root = [&](const SymMat3& q, const Vec3& dir) {
            // Lower-branch root d^2 = u - sqrt(u^2 - q) of the quartic, the
            // predicate's own boundary for centre offsets along dir.
            const double trq = q.trace();
            const double skew = dir.dot(q * dir);
            const double u = R * R - trq + 2.0 * skew;
            const double qq = R * R * R * R - 2.0 * R * R * trq -
                              8.0 * R * std::sqrt(std::max(q.det(), 0.0)) +
                              2.0 * q.trace_sq() - trq * trq;
            const double disc = u * u - qq;
            return disc >= 0.0 ? u - std::sqrt(disc)
                               : std::numeric_limits<double>::quiet_NaN();
        };

        if (mode == "circle" || mode == "sphere") {
            out << "# mode=" << mode << " R=" << R << "\n";
            out << "# columns: r, d2_max_closed_form, d2_quartic_root\n";
            out << "r,d2_max,d2_root\n";
            for (int i = 0; i < steps; ++i) {
                const double r = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
                const double closed = mode == "circle" ? circle_condition(R, r)
                                                       : sphere_condition(R, r);
                const SymMat3 q = mode == "circle" ? SymMat3::diag(r * r, r * r, 0.0)
                                                   : SymMat3::diag(r * r, r * r, r * r);
                const double root = quartic_root(q, {1.0, 0.0, 0.0});
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", r, closed, root);
                out << buf;
            }
        } else if (mode == "aligned") {
            out << "# mode=aligned R=" << R << " semiaxes scaled by t\n";
            out << "# columns: t, s1, s2, s3, d2_max_closed_form, d2_quartic_root\n";
            out << "t,s1,s2,s3,d2_max,d2_root\n";
            for (int i = 0; i < steps; ++i) {
                const double t = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
                const double a = t * s1, b = t * s2, c = t * s3;
                const double closed = aligned_ellipsoid_condition(R, a, b, c);
                const double root =
                    quartic_root(SymMat3::diag(a * a, b * b, c * c), {1.0, 0.0, 0.0});
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                              t, a, b, c, closed, root);
                out << buf;
            }
        } else {
            throw std::runtime_error("unknown mode: " + mode);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
    return kExitPositive;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nested-simplex existence predicates, two-qubit separability and "
                 "steering-ellipsoid tools"};
    app.require_subcommand(1);

    std::string file, out_path, witness_path, mode = "sphere";
    std::optional<double> tol;
    bool as_json = false;
    std::size_t n = 1000;
    std::uint64_t seed = default_seed();
    int restarts = 0;
    double weak_fraction = 0.3;
    double R = 1.0, lo = 0.0, hi = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int steps = 1;

    auto* check = app.add_subcommand("check-nesting",
                                     "Evaluate the nested-simplex quartic predicate");
    check->add_option("file", file, "query JSON file")->required();
    check->add_option("--tol", tol, "boundary tolerance (default 1e-10)");
    check->add_flag("--json", as_json, "emit the report as JSON");

    auto* state = app.add_subcommand("check-state",
                                     "Separability and steering ellipsoid of a state");
    state->add_option("file", file, "state JSON file")->required();
    state->add_option("--tol", tol, "boundary tolerance (default 1e-10)");
    state->add_flag("--json", as_json, "emit the report as JSON");

    auto* steer = app.add_subcommand("steer-sample",
                                     "Sample Bob-measurement-steered Bloch vectors");
    steer->add_option("file", file, "state JSON file")->required();
    steer->add_option("--n", n, "number of samples");
    steer->add_option("--seed", seed, "RNG seed (NESTED_SIMPLEX_SEED fallback)");
    steer->add_option("--weak-frac", weak_fraction, "fraction of weak effects");
    steer->add_option("--out", out_path, "output CSV path")->required();

    auto* oracle = app.add_subcommand("oracle",
                                      "Brute-force nested triangle/tetrahedron search");
    oracle->add_option("file", file, "query JSON file")->required();
    oracle->add_option("--restarts", restarts, "multi-start budget");
    oracle->add_option("--seed", seed, "RNG seed (NESTED_SIMPLEX_SEED fallback)");
    oracle->add_option("--witness", witness_path, "write witness simplex JSON here");

    auto* sweep = app.add_subcommand("sweep", "Tabulate closed-form nesting boundaries");
    sweep->add_option("--mode", mode, "sphere | circle | aligned")->required();
    sweep->add_option("--R", R, "outer sphere radius");
    sweep->add_option("--lo", lo, "range start (inner radius or scale)");
    sweep->add_option("--hi", hi, "range end");
    sweep->add_option("--steps", steps, "number of grid points");
    sweep->add_option("--s1", s1, "aligned mode: semiaxis along the offset");
    sweep->add_option("--s2", s2, "aligned mode: second semiaxis");
    sweep->add_option("--s3", s3, "aligned mode: third semiaxis");
    sweep->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    if (check->parsed()) return cmd_check_nesting(file, tol, as_json);
    if (state->parsed()) return cmd_check_state(file, tol, as_json);
    if (steer->parsed()) return cmd_steer_sample(file, n, seed, out_path, weak_fraction);
    if (oracle->parsed()) return cmd_oracle(file, restarts, seed, witness_path);
    if (sweep->parsed()) {
        if (mode == "aligned" && hi == 0.0 && lo == 0.0) { lo = hi = 1.0; }
        return cmd_sweep(mode, R, lo, hi, steps, s1, s2, s3, out_path);
    }
    return kExitError;
}
