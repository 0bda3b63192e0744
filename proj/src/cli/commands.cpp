#include "qjp/cli.hpp"

#include "qjp/candidates.hpp"
#include "qjp/error.hpp"
#include "qjp/imprecise.hpp"
#include "qjp/json_io.hpp"
#include "qjp/kernels.hpp"
#include "qjp/lattice.hpp"
#include "qjp/nogo.hpp"
#include "qjp/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qjp::cli {

namespace {

Projector qubit_projector(const BlochVector &b) {
    return Projector(bloch_to_matrix(b.normalized()));
}

std::size_t random_rank(std::size_t dim, Rng &rng) {
    if (dim <= 2) {
        return 1;
    }
    return std::uniform_int_distribution<std::size_t>(1, dim - 1)(rng);
}

StateKind alternate_kind(std::size_t i) { return i % 2 == 0 ? StateKind::pure : StateKind::mixed; }

std::string csv_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// candidate,a,b,value,lower,upper
void append_table_csv(std::ostringstream &os, const JointTable &t, const DensityMatrix &rho,
                      const ProjectorFamily &pf, const ProjectorFamily &qf,
                      const std::string &label) {
    for (std::size_t a = 0; a < pf.size(); ++a) {
        for (std::size_t b = 0; b < qf.size(); ++b) {
            const RawInterval raw = raw_interval(rho, omega_pair(pf[a], qf[b]));
            os << label << ',' << t.rows[a] << ',' << t.cols[b] << ','
               << csv_number(t.values[a][b]) << ',' << csv_number(raw.lower) << ','
               << csv_number(raw.upper) << '\n';
        }
    }
}

json instance_witness(const DensityMatrix &rho, const Projector &p, const Projector &q) {
    return json{{"rho", matrix_to_json(rho)}, {"P", matrix_to_json(p)}, {"Q", matrix_to_json(q)}};
}

// ---------------------------------------------------------------- audit --

struct Expectation {
    bool nonnegative;
    bool marginal;
    std::array<ConditionStatus, 3> conditions;
    bool within_bounds; ///< at the constructed violating states (d = 2)
};

Expectation expected_pattern(const std::string &id) {
    using S = ConditionStatus;
    if (id == "tmh") {
        return {false, true, {S::holds, S::holds, S::holds}, false};
    }
    if (id == "nonlinear") {
        return {true, true, {S::holds, S::holds, S::violated}, false};
    }
    if (id == "bell_hv") {
        return {true, true, {S::violated, S::violated, S::holds}, false};
    }
    if (id == "sequential_P") {
        return {true, false, {S::holds, S::violated, S::holds}, true};
    }
    return {true, false, {S::violated, S::holds, S::holds}, true};
}

struct MarginalSample {
    DensityMatrix rho;
    ProjectorFamily pf, qf;
    JointTable table;
    MarginalReport report;
};

struct BoundsSample {
    DensityMatrix rho;
    ProjectorFamily pf, qf;
    JointTable table;
    BoundsCheck check;
};

} // namespace

CommandResult cmd_audit(const RunConfig &config) {
    validate(config);
    if (!config.candidate) {
        throw Error(Errc::InvalidConfig, "audit needs --candidate");
    }
    const Candidate cand = make_candidate(*config.candidate, {config.mc_samples});
    const std::size_t d = config.dim;
    if (cand.stochastic && d != 2) {
        throw Error(Errc::UnsupportedDimension, cand.id + " is defined for dim 2 only");
    }
    const Expectation expect = expected_pattern(cand.id);
    const double z_sweep = 5.0;
    bool matches = true;

    json out;
    out["command"] = "audit";
    out["candidate"] = cand.id;
    out["dim"] = d;
    out["seed"] = config.seed;
    out["samples"] = config.samples;
    if (cand.stochastic) {
        out["mc_samples"] = cand.mc_samples;
    }
    out["tol"] = config.tol;
    json reports = json::array();

    auto push = [&](json entry, std::optional<bool> expected_pass) {
        if (expected_pass) {
            entry["expected_pass"] = *expected_pass;
            matches = matches && entry["pass"].get<bool>() == *expected_pass;
        } else {
            entry["expected_pass"] = nullptr;
        }
        reports.push_back(std::move(entry));
    };

    // Non-negativity over random inputs.
    {
        const NegativityScan scan =
            negativity_scan(cand, d, config.samples, derive_seed(config.seed, 1), 1e-12);
        json e{{"axiom", "nonnegativity"},
               {"pass", !scan.witness.has_value()},
               {"max_defect", std::max(0.0, -scan.min_value)}};
        e["witness"] = scan.witness ? condition_witness_to_json(*scan.witness) : json(nullptr);
        e["min_value"] = scan.min_value;
        push(std::move(e), expect.nonnegative);
    }

    // Marginality over random two-outcome families.
    const std::uint64_t mseed = derive_seed(config.seed, 2);
    const auto marg = kernels::omp::map_indexed(config.samples, [&](std::size_t i) {
        Rng rng = make_rng(mseed, i);
        DensityMatrix rho = sample_state(d, alternate_kind(i), rng);
        const Projector p = sample_projector(d, random_rank(d, rng), rng);
        const Projector q = sample_projector(d, random_rank(d, rng), rng);
        ProjectorFamily pf = two_outcome_family(p);
        ProjectorFamily qf = two_outcome_family(q);
        JointTable t = build_table(cand, rho, pf, qf, derive_seed(mseed, i + config.samples));
        const MarginalReport r = check_marginals(t, rho, pf, qf, config.tol, z_sweep);
        return MarginalSample{std::move(rho), std::move(pf), std::move(qf), std::move(t), r};
    });
    {
        double worst = 0.0;
        const MarginalSample *worst_sample = nullptr;
        bool all_pass = true;
        for (const auto &m : marg) {
            all_pass = all_pass && m.report.pass;
            const double err = std::max(m.report.row_error, m.report.col_error);
            if (!worst_sample || err > worst) {
                worst = err;
                worst_sample = &m;
            }
        }
        json e{{"axiom", "marginality"}, {"pass", all_pass}, {"max_defect", worst}};
        e["witness"] = !all_pass && worst_sample
                           ? instance_witness(worst_sample->rho, worst_sample->pf[0],
                                              worst_sample->qf[0])
                           : json(nullptr);
        if (cand.stochastic) {
            double zmax = 0.0;
            for (const auto &m : marg) {
                zmax = std::max(zmax, m.report.max_z);
            }
            e["max_z"] = zmax;
            e["z_limit"] = z_sweep;
        }
        push(std::move(e), expect.marginal);
    }

    // Agreement with tr(rho P Q) under each commutation hypothesis.
    {
        ConditionAuditOptions opts;
        opts.exact_tol = config.tol;
        const auto conds =
            condition_audit(cand, d, config.samples, derive_seed(config.seed, 3), opts);
        for (std::size_t h = 0; h < conds.size(); ++h) {
            const auto &c = conds[h];
            json e{{"axiom", "condition_" + std::string(to_string(c.hypothesis))},
                   {"pass", c.status == ConditionStatus::holds},
                   {"max_defect", c.max_gap}};
            e["witness"] = c.witness ? condition_witness_to_json(*c.witness) : json(nullptr);
            e["status"] = std::string(to_string(c.status));
            e["expected_status"] = std::string(to_string(expect.conditions[h]));
            matches = matches && c.status == expect.conditions[h];
            push(std::move(e), expect.conditions[h] == ConditionStatus::holds);
        }
    }

    // Consistency with the imprecise bounds. In d = 2 every instance uses the
    // constructed violating state of a random non-commuting pair.
    const std::size_t n_bounds = std::min<std::size_t>(config.samples, 100);
    const std::uint64_t bseed = derive_seed(config.seed, 4);
    const auto bounds = kernels::omp::map_indexed(n_bounds, [&](std::size_t i) {
        Rng rng = make_rng(bseed, i);
        std::optional<DensityMatrix> rho;
        Projector p = sample_projector(d, random_rank(d, rng), rng);
        Projector q = sample_projector(d, random_rank(d, rng), rng);
        if (d == 2) {
            while (commutator(p, q).max_abs() <= 1e-6) {
                q = sample_projector(d, 1, rng);
            }
            rho = construct_violator(p, q).rho;
        } else {
            rho = sample_state(d, alternate_kind(i), rng);
        }
        ProjectorFamily pf = two_outcome_family(p);
        ProjectorFamily qf = two_outcome_family(q);
        JointTable t = build_table(cand, *rho, pf, qf, derive_seed(bseed, i + n_bounds));
        check_marginals(t, *rho, pf, qf, config.tol, z_sweep);
        const BoundsCheck c = table_within_bounds(t, *rho, pf, qf, config.tol, z_sweep);
        return BoundsSample{std::move(*rho), std::move(pf), std::move(qf), std::move(t), c};
    });
    {
        bool all_within = true;
        const BoundsSample *worst = nullptr;
        for (const auto &b : bounds) {
            all_within = all_within && b.check.within;
            if (!worst || b.check.max_violation > worst->check.max_violation) {
                worst = &b;
            }
        }
        json e{{"axiom", "bounds_consistency"},
               {"pass", all_within},
               {"max_defect", worst ? worst->check.max_violation : 0.0}};
        e["witness"] = !all_within && worst
                           ? instance_witness(worst->rho, worst->pf[0], worst->qf[0])
                           : json(nullptr);
        e["states"] = d == 2 ? "constructed_violators" : "random";
        push(std::move(e), d == 2 ? std::optional<bool>(expect.within_bounds) : std::nullopt);
    }

    // Context-dependent sequential tables.
    if (cand.id == "sequential_P" || cand.id == "sequential_Q") {
        double worst = 0.0;
        bool all_pass = true;
        for (const auto &m : marg) {
            const ContextualReport r = contextual_bounds_audit(m.rho, m.pf, m.qf, config.tol);
            all_pass = all_pass && r.pass;
            worst = std::max({worst, r.marginal_defect_p, r.marginal_defect_q, r.bound_violation});
        }
        json e{{"axiom", "generalized_marginality"}, {"pass", all_pass}, {"max_defect", worst}};
        e["witness"] = nullptr;
        push(std::move(e), true);
    }
    out["reports"] = std::move(reports);

    // Fixed qubit instances with known values.
    if (d == 2) {
        struct Ref {
            const char *name;
            BlochVector rho, p, q;
        };
        const double r2 = 1.0 / std::sqrt(2.0);
        const double a = std::numbers::pi / 3.0;
        const std::array<Ref, 3> refs = {{
            {"negativity_instance", {-r2, 0.0, -r2}, {0, 0, 1}, {1, 0, 0}},
            {"equal_projectors_instance", {1, 0, 0}, {0, 0, 1}, {0, 0, 1}},
            {"maximally_mixed_instance", {0, 0, 0}, {0, 0, 1}, {std::sin(a), 0, std::cos(a)}},
        }};
        json arr = json::array();
        for (std::size_t k = 0; k < refs.size(); ++k) {
            const DensityMatrix rho(bloch_to_matrix(refs[k].rho));
            const Projector p = qubit_projector(refs[k].p);
            const Projector q = qubit_projector(refs[k].q);
            const Estimate e = cand.eval(rho, p, q, derive_seed(config.seed, 100 + k));
            const double ref = trace_product(rho, p.matrix() * q.matrix()).real();
            json j{{"name", refs[k].name}, {"value", e.value}, {"trace_rule", ref},
                   {"gap", e.value - ref}};
            if (cand.stochastic) {
                j["std_error"] = e.std_error;
            }
            arr.push_back(std::move(j));
        }
        out["reference_instances"] = std::move(arr);
    }

    const BoundsSample &ex = bounds.front();
    out["example_table"] = table_to_json(ex.table);
    out["pattern_matches"] = matches;

    CommandResult result;
    result.exit_code = matches ? exit_code::ok : exit_code::deviation;
    if (config.format == Format::csv) {
        std::ostringstream os;
        os << "candidate,a,b,value,lower,upper\n";
        append_table_csv(os, ex.table, ex.rho, ex.pf, ex.qf, cand.id);
        result.report = os.str();
    } else {
        result.report = out.dump(2) + "\n";
    }
    return result;
}

// ----------------------------------------------------------------- nogo --

CommandResult cmd_nogo(const RunConfig &config) {
    validate(config);
    if (config.dim != 2) {
        throw Error(Errc::UnsupportedDimension, "the no-go construction is for dim 2");
    }
    std::vector<std::pair<Projector, Projector>> pairs;
    if (config.alpha) {
        const double a = *config.alpha;
        pairs.emplace_back(qubit_projector({0, 0, 1}),
                           qubit_projector({std::sin(a), 0.0, std::cos(a)}));
    } else {
        for (std::size_t i = 0; i < config.samples; ++i) {
            Rng rng = make_rng(config.seed, i);
            Projector p = sample_projector(2, 1, rng);
            Projector q = sample_projector(2, 1, rng);
            pairs.emplace_back(std::move(p), std::move(q));
        }
    }

    json witnesses = json::array();
    std::ostringstream csv;
    csv << "alpha,L,grid_L,descent_L,t_min,t_max,empty\n";
    double min_l = 0.0, max_l = 0.0;
    bool all_negative = true, all_empty = true, all_agree = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto &[p, q] = pairs[i];
        const ViolationWitness w = construct_violator(p, q);
        MinimizeOptions mo;
        mo.grid_points = config.grid_points;
        mo.seed = derive_seed(config.seed, 1000 + i);
        const ViolationWitness g = minimize_L(p, q, MinimizeMethod::grid, mo);
        const ViolationWitness dsc = minimize_L(p, q, MinimizeMethod::descent, mo);
        const ViolationValue v = violation_functional(w.rho, p, q);

        const double closed = closed_form_min(w.alpha);
        const bool agree = std::abs(g.L_value - w.L_value) <= 1e-3 &&
                           std::abs(dsc.L_value - w.L_value) <= 1e-8 &&
                           std::abs(closed - w.L_value) <= 1e-10 &&
                           std::abs(v.bloch_form - v.trace_form) <= 1e-12;
        all_agree = all_agree && agree;
        all_negative = all_negative && w.L_value < 0.0;
        all_empty = all_empty && w.slice.empty;
        min_l = i == 0 ? w.L_value : std::min(min_l, w.L_value);
        max_l = i == 0 ? w.L_value : std::max(max_l, w.L_value);

        json j = witness_to_json(w);
        j["closed_form_L"] = closed;
        j["bloch_L"] = v.bloch_form;
        j["grid_L"] = g.L_value;
        j["descent_L"] = dsc.L_value;
        j["cross_checks_agree"] = agree;
        witnesses.push_back(std::move(j));
        csv << csv_number(w.alpha) << ',' << csv_number(w.L_value) << ','
            << csv_number(g.L_value) << ',' << csv_number(dsc.L_value) << ','
            << csv_number(w.slice.t_min) << ',' << csv_number(w.slice.t_max) << ','
            << (w.slice.empty ? "true" : "false") << '\n';
    }

    json out;
    out["command"] = "nogo";
    out["seed"] = config.seed;
    out["grid_points"] = config.grid_points;
    out["witnesses"] = std::move(witnesses);
    out["summary"] = json{{"count", pairs.size()},     {"min_L", min_l},
                          {"max_L", max_l},            {"all_negative", all_negative},
                          {"all_empty", all_empty},    {"cross_checks_agree", all_agree}};
    CommandResult r;
    r.exit_code = all_negative && all_empty && all_agree ? exit_code::ok : exit_code::deviation;
    r.report = config.format == Format::csv ? csv.str() : out.dump(2) + "\n";
    return r;
}

// ------------------------------------------------------------------- hv --

CommandResult cmd_hv(const RunConfig &config) {
    validate(config);
    if (config.dim != 2) {
        throw Error(Errc::UnsupportedDimension, "the hidden-variable model is for dim 2");
    }
    const double a = config.alpha.value_or(std::numbers::pi / 3.0);
    const Projector p1 = qubit_projector({0, 0, 1});
    const Projector q1 = qubit_projector({std::sin(a), 0.0, std::cos(a)});
    const ProjectorFamily pf = two_outcome_family(p1);
    const ProjectorFamily qf = two_outcome_family(q1);
    const Candidate cand = make_candidate("bell_hv", {config.samples});

    struct State {
        std::string label;
        DensityMatrix rho;
    };
    Rng rng = make_rng(config.seed, 0);
    const std::array<State, 2> states = {{
        {"maximally_mixed", DensityMatrix::maximally_mixed(2)},
        {"random_pure", sample_state(2, StateKind::pure, rng)},
    }};

    bool ok = true;
    json arr = json::array();
    std::ostringstream csv;
    csv << "candidate,a,b,value,lower,upper\n";
    for (std::size_t s = 0; s < states.size(); ++s) {
        const auto &st = states[s];
        JointTable t = build_table(cand, st.rho, pf, qf, derive_seed(config.seed, 1 + s));
        const MarginalReport mr = check_marginals(t, st.rho, pf, qf, 1e-12, 3.0);
        ok = ok && mr.pass;

        const auto n = static_cast<double>(config.samples);
        json marginals = json::array();
        auto add_marginal = [&](const std::string &name, double est, double born_value) {
            const double p = std::clamp(born_value, 0.0, 1.0);
            const double sigma = std::sqrt(p * (1.0 - p) / n);
            const double dev = est - born_value;
            marginals.push_back(json{{"outcome", name},
                                     {"estimate", est},
                                     {"born", born_value},
                                     {"std_error", sigma},
                                     {"z", sigma > 0.0 ? dev / sigma : 0.0}});
        };
        for (std::size_t i = 0; i < 2; ++i) {
            add_marginal("P" + std::to_string(i + 1), t.values[i][0] + t.values[i][1],
                         trace_product(st.rho, pf[i]).real());
        }
        for (std::size_t j = 0; j < 2; ++j) {
            add_marginal("Q" + std::to_string(j + 1), t.values[0][j] + t.values[1][j],
                         trace_product(st.rho, qf[j]).real());
        }

        const double est = t.values[0][0];
        const double sigma = t.std_errors[0][0];
        const double trace_rule = trace_product(st.rho, p1.matrix() * q1.matrix()).real();
        json joint{{"estimate", est},
                   {"std_error", sigma},
                   {"trace_rule", trace_rule},
                   {"deviation", est - trace_rule},
                   {"z", sigma > 0.0 ? (est - trace_rule) / sigma : 0.0}};
        if (s == 0) {
            const double analytic = (std::numbers::pi - a) / (2.0 * std::numbers::pi);
            joint["analytic"] = analytic;
            const bool match = std::abs(est - analytic) <= std::max(1e-12, 3.0 * sigma);
            joint["analytic_within_3sigma"] = match;
            ok = ok && match;
        }

        arr.push_back(json{{"label", st.label},
                           {"rho", matrix_to_json(st.rho)},
                           {"table", table_to_json(t)},
                           {"marginals", std::move(marginals)},
                           {"marginals_within_3sigma", mr.pass},
                           {"joint", std::move(joint)}});
        append_table_csv(csv, t, st.rho, pf, qf, "bell_hv@" + st.label);
    }

    json out;
    out["command"] = "hv";
    out["alpha"] = a;
    out["samples"] = config.samples;
    out["seed"] = config.seed;
    out["states"] = std::move(arr);
    out["consistent_with_born"] = ok;
    CommandResult r;
    r.exit_code = ok ? exit_code::ok : exit_code::deviation;
    r.report = config.format == Format::csv ? csv.str() : out.dump(2) + "\n";
    return r;
}

// -------------------------------------------------------------- lattice --

CommandResult cmd_lattice(const RunConfig &config) {
    validate(config);
    const std::size_t d = config.dim;

    struct Entry {
        std::size_t rank_p, rank_q, meet_rank, join_rank;
        double disagreement;
        bool flagged;
        RawInterval interval;
        double tmh_value;
    };
    const auto entries = kernels::omp::map_indexed(config.samples, [&](std::size_t i) {
        Rng rng = make_rng(config.seed, i);
        const Projector p = sample_projector(d, random_rank(d, rng), rng);
        const Projector q = sample_projector(d, random_rank(d, rng), rng);
        const DensityMatrix rho = sample_state(d, alternate_kind(i), rng);
        const Projector ms = meet(p, q, MeetMethod::spectral);
        const Projector mi = meet(p, q, MeetMethod::iterated);
        const Projector jn = join(p, q);
        return Entry{p.rank(),
                     q.rank(),
                     ms.rank(),
                     jn.rank(),
                     max_abs_diff(ms, mi),
                     near_degenerate(p, q),
                     raw_interval(rho, omega_pair(p, q)),
                     tmh(rho, p, q)};
    });

    json arr = json::array();
    std::ostringstream csv;
    csv << "index,rank_p,rank_q,meet_rank,join_rank,disagreement,lower,upper\n";
    double worst = 0.0;
    std::size_t flagged = 0;
    bool agree = true;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Entry &e = entries[i];
        worst = std::max(worst, e.disagreement);
        flagged += e.flagged;
        agree = agree && (e.flagged || e.disagreement <= 1e-8);
        arr.push_back(json{{"index", i},
                           {"rank_p", e.rank_p},
                           {"rank_q", e.rank_q},
                           {"meet_rank", e.meet_rank},
                           {"join_rank", e.join_rank},
                           {"meet_disagreement", e.disagreement},
                           {"near_degenerate", e.flagged},
                           {"interval", {e.interval.lower, e.interval.upper}},
                           {"tmh", e.tmh_value}});
        csv << i << ',' << e.rank_p << ',' << e.rank_q << ',' << e.meet_rank << ','
            << e.join_rank << ',' << csv_number(e.disagreement) << ','
            << csv_number(e.interval.lower) << ',' << csv_number(e.interval.upper) << '\n';
    }

    json out;
    out["command"] = "lattice";
    out["dim"] = d;
    out["seed"] = config.seed;
    out["samples"] = config.samples;
    out["pairs"] = std::move(arr);
    out["summary"] = json{{"max_meet_disagreement", worst},
                          {"near_degenerate_pairs", flagged},
                          {"methods_agree", agree}};
    CommandResult r;
    r.exit_code = agree ? exit_code::ok : exit_code::deviation;
    r.report = config.format == Format::csv ? csv.str() : out.dump(2) + "\n";
    return r;
}

// ------------------------------------------------------------------ run --

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
        std::optional<std::string> env_seed) {
    CLI::App app{"Audit candidate joint probabilities of non-commuting observables"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "json";
    std::string config_path;
    std::uint64_t seed = 0;
    std::optional<std::size_t> samples;

    auto *o_dim = app.add_option("--dim", cfg.dim, "Hilbert-space dimension (2..8)");
    auto *o_alpha = app.add_option("--alpha", cfg.alpha, "angle between Bloch axes, radians");
    auto *o_seed = app.add_option("--seed", seed, "RNG seed (default: $QPROB_SEED or 0)");
    auto *o_samples = app.add_option("--samples", samples, "random instances / MC evaluations");
    auto *o_tol = app.add_option("--tol", cfg.tol, "equality tolerance");
    auto *o_cand = app.add_option("--candidate", cfg.candidate, "candidate id for audit");
    auto *o_out = app.add_option("--output", cfg.output_path, "write the report here");
    auto *o_fmt = app.add_option("--format", format, "json or csv")
                      ->check(CLI::IsMember({"json", "csv"}));
    auto *o_mc = app.add_option("--mc-samples", cfg.mc_samples,
                                "hidden-variable evaluations per cell in audit");
    auto *o_grid = app.add_option("--grid-points", cfg.grid_points, "sphere lattice size in nogo");
    app.add_option("--config", config_path, "flat key=value config file");

    auto *s_audit = app.add_subcommand("audit", "audit a candidate joint probability");
    auto *s_nogo = app.add_subcommand("nogo", "qubit violating states and feasibility slices");
    auto *s_hv = app.add_subcommand("hv", "hidden-variable Monte Carlo against Born's rule");
    auto *s_lat = app.add_subcommand("lattice", "meet/join cross-validation and Born intervals");
    for (auto *s : {s_audit, s_nogo, s_hv, s_lat}) {
        s->fallthrough();
    }

    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << app.help();
        return exit_code::usage;
    }

    if (s_audit->parsed()) {
        cfg.command = Command::audit;
    } else if (s_nogo->parsed()) {
        cfg.command = Command::nogo;
    } else if (s_hv->parsed()) {
        cfg.command = Command::hv;
    } else {
        cfg.command = Command::lattice;
    }

    try {
        cfg.format = format == "csv" ? Format::csv : Format::json;
        cfg.samples = cfg.command == Command::hv ? 1'000'000 : 1000;
        if (samples) {
            cfg.samples = *samples;
        }
        if (env_seed && !env_seed->empty()) {
            std::istringstream is(*env_seed);
            std::uint64_t v = 0;
            if (!(is >> v) || !(is >> std::ws).eof()) {
                throw Error(Errc::InvalidConfig, "QPROB_SEED is not an unsigned integer");
            }
            cfg.seed = v;
        }
        if (o_seed->count() > 0) {
            cfg.seed = seed;
        }
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw Error(Errc::InvalidConfig, "cannot read config file " + config_path);
            }
            std::vector<std::string> set;
            const std::pair<CLI::Option *, const char *> flags[] = {
                {o_dim, "dim"},         {o_alpha, "alpha"},   {o_seed, "seed"},
                {o_samples, "samples"}, {o_tol, "tol"},       {o_cand, "candidate"},
                {o_out, "output"},      {o_fmt, "format"},    {o_mc, "mc-samples"},
                {o_grid, "grid-points"}};
            for (const auto &[opt, key] : flags) {
                if (opt->count() > 0) {
                    set.emplace_back(key);
                }
            }
            apply_config_file(cfg, parse_config_file(in), set);
        }

        CommandResult result;
        switch (cfg.command) {
        case Command::audit: result = cmd_audit(cfg); break;
        case Command::nogo: result = cmd_nogo(cfg); break;
        case Command::hv: result = cmd_hv(cfg); break;
        case Command::lattice: result = cmd_lattice(cfg); break;
        }

        if (cfg.output_path) {
            std::ofstream f(*cfg.output_path, std::ios::binary);
            if (!f) {
                throw Error(Errc::InvalidConfig, "cannot write " + *cfg.output_path);
            }
            f << result.report;
        } else {
            out << result.report;
        }
        if (result.exit_code == exit_code::deviation) {
            err << "deviation from the expected pattern; see report\n";
        }
        return result.exit_code;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    }
}

} // namespace qjp::cli
