// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "oracles.hpp"

#include "qjp/candidates.hpp"
#include "qjp/cli.hpp"
#include "qjp/error.hpp"
#include "qjp/imprecise.hpp"
#include "qjp/kernels.hpp"
#include "qjp/lattice.hpp"
#include "qjp/nogo.hpp"
#include "qjp/random.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace qjp;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Projector qubit_projector(const BlochVector &b) { return Projector(bloch_to_matrix(b.normalized())); }
Projector at_angle(double alpha) { return qubit_projector({std::sin(alpha), 0, std::cos(alpha)}); }

/// Random rank-1 qubit pair whose Bloch angle lies in [lo, hi].
std::pair<Projector, Projector> pair_in_band(Rng &rng, double lo, double hi) {
    for (;;) {
        const BlochVector a = sample_unit_vector(rng);
        const BlochVector b = sample_unit_vector(rng);
        const double alpha = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
        if (alpha >= lo && alpha <= hi) {
            return {qubit_projector(a), qubit_projector(b)};
        }
    }
}

oracle::Scan scan_for(const DensityMatrix &rho, const ProjectorFamily &pf,
                      const ProjectorFamily &qf) {
    const BlochVector r = oracle::bloch_of(rho);
    std::array<double, 4> lo{}, hi{};
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            const auto [l, u] =
                oracle::qubit_cell_bounds(r, oracle::bloch_of(pf[a]), oracle::bloch_of(qf[b]));
            lo[2 * a + b] = l;
            hi[2 * a + b] = u;
        }
    }
    return oracle::t_scan(0.5 * (1.0 + r.dot(oracle::bloch_of(pf[0]))),
                          0.5 * (1.0 + r.dot(oracle::bloch_of(qf[0]))), lo, hi);
}

std::string run_cli(const std::vector<std::string> &args, int &code) {
    std::vector<std::string> full = {"qprob"};
    full.insert(full.end(), args.begin(), args.end());
    std::ostringstream out, err;
    code = cli::run(full, out, err);
    return out.str();
}

// ------------------------------------------------------------------------

Verdict ac1_nogo_reproduction() {
    Verdict v;
    const auto t0 = Clock::now();
    const Projector p = at_angle(0.0);
    const Projector q = at_angle(pi / 2);
    const double expected = (1.0 + std::cos(pi / 2) - 2.0 * std::cos(pi / 4)) / 2.0;
    const ViolationWitness closed = minimize_L(p, q, MinimizeMethod::closed_form);
    MinimizeOptions grid_opts;
    grid_opts.grid_points = 100'000;
    const ViolationWitness grid = minimize_L(p, q, MinimizeMethod::grid, grid_opts);
    const double elapsed = seconds_since(t0);
    v.require(std::abs(closed.L_value - expected) <= 1e-10, "closed form within 1e-10");
    v.require(std::abs(grid.L_value - closed.L_value) <= 1e-3, "grid within 1e-3");
    v.require(elapsed < 1.0, "runtime < 1 s");

    Rng rng(20240101);
    std::uniform_real_distribution<double> alpha_dist(0.0, pi);
    double worst_margin = 1e300;
    for (int i = 0; i < 100; ++i) {
        const double a = alpha_dist(rng);
        const double formula = std::cos(a) - 2.0 * std::cos(a / 2.0) + 1.0;
        const double twice_l = 2.0 * construct_violator(at_angle(0.0), at_angle(a)).L_value;
        worst_margin = std::min({worst_margin, -formula, -twice_l});
    }
    v.require(worst_margin > 1e-9, "cos a - 2 cos(a/2) < -1 with margin > 1e-9");
    v.detail << " L=" << closed.L_value << " grid=" << grid.L_value << " (" << elapsed
             << " s); min margin over 100 angles " << worst_margin;
    return v;
}

Verdict ac2_feasibility_exclusion() {
    Verdict v;
    const auto t0 = Clock::now();
    const std::size_t n = 1000;
    struct Row {
        bool violator_empty, mixed_nonempty, scan_agrees;
    };
    const auto rows = kernels::omp::map_indexed(n, [](std::size_t i) {
        Rng rng = make_rng(2002, i);
        const auto [p, q] = pair_in_band(rng, 0.1, pi - 0.1);
        const ProjectorFamily pf = two_outcome_family(p);
        const ProjectorFamily qf = two_outcome_family(q);
        const ViolationWitness w = construct_violator(p, q);
        const FeasibleSlice sv = feasibility_audit(w.rho, pf, qf);
        const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
        const FeasibleSlice sm = feasibility_audit(mixed, pf, qf);
        const bool agree = scan_for(w.rho, pf, qf).feasible == !sv.empty &&
                           scan_for(mixed, pf, qf).feasible == !sm.empty;
        return Row{sv.empty, !sm.empty, agree};
    });
    const double elapsed = seconds_since(t0);
    std::size_t empty = 0, nonempty = 0, agree = 0;
    for (const auto &r : rows) {
        empty += r.violator_empty;
        nonempty += r.mixed_nonempty;
        agree += r.scan_agrees;
    }
    v.require(empty == n, "every violating state gives an empty slice");
    v.require(nonempty == n, "maximally mixed state gives a nonempty slice");
    v.require(agree == n, "t-scan oracle agrees on every instance");
    v.require(elapsed < 10.0, "runtime < 10 s");
    v.detail << " empty " << empty << "/" << n << ", I/2 nonempty " << nonempty << "/" << n
             << ", scan agrees " << agree << "/" << n << " (" << elapsed << " s)";
    return v;
}

Verdict ac3_axiom_suite() {
    Verdict v;
    const std::size_t n = 10'000;
    const auto reports = kernels::omp::map_indexed(n, [](std::size_t i) {
        Rng rng = make_rng(3003, i);
        const std::size_t d = 2 + i % 3;
        auto rank = [&] { return std::uniform_int_distribution<std::size_t>(0, d)(rng); };
        std::optional<Projector> p, q;
        if (i % 4 == 3) {
            auto pair = sample_commuting_pair(d, rank(), rank(), rng);
            p = std::move(pair.first);
            q = std::move(pair.second);
        } else {
            p = sample_projector(d, d == 2 ? 1 : rank(), rng);
            q = sample_projector(d, d == 2 ? 1 : rank(), rng);
        }
        std::vector<DensityMatrix> states = hypothesis_states(*p, *q, 1 + i % 2, derive_seed(3003, n + i));
        states.push_back(sample_state(d, i % 2 ? StateKind::pure : StateKind::mixed, rng));
        return axiom_audit(*p, *q, states, 1e-10);
    });
    std::map<std::string, double> worst;
    std::map<std::string, std::size_t> failures;
    for (const auto &r : reports) {
        for (const auto &e : r.entries) {
            worst[e.axiom] = std::max(worst[e.axiom], e.max_defect);
            failures[e.axiom] += !e.pass;
        }
    }
    for (const auto &name : axiom_names()) {
        v.require(failures[name] == 0, name);
    }

    bool counterexample = false;
    int tried = 0;
    Rng rng(3004);
    while (!counterexample && tried < 100) {
        ++tried;
        const Projector p = sample_projector(2, 1, rng);
        const Projector q = sample_projector(2, 1, rng);
        counterexample = !loewner_leq(omega_pair(p, q).upper_op, q);
    }
    v.require(counterexample, "monotonicity counterexample within 100 qubit pairs");
    double overall = 0.0;
    for (const auto &[name, d] : worst) {
        overall = std::max(overall, d);
    }
    v.detail << " " << n << " triples, " << axiom_names().size()
             << " axioms, max defect " << overall << "; monotonicity counterexample after "
             << tried << " pair(s)";
    return v;
}

Verdict ac4_candidate_pattern() {
    Verdict v;
    // TMH
    {
        const Candidate c = make_candidate("tmh");
        const NegativityScan scan = negativity_scan(c, 2, 1000, 4001);
        v.require(scan.witness.has_value(), "tmh negativity witness in 1e3 qubit samples");
        const double r2 = 1.0 / std::sqrt(2.0);
        const double inst = tmh(DensityMatrix(bloch_to_matrix({-r2, 0, -r2})), at_angle(0.0),
                                at_angle(pi / 2));
        v.require(std::abs(inst - (1.0 - std::sqrt(2.0)) / 4.0) < 1e-12, "tmh instance -0.10355");
        double marg = 0.0;
        for (std::size_t i = 0; i < 1000; ++i) {
            Rng rng = make_rng(4002, i);
            const DensityMatrix rho = sample_state(2, i % 2 ? StateKind::pure : StateKind::mixed, rng);
            const ProjectorFamily pf = two_outcome_family(sample_projector(2, 1, rng));
            const ProjectorFamily qf = two_outcome_family(sample_projector(2, 1, rng));
            JointTable t = build_table(c, rho, pf, qf);
            check_marginals(t, rho, pf, qf, 1e-12);
            marg = std::max(marg, t.marginal_error);
        }
        v.require(marg <= 1e-12, "tmh marginals within 1e-12");
        ConditionAuditOptions opts;
        opts.exact_tol = 1e-12;
        for (const auto &r : condition_audit(c, 2, 1000, 4003, opts)) {
            v.require(r.status == ConditionStatus::holds,
                      "tmh " + std::string(to_string(r.hypothesis)));
        }
        v.detail << " tmh: min " << scan.min_value << ", instance " << inst << ", marginal err "
                 << marg << ";";
    }
    // nonlinear
    {
        const Candidate c = make_candidate("nonlinear");
        const NegativityScan scan = negativity_scan(c, 2, 1000, 4004);
        v.require(!scan.witness && scan.min_value >= 0.0, "nonlinear non-negative");
        double marg = 0.0;
        for (std::size_t i = 0; i < 1000; ++i) {
            Rng rng = make_rng(4005, i);
            const DensityMatrix rho = sample_state(2, i % 2 ? StateKind::pure : StateKind::mixed, rng);
            const ProjectorFamily pf = two_outcome_family(sample_projector(2, 1, rng));
            const ProjectorFamily qf = two_outcome_family(sample_projector(2, 1, rng));
            JointTable t = build_table(c, rho, pf, qf);
            check_marginals(t, rho, pf, qf, 1e-12);
            marg = std::max(marg, t.marginal_error);
        }
        v.require(marg <= 1e-12, "nonlinear marginals exact");
        const DensityMatrix plus(bloch_to_matrix({1, 0, 0}));
        const Projector p = at_angle(0.0);
        const double val = nonlinear(plus, p, p);
        const double ref = trace_product(plus, p.matrix() * p.matrix()).real();
        v.require(std::abs(val - 0.25) < 1e-12 && std::abs(ref - 0.5) < 1e-12 && ref - val >= 0.2,
                  "nonlinear third condition gap >= 0.2");
        v.detail << " nonlinear: " << val << " vs " << ref << ";";
    }
    // bell_hv
    {
        const std::uint64_t n = 1'000'000;
        const Candidate c = make_candidate("bell_hv", {n});
        double zmax = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < 5; ++i) {
            Rng rng = make_rng(4006, i);
            const DensityMatrix rho = sample_state(2, i % 2 ? StateKind::pure : StateKind::mixed, rng);
            const ProjectorFamily pf = two_outcome_family(sample_projector(2, 1, rng));
            const ProjectorFamily qf = two_outcome_family(sample_projector(2, 1, rng));
            JointTable t = build_table(c, rho, pf, qf, derive_seed(4006, 100 + i));
            const MarginalReport r = check_marginals(t, rho, pf, qf, 1e-12, 3.0);
            ok = ok && r.pass;
            zmax = std::max(zmax, r.max_z);
        }
        v.require(ok, "bell_hv marginals within 3 sigma");
        const Estimate e = bell_hv(DensityMatrix::maximally_mixed(2), at_angle(0.0), at_angle(pi / 3),
                                   n, 4007);
        const double dev = e.value - 0.375;
        v.require(std::abs(std::abs(dev) - (0.375 - 1.0 / 3.0)) <= 3.0 * e.std_error,
                  "bell_hv deviation ~0.0417");
        v.require(std::abs(dev) > 5.0 * e.std_error, "bell_hv deviation > 5 sigma");
        v.detail << " bell_hv: marginal max z " << zmax << ", I/2 deviation " << dev << " ("
                 << std::abs(dev) / e.std_error << " sigma);";
    }
    // full CLI audits: expected pass/fail pattern per candidate
    for (const auto &id : candidate_ids()) {
        int code = 0;
        run_cli({"audit", "--candidate", id, "--samples", "300", "--seed", "4008"}, code);
        v.require(code == 0, "audit pattern for " + id);
    }
    v.detail << " audit patterns checked for " << candidate_ids().size() << " candidates";
    return v;
}

Verdict ac5_lattice() {
    Verdict v;
    double worst = 0.0;
    std::size_t flagged = 0;
    for (std::size_t d = 2; d <= 4; ++d) {
        const auto diffs = kernels::omp::map_indexed(1000, [d](std::size_t i) {
            Rng rng = make_rng(5000 + d, i);
            auto rank = [&] { return std::uniform_int_distribution<std::size_t>(0, d)(rng); };
            const Projector p = sample_projector(d, rank(), rng);
            const Projector q = sample_projector(d, rank(), rng);
            return std::pair{max_abs_diff(meet(p, q, MeetMethod::spectral),
                                          meet(p, q, MeetMethod::iterated)),
                             near_degenerate(p, q)};
        });
        for (const auto &[diff, flag] : diffs) {
            worst = std::max(worst, diff);
            flagged += flag;
        }
    }
    v.require(worst <= 1e-8, "spectral vs iterated meet within 1e-8");
    double join_err = 0.0;
    for (std::size_t i = 0; i < 3000; ++i) {
        Rng rng = make_rng(5100, i);
        const std::size_t d = 2 + i % 3;
        auto rank = [&] { return std::uniform_int_distribution<std::size_t>(0, d)(rng); };
        const auto [p, q] = sample_commuting_pair(d, rank(), rank(), rng);
        const Matrix pq = p.matrix() * q.matrix();
        join_err = std::max(join_err, max_abs_diff(join(p, q), p.matrix() + q.matrix() - pq));
    }
    v.require(join_err <= 1e-10, "De Morgan join = P + Q - PQ within 1e-10");
    v.detail << " meet disagreement " << worst << " over 3000 pairs (" << flagged
             << " near-degenerate), join error " << join_err;
    return v;
}

Verdict ac6_hidden_variable_born() {
    Verdict v;
    const auto t0 = Clock::now();
    const std::uint64_t n = 1'000'000;
    double zmax = 0.0;
    std::size_t within = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        Rng rng = make_rng(6006, i);
        const DensityMatrix rho = sample_state(2, i % 2 ? StateKind::pure : StateKind::mixed, rng);
        const Projector p = sample_projector(2, 1, rng);
        const Estimate e = bell_hv(rho, p, Projector::identity(2), n, derive_seed(6006, 1000 + i));
        const double b = born(rho, p);
        const double z = std::abs(e.value - b) / std::sqrt(b * (1.0 - b) / static_cast<double>(n));
        zmax = std::max(zmax, z);
        within += z <= 3.0;
    }
    const double elapsed = seconds_since(t0);
    v.require(within == 100, "all 100 estimates within 3 sigma");
    v.require(elapsed < 60.0, "runtime < 60 s");
    v.detail << " " << within << "/100 within 3 sigma, max z " << zmax << " (" << elapsed
             << " s)";
    return v;
}

Verdict ac7_determinism() {
    Verdict v;
    std::vector<std::vector<std::string>> commands;
    for (const auto &id : candidate_ids()) {
        commands.push_back({"audit", "--candidate", id, "--samples", "100", "--seed", "7"});
    }
    commands.push_back({"nogo", "--samples", "100", "--seed", "7"});
    commands.push_back({"nogo", "--alpha", "1.2", "--seed", "7"});
    commands.push_back({"hv", "--seed", "7"});
    commands.push_back({"lattice", "--dim", "3", "--samples", "200", "--seed", "7"});
    commands.push_back({"lattice", "--samples", "50", "--seed", "7", "--format", "csv"});
    std::size_t identical = 0;
    for (const auto &cmd : commands) {
        int c1 = 0, c2 = 0;
        const std::string a = run_cli(cmd, c1);
        const std::string b = run_cli(cmd, c2);
        const bool same = !a.empty() && a == b && c1 == c2;
        identical += same;
        v.require(same, cmd.front());
    }
    v.detail << " " << identical << "/" << commands.size() << " reports byte-identical";
    return v;
}

} // namespace

int main() {
    struct Criterion {
        const char *id;
        const char *title;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria = {
        {"AC1", "no-go reproduction", ac1_nogo_reproduction},
        {"AC2", "feasibility exclusion", ac2_feasibility_exclusion},
        {"AC3", "imprecise axiom suite", ac3_axiom_suite},
        {"AC4", "candidate audit pattern", ac4_candidate_pattern},
        {"AC5", "lattice cross-validation", ac5_lattice},
        {"AC6", "hidden-variable Born rule", ac6_hidden_variable_born},
        {"AC7", "determinism", ac7_determinism},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception &e) {
            v.pass = false;
            v.detail << " exception: " << e.what();
        }
        failed += !v.pass;
        std::printf("%s %s  %s:%s [%.2f s]\n", c.id, v.pass ? "PASS" : "FAIL", c.title,
                    v.detail.str().c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
