#include "qjp/candidates.hpp"

#include "qjp/error.hpp"
#include "qjp/kernels.hpp"
#include "qjp/random.hpp"

#include <algorithm>
#include <cmath>

namespace qjp {

double tmh(const DensityMatrix &rho, const Projector &p, const Projector &q) {
    require_same_dim(rho, p);
    require_same_dim(p, q);
    const Matrix rp = rho.matrix() * p.matrix();
    const Matrix rq = rho.matrix() * q.matrix();
    // tr(rho P Q) + tr(rho Q P); summing in either order gives the same
    // double, so the result is exactly symmetric in (P, Q).
    const cplx a = trace_product(rp, q);
    const cplx b = trace_product(rq, p);
    return 0.5 * (a + b).real();
}

double nonlinear(const DensityMatrix &rho, const Projector &p, const Projector &q) {
    require_same_dim(rho, p);
    require_same_dim(p, q);
    const HermitianMatrix s_root = psd_sqrt(rho);
    const Matrix &s = s_root.matrix();
    const double v = trace_product(p.matrix() * s, q.matrix() * s).real();
    return std::max(0.0, v);
}

namespace {

kernels::Indicator indicator_for(const Projector &p) {
    using Kind = kernels::Indicator::Kind;
    if (p.rank() == 1) {
        return {Kind::halfspace, matrix_to_bloch(p)};
    }
    if (p.rank() == 2) {
        return {Kind::always, {}};
    }
    throw Error(Errc::RankError, "hidden-variable model needs rank-1 projectors");
}

void require_qubit(const DensityMatrix &rho, const Projector &p, const Projector &q) {
    require_same_dim(rho, p);
    require_same_dim(p, q);
    if (rho.dim() != 2) {
        throw Error(Errc::DimensionMismatch, "hidden-variable model is defined for d = 2");
    }
}

Estimate from_tally(const kernels::HvTally &t) {
    const double n = static_cast<double>(t.samples);
    const double p = static_cast<double>(t.both) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

} // namespace

Estimate bell_hv(const DensityMatrix &rho, const Projector &p, const Projector &q,
                 std::uint64_t n_samples, std::uint64_t seed) {
    require_qubit(rho, p, q);
    if (n_samples == 0) {
        throw Error(Errc::InvalidConfig, "bell_hv needs at least one sample");
    }
    return from_tally(kernels::omp::sample_hv(matrix_to_bloch(rho), indicator_for(p),
                                              indicator_for(q), n_samples, seed));
}

Estimate bell_hv_serial(const DensityMatrix &rho, const Projector &p, const Projector &q,
                        std::uint64_t n_samples, std::uint64_t seed) {
    require_qubit(rho, p, q);
    if (n_samples == 0) {
        throw Error(Errc::InvalidConfig, "bell_hv needs at least one sample");
    }
    return from_tally(kernels::serial::sample_hv(matrix_to_bloch(rho), indicator_for(p),
                                                 indicator_for(q), n_samples, seed));
}

double bell_hv_average(const DensityMatrix &rho, const Projector &p, const Projector &q,
                       std::span<const HiddenVariableSample> samples) {
    require_qubit(rho, p, q);
    const auto f = indicator_for(p);
    const auto g = indicator_for(q);
    const BlochVector b = matrix_to_bloch(rho);
    double hits = 0.0;
    double total = 0.0;
    for (const auto &s : samples) {
        const BlochVector shifted = b + s.m;
        const auto w = static_cast<double>(s.count);
        total += w;
        if (f(shifted) && g(shifted)) {
            hits += w;
        }
    }
    return total > 0.0 ? hits / total : 0.0;
}

double sequential(const DensityMatrix &rho, const Projector &p, const Projector &q,
                  Order order) {
    require_same_dim(rho, p);
    require_same_dim(p, q);
    const Matrix &outer_op = order == Order::p_first ? p.matrix() : q.matrix();
    const Matrix &inner_op = order == Order::p_first ? q.matrix() : p.matrix();
    const double v = trace_product(rho, outer_op * inner_op * outer_op).real();
    return std::clamp(v, 0.0, 1.0);
}

const std::vector<std::string> &candidate_ids() {
    static const std::vector<std::string> ids = {"tmh", "nonlinear", "bell_hv",
                                                 "sequential_P", "sequential_Q"};
    return ids;
}

Candidate make_candidate(std::string_view id, CandidateOptions opts) {
    auto exact = [](auto fn) -> CandidateFn {
        return [fn](const DensityMatrix &r, const Projector &p, const Projector &q,
                    std::uint64_t) { return Estimate{fn(r, p, q), 0.0}; };
    };
    if (id == "tmh") {
        return {"tmh", false, 0, exact(tmh)};
    }
    if (id == "nonlinear") {
        return {"nonlinear", false, 0, exact(nonlinear)};
    }
    if (id == "sequential_P") {
        return {"sequential_P", false, 0,
                exact([](const DensityMatrix &r, const Projector &p, const Projector &q) {
                    return sequential(r, p, q, Order::p_first);
                })};
    }
    if (id == "sequential_Q") {
        return {"sequential_Q", false, 0,
                exact([](const DensityMatrix &r, const Projector &p, const Projector &q) {
                    return sequential(r, p, q, Order::q_first);
                })};
    }
    if (id == "bell_hv") {
        const std::uint64_t n = opts.mc_samples;
        return {"bell_hv", true, n,
                [n](const DensityMatrix &r, const Projector &p, const Projector &q,
                    std::uint64_t seed) { return bell_hv(r, p, q, n, seed); }};
    }
    throw Error(Errc::UnknownCandidate, std::string(id));
}

void validate_family(const ProjectorFamily &family, double tol) {
    if (family.empty()) {
        throw Error(Errc::IncompleteFamily, "empty family");
    }
    const std::size_t d = family.front().dim();
    Matrix sum(d);
    for (std::size_t a = 0; a < family.size(); ++a) {
        if (family[a].dim() != d) {
            throw Error(Errc::DimensionMismatch, "family members differ in dimension");
        }
        sum += family[a].matrix();
        for (std::size_t b = a + 1; b < family.size(); ++b) {
            if (!((family[a].matrix() * family[b].matrix()).max_abs() <= tol)) {
                throw Error(Errc::IncompleteFamily, "family members are not orthogonal");
            }
        }
    }
    if (!(max_abs_diff(sum, Matrix::identity(d)) <= tol)) {
        throw Error(Errc::IncompleteFamily, "family does not resolve the identity");
    }
}

ProjectorFamily two_outcome_family(const Projector &p) {
    return {p, Projector(Matrix::identity(p.dim()) - p.matrix())};
}

JointTable build_table(const Candidate &candidate, const DensityMatrix &rho,
                       const ProjectorFamily &p_family, const ProjectorFamily &q_family,
                       std::uint64_t seed) {
    validate_family(p_family);
    validate_family(q_family);
    require_same_dim(rho, p_family.front());
    require_same_dim(rho, q_family.front());

    JointTable t;
    t.candidate = candidate.id;
    t.samples = candidate.stochastic ? candidate.mc_samples : 0;
    for (std::size_t a = 0; a < p_family.size(); ++a) {
        t.rows.push_back(std::to_string(a + 1));
    }
    for (std::size_t b = 0; b < q_family.size(); ++b) {
        t.cols.push_back(std::to_string(b + 1));
    }
    t.values.assign(p_family.size(), std::vector<double>(q_family.size()));
    t.std_errors = t.values;
    for (std::size_t a = 0; a < p_family.size(); ++a) {
        for (std::size_t b = 0; b < q_family.size(); ++b) {
            const Estimate e = candidate.eval(rho, p_family[a], q_family[b], seed);
            t.values[a][b] = e.value;
            t.std_errors[a][b] = e.std_error;
            t.all_nonneg = t.all_nonneg && e.value >= 0.0;
        }
    }
    return t;
}

MarginalReport check_marginals(JointTable &table, const DensityMatrix &rho,
                               const ProjectorFamily &p_family,
                               const ProjectorFamily &q_family, double tol, double z_limit) {
    validate_family(p_family);
    validate_family(q_family);
    if (table.values.size() != p_family.size() ||
        table.values.front().size() != q_family.size()) {
        throw Error(Errc::DimensionMismatch, "table shape does not match the families");
    }
    const auto n = static_cast<double>(table.samples);
    MarginalReport r;
    bool ok = true;
    auto judge = [&](double sum, double born_value, double &worst) {
        const double err = std::abs(sum - born_value);
        worst = std::max(worst, err);
        if (table.samples == 0) {
            ok = ok && err <= tol;
            return;
        }
        // Binomial spread under the Born value, so a sum of exactly 0 or 1
        // still gets a nonzero sigma when the Born value is interior.
        const double p = std::clamp(born_value, 0.0, 1.0);
        const double sigma = std::sqrt(p * (1.0 - p) / n);
        if (sigma > 0.0) {
            r.max_z = std::max(r.max_z, err / sigma);
        }
        ok = ok && err <= std::max(tol, z_limit * sigma);
    };
    for (std::size_t a = 0; a < p_family.size(); ++a) {
        double sum = 0.0;
        for (std::size_t b = 0; b < q_family.size(); ++b) {
            sum += table.values[a][b];
        }
        judge(sum, trace_product(rho, p_family[a]).real(), r.row_error);
    }
    for (std::size_t b = 0; b < q_family.size(); ++b) {
        double sum = 0.0;
        for (std::size_t a = 0; a < p_family.size(); ++a) {
            sum += table.values[a][b];
        }
        judge(sum, trace_product(rho, q_family[b]).real(), r.col_error);
    }
    r.pass = ok;
    table.marginal_error = std::max(r.row_error, r.col_error);
    return r;
}

std::string_view to_string(Hypothesis h) {
    switch (h) {
    case Hypothesis::p_commutes_rho: return "p_commutes_rho";
    case Hypothesis::rho_commutes_q: return "rho_commutes_q";
    case Hypothesis::p_commutes_q: return "p_commutes_q";
    }
    return "unknown";
}

std::string_view to_string(ConditionStatus s) {
    switch (s) {
    case ConditionStatus::holds: return "holds";
    case ConditionStatus::violated: return "violated";
    case ConditionStatus::inconclusive: return "inconclusive";
    }
    return "unknown";
}

namespace {

std::size_t random_rank(std::size_t dim, Rng &rng) {
    if (dim <= 2) {
        return 1;
    }
    return std::uniform_int_distribution<std::size_t>(1, dim - 1)(rng);
}

struct Instance {
    DensityMatrix rho;
    Projector p, q;
};

Instance draw_instance(Hypothesis h, std::size_t dim, std::size_t i, Rng &rng) {
    const StateKind kind = i % 2 == 0 ? StateKind::pure : StateKind::mixed;
    switch (h) {
    case Hypothesis::p_commutes_rho: {
        Projector p = sample_projector(dim, random_rank(dim, rng), rng);
        Projector q = sample_projector(dim, random_rank(dim, rng), rng);
        DensityMatrix rho = sample_commuting_state(p, kind, rng);
        return {rho, p, q};
    }
    case Hypothesis::rho_commutes_q: {
        Projector p = sample_projector(dim, random_rank(dim, rng), rng);
        Projector q = sample_projector(dim, random_rank(dim, rng), rng);
        DensityMatrix rho = sample_commuting_state(q, kind, rng);
        return {rho, p, q};
    }
    case Hypothesis::p_commutes_q: {
        const std::size_t rp = random_rank(dim, rng);
        const std::size_t rq = random_rank(dim, rng);
        auto [p, q] = sample_commuting_pair(dim, rp, rq, rng);
        DensityMatrix rho = sample_state(dim, kind, rng);
        return {rho, p, q};
    }
    }
    throw Error(Errc::InvalidConfig, "unknown hypothesis");
}

struct Evaluated {
    Instance inst;
    Estimate est;
    double reference;
};

} // namespace

std::array<ConditionResult, 3> condition_audit(const Candidate &candidate, std::size_t dim,
                                               std::size_t samples, std::uint64_t seed,
                                               ConditionAuditOptions opts) {
    constexpr std::array hypotheses = {Hypothesis::p_commutes_rho, Hypothesis::rho_commutes_q,
                                       Hypothesis::p_commutes_q};
    std::array<ConditionResult, 3> results;
    for (std::size_t h = 0; h < hypotheses.size(); ++h) {
        const std::uint64_t hseed = derive_seed(seed, h);
        const auto evaluated = kernels::omp::map_indexed(samples, [&](std::size_t i) {
            Rng rng = make_rng(hseed, i);
            Instance inst = draw_instance(hypotheses[h], dim, i, rng);
            const Estimate e = candidate.eval(inst.rho, inst.p, inst.q, derive_seed(hseed, i + samples));
            const double ref =
                trace_product(inst.rho, inst.p.matrix() * inst.q.matrix()).real();
            return Evaluated{std::move(inst), e, ref};
        });

        ConditionResult &r = results[h];
        r.hypothesis = hypotheses[h];
        r.samples = samples;
        bool all_equal = true;
        bool violated = false;
        const Evaluated *worst = nullptr;
        for (const auto &ev : evaluated) {
            const double gap = std::abs(ev.est.value - ev.reference);
            const double noise = opts.z_threshold * ev.est.std_error;
            all_equal = all_equal && gap <= std::max(opts.exact_tol, noise);
            violated = violated || gap > std::max(opts.witness_gap, noise);
            if (!worst || gap > r.max_gap) {
                r.max_gap = gap;
                worst = &ev;
            }
        }
        r.status = all_equal ? ConditionStatus::holds
                   : violated ? ConditionStatus::violated
                              : ConditionStatus::inconclusive;
        if (worst && r.status != ConditionStatus::holds) {
            r.witness = ConditionWitness{worst->inst.rho, worst->inst.p, worst->inst.q,
                                         worst->est.value, worst->reference,
                                         worst->est.std_error};
        }
    }
    return results;
}

NegativityScan negativity_scan(const Candidate &candidate, std::size_t dim,
                               std::size_t samples, std::uint64_t seed, double tol) {
    const auto evaluated = kernels::omp::map_indexed(samples, [&](std::size_t i) {
        Rng rng = make_rng(seed, i);
        const StateKind kind = i % 2 == 0 ? StateKind::pure : StateKind::mixed;
        DensityMatrix rho = sample_state(dim, kind, rng);
        Projector p = sample_projector(dim, random_rank(dim, rng), rng);
        Projector q = sample_projector(dim, random_rank(dim, rng), rng);
        const Estimate e = candidate.eval(rho, p, q, derive_seed(seed, i + samples));
        const double ref = trace_product(rho, p.matrix() * q.matrix()).real();
        return Evaluated{Instance{rho, p, q}, e, ref};
    });
    NegativityScan scan;
    scan.samples = samples;
    const Evaluated *worst = nullptr;
    for (const auto &ev : evaluated) {
        if (!worst || ev.est.value < scan.min_value) {
            scan.min_value = ev.est.value;
            worst = &ev;
        }
    }
    if (worst && scan.min_value < -tol) {
        scan.witness = ConditionWitness{worst->inst.rho, worst->inst.p, worst->inst.q,
                                        worst->est.value, worst->reference,
                                        worst->est.std_error};
    }
    return scan;
}

} // namespace qjp
