#include "qjp/imprecise.hpp"

#include "qjp/error.hpp"
#include "qjp/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qjp {

ProbInterval::ProbInterval(double lower, double upper, double tol)
    : lower_(lower), upper_(upper) {
    if (!(lower >= -tol && lower <= upper && upper <= 1.0 + tol)) {
        std::ostringstream os;
        os << "[" << lower << ", " << upper << "]";
        throw Error(Errc::InvalidInterval, os.str());
    }
}

OmegaPair omega_pair(const Projector &p, const Projector &q, MeetMethod method) {
    require_same_dim(p, q);
    const Matrix diff = p.matrix() - q.matrix();
    const Matrix upper = join(p, q, method).matrix() - diff * diff;
    return {meet(p, q, method), HermitianMatrix(hermitize(upper), 1e-10)};
}

double RawInterval::clamp_defect() const {
    return std::max({0.0, -lower, -upper, lower - 1.0, upper - 1.0});
}

RawInterval raw_interval(const DensityMatrix &rho, const OmegaPair &omega) {
    require_same_dim(rho, omega.lower_op);
    return {trace_product(rho, omega.lower_op).real(),
            trace_product(rho, omega.upper_op).real()};
}

ProbInterval interval(const DensityMatrix &rho, const OmegaPair &omega) {
    const RawInterval raw = raw_interval(rho, omega);
    const double lo = std::clamp(raw.lower, 0.0, 1.0);
    const double hi = std::clamp(raw.upper, 0.0, 1.0);
    // lower <= upper holds as an operator inequality; absorb rounding.
    return ProbInterval(std::min(lo, hi), std::max(lo, hi));
}

ProbInterval interval(const DensityMatrix &rho, const Projector &p, const Projector &q) {
    return interval(rho, omega_pair(p, q));
}

bool consistent(const ProbInterval &narrow, const ProbInterval &wide) {
    return wide.lower() <= narrow.lower() && wide.upper() >= narrow.upper();
}

bool overlap(const ProbInterval &a, const ProbInterval &b) {
    return std::max(a.lower(), b.lower()) <= std::min(a.upper(), b.upper());
}

bool AuditReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const AxiomResult &r) { return r.pass; });
}

const AxiomResult *AuditReport::find(std::string_view axiom) const {
    for (const auto &e : entries) {
        if (e.axiom == axiom) {
            return &e;
        }
    }
    return nullptr;
}

const std::vector<std::string> &axiom_names() {
    static const std::vector<std::string> names = {
        "bounds_ordering",     "commutes_with_arguments", "commuting_collapse",
        "hypothesis_sandwich", "bounds_commute",          "sequential_sandwich",
        "additivity_bounds",   "conditional_bounds",      "interval_clamp"};
    return names;
}

namespace {

class Tracker {
  public:
    Tracker(std::string axiom, double tol, const Projector &p, const Projector &q)
        : tol_(tol), p_(p), q_(q) {
        r_.axiom = std::move(axiom);
    }

    void record(double defect, const DensityMatrix *rho = nullptr, std::string note = {}) {
        if (defect > r_.max_defect) {
            r_.max_defect = defect;
            if (defect > tol_) {
                AuditWitness w{std::nullopt, p_.matrix(), q_.matrix(), std::move(note)};
                if (rho) {
                    w.rho = rho->matrix();
                }
                r_.witness = std::move(w);
            }
        }
    }

    AxiomResult finish(std::string detail = {}) {
        r_.pass = r_.max_defect <= tol_;
        r_.detail = std::move(detail);
        return std::move(r_);
    }

  private:
    AxiomResult r_;
    double tol_;
    const Projector &p_;
    const Projector &q_;
};

bool commutes(const Matrix &a, const Matrix &b, double tol) {
    return commutator(a, b).max_abs() <= tol;
}

} // namespace

AuditReport axiom_audit(const Projector &p, const Projector &q,
                        const std::vector<DensityMatrix> &rho_samples, double tol) {
    require_same_dim(p, q);
    const std::size_t d = p.dim();
    const Matrix id = Matrix::identity(d);
    const Matrix pq = p.matrix() * q.matrix();
    const OmegaPair om = omega_pair(p, q);
    const OmegaPair om_swapped = omega_pair(q, p);
    const Matrix &lo = om.lower_op.matrix();
    const Matrix &up = om.upper_op.matrix();
    AuditReport report;

    {
        Tracker t("bounds_ordering", tol, p, q);
        t.record(loewner_defect(Matrix::zeros(d), lo), nullptr, "lower >= 0");
        t.record(loewner_defect(lo, up), nullptr, "lower <= upper");
        t.record(loewner_defect(up, id), nullptr, "upper <= I");
        t.record(max_abs_diff(lo, om_swapped.lower_op), nullptr, "lower symmetric");
        t.record(max_abs_diff(up, om_swapped.upper_op), nullptr, "upper symmetric");
        report.entries.push_back(t.finish());
    }
    {
        Tracker t("commutes_with_arguments", tol, p, q);
        for (const Matrix *w : {&lo, &up}) {
            t.record(commutator(*w, p).max_abs(), nullptr, "[omega, P]");
            t.record(commutator(*w, q).max_abs(), nullptr, "[omega, Q]");
        }
        report.entries.push_back(t.finish());
    }
    {
        Tracker t("commuting_collapse", tol, p, q);
        std::string detail = "not applicable: [P, Q] != 0";
        if (commutes(p, q, tol)) {
            t.record(max_abs_diff(lo, pq), nullptr, "lower = PQ");
            t.record(max_abs_diff(up, pq), nullptr, "upper = PQ");
            detail = "applied";
        }
        report.entries.push_back(t.finish(detail));
    }
    {
        Tracker t("hypothesis_sandwich", tol, p, q);
        std::size_t applied = 0, n_p = 0, n_q = 0, n_pq = 0;
        const bool pq_commute = commutes(p, q, tol);
        for (const auto &rho : rho_samples) {
            const bool h1 = commutes(p, rho, tol);
            const bool h2 = commutes(rho, q, tol);
            if (!(h1 || h2 || pq_commute)) {
                continue;
            }
            ++applied;
            n_p += h1;
            n_q += h2;
            n_pq += pq_commute;
            const double ref = trace_product(rho, pq).real();
            const RawInterval raw = raw_interval(rho, om);
            t.record(std::max(raw.lower - ref, ref - raw.upper), &rho, "tr(rho PQ) outside");
        }
        std::ostringstream os;
        os << "states=" << applied << " p_commutes_rho=" << n_p << " rho_commutes_q=" << n_q
           << " p_commutes_q=" << n_pq;
        report.entries.push_back(t.finish(os.str()));
    }
    {
        Tracker t("bounds_commute", tol, p, q);
        t.record(commutator(up, lo).max_abs());
        report.entries.push_back(t.finish());
    }
    {
        Tracker t("sequential_sandwich", tol, p, q);
        const Matrix pqp = p.matrix() * q.matrix() * p.matrix();
        const Matrix qpq = q.matrix() * p.matrix() * q.matrix();
        t.record(loewner_defect(lo, pqp), nullptr, "lower <= PQP");
        t.record(loewner_defect(lo, qpq), nullptr, "lower <= QPQ");
        t.record(loewner_defect(pqp, up), nullptr, "PQP <= upper");
        t.record(loewner_defect(qpq, up), nullptr, "QPQ <= upper");
        report.entries.push_back(t.finish());
    }
    {
        Tracker t("additivity_bounds", tol, p, q);
        auto check = [&](const Projector &split, const Projector &fixed, const char *label) {
            const Projector perp(id - split.matrix());
            const OmegaPair a = omega_pair(split, fixed);
            const OmegaPair b = omega_pair(perp, fixed);
            const Matrix upper_sum = a.upper_op.matrix() + b.upper_op.matrix();
            const Matrix lower_sum = a.lower_op.matrix() + b.lower_op.matrix();
            t.record(loewner_defect(fixed, upper_sum), nullptr, label);
            t.record(loewner_defect(lower_sum, fixed), nullptr, label);
        };
        check(p, q, "split P, fixed Q");
        check(q, p, "split Q, fixed P");
        report.entries.push_back(t.finish());
    }
    {
        Tracker t("conditional_bounds", tol, p, q);
        std::size_t applied = 0;
        for (const auto &rho : rho_samples) {
            if (trace_product(rho, p).real() <= 1e-9) {
                continue;
            }
            ++applied;
            const ConditionalReport c = conditional_bounds(rho, p, q, tol);
            t.record(c.given_p.defect, &rho, "given P");
            if (c.given_q) {
                t.record(c.given_q->defect, &rho, "given Q");
            }
        }
        report.entries.push_back(t.finish("states=" + std::to_string(applied)));
    }
    {
        // Fixed threshold: clamping noise above 1e-8 is a failure whatever tol is.
        Tracker t("interval_clamp", 1e-8, p, q);
        for (const auto &rho : rho_samples) {
            t.record(raw_interval(rho, om).clamp_defect(), &rho, "raw interval outside [0,1]");
        }
        report.entries.push_back(t.finish());
    }
    return report;
}

std::vector<DensityMatrix> hypothesis_states(const Projector &p, const Projector &q,
                                             std::size_t count, std::uint64_t seed) {
    std::vector<DensityMatrix> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = make_rng(seed, i);
        const StateKind kind = (i / 2) % 2 == 0 ? StateKind::pure : StateKind::mixed;
        out.push_back(sample_commuting_state(i % 2 == 0 ? p : q, kind, rng));
    }
    return out;
}

namespace {

ConditionalSide conditional_side(const DensityMatrix &rho, const OmegaPair &om,
                                 const Matrix &sandwich, double denom, double tol) {
    ConditionalSide s;
    s.lower = trace_product(rho, om.lower_op).real() / denom;
    s.middle = trace_product(rho, sandwich).real() / denom;
    s.upper = trace_product(rho, om.upper_op).real() / denom;
    s.defect = std::max({0.0, s.lower - s.middle, s.middle - s.upper});
    s.holds = s.defect <= tol;
    return s;
}

} // namespace

ConditionalReport conditional_bounds(const DensityMatrix &rho, const Projector &p,
                                     const Projector &q, double tol, double min_prob) {
    require_same_dim(rho, p);
    require_same_dim(p, q);
    const double tp = trace_product(rho, p).real();
    if (!(tp > min_prob)) {
        throw Error(Errc::ZeroConditioningProbability, "tr(rho P) is too small to condition on");
    }
    const OmegaPair om = omega_pair(p, q);
    ConditionalReport r;
    r.given_p = conditional_side(rho, om, p.matrix() * q.matrix() * p.matrix(), tp, tol);
    const double tq = trace_product(rho, q).real();
    if (tq > min_prob) {
        r.given_q = conditional_side(rho, om, q.matrix() * p.matrix() * q.matrix(), tq, tol);
    }
    return r;
}

} // namespace qjp
