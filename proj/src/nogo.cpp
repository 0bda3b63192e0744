#include "qjp/nogo.hpp"

#include "qjp/error.hpp"
#include "qjp/imprecise.hpp"
#include "qjp/kernels.hpp"
#include "qjp/random.hpp"

#include <algorithm>
#include <cmath>

namespace qjp {

namespace {

void require_qubit_rank1(const Projector &p1, const Projector &q1) {
    require_same_dim(p1, q1);
    if (p1.dim() != 2) {
        throw Error(Errc::DimensionMismatch, "the violation functional is defined for d = 2");
    }
    if (p1.rank() != 1 || q1.rank() != 1) {
        throw Error(Errc::RankError, "P1 and Q1 must be rank 1");
    }
}

DensityMatrix pure_from_bloch(const BlochVector &b) {
    return DensityMatrix(bloch_to_matrix(b.normalized()));
}

ViolationWitness make_witness(const Projector &p1, const Projector &q1, DensityMatrix rho) {
    ViolationWitness w;
    w.alpha = bloch_angle(p1, q1);
    w.L_value = violation_functional(rho, p1, q1).trace_form;
    w.slice = feasibility_audit(rho, two_outcome_family(p1), two_outcome_family(q1));
    w.feasible = !w.slice.empty;
    w.rho = std::move(rho);
    return w;
}

BlochVector closed_form_state(const BlochVector &bp, const BlochVector &bq) {
    const BlochVector s = bp + bq;
    // Antipodal axes make L constant on the sphere; any state is optimal.
    if (s.norm() <= 1e-12) {
        return bp;
    }
    return -s;
}

} // namespace

ViolationValue violation_functional(const DensityMatrix &rho, const Projector &p1,
                                    const Projector &q1) {
    require_qubit_rank1(p1, q1);
    require_same_dim(rho, p1);
    ViolationValue v;
    v.trace_form = trace_product(p1, q1).real() + trace_product(rho, p1).real() +
                   trace_product(rho, q1).real() - 1.0;
    const BlochVector bp = matrix_to_bloch(p1);
    const BlochVector bq = matrix_to_bloch(q1);
    const BlochVector br = matrix_to_bloch(rho);
    v.bloch_form = 0.5 * (bp.dot(bq) + br.dot(bp + bq) + 1.0);
    return v;
}

double bloch_angle(const Projector &p1, const Projector &q1) {
    const double c = matrix_to_bloch(p1).dot(matrix_to_bloch(q1));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double closed_form_min(double alpha) {
    return 0.5 * (1.0 + std::cos(alpha) - 2.0 * std::cos(alpha / 2.0));
}

ViolationWitness construct_violator(const Projector &p1, const Projector &q1) {
    require_qubit_rank1(p1, q1);
    if (commutator(p1, q1).max_abs() <= 1e-9) {
        throw Error(Errc::CommutingPair, "alpha must lie strictly between 0 and pi");
    }
    const BlochVector bp = matrix_to_bloch(p1);
    const BlochVector bq = matrix_to_bloch(q1);
    return make_witness(p1, q1, pure_from_bloch(closed_form_state(bp, bq)));
}

ViolationWitness minimize_L(const Projector &p1, const Projector &q1, MinimizeMethod method,
                            MinimizeOptions opts) {
    require_qubit_rank1(p1, q1);
    const BlochVector bp = matrix_to_bloch(p1);
    const BlochVector bq = matrix_to_bloch(q1);
    // L(b) = c0 + grad . b on the Bloch ball.
    const double c0 = 0.5 * (bp.dot(bq) + 1.0);
    const BlochVector grad = 0.5 * (bp + bq);

    switch (method) {
    case MinimizeMethod::closed_form:
        return make_witness(p1, q1, pure_from_bloch(closed_form_state(bp, bq)));
    case MinimizeMethod::grid: {
        const auto best = kernels::omp::sphere_grid_min(c0, grad, opts.grid_points);
        return make_witness(p1, q1, pure_from_bloch(best.point));
    }
    case MinimizeMethod::descent: {
        BlochVector best_b{0.0, 0.0, 1.0};
        double best_value = c0 + grad.dot(best_b);
        // Step scaled by |grad| so nearly antipodal axes converge as fast as orthogonal ones.
        const double gnorm = grad.norm();
        const double step = gnorm > 0.0 ? opts.step / gnorm : 0.0;
        for (std::size_t r = 0; r < opts.restarts; ++r) {
            Rng rng = make_rng(opts.seed, r);
            BlochVector b = sample_unit_vector(rng);
            for (std::size_t it = 0; it < opts.iterations; ++it) {
                const BlochVector next = b - step * grad;
                if (next.norm() <= 1e-15) {
                    break;
                }
                b = next.normalized();
            }
            const double v = c0 + grad.dot(b);
            if (v < best_value) {
                best_value = v;
                best_b = b;
            }
        }
        return make_witness(p1, q1, pure_from_bloch(best_b));
    }
    }
    throw Error(Errc::InvalidConfig, "unknown minimization method");
}

namespace {

void require_two_outcome_qubit(const DensityMatrix &rho, const ProjectorFamily &p_family,
                               const ProjectorFamily &q_family) {
    if (rho.dim() != 2) {
        throw Error(Errc::UnsupportedDimension,
                    "feasibility reduction is only available for d = 2");
    }
    if (p_family.size() != 2 || q_family.size() != 2) {
        throw Error(Errc::IncompleteFamily, "qubit families must have two members");
    }
    validate_family(p_family);
    validate_family(q_family);
    require_same_dim(rho, p_family.front());
    require_same_dim(rho, q_family.front());
}

} // namespace

FeasibleSlice feasibility_audit(const DensityMatrix &rho, const ProjectorFamily &p_family,
                                const ProjectorFamily &q_family, double tol) {
    require_two_outcome_qubit(rho, p_family, q_family);
    const double x = trace_product(rho, p_family[0]).real();
    const double y = trace_product(rho, q_family[0]).real();

    // p_ab = slope * t + offset.
    struct Cell {
        const char *name;
        double slope, offset;
    };
    const std::array<Cell, 4> cells = {{{"p11", 1.0, 0.0},
                                        {"p12", -1.0, x},
                                        {"p21", -1.0, y},
                                        {"p22", 1.0, 1.0 - x - y}}};

    struct Bound {
        std::string label;
        double value;
    };
    std::vector<Bound> lower_t, upper_t;
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            const Cell &c = cells[2 * a + b];
            const RawInterval raw = raw_interval(rho, omega_pair(p_family[a], q_family[b]));
            const std::string lo_label = std::string(c.name) + ">=lower";
            const std::string hi_label = std::string(c.name) + "<=upper";
            if (c.slope > 0) {
                lower_t.push_back({lo_label, raw.lower - c.offset});
                upper_t.push_back({hi_label, raw.upper - c.offset});
            } else {
                upper_t.push_back({lo_label, c.offset - raw.lower});
                lower_t.push_back({hi_label, c.offset - raw.upper});
            }
        }
    }

    FeasibleSlice s;
    s.t_min = std::max_element(lower_t.begin(), lower_t.end(), [](const Bound &l, const Bound &r) {
                  return l.value < r.value;
              })->value;
    s.t_max = std::min_element(upper_t.begin(), upper_t.end(), [](const Bound &l, const Bound &r) {
                  return l.value < r.value;
              })->value;
    s.empty = s.t_min > s.t_max + tol;
    for (const auto &b : lower_t) {
        if (std::abs(b.value - s.t_min) <= tol) {
            s.binding.push_back(b.label);
        }
    }
    for (const auto &b : upper_t) {
        if (std::abs(b.value - s.t_max) <= tol) {
            s.binding.push_back(b.label);
        }
    }
    return s;
}

std::array<double, 4> violation_variants(const DensityMatrix &rho,
                                         const ProjectorFamily &p_family,
                                         const ProjectorFamily &q_family) {
    require_two_outcome_qubit(rho, p_family, q_family);
    std::array<double, 4> out{};
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            out[2 * a + b] = trace_product(p_family[a], q_family[b]).real() +
                             trace_product(rho, p_family[a]).real() +
                             trace_product(rho, q_family[b]).real() - 1.0;
        }
    }
    return out;
}

ContextualReport contextual_bounds_audit(const DensityMatrix &rho,
                                         const ProjectorFamily &p_family,
                                         const ProjectorFamily &q_family, double tol) {
    validate_family(p_family);
    validate_family(q_family);
    require_same_dim(rho, p_family.front());
    require_same_dim(rho, q_family.front());

    ContextualReport r;
    std::vector<double> row_sum(p_family.size(), 0.0);
    std::vector<double> col_sum(q_family.size(), 0.0);
    for (std::size_t a = 0; a < p_family.size(); ++a) {
        const Matrix &pa = p_family[a].matrix();
        for (std::size_t b = 0; b < q_family.size(); ++b) {
            const Matrix &qb = q_family[b].matrix();
            ContextualCell c;
            c.a = a;
            c.b = b;
            c.p_given_p = trace_product(rho, pa * qb * pa).real();
            c.p_given_q = trace_product(rho, qb * pa * qb).real();
            const RawInterval raw = raw_interval(rho, omega_pair(p_family[a], q_family[b]));
            c.lower = raw.lower;
            c.upper = raw.upper;
            for (double v : {c.p_given_p, c.p_given_q}) {
                r.bound_violation = std::max({r.bound_violation, c.lower - v, v - c.upper});
            }
            row_sum[a] += c.p_given_p;
            col_sum[b] += c.p_given_q;
            r.cells.push_back(c);
        }
    }
    for (std::size_t a = 0; a < p_family.size(); ++a) {
        r.marginal_defect_p = std::max(
            r.marginal_defect_p, std::abs(row_sum[a] - trace_product(rho, p_family[a]).real()));
    }
    for (std::size_t b = 0; b < q_family.size(); ++b) {
        r.marginal_defect_q = std::max(
            r.marginal_defect_q, std::abs(col_sum[b] - trace_product(rho, q_family[b]).real()));
    }
    r.pass = r.marginal_defect_p <= tol && r.marginal_defect_q <= tol && r.bound_violation <= tol;
    return r;
}

BoundsCheck table_within_bounds(const JointTable &table, const DensityMatrix &rho,
                                const ProjectorFamily &p_family,
                                const ProjectorFamily &q_family, double tol, double z_limit) {
    validate_family(p_family);
    validate_family(q_family);
    if (table.values.size() != p_family.size() ||
        table.values.front().size() != q_family.size()) {
        throw Error(Errc::DimensionMismatch, "table shape does not match the families");
    }
    BoundsCheck c;
    for (std::size_t a = 0; a < p_family.size(); ++a) {
        for (std::size_t b = 0; b < q_family.size(); ++b) {
            const RawInterval raw = raw_interval(rho, omega_pair(p_family[a], q_family[b]));
            const double v = table.values[a][b];
            const double sigma = table.std_errors[a][b];
            const double excess = std::max({0.0, raw.lower - v, v - raw.upper});
            c.max_violation = std::max(c.max_violation, excess);
            if (sigma > 0.0) {
                c.max_z = std::max(c.max_z, excess / sigma);
            }
            c.within = c.within && excess <= std::max(tol, z_limit * sigma);
        }
    }
    return c;
}

} // namespace qjp
