#include "qjp/json_io.hpp"

#include "qjp/error.hpp"

namespace qjp {

json matrix_to_json(const Matrix &m) {
    json re = json::array();
    json im = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json rr = json::array();
        json ri = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return json{{"dim", m.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const json &j) {
    try {
        const auto d = j.at("dim").get<std::size_t>();
        const auto &re = j.at("re");
        const auto &im = j.at("im");
        if (re.size() != d || im.size() != d) {
            throw Error(Errc::InvalidConfig, "matrix JSON row count does not match dim");
        }
        Matrix m(d);
        for (std::size_t i = 0; i < d; ++i) {
            if (re[i].size() != d || im[i].size() != d) {
                throw Error(Errc::InvalidConfig, "matrix JSON row length does not match dim");
            }
            for (std::size_t k = 0; k < d; ++k) {
                m(i, k) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
            }
        }
        return m;
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::InvalidConfig, std::string("matrix JSON: ") + e.what());
    }
}

json table_to_json(const JointTable &t) {
    json j{{"candidate", t.candidate},
           {"rows", t.rows},
           {"cols", t.cols},
           {"values", t.values},
           {"all_nonneg", t.all_nonneg},
           {"marginal_error", t.marginal_error}};
    if (t.samples > 0) {
        j["std_errors"] = t.std_errors;
        j["samples"] = t.samples;
    }
    return j;
}

json axiom_to_json(const AxiomResult &r) {
    json j{{"axiom", r.axiom}, {"pass", r.pass}, {"max_defect", r.max_defect}};
    if (r.witness) {
        json w;
        w["rho"] = r.witness->rho ? matrix_to_json(*r.witness->rho) : json(nullptr);
        w["P"] = matrix_to_json(r.witness->p);
        w["Q"] = matrix_to_json(r.witness->q);
        w["note"] = r.witness->note;
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    if (!r.detail.empty()) {
        j["detail"] = r.detail;
    }
    return j;
}

json audit_to_json(const AuditReport &r) {
    json arr = json::array();
    for (const auto &e : r.entries) {
        arr.push_back(axiom_to_json(e));
    }
    return arr;
}

json slice_to_json(const FeasibleSlice &s) {
    return json{{"t_min", s.t_min}, {"t_max", s.t_max}, {"empty", s.empty}, {"binding", s.binding}};
}

json witness_to_json(const ViolationWitness &w) {
    return json{{"alpha", w.alpha},
                {"rho", matrix_to_json(w.rho)},
                {"L", w.L_value},
                {"feasible_slice", slice_to_json(w.slice)}};
}

json condition_witness_to_json(const ConditionWitness &w) {
    json j{{"rho", matrix_to_json(w.rho)},
           {"P", matrix_to_json(w.p)},
           {"Q", matrix_to_json(w.q)},
           {"value", w.value},
           {"reference", w.reference}};
    if (w.std_error > 0.0) {
        j["std_error"] = w.std_error;
    }
    return j;
}

} // namespace qjp
