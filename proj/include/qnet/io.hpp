// io.hpp
// File formats: distribution CSV (17 significant digits in float mode, exact
// fraction strings in exact mode), sample CSV, network JSON schema, and JSON
// reports for certificates and models.

#pragma once

#include "qnet/certificates.hpp"
#include "qnet/distribution.hpp"
#include "qnet/trilocal.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>

namespace qnet {

using Json = nlohmann::ordered_json;

inline std::string format_probability(double p) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    return buf;
}

inline std::string format_probability(const RadicalSum& p) { return p.str(); }
inline std::string format_probability(const Rational& p) { return to_fraction_string(p); }

// One row per outcome tuple, lexicographic order: labels then probability.
template <class S>
void write_distribution_csv(std::ostream& os, const BasicDistribution<S>& dist) {
    for (std::size_t k = 0; k < dist.arity(); ++k) os << "a" << (k + 1) << ",";
    os << "probability\n";
    std::vector<int> labels;
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
        dist.decode(idx, labels);
        for (std::size_t k = 0; k < dist.arity(); ++k)
            os << dist.parties()[k].names[static_cast<std::size_t>(labels[k])] << ",";
        os << format_probability(dist[idx]) << "\n";
    }
}

template <class S>
Json distribution_json(const BasicDistribution<S>& dist) {
    Json rows = Json::array();
    std::vector<int> labels;
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
        dist.decode(idx, labels);
        Json names = Json::array();
        for (std::size_t k = 0; k < dist.arity(); ++k)
            names.push_back(dist.parties()[k].names[static_cast<std::size_t>(labels[k])]);
        rows.push_back({{"outcome", names}, {"probability", format_probability(dist[idx])}});
    }
    return rows;
}

template <class S>
void write_samples_csv(std::ostream& os, const std::vector<std::vector<int>>& samples,
                       const BasicTrilocalModel<S>& model) {
    for (std::size_t k = 0; k < model.n_parties(); ++k) os << "a" << (k + 1) << (k + 1 < model.n_parties() ? "," : "\n");
    for (const auto& row : samples) {
        for (std::size_t k = 0; k < row.size(); ++k)
            os << model.labels[k].names[static_cast<std::size_t>(row[k])]
               << (k + 1 < row.size() ? "," : "\n");
    }
}

// ---------------------------------------------------------------------------
// Network JSON schema:
// {
//   "n": 3,
//   "sources": [[l0, l1], [l0, l1], [l0, l1]],          // Schmidt coefficients
//   "measurement": {"kind": "qubit", "u2": 0.8}
//                | {"kind": "qutrit"}
//                | {"kind": "custom", "dim": d, "states": [...], "labels": [...],
//                   "coarse_of": [...], "coarse_labels": [...]}
// }

inline CycleNetwork network_from_json(const Json& j) {
    if (!j.contains("n") || !j.contains("sources") || !j.contains("measurement"))
        throw std::invalid_argument("network JSON needs n, sources and measurement");
    int n = j.at("n").get<int>();
    if (n < 3) throw std::domain_error("cycle network needs N >= 3 parties");
    const auto& srcs = j.at("sources");
    if (!srcs.is_array() || static_cast<int>(srcs.size()) != n)
        throw std::invalid_argument("network JSON needs one source per party");
    std::vector<SchmidtState> sources;
    for (const auto& s : srcs) {
        std::vector<double> lambda = s.get<std::vector<double>>();
        sources.push_back(make_schmidt_state<double>(std::move(lambda)));
    }

    const auto& meas = j.at("measurement");
    std::string kind = meas.at("kind").get<std::string>();
    JointBasis basis;
    if (kind == "qubit") {
        double u2 = meas.at("u2").get<double>();
        if (!(u2 > 0 && u2 < 1)) throw std::domain_error("qubit basis needs 0 < u^2 < 1");
        basis = qubit_basis(std::sqrt(u2));
    } else if (kind == "qutrit") {
        basis = qutrit_example_basis<double>();
    } else if (kind == "custom") {
        std::size_t dim = meas.at("dim").get<std::size_t>();
        std::vector<Mat<double>> states;
        for (const auto& st : meas.at("states")) {
            Mat<double> m(dim, dim);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t jj = 0; jj < dim; ++jj) m(i, jj) = st.at(i).at(jj).get<double>();
            states.push_back(std::move(m));
        }
        PartyLabels labels{meas.at("labels").get<std::vector<std::string>>(),
                           meas.at("coarse_of").get<std::vector<int>>(),
                           meas.at("coarse_labels").get<std::vector<std::string>>()};
        basis = make_joint_basis<double>(dim, "custom", std::move(states), std::move(labels));
    } else {
        throw std::invalid_argument("unknown measurement kind: " + kind);
    }
    return make_cycle_network<double>(std::move(sources),
                                      std::vector<JointBasis>(static_cast<std::size_t>(n), basis));
}

inline Json network_to_json(const CycleNetwork& net) {
    Json j;
    j["n"] = net.n_parties();
    Json srcs = Json::array();
    for (const auto& s : net.sources) srcs.push_back(s.lambda);
    j["sources"] = srcs;
    const auto& b = net.measurements[0];
    Json meas;
    meas["kind"] = b.kind == "custom" ? "custom" : b.kind;
    if (b.kind == "custom") {
        meas["dim"] = b.dim;
        Json states = Json::array();
        for (const auto& st : b.states) {
            Json rows = Json::array();
            for (std::size_t i = 0; i < b.dim; ++i) {
                Json row = Json::array();
                for (std::size_t jj = 0; jj < b.dim; ++jj) row.push_back(st(i, jj));
                rows.push_back(row);
            }
            states.push_back(rows);
        }
        meas["states"] = states;
        meas["labels"] = b.labels.names;
        meas["coarse_of"] = b.labels.coarse_of;
        meas["coarse_labels"] = b.labels.coarse_names;
    } else if (b.kind == "qubit") {
        meas["u2"] = b.states[2](0, 0) * b.states[2](0, 0);
    }
    j["measurement"] = meas;
    return j;
}

// ---------------------------------------------------------------------------
// Reports

inline Json report_json(const ConstraintReport& rep) {
    Json checks = Json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"expected", c.expected},
                          {"observed", c.observed},
                          {"deviation", c.deviation()}});
    return {{"max_deviation", rep.max_deviation()}, {"checks", checks}};
}

inline Json feasibility_json(const FeasibilityProblem& problem, const FeasibilityResult& res) {
    Json j;
    j["status"] = res.feasible() ? "feasible" : "infeasible";
    j["exact"] = res.exact;
    j["verified"] = res.verified;
    if (res.feasible()) {
        Json witness;
        for (std::size_t i = 0; i < res.witness.size(); ++i)
            witness[problem.var_names[i]] = res.witness[i].str();
        j["witness"] = witness;
    } else {
        Json farkas;
        for (std::size_t i = 0; i < res.farkas.size(); ++i)
            farkas[problem.rows[i].name] = res.farkas[i].str();
        j["farkas"] = farkas;
    }
    return j;
}

template <class S>
Json model_json(const BasicTrilocalModel<S>& model) {
    Json j;
    Json sources = Json::array();
    for (const auto& src : model.sources) {
        Json weights = Json::array();
        for (const auto& w : src.weights) weights.push_back(format_probability(w));
        sources.push_back({{"values", src.value_names}, {"weights", weights}});
    }
    j["sources"] = sources;
    Json parties = Json::array();
    for (std::size_t k = 0; k < model.n_parties(); ++k) {
        Json table = Json::array();
        std::size_t left_size = model.sources[(k + model.n_parties() - 1) % model.n_parties()].size();
        std::size_t right_size = model.sources[k].size();
        for (std::size_t l = 0; l < left_size; ++l)
            for (std::size_t r = 0; r < right_size; ++r) {
                Json out = Json::array();
                for (const auto& [label, p] :
                     model.respond(k, static_cast<int>(l), static_cast<int>(r)))
                    out.push_back({{"label", model.labels[k].names[static_cast<std::size_t>(label)]},
                                   {"p", format_probability(p)}});
                table.push_back({{"left", l}, {"right", r}, {"output", out}});
            }
        parties.push_back({{"labels", model.labels[k].names}, {"response", table}});
    }
    j["parties"] = parties;
    return j;
}

}  // namespace qnet
