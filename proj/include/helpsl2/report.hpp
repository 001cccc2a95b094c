#pragma once

#include "helpsl2/helpsolver.hpp"
#include "helpsl2/psl2.hpp"
#include "helpsl2/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace helpsl2 {

using Json = nlohmann::ordered_json;

inline long long int_to_i64(const Int& v)
{
    if (v < std::numeric_limits<long long>::min() || v > std::numeric_limits<long long>::max())
        throw std::overflow_error("int_to_i64: value out of range");
    return v.convert_to<long long>();
}

// Mirror structs for the serialized report. The JSON layout is versioned
// and byte-stable: to_json always emits keys in the same order, all exact
// values are integers or "num/den" strings, and from_json(to_json(d))
// reproduces d exactly.

struct GroupInfo {
    long long p = 2;
    int f = 1;
    long long q = 4;
    long long d = 1;
    long long order_a = 3;
    long long order_b = 5;
};

struct ReportClass {
    int id = 0;
    std::string family;
    long long parameter = 0;
    long long order = 1;
};

struct SolverParams {
    long long r = 2;
    int n = 1;
    std::vector<int> characters;
    long long bound = 1;
};

struct TableParams {
    int kmax = 0;
};

struct ReportLevel {
    long long unit_order = 1;
    std::vector<std::pair<int, long long>> epsilon; // [class id, partial augmentation]
};

struct ReportTable {
    int k = 0;
    long long modulus = 1;
    std::vector<std::pair<long long, Rat>> mu; // [exponent, multiplicity]
};

struct ReportChain {
    bool trivial = false;
    std::vector<ReportLevel> levels;
    std::vector<ReportTable> tables;
};

struct SolverResults {
    std::string verdict; // "verified" | "nontrivial_chains" | "enumerated"
    bool element_classes_exist = false;
    std::string note;
    std::vector<ReportChain> chains;
};

struct ReportCharValue {
    int class_id = 0;
    long long conductor = 1;
    std::vector<std::pair<long long, long long>> terms; // [exponent, coefficient]
};

struct ReportChar {
    int k = 0;
    long long degree = 1;
    std::vector<ReportCharValue> values;
};

struct TableResults {
    std::vector<ReportChar> characters;
};

struct ReportDocument {
    static constexpr int current_schema_version = 1;

    int schema_version = current_schema_version;
    std::string command;
    GroupInfo group;
    std::optional<SolverParams> solver_params;
    std::optional<TableParams> table_params;
    std::vector<ReportClass> classes;
    std::optional<SolverResults> solver_results;
    std::optional<TableResults> table_results;
    std::int64_t timing_ms = 0;

    Json to_json() const
    {
        Json j;
        j["schema_version"] = schema_version;
        j["command"] = command;
        Json jg;
        jg["p"] = group.p;
        jg["f"] = group.f;
        jg["q"] = group.q;
        jg["d"] = group.d;
        jg["order_a"] = group.order_a;
        jg["order_b"] = group.order_b;
        j["group"] = std::move(jg);
        Json jp;
        if (solver_params) {
            jp["r"] = solver_params->r;
            jp["n"] = solver_params->n;
            jp["characters"] = solver_params->characters;
            jp["bound"] = solver_params->bound;
        } else if (table_params) {
            jp["kmax"] = table_params->kmax;
        }
        j["parameters"] = std::move(jp);
        Json jc = Json::array();
        for (const auto& c : classes) {
            Json e;
            e["id"] = c.id;
            e["family"] = c.family;
            e["parameter"] = c.parameter;
            e["order"] = c.order;
            jc.push_back(std::move(e));
        }
        j["classes"] = std::move(jc);
        Json jr;
        if (solver_results) {
            jr["verdict"] = solver_results->verdict;
            jr["element_classes_exist"] = solver_results->element_classes_exist;
            jr["note"] = solver_results->note;
            Json chains = Json::array();
            for (const auto& chain : solver_results->chains) {
                Json jchain;
                jchain["trivial"] = chain.trivial;
                Json levels = Json::array();
                for (const auto& level : chain.levels) {
                    Json jl;
                    jl["unit_order"] = level.unit_order;
                    Json eps = Json::array();
                    for (const auto& [cid, value] : level.epsilon)
                        eps.push_back(Json::array({cid, value}));
                    jl["epsilon"] = std::move(eps);
                    levels.push_back(std::move(jl));
                }
                jchain["levels"] = std::move(levels);
                Json tables = Json::array();
                for (const auto& table : chain.tables) {
                    Json jt;
                    jt["k"] = table.k;
                    jt["modulus"] = table.modulus;
                    Json mu = Json::array();
                    for (const auto& [e, value] : table.mu)
                        mu.push_back(Json::array({e, rat_to_string(value)}));
                    jt["mu"] = std::move(mu);
                    tables.push_back(std::move(jt));
                }
                jchain["tables"] = std::move(tables);
                chains.push_back(std::move(jchain));
            }
            jr["chains"] = std::move(chains);
        } else if (table_results) {
            Json chars = Json::array();
            for (const auto& chi : table_results->characters) {
                Json jchi;
                jchi["k"] = chi.k;
                jchi["degree"] = chi.degree;
                Json values = Json::array();
                for (const auto& value : chi.values) {
                    Json jv;
                    jv["class_id"] = value.class_id;
                    jv["conductor"] = value.conductor;
                    Json terms = Json::array();
                    for (const auto& [e, c] : value.terms)
                        terms.push_back(Json::array({e, c}));
                    jv["terms"] = std::move(terms);
                    values.push_back(std::move(jv));
                }
                jchi["values"] = std::move(values);
                chars.push_back(std::move(jchi));
            }
            jr["characters"] = std::move(chars);
        }
        j["results"] = std::move(jr);
        j["timing_ms"] = timing_ms;
        return j;
    }

    static ReportDocument from_json(const Json& j)
    {
        ReportDocument d;
        d.schema_version = j.at("schema_version").get<int>();
        d.command = j.at("command").get<std::string>();
        const Json& jg = j.at("group");
        d.group.p = jg.at("p").get<long long>();
        d.group.f = jg.at("f").get<int>();
        d.group.q = jg.at("q").get<long long>();
        d.group.d = jg.at("d").get<long long>();
        d.group.order_a = jg.at("order_a").get<long long>();
        d.group.order_b = jg.at("order_b").get<long long>();
        const Json& jp = j.at("parameters");
        if (jp.contains("kmax")) {
            TableParams tp;
            tp.kmax = jp.at("kmax").get<int>();
            d.table_params = tp;
        } else if (jp.contains("r")) {
            SolverParams sp;
            sp.r = jp.at("r").get<long long>();
            sp.n = jp.at("n").get<int>();
            sp.characters = jp.at("characters").get<std::vector<int>>();
            sp.bound = jp.at("bound").get<long long>();
            d.solver_params = sp;
        }
        for (const Json& e : j.at("classes")) {
            ReportClass c;
            c.id = e.at("id").get<int>();
            c.family = e.at("family").get<std::string>();
            c.parameter = e.at("parameter").get<long long>();
            c.order = e.at("order").get<long long>();
            d.classes.push_back(std::move(c));
        }
        const Json& jr = j.at("results");
        if (jr.contains("verdict")) {
            SolverResults res;
            res.verdict = jr.at("verdict").get<std::string>();
            res.element_classes_exist = jr.at("element_classes_exist").get<bool>();
            res.note = jr.at("note").get<std::string>();
            for (const Json& jchain : jr.at("chains")) {
                ReportChain chain;
                chain.trivial = jchain.at("trivial").get<bool>();
                for (const Json& jl : jchain.at("levels")) {
                    ReportLevel level;
                    level.unit_order = jl.at("unit_order").get<long long>();
                    for (const Json& pair : jl.at("epsilon"))
                        level.epsilon.emplace_back(pair.at(0).get<int>(),
                                                   pair.at(1).get<long long>());
                    chain.levels.push_back(std::move(level));
                }
                for (const Json& jt : jchain.at("tables")) {
                    ReportTable table;
                    table.k = jt.at("k").get<int>();
                    table.modulus = jt.at("modulus").get<long long>();
                    for (const Json& pair : jt.at("mu"))
                        table.mu.emplace_back(pair.at(0).get<long long>(),
                                              rat_from_string(pair.at(1).get<std::string>()));
                    chain.tables.push_back(std::move(table));
                }
                res.chains.push_back(std::move(chain));
            }
            d.solver_results = std::move(res);
        } else if (jr.contains("characters")) {
            TableResults res;
            for (const Json& jchi : jr.at("characters")) {
                ReportChar chi;
                chi.k = jchi.at("k").get<int>();
                chi.degree = jchi.at("degree").get<long long>();
                for (const Json& jv : jchi.at("values")) {
                    ReportCharValue value;
                    value.class_id = jv.at("class_id").get<int>();
                    value.conductor = jv.at("conductor").get<long long>();
                    for (const Json& pair : jv.at("terms"))
                        value.terms.emplace_back(pair.at(0).get<long long>(),
                                                 pair.at(1).get<long long>());
                    chi.values.push_back(std::move(value));
                }
                res.characters.push_back(std::move(chi));
            }
            d.table_results = std::move(res);
        }
        d.timing_ms = j.at("timing_ms").get<std::int64_t>();
        return d;
    }

    std::string serialize() const { return to_json().dump(2) + "\n"; }
};

inline GroupInfo group_info(const GroupData& g)
{
    GroupInfo info;
    info.p = g.p();
    info.f = g.f();
    info.q = g.q();
    info.d = g.d();
    info.order_a = g.order_a();
    info.order_b = g.order_b();
    return info;
}

inline std::vector<ReportClass> class_inventory(const GroupData& g)
{
    std::vector<ReportClass> out;
    for (const auto& c : g.classes()) {
        ReportClass rc;
        rc.id = c.id;
        rc.family = family_name(c.family);
        rc.parameter = c.parameter;
        rc.order = c.element_order;
        out.push_back(std::move(rc));
    }
    return out;
}

inline ReportDocument build_solver_document(const GroupData& g, const std::string& command,
                                            const SolverReport& rep)
{
    ReportDocument doc;
    doc.command = command;
    doc.group = group_info(g);
    SolverParams params;
    params.r = rep.r;
    params.n = rep.n;
    params.characters = rep.characters;
    params.bound = rep.bound;
    doc.solver_params = std::move(params);
    doc.classes = class_inventory(g);
    SolverResults results;
    if (command == "solve")
        results.verdict = "enumerated";
    else
        results.verdict = rep.verified ? "verified" : "nontrivial_chains";
    results.element_classes_exist = rep.elements_exist;
    results.note = rep.elements_exist ? "" : "no elements of this order";
    for (const auto& res : rep.chains) {
        ReportChain chain;
        chain.trivial = res.trivial;
        for (const auto& pa : res.chain.levels) {
            ReportLevel level;
            level.unit_order = pa.unit_order;
            for (const auto& [cid, eps] : pa.entries)
                level.epsilon.emplace_back(cid, int_to_i64(eps));
            chain.levels.push_back(std::move(level));
        }
        for (const auto& table : res.tables) {
            ReportTable rt;
            rt.k = table.k;
            rt.modulus = table.modulus;
            for (long long e = 0; e < table.modulus; ++e)
                rt.mu.emplace_back(e, table.mu[static_cast<size_t>(e)]);
            chain.tables.push_back(std::move(rt));
        }
        results.chains.push_back(std::move(chain));
    }
    doc.solver_results = std::move(results);
    return doc;
}

// Character table document: values of chi_0..chi_kmax on the p-regular
// classes, each at its torus conductor (order_a for split classes, order_b
// for nonsplit ones, 1 for the identity).
inline ReportDocument build_table_document(const GroupData& g, int kmax)
{
    if (kmax < 0)
        throw std::invalid_argument("build_table_document: kmax must be >= 0");
    ReportDocument doc;
    doc.command = "table";
    doc.group = group_info(g);
    TableParams params;
    params.kmax = kmax;
    doc.table_params = params;
    doc.classes = class_inventory(g);
    TableResults results;
    for (int k = 0; k <= kmax; ++k) {
        BrauerChar chi(g, k);
        ReportChar rc;
        rc.k = k;
        rc.degree = chi.degree();
        for (const auto& c : g.classes()) {
            if (c.family == ClassFamily::unipotent)
                continue;
            ReportCharValue value;
            value.class_id = c.id;
            value.conductor = g.natural_conductor(c.id);
            const CycloSum v = chi.value(c);
            for (const auto& [e, coeff] : v.coefficients())
                value.terms.emplace_back(e, int_to_i64(coeff));
            rc.values.push_back(std::move(value));
        }
        results.characters.push_back(std::move(rc));
    }
    doc.table_results = std::move(results);
    return doc;
}

} // namespace helpsl2
