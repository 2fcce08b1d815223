#include <algorithm>
#include <cmath>

#include "mfid/error.hpp"
#include "mfid/harness.hpp"

namespace mfid::harness {
namespace {

ModelRegistry make_registry() {
    ModelRegistry r;
    r.add(beam::eb_descriptor());
    r.add(beam::te_descriptor());
    r.add(sdof::heuristic_descriptor());
    r.add(sdof::numeric_descriptor());
    r.add(grade::rigid_descriptor());
    r.add(grade::spring_descriptor());
    r.add(grade::dynamic_descriptor());
    return r;
}

grade::Tier tier_of(std::string_view id) {
    if (id == "grade.rigid") return grade::Tier::Rigid;
    if (id == "grade.spring") return grade::Tier::Spring;
    return grade::Tier::Dynamic;
}

json beam_outputs(std::string_view id, const json& doc, json* profile) {
    const auto c = beam_case_from(doc);
    const bool te = id == "beam.te";
    const double tip[] = {0.0};
    const auto at_tip = te ? beam::te_profile(c, tip) : beam::eb_profile(c, tip);
    if (profile != nullptr) {
        const auto xs = beam::stations(c.L(), 11);
        const auto p = te ? beam::te_profile(c, xs) : beam::eb_profile(c, xs);
        *profile = {{"x", p.xs}, {"theta", p.theta}, {"v", p.v}};
    }
    return {{"tip_deflection", at_tip.v[0]},
            {"tip_rotation", at_tip.theta[0]},
            {"slenderness", beam::slenderness(c.L(), c.h())}};
}

json smd_outputs(std::string_view id, const json& doc) {
    const auto s = smd_setup_from(doc);
    const auto r = id == "smd.heuristic"
                       ? sdof::heuristic_settling_time(s.params, s.forcing)
                       : sdof::numeric_settling_time(s.params, s.forcing, s.criterion, s.solver);
    return {{"settling_time", r.t_s}, {"steady_state", r.steady_state.value_or(0.0)}};
}

json grade_outputs(std::string_view id, const json& doc) {
    const auto v = vehicle_from(doc);
    const auto tier = tier_of(id);
    const auto r = grade::critical_grade(tier, grade::tier_feasibility(tier, v.setup_for(tier)),
                                         v.grade_solver);
    return {{"critical_grade", r.critical_grade},
            {"failure_mode", r.failure_mode ? std::string(grade::to_string(*r.failure_mode)) : ""},
            {"evaluations", r.evaluations}};
}

json outputs(std::string_view id, const json& doc, json* profile = nullptr) {
    switch (family_of(id)) {
        case Family::Beam: return beam_outputs(id, doc, profile);
        case Family::Smd: return smd_outputs(id, doc);
        case Family::Grade: return grade_outputs(id, doc);
    }
    throw Error(ErrorCode::UnknownModel, std::string(id));
}

}  // namespace

const ModelRegistry& builtin_registry() {
    static const ModelRegistry registry = make_registry();
    return registry;
}

Family family_of(std::string_view model_id) {
    (void)builtin_registry().get(model_id);  // UnknownModel
    if (model_id.starts_with("beam.")) return Family::Beam;
    if (model_id.starts_with("smd.")) return Family::Smd;
    return Family::Grade;
}

std::vector<std::string> sweepable_parameters(std::string_view model_id) {
    std::vector<std::string> names;
    switch (family_of(model_id)) {
        case Family::Beam:
            names = {"P", "E", "L", "b", "h", "I", "A", "slenderness"};
            if (model_id == "beam.te") names.insert(names.end(), {"G", "nu", "kappa"});
            break;
        case Family::Smd:
            names = {"m", "c", "k", "zeta"};
            if (model_id == "smd.numeric") names.insert(names.end(), {"F0", "band", "horizon_factor"});
            break;
        case Family::Grade:
            names = {"m", "wheelbase", "l_f", "h_cg", "r_w", "T_max", "G_r", "mu"};
            if (model_id != "grade.rigid") names.insert(names.end(), {"k_f", "k_r"});
            if (model_id == "grade.dynamic") {
                names.insert(names.end(), {"converter_ramp", "stall_fraction", "c_f", "c_r", "I_yy",
                                           "success_distance", "time_limit"});
            }
            break;
    }
    return names;
}

std::vector<std::string> quantities(std::string_view model_id) {
    switch (family_of(model_id)) {
        case Family::Beam: return {"tip_deflection", "tip_rotation", "slenderness"};
        case Family::Smd: return {"settling_time", "steady_state"};
        case Family::Grade: return {"critical_grade"};
    }
    return {};
}

Scenario scenario_for(std::string_view model_id, const json& doc) {
    Scenario s;
    switch (family_of(model_id)) {
        case Family::Beam: {
            const auto c = beam_case_from(doc);
            s.params["slenderness"] = beam::slenderness(c.L(), c.h());
            break;
        }
        case Family::Smd: {
            const auto setup = smd_setup_from(doc);
            s.params["zeta"] = sdof::modal_parameters(setup.params).zeta;
            s.params["forcing"] = std::string("step");
            break;
        }
        case Family::Grade:
            break;
    }
    return s;
}

double evaluate(std::string_view model_id, const json& doc, std::string_view quantity) {
    const auto names = quantities(model_id);
    if (std::find(names.begin(), names.end(), quantity) == names.end()) {
        throw Error(ErrorCode::IncompatibleParameter,
                    std::string(model_id) + " has no output '" + std::string(quantity) + "'");
    }
    return outputs(model_id, doc).at(std::string(quantity)).get<double>();
}

json run_model(std::string_view model_id, const json& doc) {
    const auto& model = builtin_registry().get(model_id);
    json profile;
    json out{{"model", model.id()}, {"outputs", outputs(model_id, doc, &profile)}};

    switch (family_of(model_id)) {
        case Family::Beam: out["inputs"] = to_document(beam_case_from(doc)); break;
        case Family::Smd: out["inputs"] = to_document(smd_setup_from(doc)); break;
        case Family::Grade: out["inputs"] = to_document(vehicle_from(doc)); break;
    }
    if (!profile.is_null()) out["profile"] = profile;

    const auto verdict = is_valid(model, scenario_for(model_id, doc));
    out["valid"] = verdict.valid;
    out["failed_predicates"] = json::array();
    for (const auto& p : verdict.failed_predicates) out["failed_predicates"].push_back(p.describe());
    return out;
}

json apply_sweep_value(std::string_view model_id, json doc, std::string_view parameter, double value) {
    const auto names = sweepable_parameters(model_id);
    const std::string key(parameter);
    if (std::find(names.begin(), names.end(), key) == names.end()) {
        throw Error(ErrorCode::IncompatibleParameter,
                    "'" + key + "' is not an input of " + std::string(model_id));
    }
    switch (family_of(model_id)) {
        case Family::Beam:
            if (key == "b" || key == "h" || key == "I" || key == "A") {
                if (!doc.contains("section") || !doc["section"].contains(key)) {
                    throw Error(ErrorCode::IncompatibleParameter,
                                "section in the base document has no '" + key + "'");
                }
                doc["section"][key] = value;
            } else if (key == "slenderness") {
                doc["L"] = value * beam_case_from(doc).h();
            } else {
                if (key == "G") doc.erase("nu");
                if (key == "nu") doc.erase("G");
                doc[key] = value;
            }
            break;
        case Family::Smd:
            if (key == "zeta") {
                const auto s = smd_setup_from(doc);
                doc["c"] = 2.0 * value * std::sqrt(s.params.k() * s.params.m());
            } else {
                doc[key] = value;
            }
            break;
        case Family::Grade:
            doc[key] = value;
            break;
    }
    return doc;
}

}  // namespace mfid::harness
