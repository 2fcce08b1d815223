#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mfid/error.hpp"
#include "mfid/harness.hpp"

namespace mfid::harness {
namespace {

// Reads typed fields from one JSON object and rejects keys nobody asked for.
class FieldReader {
public:
    FieldReader(const json& doc, std::string context, std::set<std::string> allowed)
        : doc_(doc), context_(std::move(context)) {
        if (!doc_.is_object()) fail(context_ + " must be a JSON object");
        for (const auto& [key, _] : doc_.items()) {
            if (!allowed.contains(key)) fail("unknown key '" + key + "' in " + context_);
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return doc_.contains(key); }

    [[nodiscard]] double number(const std::string& key) const {
        if (!has(key)) fail(context_ + " lacks required key '" + key + "'");
        return as_number(doc_.at(key), key);
    }

    [[nodiscard]] std::optional<double> maybe(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return as_number(doc_.at(key), key);
    }

    [[nodiscard]] double number_or(const std::string& key, double fallback) const {
        return maybe(key).value_or(fallback);
    }

    [[nodiscard]] std::vector<double> numbers(const json& arr, const std::string& key) const {
        if (!arr.is_array()) fail("'" + key + "' in " + context_ + " must be an array");
        std::vector<double> out;
        for (const auto& v : arr) out.push_back(as_number(v, key));
        return out;
    }

    [[nodiscard]] const json& at(const std::string& key) const { return doc_.at(key); }

    [[noreturn]] static void fail(const std::string& message) {
        throw Error(ErrorCode::InvalidArgument, message);
    }

private:
    double as_number(const json& v, const std::string& key) const {
        if (!v.is_number()) fail("'" + key + "' in " + context_ + " must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail("'" + key + "' in " + context_ + " must be finite");
        return d;
    }

    const json& doc_;
    std::string context_;
};

void read_solver_tolerances(const FieldReader& r, numerics::SolverConfig& cfg) {
    cfg.rtol = r.number_or("rtol", cfg.rtol);
    cfg.atol = r.number_or("atol", cfg.atol);
}

}  // namespace

json parse_document(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte, "malformed JSON document");
    }
    if (!doc.is_object()) throw ParseError(0, "parameter document must be a JSON object");
    return doc;
}

json load_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str());
}

// ---------------------------------------------------------------------------
// Beam
// ---------------------------------------------------------------------------

beam::BeamLoadCase beam_case_from(const json& doc) {
    const FieldReader r(doc, "beam document", {"P", "E", "L", "section", "G", "nu", "kappa"});
    if (!r.has("section")) FieldReader::fail("beam document lacks required key 'section'");

    const json& sec = r.at("section");
    beam::Section section;
    if (sec.is_object() && sec.contains("b")) {
        const FieldReader s(sec, "rectangular section", {"b", "h"});
        section = beam::RectangularSection{s.number("b"), s.number("h")};
    } else {
        const FieldReader s(sec, "direct section", {"I", "A", "h"});
        section = beam::DirectSection{s.number("I"), s.number("A"), s.number("h")};
    }

    beam::ShearData shear;
    if (r.has("G") && r.has("nu")) FieldReader::fail("give either 'G' or 'nu', not both");
    if (auto G = r.maybe("G")) shear = beam::ShearModulus{*G};
    if (auto nu = r.maybe("nu")) shear = beam::PoissonRatio{*nu};

    return {r.number("P"), r.number("E"), r.number("L"), section, shear,
            r.number_or("kappa", beam::kRectangularShearCorrection)};
}

json to_document(const beam::BeamLoadCase& c) {
    json doc{{"P", c.P()}, {"E", c.E()}, {"L", c.L()}, {"kappa", c.kappa()}};
    if (const auto* r = std::get_if<beam::RectangularSection>(&c.section())) {
        doc["section"] = {{"b", r->b}, {"h", r->h}};
    } else {
        const auto& d = std::get<beam::DirectSection>(c.section());
        doc["section"] = {{"I", d.I}, {"A", d.A}, {"h", d.h}};
    }
    if (const auto* g = std::get_if<beam::ShearModulus>(&c.shear())) doc["G"] = g->G;
    if (const auto* p = std::get_if<beam::PoissonRatio>(&c.shear())) doc["nu"] = p->nu;
    return doc;
}

// ---------------------------------------------------------------------------
// Spring-mass-damper
// ---------------------------------------------------------------------------

SmdSetup smd_setup_from(const json& doc) {
    const FieldReader r(doc, "spring-mass-damper document",
                        {"m", "c", "k", "F0", "band", "horizon_factor", "rtol", "atol"});
    SmdSetup s{
        sdof::SmdParams(r.number("m"), r.number_or("c", 0.0), r.number("k")),
        sdof::StepForcing(r.number_or("F0", 1.0)),
        sdof::SettlingCriterion(r.number_or("band", 0.02), r.number_or("horizon_factor", 12.0)),
        {},
    };
    read_solver_tolerances(r, s.solver);
    return s;
}

json to_document(const SmdSetup& s) {
    return {{"m", s.params.m()},
            {"c", s.params.c()},
            {"k", s.params.k()},
            {"F0", s.forcing.F0},
            {"band", s.criterion.band},
            {"horizon_factor", s.criterion.horizon_factor},
            {"rtol", s.solver.rtol},
            {"atol", s.solver.atol}};
}

// ---------------------------------------------------------------------------
// Vehicle
// ---------------------------------------------------------------------------

grade::VehicleSetup VehicleDocument::setup_for(grade::Tier tier) const {
    if (tier != grade::Tier::Rigid && !springs) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string(grade::to_string(tier)) + " tier needs k_f and k_r");
    }
    return {vehicle, springs.value_or(grade::SpringParams{1.0, 1.0}), dynamics, solver};
}

VehicleDocument vehicle_from(const json& doc) {
    const FieldReader r(doc, "vehicle document",
                        {"m", "wheelbase", "l_f", "h_cg", "r_w", "T_max", "G_r", "mu", "k_f", "k_r",
                         "torque_map", "converter_ramp", "stall_fraction", "c_f", "c_r", "I_yy",
                         "success_distance", "time_limit", "rtol", "atol", "solver", "increment",
                         "tol"});
    VehicleDocument v;
    v.vehicle = {r.number("m"),   r.number("wheelbase"), r.number("l_f"), r.number("h_cg"),
                 r.number("r_w"), r.number("T_max"),     r.number("G_r"), r.number("mu")};
    v.vehicle.validate();

    if (r.has("k_f") || r.has("k_r")) {
        v.springs = grade::SpringParams{r.number("k_f"), r.number("k_r")};
        v.springs->validate();
    }

    auto& d = v.dynamics;
    if (r.has("torque_map")) {
        const FieldReader tm(r.at("torque_map"), "torque_map", {"rpm", "torque_nm"});
        if (!tm.has("rpm") || !tm.has("torque_nm")) {
            FieldReader::fail("torque_map needs 'rpm' and 'torque_nm' arrays");
        }
        d.torque_map = grade::TorqueMap(tm.numbers(tm.at("rpm"), "rpm"),
                                        tm.numbers(tm.at("torque_nm"), "torque_nm"));
    } else {
        d.torque_map = grade::TorqueMap::flat(v.vehicle.T_max);
    }
    d.converter_ramp = r.number_or("converter_ramp", d.converter_ramp);
    d.stall_fraction = r.number_or("stall_fraction", d.stall_fraction);
    d.c_f = r.number_or("c_f", d.c_f);
    d.c_r = r.number_or("c_r", d.c_r);
    d.I_yy = r.number_or("I_yy", d.I_yy);
    d.success_distance = r.number_or("success_distance", d.success_distance);
    d.time_limit = r.number_or("time_limit", d.time_limit);
    d.validate();
    read_solver_tolerances(r, v.solver);

    const std::string solver = r.has("solver") && r.at("solver").is_string()
                                   ? r.at("solver").get<std::string>()
                                   : (r.has("solver") ? "?" : "sweep");
    if (solver == "sweep") {
        v.grade_solver = grade::SweepSolver{r.number_or("increment", 0.1)};
    } else if (solver == "bisection") {
        grade::BisectionSolver b;
        b.tol = r.number_or("tol", b.tol);
        v.grade_solver = b;
    } else {
        FieldReader::fail("'solver' must be \"sweep\" or \"bisection\"");
    }
    return v;
}

json to_document(const VehicleDocument& v) {
    const auto& p = v.vehicle;
    const auto& d = v.dynamics;
    json doc{{"m", p.m},       {"wheelbase", p.wheelbase}, {"l_f", p.l_f}, {"h_cg", p.h_cg},
             {"r_w", p.r_w},   {"T_max", p.T_max},         {"G_r", p.G_r}, {"mu", p.mu},
             {"torque_map", {{"rpm", d.torque_map.rpm()}, {"torque_nm", d.torque_map.torque_nm()}}},
             {"converter_ramp", d.converter_ramp},
             {"stall_fraction", d.stall_fraction},
             {"c_f", d.c_f},
             {"c_r", d.c_r},
             {"I_yy", d.I_yy},
             {"success_distance", d.success_distance},
             {"time_limit", d.time_limit},
             {"rtol", v.solver.rtol},
             {"atol", v.solver.atol}};
    if (v.springs) {
        doc["k_f"] = v.springs->k_f;
        doc["k_r"] = v.springs->k_r;
    }
    if (const auto* s = std::get_if<grade::SweepSolver>(&v.grade_solver)) {
        doc["solver"] = "sweep";
        doc["increment"] = s->increment;
    } else {
        doc["solver"] = "bisection";
        doc["tol"] = std::get<grade::BisectionSolver>(v.grade_solver).tol;
    }
    return doc;
}

}  // namespace mfid::harness
