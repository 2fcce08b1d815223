#include <algorithm>
#include <cstdio>

#include "mfid/error.hpp"
#include "mfid/format.hpp"
#include "mfid/harness.hpp"

namespace mfid::harness {
namespace {

std::string_view model_id_for(grade::Tier tier) {
    switch (tier) {
        case grade::Tier::Rigid: return "grade.rigid";
        case grade::Tier::Spring: return "grade.spring";
        case grade::Tier::Dynamic: return "grade.dynamic";
    }
    return "";
}

// Physical assumptions per tier, one clause per item.
std::string_view assumptions_for(grade::Tier tier) {
    switch (tier) {
        case grade::Tier::Rigid:
            return "rigid suspension; rigid tire; rigid ground; Coulomb friction; "
                   "no acceleration weight transfer; constant torque";
        case grade::Tier::Spring:
            return "constant-rate springs settled to equilibrium; rigid tire; rigid ground; "
                   "Coulomb friction; no acceleration weight transfer; constant torque";
        case grade::Tier::Dynamic:
            return "constant-rate springs with dampers; point-contact rigid tire; rigid ground; "
                   "Coulomb friction; dynamic weight transfer; torque map with converter ramp";
    }
    return "";
}

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::vector<ReportRow> gradeability_report(const VehicleDocument& vehicle, const ReportOptions& options) {
    std::vector<grade::Tier> tiers = options.tiers;
    std::sort(tiers.begin(), tiers.end());
    tiers.erase(std::unique(tiers.begin(), tiers.end()), tiers.end());

    std::vector<ReportRow> rows;
    for (const auto tier : tiers) {
        const auto& model = builtin_registry().get(model_id_for(tier));
        ReportRow row;
        row.tier = tier;
        row.model_id = model.id();
        row.feature_count = model.features().size();
        row.input_count = model.cost().input_count;
        row.assumptions = assumptions_for(tier);
        try {
            const auto setup = vehicle.setup_for(tier);
            row.result = grade::critical_grade(tier, grade::tier_feasibility(tier, setup), options.solver);
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
    std::string out = "tier,model,feature_count,input_count,assumptions,critical_grade,failure_mode\n";
    for (const auto& r : rows) {
        out += std::string(grade::to_string(r.tier)) + ',' + r.model_id + ',' +
               std::to_string(r.feature_count) + ',' + std::to_string(r.input_count) + ',' +
               r.assumptions + ',';
        if (r.result) {
            out += shortest(r.result->critical_grade) + ',';
            if (r.result->failure_mode) out += grade::to_string(*r.result->failure_mode);
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            out += "ERROR," + msg;
        }
        out += '\n';
    }
    return out;
}

std::string report_text(const std::vector<ReportRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        out += r.model_id + " (" + std::string(grade::to_string(r.tier)) + ")\n";
        out += "  features: " + std::to_string(r.feature_count) +
               "  inputs: " + std::to_string(r.input_count) + '\n';
        out += "  assumptions: " + r.assumptions + '\n';
        if (r.result) {
            out += "  critical grade: " + fixed2(r.result->critical_grade) + "%";
            if (r.result->failure_mode) {
                out += " (" + std::string(grade::to_string(*r.result->failure_mode)) + ")";
            }
            out += '\n';
        } else {
            out += "  ERROR: " + r.error + '\n';
        }
    }
    return out;
}

}  // namespace mfid::harness
