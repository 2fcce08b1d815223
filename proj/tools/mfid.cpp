// mfid: command-line front end for the model catalog.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mfid/error.hpp"
#include "mfid/gray_box_json.hpp"
#include "mfid/harness.hpp"

namespace {

using mfid::harness::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitModel = 3;
constexpr int kExitNumerical = 4;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mfid::Error(mfid::ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << content;
}

mfid::Scenario scenario_from(const json& doc) {
    if (!doc.is_object()) throw mfid::ParseError(0, "scenario must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "params" && key != "required_features") {
            throw mfid::Error(mfid::ErrorCode::InvalidArgument, "unknown scenario key '" + key + "'");
        }
    }
    mfid::Scenario s;
    if (doc.contains("params")) {
        for (const auto& [name, value] : doc["params"].items()) {
            if (value.is_number()) s.params[name] = value.get<double>();
            else if (value.is_string()) s.params[name] = value.get<std::string>();
            else throw mfid::Error(mfid::ErrorCode::InvalidArgument,
                                   "scenario parameter '" + name + "' must be a number or string");
        }
    }
    if (doc.contains("required_features")) {
        for (const auto& tag : doc["required_features"]) {
            s.required_features.insert(mfid::PhenomenonTag(tag.get<std::string>()));
        }
    }
    return s;
}

mfid::grade::Tier parse_tier(const std::string& name) {
    if (name == "rigid") return mfid::grade::Tier::Rigid;
    if (name == "spring") return mfid::grade::Tier::Spring;
    if (name == "dynamic") return mfid::grade::Tier::Dynamic;
    throw mfid::Error(mfid::ErrorCode::InvalidArgument, "unknown tier '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-fidelity model catalog: describe, select, run and compare models"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List registered models");

    auto* describe = app.add_subcommand("describe", "Print a model's gray box");
    std::string describe_id, describe_format = "text";
    describe->add_option("model-id", describe_id, "Model id")->required();
    describe->add_option("--format", describe_format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    auto* select = app.add_subcommand("select", "Pick the lowest valid fidelity model for a scenario");
    std::string scenario_path;
    select->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

    auto* run = app.add_subcommand("run", "Run one model on a parameter document");
    std::string run_id, run_params, run_out;
    run->add_option("model-id", run_id, "Model id")->required();
    run->add_option("--params", run_params, "Parameter JSON file")->required();
    run->add_option("--out", run_out, "Output file (default stdout)");

    auto* compare = app.add_subcommand("compare", "Sweep one parameter through two models");
    std::string cmp_models, cmp_params, cmp_sweep, cmp_quantity, cmp_out;
    unsigned cmp_threads = 1;
    compare->add_option("--models", cmp_models, "Two model ids, comma separated")->required();
    compare->add_option("--params", cmp_params, "Base parameter JSON file")->required();
    compare->add_option("--sweep", cmp_sweep, "name=lo:hi:n")->required();
    compare->add_option("--quantity", cmp_quantity, "Output quantity to tabulate")->required();
    compare->add_option("--out", cmp_out, "CSV file ('-' for stdout)")->required();
    compare->add_option("--threads", cmp_threads, "Worker threads");

    auto* gradeability = app.add_subcommand("gradeability", "Critical grade for every tier");
    std::string gr_vehicle, gr_solver = "sweep", gr_tiers = "rigid,spring,dynamic", gr_out = "text";
    double gr_increment = 0.1, gr_tol = 0.01;
    gradeability->add_option("--vehicle", gr_vehicle, "Vehicle JSON file")->required();
    gradeability->add_option("--solver", gr_solver, "sweep or bisection")
        ->check(CLI::IsMember({"sweep", "bisection"}));
    gradeability->add_option("--increment", gr_increment, "Sweep increment (grade points)");
    gradeability->add_option("--tol", gr_tol, "Bisection tolerance (grade points)");
    gradeability->add_option("--tiers", gr_tiers, "Comma separated subset of rigid,spring,dynamic");
    gradeability->add_option("--out", gr_out, "csv, text, or a file path (.csv selects CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    namespace h = mfid::harness;
    try {
        const auto& registry = h::builtin_registry();

        if (*list) {
            for (const auto& m : registry.models()) {
                std::cout << m.id() << '\t' << "rank=" << m.cost().compute_rank
                          << "\tinputs=" << m.cost().input_count
                          << "\tfeatures=" << m.features().size() << '\n';
            }
        } else if (*describe) {
            const auto format = describe_format == "json" ? mfid::RenderFormat::Json
                                                          : mfid::RenderFormat::Text;
            std::cout << mfid::render_gray_box(registry.get(describe_id), format);
        } else if (*select) {
            const auto scenario = scenario_from(h::load_document(scenario_path));
            std::cout << mfid::select_model(registry.models(), scenario).id() << '\n';
        } else if (*run) {
            write_output(run_out, h::run_model(run_id, h::load_document(run_params)).dump(2) + '\n');
        } else if (*compare) {
            const auto ids = split_list(cmp_models);
            if (ids.size() != 2) {
                throw mfid::Error(mfid::ErrorCode::InvalidArgument, "--models needs exactly two ids");
            }
            h::CompareOptions opts;
            opts.threads = cmp_threads;
            const auto table = h::run_compare({ids[0], ids[1]}, h::load_document(cmp_params),
                                              h::parse_sweep(cmp_sweep), cmp_quantity, opts);
            write_output(cmp_out, h::to_csv(table));
        } else if (*gradeability) {
            h::ReportOptions opts;
            if (gr_solver == "sweep") opts.solver = mfid::grade::SweepSolver{gr_increment};
            else opts.solver = mfid::grade::BisectionSolver{0.0, mfid::grade::kNeverFailsGrade, gr_tol};
            opts.tiers.clear();
            for (const auto& t : split_list(gr_tiers)) opts.tiers.push_back(parse_tier(t));

            const auto rows = h::gradeability_report(h::vehicle_from(h::load_document(gr_vehicle)), opts);
            const bool to_stdout = gr_out == "csv" || gr_out == "text";
            const bool csv = gr_out == "csv" || (!to_stdout && gr_out.ends_with(".csv"));
            write_output(to_stdout ? "-" : gr_out, csv ? h::report_csv(rows) : h::report_text(rows));
            for (const auto& r : rows) {
                if (!r.error.empty()) return kExitModel;
            }
        }
    } catch (const mfid::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (mfid::category(e.code())) {
            case mfid::ErrorCategory::Usage: return kExitUsage;
            case mfid::ErrorCategory::Model: return kExitModel;
            case mfid::ErrorCategory::Numerical: return kExitNumerical;
        }
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}
