#pragma once

// Glue between parameter documents, the model catalog, and the tabular
// outputs of the command-line tool.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mfid/beam.hpp"
#include "mfid/fidelity.hpp"
#include "mfid/gradeability.hpp"
#include "mfid/sdof.hpp"

namespace mfid::harness {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Parameter documents
// ---------------------------------------------------------------------------

/// Parses a JSON object; anything else is a ParseError.
[[nodiscard]] json parse_document(std::string_view text);
[[nodiscard]] json load_document(const std::string& path);

[[nodiscard]] beam::BeamLoadCase beam_case_from(const json& doc);
[[nodiscard]] json to_document(const beam::BeamLoadCase& c);

struct SmdSetup {
    sdof::SmdParams params{1.0, 0.0, 1.0};
    sdof::StepForcing forcing{1.0};
    sdof::SettlingCriterion criterion;
    numerics::SolverConfig solver;
};

[[nodiscard]] SmdSetup smd_setup_from(const json& doc);
[[nodiscard]] json to_document(const SmdSetup& s);

/// Springs may be absent from a rigid-only document.
struct VehicleDocument {
    grade::VehicleParams vehicle{};
    std::optional<grade::SpringParams> springs;
    grade::DynamicParams dynamics;
    numerics::SolverConfig solver;
    grade::GradeSolver grade_solver = grade::SweepSolver{};

    /// Throws InvalidArgument when the tier needs springs and none were given.
    [[nodiscard]] grade::VehicleSetup setup_for(grade::Tier tier) const;
};

[[nodiscard]] VehicleDocument vehicle_from(const json& doc);
[[nodiscard]] json to_document(const VehicleDocument& v);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepSpec {
    std::string parameter;
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    /// Uniform, endpoints exact.
    [[nodiscard]] std::vector<double> values() const;
    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// `name=lo:hi:n`, whitespace allowed around separators.
/// Throws ParseError (with position) and BoundsError.
[[nodiscard]] SweepSpec parse_sweep(std::string_view text);

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

enum class Family { Beam, Smd, Grade };

/// The seven built-in models, in a fixed order.
[[nodiscard]] const ModelRegistry& builtin_registry();
[[nodiscard]] Family family_of(std::string_view model_id);

/// Parameter names a sweep may vary for this model.
[[nodiscard]] std::vector<std::string> sweepable_parameters(std::string_view model_id);

/// Scalar outputs a model reports.
[[nodiscard]] std::vector<std::string> quantities(std::string_view model_id);

/// Scenario implied by a parameter document (derived quantities such as
/// slenderness or damping ratio), with no required features.
[[nodiscard]] Scenario scenario_for(std::string_view model_id, const json& doc);

/// Runs a model and returns one named quantity.
[[nodiscard]] double evaluate(std::string_view model_id, const json& doc, std::string_view quantity);

/// Full run record: outputs, validity verdict and, for beams, the profile.
[[nodiscard]] json run_model(std::string_view model_id, const json& doc);

/// Copy of `doc` with the sweep parameter set to `value`. Throws
/// IncompatibleParameter when the model family has no such parameter.
[[nodiscard]] json apply_sweep_value(std::string_view model_id, json doc,
                                     std::string_view parameter, double value);

// ---------------------------------------------------------------------------
// Comparison tables
// ---------------------------------------------------------------------------

struct ComparisonColumn {
    std::string model;
    std::vector<double> values;
    std::vector<bool> valid;
};

struct ComparisonTable {
    std::string parameter;
    std::vector<double> sweep;
    std::vector<ComparisonColumn> columns;
};

struct CompareOptions {
    /// Evaluation order over sweep indices; empty means ascending. Output is
    /// the same for every order.
    std::vector<std::size_t> order;
    unsigned threads = 1;
};

[[nodiscard]] ComparisonTable run_compare(const std::array<std::string, 2>& models, const json& base,
                                          const SweepSpec& sweep, std::string_view quantity,
                                          const CompareOptions& options = {});

/// Header `<param>,<m1>,<m1>_valid,<m2>,<m2>_valid`, LF line ends.
[[nodiscard]] std::string to_csv(const ComparisonTable& table);

// ---------------------------------------------------------------------------
// Gradeability report
// ---------------------------------------------------------------------------

struct ReportRow {
    grade::Tier tier = grade::Tier::Rigid;
    std::string model_id;
    std::size_t feature_count = 0;
    int input_count = 0;
    std::string assumptions;
    std::optional<grade::GradeResult> result;
    std::string error;  // set when the tier failed to produce a result
};

struct ReportOptions {
    grade::GradeSolver solver = grade::SweepSolver{};
    std::vector<grade::Tier> tiers{grade::Tier::Rigid, grade::Tier::Spring, grade::Tier::Dynamic};
};

/// One row per requested tier, always in rigid, spring, dynamic order.
[[nodiscard]] std::vector<ReportRow> gradeability_report(const VehicleDocument& vehicle,
                                                         const ReportOptions& options);

[[nodiscard]] std::string report_csv(const std::vector<ReportRow>& rows);
[[nodiscard]] std::string report_text(const std::vector<ReportRow>& rows);

}  // namespace mfid::harness
