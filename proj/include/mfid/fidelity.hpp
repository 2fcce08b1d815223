#pragma once

// Model metadata and the set-inclusion fidelity order.
//
// A model's fidelity is the set of physical phenomena it accounts for. Two
// models are compared by inclusion of those sets only; cost and validity are
// separate axes used during selection.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mfid {

// ---------------------------------------------------------------------------
// Phenomenon vocabulary
// ---------------------------------------------------------------------------

/// Adds a tag to the controlled vocabulary. Intended for start-up use by
/// extensions; returns false when the tag was already present. Throws
/// InvalidArgument for malformed tokens.
bool register_phenomenon(std::string_view tag);
[[nodiscard]] bool is_registered_phenomenon(std::string_view tag);
[[nodiscard]] std::vector<std::string> phenomenon_vocabulary();

/// A single controlled-vocabulary tag such as `shear-deflection`.
class PhenomenonTag {
public:
    /// Throws UnknownPhenomenon if the tag is not in the vocabulary.
    explicit PhenomenonTag(std::string_view id);

    [[nodiscard]] const std::string& id() const noexcept { return id_; }

    friend bool operator==(const PhenomenonTag&, const PhenomenonTag&) = default;
    friend auto operator<=>(const PhenomenonTag&, const PhenomenonTag&) = default;

private:
    std::string id_;
};

class FeatureSet {
public:
    FeatureSet() = default;
    FeatureSet(std::initializer_list<std::string_view> tags);
    explicit FeatureSet(std::span<const std::string> tags);

    [[nodiscard]] bool contains(const PhenomenonTag& tag) const { return tags_.contains(tag); }
    [[nodiscard]] bool contains(std::string_view tag) const;
    [[nodiscard]] bool includes(const FeatureSet& other) const;
    [[nodiscard]] std::size_t size() const noexcept { return tags_.size(); }
    [[nodiscard]] bool empty() const noexcept { return tags_.empty(); }

    [[nodiscard]] FeatureSet united_with(const FeatureSet& other) const;
    void insert(const PhenomenonTag& tag) { tags_.insert(tag); }

    /// Tags in lexicographic order.
    [[nodiscard]] std::vector<std::string> sorted_ids() const;

    [[nodiscard]] auto begin() const { return tags_.begin(); }
    [[nodiscard]] auto end() const { return tags_.end(); }

    friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

private:
    std::set<PhenomenonTag> tags_;
};

// ---------------------------------------------------------------------------
// Gray box
// ---------------------------------------------------------------------------

/// Several scalar inputs presented under one label, e.g. "Drivetrain".
struct InputGroup {
    std::string label;
    int arity = 1;
    std::string description;
};

struct GrayBoxRelation {
    std::string text;
    std::vector<std::string> tags;
};

struct OutputQuantity {
    std::string label;
    std::string units;
};

struct GrayBoxSpec {
    std::vector<InputGroup> inputs;
    std::vector<GrayBoxRelation> relations;
    std::vector<OutputQuantity> outputs;

    [[nodiscard]] int total_arity() const;
};

// ---------------------------------------------------------------------------
// Scenario and validity frame
// ---------------------------------------------------------------------------

using ParamValue = std::variant<double, std::string>;

struct Scenario {
    std::map<std::string, ParamValue> params;
    FeatureSet required_features;
};

enum class PredicateRelation { Less, LessEqual, Greater, GreaterEqual, Equal, InSet };

std::string_view to_symbol(PredicateRelation rel) noexcept;

using Threshold = std::variant<double, std::string, std::set<std::string>>;

struct ValidityPredicate {
    std::string parameter;
    PredicateRelation relation = PredicateRelation::GreaterEqual;
    Threshold threshold = 0.0;

    /// Throws MissingParameter when the scenario lacks `parameter`, and
    /// ParameterTypeMismatch when the value kind does not fit the relation.
    [[nodiscard]] bool holds(const Scenario& scenario) const;
    [[nodiscard]] std::string describe() const;

    friend bool operator==(const ValidityPredicate&, const ValidityPredicate&) = default;
};

/// Conjunction; an empty frame is unconditionally valid.
struct ValidityFrame {
    std::vector<ValidityPredicate> predicates;
};

struct CostProfile {
    int input_count = 1;
    int compute_rank = 1;  // 1 closed form, 2 iterative, 3 time-domain

    friend auto operator<=>(const CostProfile& a, const CostProfile& b) {
        if (auto c = a.compute_rank <=> b.compute_rank; c != 0) return c;
        return a.input_count <=> b.input_count;
    }
    friend bool operator==(const CostProfile&, const CostProfile&) = default;
};

// ---------------------------------------------------------------------------
// Descriptor and registry
// ---------------------------------------------------------------------------

class ModelDescriptor {
public:
    /// Validates the gray box against the feature set and derives the input
    /// count from the gray-box arities.
    ModelDescriptor(std::string id, FeatureSet features, GrayBoxSpec gray_box,
                    ValidityFrame frame, int compute_rank,
                    std::optional<std::string> extends = std::nullopt);

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] const FeatureSet& features() const noexcept { return features_; }
    [[nodiscard]] const GrayBoxSpec& gray_box() const noexcept { return gray_box_; }
    [[nodiscard]] const ValidityFrame& frame() const noexcept { return frame_; }
    [[nodiscard]] const CostProfile& cost() const noexcept { return cost_; }
    [[nodiscard]] const std::optional<std::string>& extends() const noexcept { return extends_; }

private:
    std::string id_;
    FeatureSet features_;
    GrayBoxSpec gray_box_;
    ValidityFrame frame_;
    CostProfile cost_;
    std::optional<std::string> extends_;
};

/// Ordered collection of descriptors with unique ids. An `extends` link must
/// point at an already registered model with a strictly smaller feature set.
class ModelRegistry {
public:
    void add(ModelDescriptor model);

    [[nodiscard]] const ModelDescriptor& get(std::string_view id) const;
    [[nodiscard]] const ModelDescriptor* find(std::string_view id) const;
    [[nodiscard]] std::span<const ModelDescriptor> models() const noexcept { return models_; }
    [[nodiscard]] std::size_t size() const noexcept { return models_.size(); }

private:
    std::vector<ModelDescriptor> models_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

enum class FidelityRelation { Higher, Lower, Equal, Incomparable };
enum class IncreaseKind { AlgebraicExtension, Replacement };

std::string_view to_string(FidelityRelation rel) noexcept;
std::string_view to_string(IncreaseKind kind) noexcept;

/// Relation of `a` to `b` under set inclusion.
[[nodiscard]] FidelityRelation compare_fidelity(const FeatureSet& a, const FeatureSet& b);

/// Throws PreconditionViolation unless `higher` has strictly more features.
[[nodiscard]] IncreaseKind classify_increase(const ModelDescriptor& lower,
                                             const ModelDescriptor& higher);

struct ValidityVerdict {
    bool valid = true;
    std::vector<ValidityPredicate> failed_predicates;
    std::vector<std::string> missing_features;
};

[[nodiscard]] ValidityVerdict is_valid(const ModelDescriptor& model, const Scenario& scenario);

/// Lowest valid fidelity, then least cost, then smallest id.
///
/// Models that do not cover the scenario's required features are discarded
/// before their frames are evaluated, so a scenario only needs to carry the
/// parameters of models that could satisfy it.
[[nodiscard]] const ModelDescriptor& select_model(std::span<const ModelDescriptor> registry,
                                                  const Scenario& scenario);

enum class RenderFormat { Text, Json };

[[nodiscard]] std::string render_gray_box(const ModelDescriptor& model, RenderFormat format);

}  // namespace mfid
