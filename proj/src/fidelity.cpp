#include "mfid/fidelity.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "mfid/error.hpp"
#include "mfid/format.hpp"

namespace mfid {

// ---------------------------------------------------------------------------
// FeatureSet
// ---------------------------------------------------------------------------

FeatureSet::FeatureSet(std::initializer_list<std::string_view> tags) {
    for (auto t : tags) tags_.emplace(t);
}

FeatureSet::FeatureSet(std::span<const std::string> tags) {
    for (const auto& t : tags) tags_.emplace(t);
}

bool FeatureSet::contains(std::string_view tag) const {
    return std::any_of(tags_.begin(), tags_.end(), [&](const auto& t) { return t.id() == tag; });
}

bool FeatureSet::includes(const FeatureSet& other) const {
    return std::includes(tags_.begin(), tags_.end(), other.tags_.begin(), other.tags_.end());
}

FeatureSet FeatureSet::united_with(const FeatureSet& other) const {
    FeatureSet out = *this;
    out.tags_.insert(other.tags_.begin(), other.tags_.end());
    return out;
}

std::vector<std::string> FeatureSet::sorted_ids() const {
    std::vector<std::string> ids;
    ids.reserve(tags_.size());
    for (const auto& t : tags_) ids.push_back(t.id());
    return ids;
}

int GrayBoxSpec::total_arity() const {
    return std::accumulate(inputs.begin(), inputs.end(), 0,
                           [](int acc, const InputGroup& g) { return acc + g.arity; });
}

// ---------------------------------------------------------------------------
// Validity predicates
// ---------------------------------------------------------------------------

std::string_view to_symbol(PredicateRelation rel) noexcept {
    switch (rel) {
        case PredicateRelation::Less: return "<";
        case PredicateRelation::LessEqual: return "<=";
        case PredicateRelation::Greater: return ">";
        case PredicateRelation::GreaterEqual: return ">=";
        case PredicateRelation::Equal: return "=";
        case PredicateRelation::InSet: return "in";
    }
    return "?";
}

namespace {

std::string describe_threshold(const Threshold& t) {
    if (const auto* d = std::get_if<double>(&t)) return shortest(*d);
    if (const auto* s = std::get_if<std::string>(&t)) return *s;
    std::string out = "{";
    bool first = true;
    for (const auto& tok : std::get<std::set<std::string>>(t)) {
        if (!first) out += ", ";
        out += tok;
        first = false;
    }
    return out + "}";
}

}  // namespace

bool ValidityPredicate::holds(const Scenario& scenario) const {
    const auto it = scenario.params.find(parameter);
    if (it == scenario.params.end()) {
        throw Error(ErrorCode::MissingParameter,
                    "scenario has no parameter '" + parameter + "' required by " + describe());
    }
    const ParamValue& value = it->second;
    const auto mismatch = [&] {
        return Error(ErrorCode::ParameterTypeMismatch,
                     "parameter '" + parameter + "' has the wrong kind for " + describe());
    };

    switch (relation) {
        case PredicateRelation::Less:
        case PredicateRelation::LessEqual:
        case PredicateRelation::Greater:
        case PredicateRelation::GreaterEqual: {
            const auto* v = std::get_if<double>(&value);
            const auto* t = std::get_if<double>(&threshold);
            if (v == nullptr || t == nullptr) throw mismatch();
            switch (relation) {
                case PredicateRelation::Less: return *v < *t;
                case PredicateRelation::LessEqual: return *v <= *t;
                case PredicateRelation::Greater: return *v > *t;
                default: return *v >= *t;
            }
        }
        case PredicateRelation::Equal:
            if (const auto* t = std::get_if<double>(&threshold)) {
                const auto* v = std::get_if<double>(&value);
                if (v == nullptr) throw mismatch();
                return *v == *t;
            }
            if (const auto* t = std::get_if<std::string>(&threshold)) {
                const auto* v = std::get_if<std::string>(&value);
                if (v == nullptr) throw mismatch();
                return *v == *t;
            }
            throw mismatch();
        case PredicateRelation::InSet: {
            const auto* t = std::get_if<std::set<std::string>>(&threshold);
            const auto* v = std::get_if<std::string>(&value);
            if (v == nullptr || t == nullptr) throw mismatch();
            return t->contains(*v);
        }
    }
    throw mismatch();
}

std::string ValidityPredicate::describe() const {
    return parameter + " " + std::string(to_symbol(relation)) + " " + describe_threshold(threshold);
}

// ---------------------------------------------------------------------------
// Descriptor and registry
// ---------------------------------------------------------------------------

ModelDescriptor::ModelDescriptor(std::string id, FeatureSet features, GrayBoxSpec gray_box,
                                 ValidityFrame frame, int compute_rank,
                                 std::optional<std::string> extends)
    : id_(std::move(id)),
      features_(std::move(features)),
      gray_box_(std::move(gray_box)),
      frame_(std::move(frame)),
      extends_(std::move(extends)) {
    if (id_.empty()) throw Error(ErrorCode::InvalidArgument, "model id is empty");
    if (gray_box_.inputs.empty() || gray_box_.outputs.empty()) {
        throw Error(ErrorCode::InvalidArgument, id_ + ": gray box needs inputs and outputs");
    }
    for (const auto& group : gray_box_.inputs) {
        if (group.arity < 1) {
            throw Error(ErrorCode::InvalidArgument,
                        id_ + ": input group '" + group.label + "' has arity < 1");
        }
    }
    for (const auto& rel : gray_box_.relations) {
        if (rel.tags.empty()) {
            throw Error(ErrorCode::InvalidArgument,
                        id_ + ": relation '" + rel.text + "' references no phenomenon");
        }
        for (const auto& tag : rel.tags) {
            if (!features_.contains(PhenomenonTag(tag))) {
                throw Error(ErrorCode::InvalidArgument,
                            id_ + ": relation references '" + tag + "' outside the feature set");
            }
        }
    }
    if (compute_rank < 1 || compute_rank > 3) {
        throw Error(ErrorCode::InvalidArgument, id_ + ": compute_rank must be 1, 2 or 3");
    }
    cost_ = CostProfile{gray_box_.total_arity(), compute_rank};
}

void ModelRegistry::add(ModelDescriptor model) {
    if (find(model.id()) != nullptr) {
        throw Error(ErrorCode::DuplicateModel, "model '" + model.id() + "' already registered");
    }
    if (const auto& base_id = model.extends()) {
        const auto* base = find(*base_id);
        if (base == nullptr) {
            throw Error(ErrorCode::UnknownModel,
                        model.id() + " extends unregistered model '" + *base_id + "'");
        }
        if (compare_fidelity(model.features(), base->features()) != FidelityRelation::Higher) {
            throw Error(ErrorCode::InvalidArgument,
                        model.id() + " must strictly add features to " + *base_id);
        }
    }
    models_.push_back(std::move(model));
}

const ModelDescriptor* ModelRegistry::find(std::string_view id) const {
    const auto it = std::find_if(models_.begin(), models_.end(),
                                 [&](const ModelDescriptor& m) { return m.id() == id; });
    return it == models_.end() ? nullptr : &*it;
}

const ModelDescriptor& ModelRegistry::get(std::string_view id) const {
    if (const auto* m = find(id)) return *m;
    throw Error(ErrorCode::UnknownModel, "no model '" + std::string(id) + "'");
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

std::string_view to_string(FidelityRelation rel) noexcept {
    switch (rel) {
        case FidelityRelation::Higher: return "Higher";
        case FidelityRelation::Lower: return "Lower";
        case FidelityRelation::Equal: return "Equal";
        case FidelityRelation::Incomparable: return "Incomparable";
    }
    return "?";
}

std::string_view to_string(IncreaseKind kind) noexcept {
    return kind == IncreaseKind::AlgebraicExtension ? "AlgebraicExtension" : "Replacement";
}

FidelityRelation compare_fidelity(const FeatureSet& a, const FeatureSet& b) {
    const bool a_has_b = a.includes(b);
    const bool b_has_a = b.includes(a);
    if (a_has_b && b_has_a) return FidelityRelation::Equal;
    if (a_has_b) return FidelityRelation::Higher;
    if (b_has_a) return FidelityRelation::Lower;
    return FidelityRelation::Incomparable;
}

IncreaseKind classify_increase(const ModelDescriptor& lower, const ModelDescriptor& higher) {
    const auto rel = compare_fidelity(higher.features(), lower.features());
    if (rel != FidelityRelation::Higher) {
        throw Error(ErrorCode::PreconditionViolation,
                    higher.id() + " is " + std::string(to_string(rel)) + ", not Higher, than " +
                        lower.id());
    }
    return higher.extends() == lower.id() ? IncreaseKind::AlgebraicExtension
                                          : IncreaseKind::Replacement;
}

ValidityVerdict is_valid(const ModelDescriptor& model, const Scenario& scenario) {
    ValidityVerdict verdict;
    for (const auto& tag : scenario.required_features) {
        if (!model.features().contains(tag)) verdict.missing_features.push_back(tag.id());
    }
    for (const auto& pred : model.frame().predicates) {
        if (!pred.holds(scenario)) verdict.failed_predicates.push_back(pred);
    }
    verdict.valid = verdict.missing_features.empty() && verdict.failed_predicates.empty();
    return verdict;
}

const ModelDescriptor& select_model(std::span<const ModelDescriptor> registry,
                                    const Scenario& scenario) {
    if (registry.empty()) throw Error(ErrorCode::PreconditionViolation, "registry is empty");

    std::vector<const ModelDescriptor*> valid;
    for (const auto& m : registry) {
        if (!m.features().includes(scenario.required_features)) continue;
        if (is_valid(m, scenario).valid) valid.push_back(&m);
    }
    if (valid.empty()) throw Error(ErrorCode::NoValidModel, "no registered model is valid");

    // Minimal elements: nothing valid sits strictly below them.
    std::vector<const ModelDescriptor*> minimal;
    for (const auto* m : valid) {
        const bool dominated = std::any_of(valid.begin(), valid.end(), [&](const auto* other) {
            return compare_fidelity(m->features(), other->features()) == FidelityRelation::Higher;
        });
        if (!dominated) minimal.push_back(m);
    }

    const auto best = std::min_element(minimal.begin(), minimal.end(), [](auto* a, auto* b) {
        return std::tie(a->cost().compute_rank, a->cost().input_count, a->id()) <
               std::tie(b->cost().compute_rank, b->cost().input_count, b->id());
    });
    return **best;
}

}  // namespace mfid
