#include <doctest.h>

#include <algorithm>
#include <random>

#include "mfid/error.hpp"
#include "mfid/fidelity.hpp"
#include "mfid/gray_box_json.hpp"
#include "mfid/harness.hpp"

using namespace mfid;

namespace {

const ModelRegistry& reg() { return harness::builtin_registry(); }

Scenario beam_scenario(double slenderness) {
    Scenario s;
    s.params["slenderness"] = slenderness;
    s.required_features = FeatureSet{"bending-deflection"};
    return s;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an mfid::Error");
    return ErrorCode::InvalidArgument;
}

ModelDescriptor toy(std::string id, FeatureSet fs, ValidityFrame frame = {}, int rank = 1,
                    std::optional<std::string> extends = std::nullopt) {
    GrayBoxSpec gb;
    gb.inputs = {{"x", 1, "input"}};
    for (const auto& t : fs) gb.relations.push_back({"relation for " + t.id(), {t.id()}});
    gb.outputs = {{"y", "1"}};
    return ModelDescriptor(std::move(id), std::move(fs), gb, std::move(frame), rank, std::move(extends));
}

}  // namespace

TEST_CASE("vocabulary rejects unknown and malformed tags") {
    CHECK(is_registered_phenomenon("shear-deflection"));
    CHECK(code_of([] { (void)PhenomenonTag("warp-drive"); }) == ErrorCode::UnknownPhenomenon);
    CHECK(code_of([] { (void)register_phenomenon("Bad Tag"); }) == ErrorCode::InvalidArgument);
    CHECK(register_phenomenon("test-only-tag"));
    CHECK_FALSE(register_phenomenon("test-only-tag"));
    CHECK(PhenomenonTag("test-only-tag").id() == "test-only-tag");
}

TEST_CASE("compare_fidelity on the documented pairs") {
    const auto& eb = reg().get("beam.eb").features();
    const auto& te = reg().get("beam.te").features();
    CHECK(compare_fidelity(eb, te) == FidelityRelation::Lower);
    CHECK(compare_fidelity(te, eb) == FidelityRelation::Higher);
    CHECK(compare_fidelity(te, te) == FidelityRelation::Equal);
    CHECK(compare_fidelity(FeatureSet{"bending-deflection"}, FeatureSet{"coulomb-friction"}) ==
          FidelityRelation::Incomparable);
    CHECK(compare_fidelity(FeatureSet{}, FeatureSet{}) == FidelityRelation::Equal);
}

TEST_CASE("fidelity order is a partial order over random subsets") {
    const auto vocab = phenomenon_vocabulary();
    std::mt19937_64 rng(11);
    std::vector<FeatureSet> sets;
    for (const auto& m : reg().models()) sets.push_back(m.features());
    for (int i = 0; i < 200; ++i) {
        FeatureSet fs;
        for (const auto& t : vocab) {
            if (rng() % 4 == 0) fs.insert(PhenomenonTag(t));
        }
        sets.push_back(fs);
    }
    auto leq = [](const FeatureSet& a, const FeatureSet& b) {
        const auto r = compare_fidelity(a, b);
        return r == FidelityRelation::Lower || r == FidelityRelation::Equal;
    };
    for (std::size_t i = 0; i < sets.size(); ++i) {
        CHECK(compare_fidelity(sets[i], sets[i]) == FidelityRelation::Equal);
        for (std::size_t j = 0; j < sets.size(); j += 7) {
            const auto ab = compare_fidelity(sets[i], sets[j]);
            const auto ba = compare_fidelity(sets[j], sets[i]);
            if (ab == FidelityRelation::Lower) CHECK(ba == FidelityRelation::Higher);
            if (ab == FidelityRelation::Incomparable) CHECK(ba == FidelityRelation::Incomparable);
            if (leq(sets[i], sets[j]) && leq(sets[j], sets[i])) CHECK(sets[i] == sets[j]);
            for (std::size_t k = 0; k < sets.size(); k += 13) {
                if (leq(sets[i], sets[j]) && leq(sets[j], sets[k])) CHECK(leq(sets[i], sets[k]));
            }
        }
    }
}

TEST_CASE("classify_increase") {
    CHECK(classify_increase(reg().get("beam.eb"), reg().get("beam.te")) == IncreaseKind::AlgebraicExtension);
    CHECK(classify_increase(reg().get("smd.heuristic"), reg().get("smd.numeric")) == IncreaseKind::Replacement);
    CHECK(classify_increase(reg().get("grade.rigid"), reg().get("grade.spring")) ==
          IncreaseKind::AlgebraicExtension);
    CHECK(classify_increase(reg().get("grade.spring"), reg().get("grade.dynamic")) == IncreaseKind::Replacement);
    CHECK(code_of([] { (void)classify_increase(reg().get("beam.te"), reg().get("beam.eb")); }) ==
          ErrorCode::PreconditionViolation);
    CHECK(code_of([] { (void)classify_increase(reg().get("beam.eb"), reg().get("smd.numeric")); }) ==
          ErrorCode::PreconditionViolation);
}

TEST_CASE("validity frames") {
    const auto& eb = reg().get("beam.eb");
    CHECK(is_valid(eb, beam_scenario(10)).valid);

    const auto bad = is_valid(eb, beam_scenario(1));
    CHECK_FALSE(bad.valid);
    REQUIRE(bad.failed_predicates.size() == 1);
    CHECK(bad.failed_predicates[0].parameter == "slenderness");
    CHECK(bad.failed_predicates[0].relation == PredicateRelation::GreaterEqual);
    CHECK(bad.failed_predicates[0].describe() == "slenderness >= 10");

    CHECK(is_valid(toy("free", FeatureSet{"step-forcing"}), Scenario{}).valid);

    Scenario missing;
    CHECK(code_of([&] { (void)is_valid(eb, missing); }) == ErrorCode::MissingParameter);

    Scenario wrong_type;
    wrong_type.params["slenderness"] = std::string("long");
    CHECK(code_of([&] { (void)is_valid(eb, wrong_type); }) == ErrorCode::ParameterTypeMismatch);

    Scenario needs_shear = beam_scenario(20);
    needs_shear.required_features.insert(PhenomenonTag("shear-deflection"));
    const auto v = is_valid(eb, needs_shear);
    CHECK_FALSE(v.valid);
    CHECK(v.missing_features == std::vector<std::string>{"shear-deflection"});
}

TEST_CASE("set-membership predicate") {
    ValidityPredicate p{"forcing", PredicateRelation::InSet, std::set<std::string>{"step", "ramp"}};
    Scenario s;
    s.params["forcing"] = std::string("ramp");
    CHECK(p.holds(s));
    s.params["forcing"] = std::string("impulse");
    CHECK_FALSE(p.holds(s));
    CHECK(p.describe() == "forcing in {ramp, step}");
}

TEST_CASE("select_model picks the cheapest valid lowest fidelity") {
    const std::vector<ModelDescriptor> beams{reg().get("beam.eb"), reg().get("beam.te")};
    CHECK(select_model(beams, beam_scenario(10)).id() == "beam.eb");
    CHECK(select_model(beams, beam_scenario(1)).id() == "beam.te");

    const std::vector<ModelDescriptor> only_eb{reg().get("beam.eb")};
    Scenario shear = beam_scenario(20);
    shear.required_features = FeatureSet{"shear-deflection"};
    CHECK(code_of([&] { (void)select_model(only_eb, shear); }) == ErrorCode::NoValidModel);

    // whole registry: unrelated families are filtered by required features
    CHECK(select_model(reg().models(), beam_scenario(10)).id() == "beam.eb");
    CHECK(select_model(reg().models(), beam_scenario(2)).id() == "beam.te");

    Scenario smd;
    smd.params["zeta"] = 0.1;
    smd.params["forcing"] = std::string("step");
    smd.required_features = FeatureSet{"step-forcing"};
    CHECK(select_model(reg().models(), smd).id() == "smd.heuristic");
    smd.params["zeta"] = 3.0;
    CHECK(select_model(reg().models(), smd).id() == "smd.numeric");

    Scenario grade;
    grade.required_features = FeatureSet{"tip-over-stability"};
    CHECK(select_model(reg().models(), grade).id() == "grade.rigid");
    grade.required_features.insert(PhenomenonTag("pitch-dynamics"));
    CHECK(select_model(reg().models(), grade).id() == "grade.dynamic");
}

TEST_CASE("selection breaks cost ties by rank, inputs, then id") {
    const auto a = toy("z.cheap", FeatureSet{"coulomb-friction"}, {}, 1);
    const auto b = toy("a.costly", FeatureSet{"coulomb-friction"}, {}, 3);
    const auto c = toy("m.same", FeatureSet{"coulomb-friction"}, {}, 1);
    Scenario s;
    s.required_features = FeatureSet{"coulomb-friction"};
    std::vector<ModelDescriptor> models{a, b, c};
    CHECK(select_model(models, s).id() == "m.same");
}

TEST_CASE("selection is invariant under registry permutation") {
    std::vector<ModelDescriptor> models(reg().models().begin(), reg().models().end());
    std::vector<Scenario> scenarios;
    for (double sl : {0.5, 5.0, 10.0, 50.0}) scenarios.push_back(beam_scenario(sl));
    Scenario smd;
    smd.params["zeta"] = 0.3;
    smd.params["forcing"] = std::string("step");
    smd.required_features = FeatureSet{"energy-dissipation-dynamics"};
    scenarios.push_back(smd);

    std::vector<std::string> expected;
    for (const auto& s : scenarios) expected.push_back(select_model(models, s).id());
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::shuffle(models.begin(), models.end(), rng);
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            CHECK(select_model(models, scenarios[i]).id() == expected[i]);
        }
    }
}

TEST_CASE("registry invariants") {
    CHECK(reg().size() == 7);
    ModelRegistry r;
    r.add(reg().get("beam.eb"));
    CHECK(code_of([&] { r.add(reg().get("beam.eb")); }) == ErrorCode::DuplicateModel);
    CHECK(code_of([&] { (void)r.get("beam.xx"); }) == ErrorCode::UnknownModel);
    CHECK(r.find("beam.xx") == nullptr);
    // extends must name a registered, strictly lower model
    CHECK_THROWS_AS(r.add(toy("orphan", FeatureSet{"shear-deflection"}, {}, 1, "nope")), Error);
    CHECK_THROWS_AS(r.add(toy("same", FeatureSet{"bending-deflection"}, {}, 1, "beam.eb")), Error);
}

TEST_CASE("descriptor rejects a relation tagged outside its feature set") {
    GrayBoxSpec gb;
    gb.inputs = {{"x", 1, ""}};
    gb.relations = {{"bending plus shear", {"bending-deflection", "shear-deflection"}}};
    gb.outputs = {{"v", "m"}};
    CHECK_THROWS_AS(ModelDescriptor("bad", FeatureSet{"bending-deflection"}, gb, {}, 1), Error);
    CHECK_NOTHROW(ModelDescriptor("ok", FeatureSet{"bending-deflection", "shear-deflection"}, gb, {}, 1));
    gb.inputs.clear();
    CHECK_THROWS_AS(ModelDescriptor("no-inputs", FeatureSet{"bending-deflection", "shear-deflection"}, gb, {}, 1),
                    Error);
}

TEST_CASE("input counts follow the gray-box arities") {
    for (const auto& m : reg().models()) {
        CHECK(m.cost().input_count == m.gray_box().total_arity());
    }
    CHECK(reg().get("beam.eb").cost().input_count < reg().get("beam.te").cost().input_count);
    CHECK(reg().get("grade.rigid").cost().input_count < reg().get("grade.spring").cost().input_count);
    CHECK(reg().get("grade.spring").cost().input_count < reg().get("grade.dynamic").cost().input_count);
}

TEST_CASE("gray box rendering") {
    const auto te_json = nlohmann::json::parse(render_gray_box(reg().get("beam.te"), RenderFormat::Json));
    bool bending = false, shear = false;
    for (const auto& rel : te_json["relations"]) {
        for (const auto& t : rel["tags"]) {
            bending |= t == "bending-deflection";
            shear |= t == "shear-deflection";
        }
    }
    CHECK(bending);
    CHECK(shear);
    CHECK(te_json["extends"] == "beam.eb");

    const auto rigid = gray_box_json(reg().get("grade.rigid"));
    const auto drivetrain = std::find_if(rigid["inputs"].begin(), rigid["inputs"].end(),
                                         [](const auto& g) { return g["label"] == "Drivetrain"; });
    REQUIRE(drivetrain != rigid["inputs"].end());
    CHECK((*drivetrain)["arity"] == 3);

    for (const auto& m : reg().models()) {
        for (auto fmt : {RenderFormat::Json, RenderFormat::Text}) {
            CHECK(render_gray_box(m, fmt) == render_gray_box(m, fmt));
        }
        CHECK(gray_box_schema_errors(gray_box_json(m)).empty());
    }
    const auto text = render_gray_box(reg().get("beam.eb"), RenderFormat::Text);
    CHECK(text.find("slenderness >= 10") != std::string::npos);

    auto broken = gray_box_json(reg().get("beam.eb"));
    broken.erase("inputs");
    broken["cost"]["compute_rank"] = "one";
    CHECK(gray_box_schema_errors(broken).size() >= 2);
}
