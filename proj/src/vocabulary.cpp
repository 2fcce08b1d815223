#include <algorithm>
#include <array>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>

#include "mfid/error.hpp"
#include "mfid/fidelity.hpp"

namespace mfid {
namespace {

constexpr std::array kBuiltinTags = {
    // beams
    "bending-deflection",
    "shear-deflection",
    // spring-mass-damper
    "modal-parameters",
    "step-forcing",
    "energy-dissipation-dynamics",
    "time-domain-integration",
    // gradeability
    "coulomb-friction",
    "quasi-static-grade-load-distribution",
    "tip-over-stability",
    "traction-limit",
    "torque-limit",
    "suspension-spring-settling",
    "dynamic-weight-transfer",
    "engine-torque-map",
    "torque-converter",
    "suspension-damping",
    "pitch-dynamics",
};

struct Vocabulary {
    std::shared_mutex mutex;
    std::set<std::string, std::less<>> tags{kBuiltinTags.begin(), kBuiltinTags.end()};
};

Vocabulary& vocabulary() {
    static Vocabulary v;
    return v;
}

bool well_formed(std::string_view tag) {
    if (tag.empty() || tag.front() < 'a' || tag.front() > 'z' || tag.back() == '-') return false;
    return std::all_of(tag.begin(), tag.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
}

}  // namespace

bool register_phenomenon(std::string_view tag) {
    if (!well_formed(tag)) {
        throw Error(ErrorCode::InvalidArgument,
                    "phenomenon tag '" + std::string(tag) + "' is not a lowercase token");
    }
    auto& v = vocabulary();
    std::unique_lock lock(v.mutex);
    return v.tags.emplace(tag).second;
}

bool is_registered_phenomenon(std::string_view tag) {
    auto& v = vocabulary();
    std::shared_lock lock(v.mutex);
    return v.tags.find(tag) != v.tags.end();
}

std::vector<std::string> phenomenon_vocabulary() {
    auto& v = vocabulary();
    std::shared_lock lock(v.mutex);
    return {v.tags.begin(), v.tags.end()};
}

PhenomenonTag::PhenomenonTag(std::string_view id) : id_(id) {
    if (!is_registered_phenomenon(id)) {
        throw Error(ErrorCode::UnknownPhenomenon, "'" + id_ + "' is not in the vocabulary");
    }
}

}  // namespace mfid
