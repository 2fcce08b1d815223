#include "mfid/beam.hpp"

#include <cmath>
#include <string>

#include "mfid/error.hpp"
#include "mfid/format.hpp"

namespace mfid::beam {
namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorCode::NonPositiveDimension,
                    std::string(name) + " must be positive and finite, got " + shortest(value));
    }
}

void check_domain(const BeamLoadCase& c, std::span<const double> xs) {
    for (double x : xs) {
        if (!(x >= 0.0 && x <= c.L())) {
            throw Error(ErrorCode::OutOfDomain,
                        "x=" + shortest(x) + " outside [0, " + shortest(c.L()) + "]");
        }
    }
}

// Bending-only closed forms, shared verbatim by both theories.
double bending_rotation(const BeamLoadCase& c, double EI, double x) {
    const double L = c.L();
    return c.P() / (2.0 * EI) * (L * L - x * x);
}

double bending_deflection(const BeamLoadCase& c, double EI, double x) {
    const double L = c.L();
    return c.P() / (6.0 * EI) * (-x * x * x + 3.0 * L * L * x - 2.0 * L * L * L);
}

}  // namespace

BeamLoadCase::BeamLoadCase(double P, double E, double L, Section section, ShearData shear,
                           double kappa)
    : P_(P), E_(E), L_(L), section_(section), shear_(shear), kappa_(kappa) {
    require_positive(P, "P");
    require_positive(E, "E");
    require_positive(L, "L");
    if (const auto* r = std::get_if<RectangularSection>(&section_)) {
        require_positive(r->b, "b");
        require_positive(r->h, "h");
    } else {
        const auto& d = std::get<DirectSection>(section_);
        require_positive(d.I, "I");
        require_positive(d.A, "A");
        require_positive(d.h, "h");
    }
    if (const auto* g = std::get_if<ShearModulus>(&shear_)) require_positive(g->G, "G");
    if (const auto* p = std::get_if<PoissonRatio>(&shear_)) {
        if (!(p->nu > -1.0 && p->nu <= 0.5)) {
            throw Error(ErrorCode::InvalidArgument, "Poisson ratio must lie in (-1, 0.5]");
        }
    }
    if (!(kappa_ > 0.0 && kappa_ <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "shear correction factor must lie in (0, 1]");
    }
}

double BeamLoadCase::I() const noexcept {
    if (const auto* r = std::get_if<RectangularSection>(&section_)) return r->b * r->h * r->h * r->h / 12.0;
    return std::get<DirectSection>(section_).I;
}

double BeamLoadCase::A() const noexcept {
    if (const auto* r = std::get_if<RectangularSection>(&section_)) return r->b * r->h;
    return std::get<DirectSection>(section_).A;
}

double BeamLoadCase::h() const noexcept {
    return std::visit([](const auto& s) { return s.h; }, section_);
}

double BeamLoadCase::G() const {
    if (const auto* g = std::get_if<ShearModulus>(&shear_)) return g->G;
    if (const auto* p = std::get_if<PoissonRatio>(&shear_)) return E_ / (2.0 * (1.0 + p->nu));
    throw Error(ErrorCode::MissingShearData, "shear modulus or Poisson ratio required");
}

BeamLoadCase BeamLoadCase::with_length(double L) const {
    return {P_, E_, L, section_, shear_, kappa_};
}

double slenderness(double L, double h) {
    require_positive(L, "L");
    require_positive(h, "h");
    return L / h;
}

std::vector<double> stations(double L, int n) {
    require_positive(L, "L");
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two stations");
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = L * i / (n - 1);
    xs.back() = L;
    return xs;
}

DeflectionProfile eb_profile(const BeamLoadCase& c, std::span<const double> xs) {
    check_domain(c, xs);
    const double EI = c.E() * c.I();
    DeflectionProfile out{{xs.begin(), xs.end()}, {}, {}};
    out.theta.reserve(xs.size());
    out.v.reserve(xs.size());
    for (double x : xs) {
        out.theta.push_back(bending_rotation(c, EI, x));
        out.v.push_back(bending_deflection(c, EI, x));
    }
    return out;
}

double shear_compliance_term(const BeamLoadCase& c) {
    return c.P() / (c.kappa() * c.A() * c.G());
}

DeflectionProfile te_profile(const BeamLoadCase& c, std::span<const double> xs) {
    const double shear = shear_compliance_term(c);
    DeflectionProfile out = eb_profile(c, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.theta[i] = shear + out.theta[i];
        out.v[i] = out.v[i] - shear * (c.L() - xs[i]);
    }
    return out;
}

namespace {

GrayBoxSpec eb_gray_box() {
    return {
        .inputs = {{"Tip load", 1, "point load P at the free end"},
                   {"Material", 1, "Young's modulus E"},
                   {"Beam geometry", 3, "length L, section width b and height h"}},
        .relations = {{"bending moment integrated twice into rotation and deflection polynomials",
                       {"bending-deflection"}}},
        .outputs = {{"angular deflection theta(x)", "rad"}, {"vertical deflection v(x)", "m"}},
    };
}

}  // namespace

ModelDescriptor eb_descriptor() {
    ValidityFrame frame{{{"slenderness", PredicateRelation::GreaterEqual, 10.0}}};
    return {"beam.eb", FeatureSet{"bending-deflection"}, eb_gray_box(), frame, 1};
}

ModelDescriptor te_descriptor() {
    GrayBoxSpec box = eb_gray_box();
    box.inputs.push_back({"Shear properties", 2, "shear modulus G (or Poisson ratio) and correction factor kappa"});
    box.relations.push_back({"shear strain term P/(kappa A G) superposed on the bending solution",
                             {"bending-deflection", "shear-deflection"}});
    return {"beam.te", FeatureSet{"bending-deflection", "shear-deflection"}, std::move(box),
            ValidityFrame{}, 1, "beam.eb"};
}

}  // namespace mfid::beam
