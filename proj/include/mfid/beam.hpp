#pragma once

// Cantilever with a point load at the free end (x = 0), clamped at x = L.
// Euler-Bernoulli bending only; Timoshenko-Ehrenfest adds the shear terms
// on top of the unchanged bending terms.

#include <span>
#include <variant>
#include <vector>

#include "mfid/fidelity.hpp"

namespace mfid::beam {

struct RectangularSection {
    double b = 0.0;  // width (m)
    double h = 0.0;  // height (m)
};

struct DirectSection {
    double I = 0.0;  // second moment of area (m^4)
    double A = 0.0;  // area (m^2)
    double h = 0.0;  // height (m), used for slenderness
};

using Section = std::variant<RectangularSection, DirectSection>;

struct ShearModulus {
    double G = 0.0;  // Pa
};
struct PoissonRatio {
    double nu = 0.0;
};
using ShearData = std::variant<std::monostate, ShearModulus, PoissonRatio>;

inline constexpr double kRectangularShearCorrection = 5.0 / 6.0;

/// Validated load case. Throws NonPositiveDimension / InvalidArgument.
class BeamLoadCase {
public:
    BeamLoadCase(double P, double E, double L, Section section, ShearData shear = {},
                 double kappa = kRectangularShearCorrection);

    [[nodiscard]] double P() const noexcept { return P_; }
    [[nodiscard]] double E() const noexcept { return E_; }
    [[nodiscard]] double L() const noexcept { return L_; }
    [[nodiscard]] double kappa() const noexcept { return kappa_; }
    [[nodiscard]] const Section& section() const noexcept { return section_; }
    [[nodiscard]] const ShearData& shear() const noexcept { return shear_; }

    [[nodiscard]] double I() const noexcept;
    [[nodiscard]] double A() const noexcept;
    [[nodiscard]] double h() const noexcept;
    /// Throws MissingShearData when neither G nor nu was given.
    [[nodiscard]] double G() const;

    [[nodiscard]] BeamLoadCase with_length(double L) const;

private:
    double P_, E_, L_;
    Section section_;
    ShearData shear_;
    double kappa_;
};

struct DeflectionProfile {
    std::vector<double> xs;
    std::vector<double> theta;  // rad
    std::vector<double> v;      // m
};

/// L / h. Throws NonPositiveDimension.
[[nodiscard]] double slenderness(double L, double h);

/// Throws OutOfDomain for any x outside [0, L].
[[nodiscard]] DeflectionProfile eb_profile(const BeamLoadCase& c, std::span<const double> xs);
[[nodiscard]] DeflectionProfile te_profile(const BeamLoadCase& c, std::span<const double> xs);

/// P / (kappa A G): the shear contribution to rotation, and per unit
/// (L - x) to deflection.
[[nodiscard]] double shear_compliance_term(const BeamLoadCase& c);

/// `n` evenly spaced positions over [0, L], endpoints included.
[[nodiscard]] std::vector<double> stations(double L, int n);

[[nodiscard]] ModelDescriptor eb_descriptor();
[[nodiscard]] ModelDescriptor te_descriptor();

}  // namespace mfid::beam
