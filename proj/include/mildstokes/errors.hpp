#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mildstokes {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroLeadingTerm : Error {
    ZeroLeadingTerm() : Error("leading coefficient is zero") {}
};

struct RamificationCapExceeded : Error {
    explicit RamificationCapExceeded(int m)
        : Error("ramification " + std::to_string(m) + " exceeds the cap") {}
};

struct InsufficientTruncation : Error {
    InsufficientTruncation() : Error("truncation window too narrow for this operation") {}
};

struct EqualExponents : Error {
    EqualExponents() : Error("exponents coincide as orbit representatives") {}
};

struct NotRootOfUnity : Error {
    NotRootOfUnity() : Error("zeta is not an m-th root of unity") {}
};

struct FullCircleArc : Error {
    FullCircleArc() : Error("arc must be a proper open interval of the circle") {}
};

struct PoleAt : Error {
    explicit PoleAt(std::complex<double> z)
        : Error("Gamma pole at z = " + std::to_string(z.real()) + "+" +
                std::to_string(z.imag()) + "i"),
          where(z) {}
    std::complex<double> where;
};

struct RayHitsPole : Error {
    RayHitsPole() : Error("ray passes through or too close to a Gamma pole") {}
};

struct IntegerInput : Error {
    IntegerInput() : Error("input must not be an integer") {}
};

struct NotMild : Error {
    NotMild() : Error("system is not mild (pole in A or singular A(0))") {}
};

struct ClusteredEigenvalues : Error {
    ClusteredEigenvalues() : Error("eigenvalue clusters of A(0) are not separated") {}
};

struct UnsupportedFormalStructure : Error {
    explicit UnsupportedFormalStructure(const std::string& what_block)
        : Error("formal reduction unsupported: " + what_block) {}
};

struct SeedDivergence : Error {
    SeedDivergence() : Error("flat-section seed failed to satisfy the recurrence") {}
};

struct StokesLineInArc : Error {
    StokesLineInArc() : Error("requested arc contains a Stokes direction") {}
};

struct NormalizationViolated : Error {
    NormalizationViolated() : Error("exponent violates the operator normalization inequality") {}
};

struct QuadratureNoConvergence : Error {
    QuadratureNoConvergence() : Error("contour quadrature did not converge") {}
};

struct MissingCompanions : Error {
    MissingCompanions() : Error("samples lack s+1 companions needed for the residual") {}
};

struct InsufficientSamples : Error {
    InsufficientSamples() : Error("growth fit needs >= 8 samples spanning a factor >= 4") {}
};

struct CertificationFailed : Error {
    explicit CertificationFailed(const std::string& which)
        : Error("cocycle certification failed: " + which) {}
};

struct InconsistentData : Error {
    explicit InconsistentData(const std::string& why) : Error("inconsistent data: " + why) {}
};

struct NonMildExponent : Error {
    NonMildExponent() : Error("exponent has s-degree > 1") {}
};

struct ExpansionError : Error {
    explicit ExpansionError(const std::string& why) : Error("cannot expand entry: " + why) {}
};

}  // namespace mildstokes
