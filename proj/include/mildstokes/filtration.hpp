#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mildstokes/sectorial.hpp"

namespace mildstokes {

enum class APerKind { SmallV, SmallU, LaurentPoly };

const char* to_string(APerKind k);

/// The ring of periodic sections over an arc: convergent series in v = u^{-1}
/// with a pole (upper arcs), in u (lower arcs), or Laurent polynomials when
/// the arc meets e^0 or e^{i pi}.
struct APerRingModel {
    Arc arc;
    APerKind kind;
};

APerRingModel aper_ring(const Arc& arc);

/// Cyclically ordered arcs with adjacent-only overlaps, theta-ascending.
/// branch_lo/hi give each arc's lifted sigma-window; they descend with the
/// index and the seam between the last and first arc closes with -2 pi.
struct Covering {
    std::vector<Arc> arcs;
    std::vector<double> branch_lo, branch_hi;

    int size() const { return static_cast<int>(arcs.size()); }
    bool is_seam(int alpha) const { return alpha == size() - 1; }
    /// Lifted sigma-window of overlap alpha (between arcs alpha and alpha+1).
    std::pair<double, double> overlap_sigma(int alpha) const;
};

Covering make_covering(const std::vector<double>& forbidden_theta);
/// Arcs separated by the Stokes directions of all exponent-pair differences
/// plus the two special points e^0 and e^{i pi}.
Covering default_covering(const FormalDatum& fd);

/// arg(s) for points of arc alpha at lifted direction sigma; `across` selects
/// the far side of the seam (arc 0 seen from the last arc).
inline double arc_branch_arg(const Covering& cov, int alpha, double sigma, bool across) {
    (void)cov;
    (void)alpha;
    return across ? sigma + 2.0 * 3.14159265358979323846 : sigma;
}

/// Exponent as seen after `turns` full positive turns: c_l -> c_l e^{2 pi i l turns / m}.
Exponent lifted_exponent(const Exponent& a, int turns);

struct OverlapCertRecord {
    int row_block = 0;
    int col_block = 0;
    bool diagonal_pair = false;
    GrowthFit fit;
    bool pass = false;
};

struct OverlapData {
    int index = 0;   // between arcs index and index+1 (mod N)
    double sigma = 0.0;  // sampling ray, lifted branch of arc `index`
    std::vector<cx> s;
    std::vector<Eigen::MatrixXcd> g;  // W_alpha(s)^{-1} W_{alpha+1}(s)
    std::vector<int> pairing;         // arc alpha+1 block j pairs with block pairing[j]
    std::vector<Eigen::MatrixXcd> limits;  // fitted limit per arc-(alpha+1) block
    std::vector<OverlapCertRecord> certs;
    bool certified = false;
};

struct StokesCocycle {
    Covering covering;
    FormalDatum datum;
    std::vector<OverlapData> overlaps;
    bool certified = false;
    // adjacent-only coverings have no triple overlaps; the 1-cocycle
    // condition holds vacuously and is recorded rather than tested
    bool cocycle_condition_vacuous = true;
};

struct GradedOrbit {
    Exponent rep;  // canonical
    int rank = 0;
    Eigen::MatrixXcd monodromy;
};

struct GradedDatum {
    int ram = 1;
    std::vector<GradedOrbit> orbits;
    int rank() const {
        int r = 0;
        for (const auto& o : orbits) r += o.rank;
        return r;
    }
};

/// Fundamental solution of arc `alpha` evaluated at s with branch arg_s.
using SolutionEvaluator = std::function<Eigen::MatrixXcd(int alpha, cx s, double arg_s)>;

SolutionEvaluator make_elementary_evaluator(const FormalDatum& fd);
SolutionEvaluator make_gauge_evaluator(const FormalReduction& red);

struct CocycleParams {
    double r0 = 1.2;
    double r1 = 5.5;
    int n = 24;
    double noise_rel = 5e-13;  // per-sample certification floor
    double mu_tol = 1e-3;
    bool throw_on_failure = true;
};

/// Per-overlap transition data g = W_alpha^{-1} W_{alpha+1}, block limits
/// fitted on the largest-|s| quartile, off-pairs certified rapid-decay
/// against the exponent growth order on the overlap.
StokesCocycle cocycle_from_solutions(const FormalDatum& fd, const Covering& cov,
                                     const SolutionEvaluator& W, const CocycleParams& cp,
                                     ExecPolicy pol = kDefaultPolicy);

/// Orbit representatives, ranks, and monodromies; the monodromy follows the
/// pairing cycle of fitted limits around the circle (m-fold for ramified).
GradedDatum grading(const StokesCocycle& sc);
GradedDatum grading(const FormalDatum& fd);  // graded case: monodromy e^{2 pi i m G}

std::vector<Exponent> tensor_indices(const std::vector<Exponent>& s1,
                                     const std::vector<Exponent>& s2);
std::vector<Exponent> hom_indices(const std::vector<Exponent>& s1,
                                  const std::vector<Exponent>& s2);

/// The computational presentation of a Stokes filtered module: graded datum,
/// covering, cocycle, and the per-arc filtration level of each frame column.
struct FilteredModuleDatum {
    GradedDatum graded;
    Covering covering;
    StokesCocycle cocycle;
    FormalDatum datum;

    /// Filtration level realized by column `col` on arc `alpha`, after
    /// multiplying the section by u^n.
    Exponent level(int col, int alpha, int u_power = 0) const;
    /// Column membership in L_{<= b} over (a sub-arc of) arc alpha.
    bool in_level(int col, const Exponent& b, const Arc& sub) const;
};

FilteredModuleDatum rh_assemble(const FormalDatum& fd, const StokesCocycle& sc);

void write_filtered_datum(const FilteredModuleDatum& fmd, const std::string& path,
                          const std::string& csv_dir);

}  // namespace mildstokes
