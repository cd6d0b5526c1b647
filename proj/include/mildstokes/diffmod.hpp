#pragma once

#include <vector>

#include "mildstokes/exponents.hpp"
#include "mildstokes/series.hpp"

namespace mildstokes {

/// A rank-r linear difference system with matrix A (series in t, possibly
/// ramified in tau).  Flat sections satisfy y(s) = A(s) y(s+1), i.e.
/// psi(y) = y with psi = A * phi_t acting entrywise.
struct DiffSystem {
    MatrixSeries A;

    DiffSystem() = default;
    explicit DiffSystem(MatrixSeries a) : A(std::move(a)) {}
    int rank() const { return A.n; }
};

/// One block of the elementary model E^a (x) R_G.
struct FormalBlock {
    Exponent a;          // canonical orbit representative
    Eigen::MatrixXcd G;  // square, size = block rank
    int rank() const { return static_cast<int>(G.rows()); }
};

struct FormalDatum {
    int ram = 1;
    std::vector<FormalBlock> blocks;
    int rank() const {
        int r = 0;
        for (const auto& b : blocks) r += b.rank();
        return r;
    }
};

/// Datum plus the gauge that realizes it: A * phi(H) = H * A_model with
/// A_model = graded_module(datum).A, coefficientwise to the window.
struct FormalReduction {
    FormalDatum datum;
    MatrixSeries gauge;
};

/// True iff A has no pole and A(0) is invertible.
bool check_mild(const DiffSystem& sys);

struct SplitResult {
    MatrixSeries gauge;             // H with A * phi(H) = H * blockdiag
    std::vector<DiffSystem> blocks; // cluster order: descending |lambda|, then arg
};

/// Block-diagonalize by the eigenvalue clusters of A(0), order by order up to
/// the truncation window.  Requires cluster separation > 1e-6 * scale.
SplitResult split_by_eigenvalues(const DiffSystem& sys, int order);

struct RankOneFormal {
    Exponent a;
    cx gamma;
    PuiseuxSeries unit;  // v = 1 + O(t) with g = exp(Da) (1+t)^{-gamma} v/phi(v)
};

/// Solve the scalar telescoping equation for a mild scalar series g.
RankOneFormal rank_one_formal(const PuiseuxSeries& g);

FormalDatum formal_datum(const DiffSystem& sys);
FormalReduction formal_reduce(const DiffSystem& sys);

/// Elementary system of the datum: block A_i = exp(a_i(s+1)-a_i(s)) (1+t)^{-G_i}.
DiffSystem graded_module(const FormalDatum& fd, int high = kDefaultOrder);

DiffSystem tensor(const DiffSystem& s1, const DiffSystem& s2);
DiffSystem hom(const DiffSystem& s1, const DiffSystem& s2);
DiffSystem endo(const DiffSystem& s);

std::string to_string(const FormalDatum& fd);

// Reference modules used throughout the test and verification suites.
/// psi = (1+alpha t) phi_t; flat section Gamma(s)/Gamma(s+alpha).
DiffSystem b_alpha(cx alpha, int high = kDefaultOrder);
/// psi = exp(l(s+1)-l(s)) t phi_t with l(s) = s log s; flat section s^{-s} Gamma(s).
DiffSystem e_gamma_model(int high = kDefaultOrder);
DiffSystem trivial_system(int r = 1, int high = kDefaultOrder);

}  // namespace mildstokes
