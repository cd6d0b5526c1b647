#include "mildstokes/diffmod.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace mildstokes {

namespace {

constexpr double kSepTol = 1e-6;

// Unitary 2x2 with prescribed first column, used to swap adjacent Schur
// diagonal entries.
void swap_schur_entries(Eigen::MatrixXcd& T, Eigen::MatrixXcd& Q, int i) {
    cx a = T(i, i), b = T(i, i + 1), c = T(i + 1, i + 1);
    cx x1 = b, x2 = c - a;
    double nx = std::sqrt(std::norm(x1) + std::norm(x2));
    if (nx < 1e-300) return;  // equal eigenvalues, nothing to move
    Eigen::Matrix2cd G;
    G << x1 / nx, -std::conj(x2) / nx, x2 / nx, std::conj(x1) / nx;
    T.middleCols(i, 2) = (T.middleCols(i, 2) * G).eval();
    T.middleRows(i, 2) = (G.adjoint() * T.middleRows(i, 2)).eval();
    Q.middleCols(i, 2) = (Q.middleCols(i, 2) * G).eval();
    T(i + 1, i) = 0.0;
}

// Solve T_p X - X T_q = C for upper-triangular square blocks via
// vectorization; block sizes here are small.
Eigen::MatrixXcd sylvester(const Eigen::MatrixXcd& Tp, const Eigen::MatrixXcd& Tq,
                           const Eigen::MatrixXcd& C) {
    int p = static_cast<int>(Tp.rows()), q = static_cast<int>(Tq.rows());
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(p * q, p * q);
    Eigen::MatrixXcd Iq = Eigen::MatrixXcd::Identity(q, q);
    Eigen::MatrixXcd Ip = Eigen::MatrixXcd::Identity(p, p);
    // vec is column-major: vec(Tp X) = (I (x) Tp) vec X, vec(X Tq) = (Tq^T (x) I) vec X
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < q; ++i) {
            L.block(j * p, i * p, p, p) += Iq(i, j) * Tp - Tq(i, j) * Ip;
        }
    Eigen::VectorXcd rhs(p * q);
    for (int j = 0; j < q; ++j) rhs.segment(j * p, p) = C.col(j);
    Eigen::VectorXcd x = L.fullPivLu().solve(rhs);
    Eigen::MatrixXcd X(p, q);
    for (int j = 0; j < q; ++j) X.col(j) = x.segment(j * p, p);
    return X;
}

MatrixSeries conj_constant(const MatrixSeries& a, const Eigen::MatrixXcd& V,
                           const Eigen::MatrixXcd& Vinv) {
    MatrixSeries r = a;
    for (auto& mk : r.coef) mk = Vinv * mk * V;
    return r;
}

}  // namespace

bool check_mild(const DiffSystem& sys) {
    const MatrixSeries& A = sys.A;
    double fl = kCoeffTol * (1.0 + A.max_abs());
    for (int k = A.low; k < 0; ++k)
        if (A.at(k).cwiseAbs().maxCoeff() > fl) return false;
    Eigen::MatrixXcd A0 = A.at(0);
    double scale = std::max(1.0, A0.cwiseAbs().maxCoeff());
    double det = std::abs(Eigen::PartialPivLU<Eigen::MatrixXcd>(A0).determinant());
    return det > 1e-12 * std::pow(scale, A.n);
}

SplitResult split_by_eigenvalues(const DiffSystem& sys, int order) {
    if (!check_mild(sys)) throw NotMild();
    const int n = sys.A.n;
    const int m = sys.A.ram;
    int N = std::min(order, sys.A.high);

    Eigen::MatrixXcd A0 = sys.A.at(0);
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(A0);
    Eigen::MatrixXcd T = schur.matrixT();
    Eigen::MatrixXcd Q = schur.matrixU();

    double scale = std::max(1.0, A0.cwiseAbs().maxCoeff());
    double sep = kSepTol * scale;
    // merge tolerance above the sqrt(eps) splitting of defective eigenvalues
    double merge = 1e-7 * scale;

    // cluster ids by union-find on the diagonal
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(T(i, i) - T(j, j)) <= merge) parent[static_cast<size_t>(find(i))] = find(j);

    std::vector<int> cid(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) cid[static_cast<size_t>(i)] = find(i);

    // representative eigenvalue per cluster, deterministic cluster order
    std::vector<int> reps;
    for (int i = 0; i < n; ++i)
        if (std::find(reps.begin(), reps.end(), cid[static_cast<size_t>(i)]) == reps.end())
            reps.push_back(cid[static_cast<size_t>(i)]);
    std::sort(reps.begin(), reps.end(), [&](int x, int y) {
        cx lx = T(x, x), ly = T(y, y);
        if (std::abs(std::abs(lx) - std::abs(ly)) > 1e-14) return std::abs(lx) > std::abs(ly);
        return std::arg(lx) < std::arg(ly);
    });
    auto cluster_pos = [&](int id) {
        return static_cast<int>(std::find(reps.begin(), reps.end(), id) - reps.begin());
    };

    if (reps.size() == 1) {
        SplitResult r;
        r.gauge = MatrixSeries::identity(n, m, N);
        MatrixSeries a(n, m, 0, N);
        for (int k = 0; k <= N; ++k) a.ref(k) = sys.A.at(k);
        r.blocks.push_back(DiffSystem(a));
        return r;
    }

    // verify pairwise cluster separation
    for (size_t x = 0; x < reps.size(); ++x)
        for (size_t y = x + 1; y < reps.size(); ++y)
            if (std::abs(T(reps[x], reps[x]) - T(reps[y], reps[y])) <= sep)
                throw ClusteredEigenvalues();

    // bubble the Schur form into cluster-contiguous order
    std::vector<int> key(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) key[static_cast<size_t>(i)] = cluster_pos(cid[static_cast<size_t>(i)]);
    for (bool moved = true; moved;) {
        moved = false;
        for (int i = 0; i + 1 < n; ++i) {
            if (key[static_cast<size_t>(i)] > key[static_cast<size_t>(i + 1)]) {
                swap_schur_entries(T, Q, i);
                std::swap(key[static_cast<size_t>(i)], key[static_cast<size_t>(i + 1)]);
                moved = true;
            }
        }
    }

    std::vector<int> sizes(reps.size(), 0);
    for (int i = 0; i < n; ++i) sizes[static_cast<size_t>(key[static_cast<size_t>(i)])]++;
    std::vector<int> offs(reps.size() + 1, 0);
    for (size_t i = 0; i < reps.size(); ++i) offs[i + 1] = offs[i] + sizes[i];

    // kill the cross-cluster part of T: S upper block-triangular, unit diagonal
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(n, n);
    for (int d = static_cast<int>(reps.size()) - 2; d >= 0; --d) {
        for (int e = d + 1; e < static_cast<int>(reps.size()); ++e) {
            Eigen::MatrixXcd Tp = T.block(offs[static_cast<size_t>(d)], offs[static_cast<size_t>(d)], sizes[static_cast<size_t>(d)], sizes[static_cast<size_t>(d)]);
            Eigen::MatrixXcd Tq = T.block(offs[static_cast<size_t>(e)], offs[static_cast<size_t>(e)], sizes[static_cast<size_t>(e)], sizes[static_cast<size_t>(e)]);
            Eigen::MatrixXcd C = -T.block(offs[static_cast<size_t>(d)], offs[static_cast<size_t>(e)], sizes[static_cast<size_t>(d)], sizes[static_cast<size_t>(e)]);
            Eigen::MatrixXcd X = sylvester(Tp, Tq, C);
            Eigen::MatrixXcd Sde = Eigen::MatrixXcd::Identity(n, n);
            Sde.block(offs[static_cast<size_t>(d)], offs[static_cast<size_t>(e)], sizes[static_cast<size_t>(d)], sizes[static_cast<size_t>(e)]) = X;
            T = (Sde.inverse() * T * Sde).eval();
            S = (S * Sde).eval();
        }
    }

    Eigen::MatrixXcd V = Q * S;
    Eigen::MatrixXcd Vinv = V.inverse();

    MatrixSeries Aw(n, m, 0, N);
    for (int k = 0; k <= N; ++k) Aw.ref(k) = sys.A.at(k);
    MatrixSeries M = conj_constant(Aw, V, Vinv);
    Eigen::MatrixXcd M0 = M.at(0);

    // order-by-order gauge: M phi(H) = H A', H_k zero on diagonal blocks
    std::vector<Eigen::MatrixXcd> H(static_cast<size_t>(N + 1), Eigen::MatrixXcd::Zero(n, n));
    std::vector<Eigen::MatrixXcd> Ap(static_cast<size_t>(N + 1), Eigen::MatrixXcd::Zero(n, n));
    H[0] = Eigen::MatrixXcd::Identity(n, n);
    Ap[0] = M0;

    auto phiH = [&](int b) {
        Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
        for (int k = 0; k <= b; ++k) {
            if ((b - k) % m != 0) continue;
            int j = (b - k) / m;
            double alpha = -static_cast<double>(k) / m;
            double binom = 1.0;
            for (int q = 1; q <= j; ++q) binom *= (alpha - (q - 1)) / q;
            r += binom * H[static_cast<size_t>(k)];
        }
        return r;
    };

    for (int nn = 1; nn <= N; ++nn) {
        // C = sum_{a+b=nn} M_a phiH_b - sum_{a<nn} H_a A'_{nn-a}, with H_nn = 0
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
        for (int a = 0; a <= nn; ++a) {
            if (a == 0) {
                // phiH(nn) includes H_nn which is still zero; corrections only
                C += M0 * phiH(nn);
            } else {
                C += M.at(a) * phiH(nn - a);
            }
        }
        for (int a = 1; a < nn; ++a) C -= H[static_cast<size_t>(a)] * Ap[static_cast<size_t>(nn - a)];
        // M0 H_nn - H_nn M0 - A'_nn = -C
        for (size_t p = 0; p < reps.size(); ++p)
            Ap[static_cast<size_t>(nn)].block(offs[p], offs[p], sizes[p], sizes[p]) =
                C.block(offs[p], offs[p], sizes[p], sizes[p]);
        for (size_t p = 0; p < reps.size(); ++p)
            for (size_t q = 0; q < reps.size(); ++q) {
                if (p == q) continue;
                Eigen::MatrixXcd Tp = M0.block(offs[p], offs[p], sizes[p], sizes[p]);
                Eigen::MatrixXcd Tq = M0.block(offs[q], offs[q], sizes[q], sizes[q]);
                Eigen::MatrixXcd Cpq = -C.block(offs[p], offs[q], sizes[p], sizes[q]);
                H[static_cast<size_t>(nn)].block(offs[p], offs[q], sizes[p], sizes[q]) =
                    sylvester(Tp, Tq, Cpq);
            }
    }

    SplitResult out;
    out.gauge = MatrixSeries(n, m, 0, N);
    for (int k = 0; k <= N; ++k) out.gauge.ref(k) = V * H[static_cast<size_t>(k)];
    for (size_t p = 0; p < reps.size(); ++p) {
        MatrixSeries b(sizes[p], m, 0, N);
        for (int k = 0; k <= N; ++k) b.ref(k) = Ap[static_cast<size_t>(k)].block(offs[p], offs[p], sizes[p], sizes[p]);
        out.blocks.push_back(DiffSystem(b));
    }
    return out;
}

RankOneFormal rank_one_formal(const PuiseuxSeries& g) {
    if (g.valuation() != 0) throw ZeroLeadingTerm();
    const int m = g.ram;
    const int K = g.high;
    PuiseuxSeries R = log_series(g);
    Exponent a(m);

    // c_m sits in the constant coefficient
    a.c[static_cast<size_t>(m - 1)] = R.at(0);
    R.ref(0) = 0.0;

    // c_{m-j} from the tau^j coefficient, then remove its whole contribution
    for (int j = 1; j <= m - 1; ++j) {
        cx cl = R.at(j) * cx(static_cast<double>(m) / (m - j));
        a.c[static_cast<size_t>(m - j - 1)] = cl;
        if (cl == cx(0.0)) continue;
        PuiseuxSeries contrib = binom_series(cx(static_cast<double>(m - j) / m), K + m, m);
        contrib.ref(0) -= 1.0;
        contrib = cl * (ps_monomial(1.0, -(m - j), m, K + m) * contrib);
        R = R - contrib;
    }

    // gamma from the tau^m coefficient of -gamma*log(1+t)
    cx gamma = -R.at(m);
    if (gamma != cx(0.0)) R = R + gamma * log1p_series(K, m);

    // telescoping for the unit: w_k from the tau^{k+m} coefficient
    PuiseuxSeries w(m, 1, std::max(1, K - m));
    for (int k = 1; k + m <= K; ++k) {
        cx wk = R.at(k + m) * cx(static_cast<double>(m) / k);
        w.ref(k) = wk;
        if (wk == cx(0.0)) continue;
        PuiseuxSeries delta = binom_series(cx(-static_cast<double>(k) / m), K + m, m);
        for (int q = 0; q <= K + m; q += m) delta.ref(q) = (q == 0 ? cx(1.0) - delta.at(0) : -delta.at(q));
        // delta = 1 - (1+t)^{-k/m}
        R = R - wk * (ps_monomial(1.0, k, m, K + m) * delta);
    }

    RankOneFormal out;
    out.a = canonicalize(a).first;
    out.gamma = gamma;
    PuiseuxSeries wfull(m, 0, K);
    for (int k = 1; k <= std::min(w.high, K); ++k) wfull.ref(k) = w.at(k);
    out.unit = exp_series(wfull);
    return out;
}

namespace {

struct BlockReduction {
    FormalBlock fb;
    MatrixSeries unit;
};

BlockReduction reduce_matrix_block(const MatrixSeries& B) {
    const int r = B.n;
    const int K = B.high;
    if (B.ram != 1)
        throw UnsupportedFormalStructure("ramified block of rank > 1");
    cx lambda = B.at(0).trace() / cx(static_cast<double>(r));
    Eigen::MatrixXcd dev = B.at(0) - lambda * Eigen::MatrixXcd::Identity(r, r);
    if (dev.cwiseAbs().maxCoeff() > 1e-8 * std::abs(lambda))
        throw UnsupportedFormalStructure("leading block is not scalar");

    // normalized series I + sum Bn_k t^k
    std::vector<Eigen::MatrixXcd> Bn(static_cast<size_t>(K + 1));
    for (int k = 0; k <= K; ++k) Bn[static_cast<size_t>(k)] = B.at(k) / lambda;
    Eigen::MatrixXcd G = -Bn[1];

    // eigenvalues of G differing by a nonzero integer obstruct the
    // telescoping solve (the classical resonant class)
    {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(G);
        double gs = std::max(1.0, G.cwiseAbs().maxCoeff());
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                if (i == j) continue;
                cx diff = es.eigenvalues()(i) - es.eigenvalues()(j);
                double nint = std::round(diff.real());
                if (nint != 0.0 && std::abs(diff - cx(nint)) < 1e-9 * gs)
                    throw UnsupportedFormalStructure(
                        "eigenvalues of the t^1 coefficient differ by a nonzero integer");
            }
    }
    MatrixSeries P = matrix_power_1pt(G, -1, K);

    // Bn phi(V) = V P; the order-n equation determines V_{n-1}
    std::vector<Eigen::MatrixXcd> V(static_cast<size_t>(K + 1), Eigen::MatrixXcd::Zero(r, r));
    V[0] = Eigen::MatrixXcd::Identity(r, r);
    auto phiV = [&](int b, int upto) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(r, r);
        for (int k = 0; k <= std::min(b, upto); ++k) {
            int j = b - k;
            double alpha = -static_cast<double>(k);
            double binom = 1.0;
            for (int q = 1; q <= j; ++q) binom *= (alpha - (q - 1)) / q;
            out += binom * V[static_cast<size_t>(k)];
        }
        return out;
    };
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(r, r);
    for (int nn = 2; nn <= K; ++nn) {
        // residual with V_{nn-1} = 0
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(r, r);
        for (int aa = 0; aa <= nn; ++aa) C += Bn[static_cast<size_t>(aa)] * phiV(nn - aa, nn - 2);
        for (int aa = 0; aa <= nn - 2; ++aa) C -= V[static_cast<size_t>(aa)] * P.at(nn - aa);
        // (ad_{Bn_1} - (nn-1)) X = -C
        int rr = r * r;
        Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(rr, rr);
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < r; ++i)
                L.block(j * r, i * r, r, r) +=
                    (i == j ? Bn[1] : Eigen::MatrixXcd::Zero(r, r)) - Bn[1](i, j) * I;
        L -= static_cast<double>(nn - 1) * Eigen::MatrixXcd::Identity(rr, rr);
        Eigen::VectorXcd rhs(rr);
        for (int j = 0; j < r; ++j) rhs.segment(j * r, r) = -C.col(j);
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(L);
        if (lu.rank() < rr) {
            Eigen::VectorXcd x = L.completeOrthogonalDecomposition().solve(rhs);
            if ((L * x - rhs).norm() > 1e-8 * (1.0 + rhs.norm()))
                throw UnsupportedFormalStructure("resonant eigenvalues of G");
            for (int j = 0; j < r; ++j) V[static_cast<size_t>(nn - 1)].col(j) = x.segment(j * r, r);
        } else {
            Eigen::VectorXcd x = lu.solve(rhs);
            for (int j = 0; j < r; ++j) V[static_cast<size_t>(nn - 1)].col(j) = x.segment(j * r, r);
        }
    }

    BlockReduction out;
    Exponent a = Exponent::linear(std::log(lambda));
    out.fb = FormalBlock{canonicalize(a).first, G};
    out.unit = MatrixSeries(r, 1, 0, K);
    for (int k = 0; k <= K; ++k) out.unit.ref(k) = V[static_cast<size_t>(k)];
    return out;
}

}  // namespace

FormalReduction formal_reduce(const DiffSystem& sys) {
    if (!check_mild(sys)) throw NotMild();
    const int K = sys.A.high;
    SplitResult split = split_by_eigenvalues(sys, K);

    FormalReduction out;
    out.datum.ram = sys.A.ram;
    std::vector<MatrixSeries> units;
    for (const auto& blk : split.blocks) {
        if (blk.rank() == 1) {
            RankOneFormal rof = rank_one_formal(blk.A.entry(0, 0));
            Eigen::MatrixXcd G(1, 1);
            G(0, 0) = rof.gamma;
            out.datum.blocks.push_back(FormalBlock{rof.a, G});
            MatrixSeries u(1, blk.A.ram, 0, blk.A.high);
            PuiseuxSeries uu = with_ramification(rof.unit, blk.A.ram);
            for (int k = 0; k <= blk.A.high; ++k) u.ref(k)(0, 0) = uu.at(k);
            units.push_back(u);
        } else {
            BlockReduction br = reduce_matrix_block(blk.A);
            out.datum.blocks.push_back(br.fb);
            units.push_back(br.unit);
        }
    }
    // orbit representatives must stay pairwise distinct
    for (size_t i = 0; i < out.datum.blocks.size(); ++i)
        for (size_t j = i + 1; j < out.datum.blocks.size(); ++j)
            if (orbit_equal(out.datum.blocks[i].a, out.datum.blocks[j].a))
                throw UnsupportedFormalStructure("coinciding exponent orbits after reduction");

    // gauge = split gauge * blockdiag(units); all units share the system grid
    int n = sys.A.n;
    int m = sys.A.ram;
    int N = split.gauge.high;
    MatrixSeries D(n, m, 0, N);
    int off = 0;
    for (const auto& u : units) {
        for (int k = 0; k <= N; ++k) D.ref(k).block(off, off, u.n, u.n) = u.at(k);
        off += u.n;
    }
    out.gauge = split.gauge * D;

    // the reduction must reproduce the system: A phi(H) = H A_model
    MatrixSeries Aw(n, m, 0, N);
    for (int k = 0; k <= N; ++k) Aw.ref(k) = sys.A.at(k);
    MatrixSeries lhs = Aw * phi_substitute(out.gauge);
    MatrixSeries rhs = out.gauge * graded_module(out.datum, N).A;
    if (!approx_equal(lhs, rhs, 1e-8))
        throw UnsupportedFormalStructure("reduction failed verification");
    return out;
}

FormalDatum formal_datum(const DiffSystem& sys) { return formal_reduce(sys).datum; }

DiffSystem graded_module(const FormalDatum& fd, int high) {
    int n = fd.rank();
    int m = fd.ram;
    MatrixSeries A(n, m, 0, high);
    int off = 0;
    for (const auto& blk : fd.blocks) {
        int r = blk.rank();
        // da = a(s+1) - a(s) as a series in tau
        PuiseuxSeries da(m, 0, high);
        Exponent a = with_ramification(blk.a, m);
        for (int l = 1; l <= m; ++l) {
            cx cl = a.c[static_cast<size_t>(l - 1)];
            if (cl == cx(0.0)) continue;
            PuiseuxSeries contrib = binom_series(cx(static_cast<double>(l) / m), high + m, m);
            contrib.ref(0) -= 1.0;
            contrib = cl * (ps_monomial(1.0, -l, m, high + m) * contrib);
            PuiseuxSeries padded(m, 0, high);
            for (int k = 0; k <= high; ++k) padded.ref(k) = contrib.at(k);
            da = da + padded;
        }
        PuiseuxSeries scal = exp_series(da);
        MatrixSeries blockM = scal * matrix_power_1pt(blk.G, -1, high, m);
        for (int k = 0; k <= high; ++k) A.ref(k).block(off, off, r, r) = blockM.at(k);
        off += r;
    }
    return DiffSystem(A);
}

DiffSystem tensor(const DiffSystem& s1, const DiffSystem& s2) {
    return DiffSystem(kron(s1.A, s2.A));
}

DiffSystem hom(const DiffSystem& s1, const DiffSystem& s2) {
    // h -> A2 h A1^{-1} in the standard column-major basis of r2 x r1 matrices
    return DiffSystem(kron(transpose(invert(s1.A)), s2.A));
}

DiffSystem endo(const DiffSystem& s) { return hom(s, s); }

std::string to_string(const FormalDatum& fd) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& b : fd.blocks) {
        os << "(" << to_string(b.a) << ", G=[";
        for (int i = 0; i < b.rank(); ++i) {
            os << "[";
            for (int j = 0; j < b.rank(); ++j) {
                cx v = b.G(i, j);
                if (v.imag() == 0.0)
                    os << v.real();
                else
                    os << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i)";
                if (j + 1 < b.rank()) os << ",";
            }
            os << "]";
            if (i + 1 < b.rank()) os << ",";
        }
        os << "])\n";
    }
    return os.str();
}

DiffSystem b_alpha(cx alpha, int high) {
    MatrixSeries A(1, 1, 0, high);
    A.ref(0)(0, 0) = 1.0;
    if (high >= 1) A.ref(1)(0, 0) = alpha;
    return DiffSystem(A);
}

DiffSystem e_gamma_model(int high) {
    // (1+t) * exp(t^{-1} log(1+t)); constant term e
    PuiseuxSeries L = log1p_series(high + 1);
    PuiseuxSeries Linv = ps_monomial(1.0, -1, 1, high + 1) * L;  // window [0, high]
    PuiseuxSeries padded(1, 0, high);
    for (int k = 0; k <= high; ++k) padded.ref(k) = Linv.at(k);
    PuiseuxSeries g = exp_series(padded);
    PuiseuxSeries onept = ps_const(1.0, 1, high);
    onept.ref(1) = 1.0;
    g = onept * g;
    MatrixSeries A(1, 1, 0, high);
    for (int k = 0; k <= high; ++k) A.ref(k)(0, 0) = g.at(k);
    return DiffSystem(A);
}

DiffSystem trivial_system(int r, int high) {
    return DiffSystem(MatrixSeries::identity(r, 1, high));
}

}  // namespace mildstokes
