#include "mildstokes/filtration.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace mildstokes {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_02pi(double x) {
    double y = std::fmod(x, kTwoPi);
    if (y < 0.0) y += kTwoPi;
    return y;
}
}  // namespace

const char* to_string(APerKind k) {
    switch (k) {
        case APerKind::SmallV: return "SmallV";
        case APerKind::SmallU: return "SmallU";
        default: return "LaurentPoly";
    }
}

APerRingModel aper_ring(const Arc& arc) {
    if (arc.width() >= kTwoPi) throw FullCircleArc();
    if (arc.contains_one() || arc.contains_minus_one()) return {arc, APerKind::LaurentPoly};
    // the arc misses both special points, so it sits in one open semicircle
    double mid = wrap_02pi(0.5 * (arc.start + arc.end));
    return {arc, mid < kPi ? APerKind::SmallV : APerKind::SmallU};
}

std::pair<double, double> Covering::overlap_sigma(int alpha) const {
    int N = size();
    if (alpha < N - 1) {
        double lo = std::max(branch_lo[static_cast<size_t>(alpha)], branch_lo[static_cast<size_t>(alpha + 1)]);
        double hi = std::min(branch_hi[static_cast<size_t>(alpha)], branch_hi[static_cast<size_t>(alpha + 1)]);
        return {lo, hi};
    }
    // seam: arc 0 enters shifted one turn down
    double lo = std::max(branch_lo[static_cast<size_t>(N - 1)], branch_lo[0] - kTwoPi);
    double hi = std::min(branch_hi[static_cast<size_t>(N - 1)], branch_hi[0] - kTwoPi);
    return {lo, hi};
}

Covering make_covering(const std::vector<double>& forbidden_theta) {
    std::vector<double> th;
    for (double t : forbidden_theta) th.push_back(wrap_02pi(t));
    std::sort(th.begin(), th.end());
    th.erase(std::unique(th.begin(), th.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-9; }),
             th.end());
    if (th.size() >= 2 && std::abs(th.front() + kTwoPi - th.back()) < 1e-9) th.pop_back();
    const int M = static_cast<int>(th.size());
    if (M < 2) throw InconsistentData("covering needs at least two separating directions");

    Covering cov;
    for (int i = 0; i < M; ++i) {
        double prev = (i == 0) ? th[static_cast<size_t>(M - 1)] - kTwoPi : th[static_cast<size_t>(i - 1)];
        double next = (i == M - 1) ? th[0] + kTwoPi : th[static_cast<size_t>(i + 1)];
        double lo = th[static_cast<size_t>(i)] - 0.7 * (th[static_cast<size_t>(i)] - prev);
        double hi = th[static_cast<size_t>(i)] + 0.7 * (next - th[static_cast<size_t>(i)]);
        cov.arcs.emplace_back(lo, hi);
        cov.branch_lo.push_back(-hi);
        cov.branch_hi.push_back(-lo);
    }
    // sanity: adjacent overlaps only
    for (int a = 0; a < M; ++a) {
        auto [lo, hi] = cov.overlap_sigma(a);
        if (!(lo < hi)) throw InconsistentData("covering arcs fail to overlap");
    }
    return cov;
}

Covering default_covering(const FormalDatum& fd) {
    std::vector<double> forbidden = {0.0, kPi};
    for (size_t i = 0; i < fd.blocks.size(); ++i)
        for (size_t j = i + 1; j < fd.blocks.size(); ++j) {
            Exponent d = fd.blocks[i].a - fd.blocks[j].a;
            if (d.is_zero() || orbit_equal(fd.blocks[i].a, fd.blocks[j].a)) continue;
            for (const auto& sd : stokes_directions(fd.blocks[i].a, fd.blocks[j].a))
                forbidden.push_back(-sd.sigma);  // theta = -sigma on the t-circle
        }
    return make_covering(forbidden);
}

Exponent lifted_exponent(const Exponent& a, int turns) {
    Exponent b = a;
    for (int l = 1; l <= a.ram; ++l)
        b.c[static_cast<size_t>(l - 1)] *= std::exp(cx(0.0, kTwoPi * turns * l / a.ram));
    return b;
}

SolutionEvaluator make_elementary_evaluator(const FormalDatum& fd) {
    return [fd](int, cx s, double arg_s) {
        int n = fd.rank();
        Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(n, n);
        int off = 0;
        for (const auto& blk : fd.blocks) {
            Frame fr{with_ramification(blk.a, fd.ram), blk.G};
            W.block(off, off, blk.rank(), blk.rank()) = fr.eval(s, arg_s);
            off += blk.rank();
        }
        return W;
    };
}

SolutionEvaluator make_gauge_evaluator(const FormalReduction& red) {
    return [red](int, cx s, double arg_s) {
        int n = red.datum.rank();
        Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(n, n);
        int off = 0;
        for (const auto& blk : red.datum.blocks) {
            Frame fr{with_ramification(blk.a, red.datum.ram), blk.G};
            W.block(off, off, blk.rank(), blk.rank()) = fr.eval(s, arg_s);
            off += blk.rank();
        }
        return red.gauge.eval(cx(1.0) / s, -arg_s) * W;
    };
}

namespace {

struct BlockLayout {
    std::vector<int> off, sz;
};

BlockLayout layout_of(const FormalDatum& fd) {
    BlockLayout L;
    int o = 0;
    for (const auto& b : fd.blocks) {
        L.off.push_back(o);
        L.sz.push_back(b.rank());
        o += b.rank();
    }
    return L;
}

// Certify one scalar sequence as rapid decay with per-sample noise floors.
// Data that died below the floor counts as decay when the visible prefix
// does not grow.
std::pair<bool, GrowthFit> certify_decay(const std::vector<double>& R,
                                         const std::vector<double>& val,
                                         const std::vector<double>& floor, double mu_tol) {
    std::vector<double> rr, vv;
    bool any_floored = false;
    for (size_t i = 0; i < R.size(); ++i) {
        if (val[i] > floor[i]) {
            rr.push_back(R[i]);
            vv.push_back(val[i]);
        } else {
            any_floored = true;
        }
    }
    GrowthFit fit;
    if (rr.empty()) {
        fit.cls = GrowthClass::RapidDecay;
        fit.below_floor = true;
        return {true, fit};
    }
    double rmin = *std::min_element(rr.begin(), rr.end());
    double rmax = *std::max_element(rr.begin(), rr.end());
    if (rr.size() >= 8 && rmax >= 4.0 * rmin * (1.0 - 1e-12)) {
        fit = fit_growth(rr, vv, mu_tol);
        return {fit.cls == GrowthClass::RapidDecay, fit};
    }
    // too little live signal for a fit: accept only if the tail is floored
    // and the live values do not increase
    bool nondecreasing_tail = true;
    for (size_t i = 1; i < vv.size(); ++i)
        if (vv[i] > 3.0 * vv[i - 1]) nondecreasing_tail = false;
    fit.below_floor = true;
    fit.cls = GrowthClass::RapidDecay;
    fit.used = static_cast<int>(rr.size());
    return {any_floored && nondecreasing_tail, fit};
}

}  // namespace

StokesCocycle cocycle_from_solutions(const FormalDatum& fd, const Covering& cov,
                                     const SolutionEvaluator& W, const CocycleParams& cp,
                                     ExecPolicy pol) {
    (void)pol;
    StokesCocycle sc;
    sc.covering = cov;
    sc.datum = fd;
    const int N = cov.size();
    const BlockLayout L = layout_of(fd);
    const int nb = static_cast<int>(fd.blocks.size());
    const int n = fd.rank();
    bool all_pass = true;

    for (int alpha = 0; alpha < N; ++alpha) {
        OverlapData od;
        od.index = alpha;
        auto [slo, shi] = cov.overlap_sigma(alpha);
        od.sigma = 0.5 * (slo + shi);
        bool seam = cov.is_seam(alpha);
        int beta = (alpha + 1) % N;

        for (int k = 0; k < cp.n; ++k) {
            double R = cp.r0 + (cp.r1 - cp.r0) * k / std::max(1, cp.n - 1);
            cx s = R * std::exp(cx(0.0, od.sigma));
            Eigen::MatrixXcd Wa = W(alpha, s, od.sigma);
            Eigen::MatrixXcd Wb = W(beta, s, od.sigma + (seam ? kTwoPi : 0.0));
            od.s.push_back(s);
            od.g.push_back(Wa.partialPivLu().solve(Wb));
        }

        // pairing: block j of arc beta matches block i of arc alpha when the
        // lifted exponents coincide
        od.pairing.assign(static_cast<size_t>(nb), -1);
        for (int j = 0; j < nb; ++j) {
            Exponent aj = lifted_exponent(fd.blocks[static_cast<size_t>(j)].a, seam ? 1 : 0);
            for (int i = 0; i < nb; ++i) {
                if (approx_equal(aj, fd.blocks[static_cast<size_t>(i)].a, 1e-9)) {
                    od.pairing[static_cast<size_t>(j)] = i;
                    break;
                }
            }
            if (od.pairing[static_cast<size_t>(j)] < 0)
                throw InconsistentData("exponent orbit is not closed under the circle action");
        }

        // fitted limits on the largest-|s| quartile, per arc-beta block
        od.limits.assign(static_cast<size_t>(nb), Eigen::MatrixXcd());
        int q0 = cp.n - std::max(2, cp.n / 4);
        for (int j = 0; j < nb; ++j) {
            int i = od.pairing[static_cast<size_t>(j)];
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(L.sz[static_cast<size_t>(i)], L.sz[static_cast<size_t>(j)]);
            for (int k = q0; k < cp.n; ++k)
                acc += od.g[static_cast<size_t>(k)].block(L.off[static_cast<size_t>(i)], L.off[static_cast<size_t>(j)],
                                                          L.sz[static_cast<size_t>(i)], L.sz[static_cast<size_t>(j)]);
            od.limits[static_cast<size_t>(j)] = acc / static_cast<double>(cp.n - q0);
        }

        // certification: every block pair must sit at or below its order
        od.certified = true;
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j) {
                bool diag = (od.pairing[static_cast<size_t>(j)] == i);
                std::vector<double> R, val, floor;
                for (int k = 0; k < cp.n; ++k) {
                    cx s = od.s[static_cast<size_t>(k)];
                    double arg_a = od.sigma;  // block i lives on arc alpha
                    double arg_b = od.sigma + (seam ? kTwoPi : 0.0);
                    Eigen::MatrixXcd blockv =
                        od.g[static_cast<size_t>(k)].block(L.off[static_cast<size_t>(i)], L.off[static_cast<size_t>(j)],
                                                           L.sz[static_cast<size_t>(i)], L.sz[static_cast<size_t>(j)]);
                    if (diag) blockv -= od.limits[static_cast<size_t>(j)];
                    cx growth =
                        fd.blocks[static_cast<size_t>(j)].a.eval(std::abs(s), arg_b) -
                        fd.blocks[static_cast<size_t>(i)].a.eval(std::abs(s), arg_a);
                    double ef = std::exp(growth.real());
                    R.push_back(std::abs(s));
                    val.push_back(blockv.norm() * ef);
                    floor.push_back(cp.noise_rel * od.g[static_cast<size_t>(k)].norm() * ef);
                }
                auto [pass, fit] = certify_decay(R, val, floor, cp.mu_tol);
                od.certs.push_back({i, j, diag, fit, pass});
                if (!pass) od.certified = false;
            }
        if (!od.certified) {
            all_pass = false;
            if (cp.throw_on_failure)
                throw CertificationFailed("overlap " + std::to_string(alpha));
        }
        sc.overlaps.push_back(std::move(od));
    }
    (void)n;
    sc.certified = all_pass;
    return sc;
}

GradedDatum grading(const FormalDatum& fd) {
    GradedDatum gd;
    gd.ram = fd.ram;
    for (const auto& b : fd.blocks) {
        GradedOrbit o;
        o.rep = canonicalize(b.a).first;
        o.rank = b.rank();
        o.monodromy = (cx(0.0, kTwoPi * fd.ram) * b.G).exp();
        gd.orbits.push_back(std::move(o));
    }
    return gd;
}

GradedDatum grading(const StokesCocycle& sc) {
    const FormalDatum& fd = sc.datum;
    const int N = sc.covering.size();
    const int nb = static_cast<int>(fd.blocks.size());
    GradedDatum gd;
    gd.ram = fd.ram;

    // One turn around the circle advances each block one step along its
    // mu-cycle; the orbit monodromy is the cyclic composition of the fitted
    // limits until the walk returns to the starting block.
    for (int j0 = 0; j0 < nb; ++j0) {
        int r = fd.blocks[static_cast<size_t>(j0)].rank();
        Eigen::MatrixXcd mono = Eigen::MatrixXcd::Identity(r, r);
        int b = j0;
        int guard = 0;
        do {
            int cur = b;
            for (int alpha = 0; alpha < N; ++alpha) {
                const OverlapData& od = sc.overlaps[static_cast<size_t>(alpha)];
                int next = -1;
                for (int j = 0; j < nb; ++j)
                    if (od.pairing[static_cast<size_t>(j)] == cur) {
                        next = j;
                        break;
                    }
                if (next < 0) throw InconsistentData("broken pairing cycle");
                mono = mono * od.limits[static_cast<size_t>(next)];
                cur = next;
            }
            b = cur;
            if (++guard > fd.ram + 1) throw InconsistentData("pairing cycle does not close");
        } while (b != j0);
        GradedOrbit o;
        o.rep = canonicalize(fd.blocks[static_cast<size_t>(j0)].a).first;
        o.rank = r;
        o.monodromy = mono;
        gd.orbits.push_back(std::move(o));
    }
    return gd;
}

std::vector<Exponent> tensor_indices(const std::vector<Exponent>& s1,
                                     const std::vector<Exponent>& s2) {
    std::vector<Exponent> out;
    for (const auto& a : s1)
        for (const auto& b : s2) {
            Exponent c = canonicalize(a + b).first;
            bool dup = false;
            for (const auto& e : out)
                if (orbit_equal(c, e)) dup = true;
            if (!dup) out.push_back(c);
        }
    return out;
}

std::vector<Exponent> hom_indices(const std::vector<Exponent>& s1,
                                  const std::vector<Exponent>& s2) {
    std::vector<Exponent> out;
    for (const auto& a : s1)
        for (const auto& b : s2) {
            Exponent c = canonicalize(b - a).first;
            bool dup = false;
            for (const auto& e : out)
                if (orbit_equal(c, e)) dup = true;
            if (!dup) out.push_back(c);
        }
    return out;
}

Exponent FilteredModuleDatum::level(int col, int alpha, int u_power) const {
    // The column of block (a, G) behaves like exp(-a) s^G, so its filtration
    // level is -a; the level does not depend on the arc, which makes the
    // restriction axiom hold by construction.  Multiplying by u^n shifts the
    // level by 2 pi i n s.
    (void)alpha;
    int off = 0;
    for (const auto& b : datum.blocks) {
        if (col < off + b.rank()) return shift(canonicalize(-b.a).first, u_power);
        off += b.rank();
    }
    throw InconsistentData("column index out of range");
}

bool FilteredModuleDatum::in_level(int col, const Exponent& b, const Arc& sub) const {
    return leq(level(col, 0, 0), b, sub);
}

FilteredModuleDatum rh_assemble(const FormalDatum& fd, const StokesCocycle& sc) {
    if (fd.ram != sc.datum.ram || fd.rank() != sc.datum.rank())
        throw InconsistentData("formal datum and cocycle disagree in rank or ramification");
    if (fd.blocks.size() != sc.datum.blocks.size())
        throw InconsistentData("formal datum and cocycle disagree in block count");
    for (size_t i = 0; i < fd.blocks.size(); ++i) {
        if (!orbit_equal(fd.blocks[i].a, sc.datum.blocks[i].a) ||
            fd.blocks[i].rank() != sc.datum.blocks[i].rank())
            throw InconsistentData("formal datum and cocycle blocks do not match");
    }
    FilteredModuleDatum out;
    out.datum = fd;
    out.covering = sc.covering;
    out.cocycle = sc;
    out.graded = grading(sc);
    return out;
}

void write_filtered_datum(const FilteredModuleDatum& fmd, const std::string& path,
                          const std::string& csv_dir) {
    namespace fs = std::filesystem;
    std::ofstream os(path);
    os.precision(17);
    os << "mildstokes filtered-module v1\n";
    os << "ram " << fmd.graded.ram << "\n";
    os << "[graded]\n";
    for (const auto& o : fmd.graded.orbits) {
        os << "orbit \"" << to_string(o.rep) << "\" rank " << o.rank << " monodromy [";
        for (int i = 0; i < o.monodromy.rows(); ++i) {
            os << "[";
            for (int j = 0; j < o.monodromy.cols(); ++j) {
                os << o.monodromy(i, j).real() << (o.monodromy(i, j).imag() < 0 ? "" : "+")
                   << o.monodromy(i, j).imag() << "i";
                if (j + 1 < o.monodromy.cols()) os << ",";
            }
            os << "]";
        }
        os << "]\n";
    }
    os << "[covering]\n";
    for (const auto& a : fmd.covering.arcs) os << "arc " << a.start << " " << a.end << "\n";
    os << "[cocycle]\n";
    for (const auto& od : fmd.cocycle.overlaps) {
        std::string csv = csv_dir + "/overlap_" + std::to_string(od.index) + ".csv";
        if (!csv_dir.empty()) {
            fs::create_directories(csv_dir);
            RaySamples rs;
            rs.sigma = od.sigma;
            rs.s = od.s;
            rs.y = od.g;
            write_ray_csv(rs, csv);
        }
        os << "overlap " << od.index << " sigma " << od.sigma << " samples " << csv
           << " certified " << (od.certified ? "yes" : "no") << "\n";
        for (const auto& c : od.certs) {
            os << "  block " << c.row_block << " " << c.col_block
               << (c.diagonal_pair ? " diag" : " off") << " class " << to_string(c.fit.cls)
               << " mu " << c.fit.mu << (c.fit.below_floor ? " below-floor" : "") << " "
               << (c.pass ? "pass" : "FAIL") << "\n";
        }
    }
}

}  // namespace mildstokes
