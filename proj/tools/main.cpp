// Command-line front end: mildness checks, formal data, Stokes directions,
// numerical flat sections, cocycle extraction, and the built-in verification
// suite against the Gamma-function solutions.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mildstokes/filtration.hpp"
#include "mildstokes/parser.hpp"
#include "mildstokes/special.hpp"

namespace ms = mildstokes;
using ms::cx;

namespace {

constexpr double kPi = 3.14159265358979323846;

// exit codes: 0 ok, 1 parse, 2 not mild, 3 unsupported formal structure,
// 4 certification failed, 6 verification failed
enum ExitCode { kOk = 0, kParse = 1, kNotMild = 2, kUnsupported = 3, kCertification = 4, kVerify = 6 };

struct RunConfig {
    std::string input;
    std::string outdir;
    int order = ms::kDefaultOrder;
    std::vector<double> thetas;  // s-plane directions
    double smin = 10.0, smax = 40.0;
    int nsamples = 31;
    int chain = 24;
    double tol = 1e-8;
    double mu_tol = 1e-3;
};

void apply_file_params(RunConfig& cfg, const ms::SystemFile& sf, const CLI::App& app) {
    auto maybe = [&](const char* flag, const char* key, auto setter) {
        auto it = sf.params.find(key);
        if (it != sf.params.end() && app.count(flag) == 0) setter(it->second);
    };
    maybe("--order", "K", [&](double v) { cfg.order = static_cast<int>(v); });
    maybe("--theta", "theta", [&](double v) { cfg.thetas = {v}; });
    maybe("--smin", "smin", [&](double v) { cfg.smin = v; });
    maybe("--smax", "smax", [&](double v) { cfg.smax = v; });
    maybe("--samples", "n", [&](double v) { cfg.nsamples = static_cast<int>(v); });
    maybe("--tol", "tol", [&](double v) { cfg.tol = v; });
}

void print_config(const RunConfig& cfg, const std::string& cmd) {
    std::cout << "# mildstokes " << cmd << " | K=" << cfg.order << " smin=" << cfg.smin
              << " smax=" << cfg.smax << " n=" << cfg.nsamples << " tol=" << cfg.tol;
    if (!cfg.thetas.empty()) {
        std::cout << " theta=";
        for (size_t i = 0; i < cfg.thetas.size(); ++i)
            std::cout << (i ? "," : "") << cfg.thetas[i];
    }
    std::cout << "\n";
}

ms::SystemFile load(const RunConfig& cfg) {
    std::ifstream is(cfg.input);
    if (!is) throw ms::ParseError(1, 1, "a readable file", cfg.input);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return ms::parse_system(text, cfg.order);
}

ms::FormalReduction reduction_for(const ms::SystemFile& sf) {
    try {
        return ms::formal_reduce(sf.system);
    } catch (const ms::UnsupportedFormalStructure&) {
        if (sf.formal) {
            // elementary file with an explicit datum
            ms::DiffSystem model = ms::graded_module(*sf.formal, sf.system.A.high);
            if (ms::approx_equal(model.A, sf.system.A, 1e-9))
                return {*sf.formal, ms::MatrixSeries::identity(sf.system.rank(),
                                                               sf.system.A.ram, sf.system.A.high)};
        }
        throw;
    }
}

std::string outpath(const RunConfig& cfg, const std::string& name) {
    std::string dir = cfg.outdir;
    if (dir.empty()) {
        const char* env = std::getenv("MILDSTOKES_OUT");
        dir = env ? env : ".";
    }
    std::filesystem::create_directories(dir);
    return dir + "/" + name;
}

int cmd_check_mild(RunConfig cfg) {
    ms::SystemFile sf = load(cfg);
    print_config(cfg, "check-mild");
    const ms::MatrixSeries& A = sf.system.A;
    double fl = 1e-12 * (1.0 + A.max_abs());
    for (int k = A.low; k < 0; ++k) {
        if (A.at(k).cwiseAbs().maxCoeff() > fl) {
            std::cout << "not mild: A has a pole at t = 0 (order " << -k << "/" << A.ram << ")\n";
            return kNotMild;
        }
    }
    cx det = Eigen::PartialPivLU<Eigen::MatrixXcd>(A.at(0)).determinant();
    if (!ms::check_mild(sf.system)) {
        std::cout << "not mild: A(0) singular, det A(0) = " << det << "\n";
        return kNotMild;
    }
    std::cout << "mild, det A(0) = " << det << "\n";
    return kOk;
}

int cmd_formal(RunConfig cfg) {
    ms::SystemFile sf = load(cfg);
    print_config(cfg, "formal");
    ms::FormalDatum fd = reduction_for(sf).datum;
    std::cout << ms::to_string(fd);
    return kOk;
}

int cmd_directions(RunConfig cfg) {
    ms::SystemFile sf = load(cfg);
    print_config(cfg, "directions");
    ms::FormalDatum fd = reduction_for(sf).datum;
    std::cout << "sigma,dominant_l,sign_change\n";
    std::ostringstream rows;
    rows.precision(17);
    for (size_t i = 0; i < fd.blocks.size(); ++i)
        for (size_t j = i + 1; j < fd.blocks.size(); ++j) {
            if (ms::orbit_equal(fd.blocks[i].a, fd.blocks[j].a)) continue;
            for (const auto& sd : ms::stokes_directions(fd.blocks[i].a, fd.blocks[j].a))
                rows << sd.sigma << "," << sd.dominant_l << "," << sd.sign_change << "\n";
        }
    std::cout << rows.str();
    std::cout << "# special points theta = 0, pi\n";
    ms::Covering cov = ms::default_covering(fd);
    std::cout << "arc_start,arc_end\n";
    for (const auto& a : cov.arcs) std::cout << a.start << "," << a.end << "\n";
    return kOk;
}

int run_solve(RunConfig cfg, const ms::SystemFile& sf) {
    print_config(cfg, "solve");
    ms::FormalReduction red = reduction_for(sf);
    if (cfg.thetas.empty()) cfg.thetas = {0.0};

    ms::FlatParams fp;
    fp.sigmas = cfg.thetas;
    fp.r0 = cfg.smin;
    fp.r1 = cfg.smax;
    fp.n = cfg.nsamples;
    fp.chain = cfg.chain;

    // a wide arc around the requested directions
    double lo = *std::min_element(cfg.thetas.begin(), cfg.thetas.end());
    double hi = *std::max_element(cfg.thetas.begin(), cfg.thetas.end());
    ms::Arc arc(-hi - 0.3, -lo + 0.3);

    ms::SectorialSolution sol = ms::flat_sections(sf.system, red, arc, fp);
    if (sol.nudged_ray)
        std::cout << "# warning: a requested direction sits on a Stokes line; "
                     "evaluated one-sided\n";
    std::ostringstream gp;
    gp << "set logscale y\nset xlabel '|s|'\nset ylabel '|y|'\nplot ";
    for (size_t r = 0; r < sol.rays.size(); ++r) {
        std::string name = "solve_ray" + std::to_string(r) + ".csv";
        std::string path = outpath(cfg, name);
        ms::write_ray_csv(sol.rays[r], path);
        std::cout << "# ray sigma=" << sol.rays[r].sigma << " -> " << path << "\n";
        gp << (r ? ", " : "") << "'" << name << "' using (sqrt($1*$1+$2*$2)):(sqrt($3*$3+$4*$4)) with lines";
    }
    gp << "\n";
    std::ofstream(outpath(cfg, "solve.gp")) << gp.str();
    std::cout << "residual " << sol.max_residual << (sol.max_residual < cfg.tol ? " ok" : " HIGH")
              << "\n";
    return kOk;
}

int cmd_cocycle(RunConfig cfg) {
    ms::SystemFile sf = load(cfg);
    print_config(cfg, "cocycle");
    ms::FormalReduction red = reduction_for(sf);
    ms::Covering cov = ms::default_covering(red.datum);
    ms::CocycleParams cp;
    cp.throw_on_failure = false;
    ms::StokesCocycle sc =
        ms::cocycle_from_solutions(red.datum, cov, ms::make_gauge_evaluator(red), cp);
    ms::FilteredModuleDatum fmd = ms::rh_assemble(red.datum, sc);
    std::string path = outpath(cfg, "module.fmd");
    ms::write_filtered_datum(fmd, path, cfg.outdir.empty() ? "." : cfg.outdir);
    std::cout << "wrote " << path << "\n";
    for (const auto& od : sc.overlaps) {
        std::cout << "overlap " << od.index << " sigma=" << od.sigma
                  << (od.certified ? " certified" : " FAILED") << "\n";
        for (const auto& c : od.certs)
            if (!c.pass)
                std::cout << "  block (" << c.row_block << "," << c.col_block
                          << ") class=" << ms::to_string(c.fit.cls) << " mu=" << c.fit.mu << "\n";
    }
    if (!sc.certified) {
        std::cout << "certification failed\n";
        return kCertification;
    }
    std::cout << "certification passed\n";
    return kOk;
}

bool report(const std::string& what, double value, double bound) {
    bool ok = value < bound;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << ": " << value << " (bound " << bound
              << ")\n";
    return ok;
}

int verify_gamma(cx alpha) {
    bool ok = true;
    for (double sigma : {0.0, 0.5, -0.5}) {
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            double R = 5.0 + 35.0 * k / 49.0;
            cx s = R * std::exp(cx(0.0, sigma));
            cx g = std::exp(ms::log_gamma(s) - ms::log_gamma(s + alpha));
            cx g1 = std::exp(ms::log_gamma(s + 1.0) - ms::log_gamma(s + 1.0 + alpha));
            cx lhs = (1.0 + alpha / s) * g1;
            worst = std::max(worst, std::abs(lhs - g) / std::abs(g));
        }
        ok &= report("Gamma(s)/Gamma(s+a) recurrence residual on sigma=" + std::to_string(sigma),
                     worst, 1e-10);
    }
    return ok ? kOk : kVerify;
}

int verify_egamma() {
    // h(s) = s^{-s} Gamma(s) against A(s) = exp(l(s+1)-l(s)) / s, l = s log s
    double sigma = 0.2;
    int n = 40;
    auto lg = ms::log_gamma_ray(5.0 * std::exp(cx(0.0, sigma)), sigma, n + 1,
                                25.0 / n);
    auto ls = ms::log_ray(5.0 * std::exp(cx(0.0, sigma)), sigma, n + 1, 25.0 / n);
    double worst = 0.0;
    cx step = std::exp(cx(0.0, sigma)) * (25.0 / n);
    for (int k = 0; k <= n; ++k) {
        cx s = 5.0 * std::exp(cx(0.0, sigma)) + static_cast<double>(k) * step;
        cx logs = ls[static_cast<size_t>(k)];
        cx logs1 = std::log(s + 1.0);
        // keep the branch of log(s+1) next to log(s)
        while ((logs1 - logs).imag() > kPi) logs1 -= cx(0.0, 2.0 * kPi);
        while ((logs1 - logs).imag() < -kPi) logs1 += cx(0.0, 2.0 * kPi);
        cx h = std::exp(-s * logs + lg[static_cast<size_t>(k)].log_value);
        cx h1 = std::exp(-(s + 1.0) * logs1 + ms::log_gamma(s + 1.0));
        cx A = std::exp((s + 1.0) * logs1 - s * logs) / s;
        worst = std::max(worst, std::abs(A * h1 - h) / std::abs(h));
    }
    bool ok = report("s^{-s} Gamma(s) recurrence residual (branch-tracked)", worst, 1e-10);
    return ok ? kOk : kVerify;
}

int verify_lambda(double sigma) {
    ms::FormalBlock trivial{ms::Exponent(), Eigen::MatrixXcd::Zero(1, 1)};
    auto f = [](cx s) {
        Eigen::VectorXcd v(1);
        v(0) = std::exp(-s);
        return v;
    };
    ms::RayGrid grid{sigma, 13.0, 32.0, 20};
    ms::QuadratureParams qp;
    ms::LambdaResult lr = ms::lambda_apply(trivial, f, grid, qp);

    double worst_id = 0.0, worst_tel = 0.0;
    for (size_t k = 0; k < lr.out.size(); ++k) {
        cx s = lr.out.s[k];
        cx nab = lr.out.y1[k](0, 0) - lr.out.y[k](0, 0);
        worst_id = std::max(worst_id, std::abs(nab - std::exp(-s)) / std::abs(std::exp(-s)));
        cx tel(0.0);
        for (int j = 0; j < 300; ++j) tel -= std::exp(-(s + static_cast<double>(j)));
        worst_tel = std::max(worst_tel, std::abs(lr.out.y[k](0, 0) - tel) / std::abs(tel));
    }
    bool ok = report("operator identity |nabla Lambda f - f| / |f|", worst_id, 1e-8);
    ok &= report("telescoping comparison", worst_tel, 1e-6);
    return ok ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stokes data of mild linear difference systems"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string verify_what;
    double alpha_re = 0.5, alpha_im = 0.0, direction = 0.3;

    auto add_common = [&](CLI::App* sub, bool with_rays) {
        sub->add_option("input", cfg.input, "input .dsys file")->required();
        sub->add_option("--order,-K", cfg.order, "series truncation order");
        sub->add_option("--out,-o", cfg.outdir, "output directory");
        if (with_rays) {
            sub->add_option("--theta", cfg.thetas, "ray directions in the s-plane (radians)");
            sub->add_option("--smin", cfg.smin, "smallest |s|");
            sub->add_option("--smax", cfg.smax, "largest |s|");
            sub->add_option("--samples,-n", cfg.nsamples, "samples per ray");
            sub->add_option("--chain", cfg.chain, "recurrence steps from the asymptotic seed");
            sub->add_option("--tol", cfg.tol, "residual tolerance");
        }
    };

    CLI::App* c1 = app.add_subcommand("check-mild", "pole and A(0) invertibility check");
    add_common(c1, false);
    CLI::App* c2 = app.add_subcommand("formal", "formal datum of the system");
    add_common(c2, false);
    CLI::App* c3 = app.add_subcommand("directions", "Stokes directions and arc decomposition");
    add_common(c3, false);
    CLI::App* c4 = app.add_subcommand("solve", "numerical flat sections along rays");
    add_common(c4, true);
    CLI::App* c5 = app.add_subcommand("cocycle", "Stokes cocycle with decay certification");
    add_common(c5, true);
    CLI::App* c6 = app.add_subcommand("verify", "verification suite (gamma|egamma|lambda)");
    c6->add_option("what", verify_what, "gamma, egamma, or lambda")->required();
    c6->add_option("--alpha", alpha_re, "alpha (real part) for the gamma check");
    c6->add_option("--alpha-im", alpha_im, "alpha (imaginary part)");
    c6->add_option("--direction", direction, "ray direction for the lambda check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c1->parsed()) return cmd_check_mild(cfg);
        if (c2->parsed()) return cmd_formal(cfg);
        if (c3->parsed()) return cmd_directions(cfg);
        if (c4->parsed()) {
            ms::SystemFile sf = load(cfg);
            apply_file_params(cfg, sf, *c4);
            return run_solve(cfg, sf);
        }
        if (c5->parsed()) return cmd_cocycle(cfg);
        if (c6->parsed()) {
            if (verify_what == "gamma") return verify_gamma(cx(alpha_re, alpha_im));
            if (verify_what == "egamma") return verify_egamma();
            if (verify_what == "lambda") return verify_lambda(direction);
            std::cerr << "unknown verification '" << verify_what << "'\n";
            return kVerify;
        }
    } catch (const ms::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kParse;
    } catch (const ms::NotMild& e) {
        std::cerr << e.what() << "\n";
        return kNotMild;
    } catch (const ms::ClusteredEigenvalues& e) {
        std::cerr << e.what() << "\n";
        return kUnsupported;
    } catch (const ms::UnsupportedFormalStructure& e) {
        std::cerr << e.what() << "\n";
        return kUnsupported;
    } catch (const ms::CertificationFailed& e) {
        std::cerr << e.what() << "\n";
        return kCertification;
    } catch (const ms::Error& e) {
        std::cerr << e.what() << "\n";
        return 7;
    }
    return kOk;
}
