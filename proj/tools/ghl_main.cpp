// Command-line front end.  Each subcommand builds only the modules it needs
// and writes its own artifacts into --out; `all` performs the full run and
// adds summary.json with the per-criterion verdicts and provenance.
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "ghl/criteria.hpp"

namespace fs = std::filesystem;

namespace {

struct Clock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

int run_subcommand(const std::string& name, const ghl::RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const auto out = [&](const char* f) { return (fs::path(cfg.out_dir) / f).string(); };
    Clock clock;
    const auto log = [&](const std::string& msg) {
        if (cfg.verbose)
            std::cerr << "[ghl " << std::fixed << std::setprecision(1) << clock.secs() << "s] "
                      << msg << "\n";
    };

    if (name == "all") {
        log("full laboratory run");
        ghl::LabRun lab(cfg);
        lab.theta_scan_csv().write(out("theta_scan.csv"));
        lab.spectrum_csv().write(out("spectrum.csv"));
        lab.asymptotics_csv().write(out("asymptotics.csv"));
        lab.continuation_csv().write(out("continuation.csv"));
        lab.recovery_csv().write(out("recovery.csv"));
        lab.instability_csv().write(out("instability.csv"));
        lab.stability_csv().write(out("stability.csv"));
        ghl::write_json(lab.summary(), out("summary.json"));
        ghl::write_json(lab.surface_json(), out("surface.json"));
        for (const auto& c : lab.criteria()) {
            std::cout << "criterion_" << (c.id < 10 ? "0" : "") << c.id << " "
                      << (c.pass ? "PASS" : (c.expected_intrinsic ? "FAIL(expected)" : "FAIL"))
                      << "  " << c.name << ": " << c.detail << "\n";
        }
        log("artifacts written to " + cfg.out_dir);
        return 0;
    }

    ghl::GapGeometry geom(cfg.endpoints);
    log("geometry: genus " + std::to_string(geom.genus()));

    if (name == "surface") {
        ghl::SurfaceData surf(geom, cfg.nq);
        ghl::write_json(ghl::surface_to_json(surf), out("surface.json"));
        return 0;
    }

    if (name == "theta") {
        ghl::SurfaceData surf(geom, cfg.nq);
        ghl::ThetaContext theta(surf.tau(), cfg.theta_eps);
        log("scanning the divisor line");
        const ghl::DivisorScan scan =
            ghl::find_kappa_tilde(surf, theta, cfg.kappa_max, cfg.scan_step, cfg.eps_div);
        ghl::theta_scan_table(scan).write(out("theta_scan.csv"));
        log(std::to_string(scan.roots.size()) + " roots accepted");
        return 0;
    }

    if (name == "spectrum" || name == "asymptotics") {
        ghl::SurfaceData surf(geom, cfg.nq);
        ghl::ThetaContext theta(surf.tau(), cfg.theta_eps);
        const ghl::DivisorScan scan =
            ghl::find_kappa_tilde(surf, theta, cfg.kappa_max, cfg.scan_step, cfg.eps_div);
        log("decomposing the discretized operator");
        const ghl::SpectralData spec = ghl::build_spectral(geom, cfg.nystrom_n);
        log(std::to_string(spec.n_usable) + " singular values above the noise floor");
        if (name == "spectrum") {
            ghl::spectrum_table(spec, scan).write(out("spectrum.csv"));
        } else {
            log("building closed-form eigenfunctions");
            ghl::asymptotic_sweep(surf, theta, scan, spec, geom).table.write(
                out("asymptotics.csv"));
        }
        return 0;
    }

    ghl::SurfaceData surf(geom, cfg.nq);
    log("decomposing the discretized operator");
    const ghl::SpectralData spec = ghl::build_spectral(geom, cfg.nystrom_n);
    log(std::to_string(spec.n_usable) + " singular values above the noise floor");

    if (name == "continue") {
        const std::vector<ghl::real> pts =
            ghl::gap_eval_points(geom, cfg.points, cfg.omega_margin);
        if (pts.empty()) throw ghl::config_error("continue: no evaluation points requested");
        const ghl::RoiRecovery rec =
            ghl::recover_roi(spec, geom, surf, cfg.phantom_degree, pts,
                             std::min(cfg.nmax, spec.n_usable));
        ghl::recovery_table(rec).write(out("recovery.csv"));
        ghl::real worst = 0;
        for (size_t i = 0; i < rec.y.size(); ++i)
            worst = std::max(worst, rec.abs_err[i] / std::fabs(rec.truth[i]));
        log("max relative recovery error " + std::to_string((double)worst));
        return 0;
    }
    if (name == "instability") {
        const ghl::InstabilityResult ir =
            ghl::instability_experiment(spec, geom, surf, cfg.instab_j_lo, cfg.instab_j_hi,
                                        cfg.bump_width, cfg.bump_step, cfg.d_gamma, 3, 10);
        ghl::instability_table(ir).write(out("instability.csv"));
        log("ratio growth " + std::to_string((double)ir.ratio_growth));
        return 0;
    }
    if (name == "stability") {
        ghl::stability_table(ghl::stability_sweep(spec, geom, surf, cfg)).write(
            out("stability.csv"));
        return 0;
    }
    std::cerr << "unknown subcommand '" << name << "'\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the finite Hilbert transform on a multi-interval band"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int nmax = 0;
    bool verbose = false;
    auto* opt_config = app.add_option("--config", config_path, "key=value configuration file");
    auto* opt_out = app.add_option("--out", out_dir, "output directory (created if missing)");
    auto* opt_seed = app.add_option("--seed", seed, "override the random seed");
    auto* opt_nmax = app.add_option("--nmax", nmax, "override the series truncation depth");
    app.add_flag("--verbose", verbose, "progress log on stderr");

    const char* names[] = {"surface",  "theta",       "spectrum",  "asymptotics",
                           "continue", "instability", "stability", "all"};
    const char* descs[] = {"period data of the underlying surface as JSON",
                           "scan |Theta| along the spectral line and locate its roots",
                           "singular values and vectors of the discretized operator",
                           "closed-form eigenfunction sweep against the discrete ones",
                           "continue region-of-interest data and recover the phantom",
                           "Sobolev instability experiment",
                           "weighted-space stability experiment",
                           "full run: every artifact plus summary.json"};
    for (int i = 0; i < 8; ++i) app.add_subcommand(names[i], descs[i])->fallthrough();

    int phantom_degree = 0;
    double omega = 0;
    int points = 0;
    CLI::App* cont = app.get_subcommand("continue");
    auto* opt_deg =
        cont->add_option("--phantom-degree", phantom_degree, "monomial degree of the phantom");
    auto* opt_omega = cont->add_option("--omega", omega, "relative margin kept from gap endpoints");
    auto* opt_points = cont->add_option("--points", points, "number of evaluation points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ghl::RunConfig cfg;
        if (opt_config->count()) cfg = ghl::load_config(config_path);
        if (opt_out->count()) cfg.out_dir = out_dir;
        if (opt_seed->count()) cfg.seed = seed;
        if (opt_nmax->count()) cfg.nmax = nmax;
        if (opt_deg->count()) cfg.phantom_degree = phantom_degree;
        if (opt_omega->count()) cfg.omega_margin = (ghl::real)omega;
        if (opt_points->count()) cfg.points = points;
        cfg.verbose = verbose;

        for (CLI::App* sub : app.get_subcommands()) return run_subcommand(sub->get_name(), cfg);
        return 2;
    } catch (const ghl::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ghl::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}
