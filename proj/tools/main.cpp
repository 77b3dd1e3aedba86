// fuplab: batch front end for set generation, porosity certification,
// constant chains, weight construction, localization norms and resonances.

#include "fuplab/serialize.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fuplab;

namespace {

struct GlobalOpts {
    unsigned seed = 1;
    std::string outDir;
    int threads = 1;
};

json configEcho(const GlobalOpts& g, json extra) {
    extra["seed"] = g.seed;
    extra["threads"] = g.threads;
    return extra;
}

json readJsonFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

void writeText(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

void writeJson(const std::string& path, const json& j) { writeText(path, j.dump(2) + "\n"); }

void writeManifest(const GlobalOpts& g, const std::string& status, const std::string& detail) {
    if (g.outDir.empty()) return;
    fs::create_directories(g.outDir);
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    json m{{"status", status}, {"timestamp", buf}};
    if (!detail.empty()) m["detail"] = detail;
    std::ofstream(fs::path(g.outDir) / "run_manifest.json") << m.dump(2) << "\n";
}

void writeErrorManifest(const GlobalOpts& g, const std::string& stage, const std::string& msg) {
    if (g.outDir.empty()) return;
    fs::create_directories(g.outDir);
    json m{{"error", msg}, {"stage", stage}};
    std::ofstream(fs::path(g.outDir) / "error.json") << m.dump(2) << "\n";
}

geometry::DyadicSet loadSet(const std::string& path) {
    const json j = readJsonFile(path);
    if (j.contains("kind")) {
        const auto built = io::buildFromSetSpec(j);
        if (built.isCurve)
            throw std::invalid_argument("set-spec builds a curve; supply a grid set here");
        return built.set;
    }
    return io::dyadicSetFromJson(j);
}

std::pair<int, int> parseRange(const std::string& text) {
    const auto pos = text.find("..");
    if (pos == std::string::npos)
        throw std::invalid_argument("range must look like n1..n2: " + text);
    return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
}

// ---------------------------------------------------------------------------

int runGenerate(const GlobalOpts& g, const std::string& specPath, const std::string& specInline,
                const std::string& outPath) {
    const json spec = specInline.empty() ? readJsonFile(specPath) : json::parse(specInline);
    const auto built = io::buildFromSetSpec(spec);
    json out{{"config", configEcho(g, json{{"spec", spec}})}};
    if (built.isCurve)
        out["curve"] = io::toJson(built.curve);
    else
        out["set"] = io::toJson(built.set);
    writeJson(outPath, out);
    writeManifest(g, "ok", "generate");
    return 0;
}

int runCertify(const GlobalOpts& g, const std::string& setPath, const std::string& kind,
               double nu, double a0, double a1, int directions, int boxL, int maxDepth,
               const std::string& outPath) {
    const geometry::DyadicSet set = loadSet(setPath);
    porosity::PorosityCertificate cert;
    if (kind == "balls")
        cert = porosity::certify_ball_porosity(set, nu, a0, a1);
    else if (kind == "lines")
        cert = porosity::certify_line_porosity(set, nu, a0, a1, directions);
    else if (kind == "box")
        cert = porosity::certify_box_porosity(set, boxL, maxDepth);
    else
        throw std::invalid_argument("certify: kind must be balls, lines or box");

    json out{{"config", configEcho(g, json{{"set", setPath},
                                           {"kind", kind},
                                           {"nu", nu},
                                           {"alpha0", a0},
                                           {"alpha1", a1},
                                           {"directions", directions}})},
             {"certificate", io::toJson(cert)}};
    writeJson(outPath, out);

    std::ostringstream line;
    line << "verdict: " << (cert.holds() ? "holds" : "violated");
    if (cert.vacuous) line << " (vacuous)";
    if (!cert.holds() && cert.violation)
        line << " window scale=" << cert.violation->scale << " center=("
             << cert.violation->center.x() << "," << cert.violation->center.y() << ")";
    else if (!cert.witnessSamples.empty())
        line << " witness=(" << cert.witnessSamples.front().second.x() << ","
             << cert.witnessSamples.front().second.y() << ")";
    std::cerr << line.str() << "\n";
    writeManifest(g, "ok", "certify");
    return 0;
}

int runConstants(const GlobalOpts& g, const std::string& chain, const constants::ChainInputs& in,
                 const std::string& outPath) {
    constants::ConstantChainReport rep;
    if (chain == "fup")
        rep = constants::report_fup_chain(in);
    else if (chain == "damping")
        rep = constants::report_damping_chain(in);
    else if (chain == "gap")
        rep = constants::report_gap_chain(in);
    else if (chain == "hs")
        rep = constants::report_hs_chain(in);
    else
        throw std::invalid_argument("constants: chain must be fup, damping, gap or hs");
    json out{{"config", configEcho(g, json{{"chain", chain},
                                           {"nu", in.nu},
                                           {"d", in.d},
                                           {"Cd", in.Cd},
                                           {"mu_scale", in.muScale},
                                           {"c1", in.c1},
                                           {"delta", in.delta},
                                           {"Cmu", in.Cmu},
                                           {"Carc", in.Carc},
                                           {"K", in.K},
                                           {"c3_star", in.c3Star}})},
             {"report", io::toJson(rep)}};
    writeJson(outPath, out);
    writeManifest(g, "ok", "constants");
    return 0;
}

int runWeight(const GlobalOpts& g, const std::string& setPath, double nu, double mu, double h,
              double alpha, double scale, bool verify, int budget, const std::string& outPath,
              const std::string& reportPath) {
    const geometry::DyadicSet set = loadSet(setPath);
    std::vector<geometry::Vec2> Y;
    Y.reserve(set.cells.size());
    for (const auto& c : set.cells) {
        geometry::Vec2 p = scale * set.cellCenter(c);
        if (set.dim == 1) p.y() = 0.0;
        Y.push_back(p);
    }
    if (alpha <= 0.0) {
        const double gamma = nu / std::log(1.0 / nu);
        alpha = 1.0 - 0.05 * gamma;
    }
    const auto field = weights::build_weight(Y, set.dim, nu, mu, h, alpha);
    json out{{"config", configEcho(g, json{{"set", setPath},
                                           {"nu", nu},
                                           {"mu_scale", mu},
                                           {"h", h},
                                           {"alpha", alpha},
                                           {"scale", scale}})},
             {"field", io::toJson(field)}};
    writeJson(outPath, out);
    if (verify) {
        const auto rep = weights::verify_hypotheses(field, Y, mu, budget, g.seed);
        json repOut{{"config", out["config"]}, {"report", io::toJson(rep)}};
        const std::string repPath = reportPath.empty() ? outPath + ".report.json" : reportPath;
        writeJson(repPath, repOut);
        if (repPath != "-") writeText(repPath + ".csv", io::hypothesisReportCsv(rep));
    }
    writeManifest(g, "ok", "weight");
    return 0;
}

int runFup(const GlobalOpts& g, const std::string& setInline, const std::string& scales,
           const std::string& phase, double rho, double c1, double radius,
           const std::string& csvPath, const std::string& fitPath) {
    const auto [n1, n2] = parseRange(scales);
    if (phase.empty()) {
        // DFT submatrix ladder; --set is a JSON literal or a file path.
        const json spec = (!setInline.empty() && setInline.front() == '{')
                              ? json::parse(setInline)
                              : readJsonFile(setInline);
        fupnum::LadderSpec ladder;
        const std::string kind = spec.value("kind", "cantor");
        if (kind == "cantor" || kind == "product") {
            ladder.kind = fupnum::LadderSpec::Kind::Cantor;
            ladder.base = spec.at("base").get<int>();
            for (const auto& axis : spec.at("kept"))
                ladder.keptX.push_back(axis.get<std::vector<int>>());
            if (spec.contains("kept_y"))
                for (const auto& axis : spec.at("kept_y"))
                    ladder.keptY.push_back(axis.get<std::vector<int>>());
            ladder.d = static_cast<int>(ladder.keptX.size());
        } else if (kind == "orthogonal-lines") {
            ladder.kind = fupnum::LadderSpec::Kind::OrthogonalLines;
            ladder.d = 2;
            ladder.base = spec.value("base", 3);
        } else if (kind == "full") {
            ladder.kind = fupnum::LadderSpec::Kind::FullBox;
            ladder.d = spec.value("d", 1);
            ladder.base = spec.value("base", 3);
        } else {
            throw std::invalid_argument("fup: unknown ladder kind " + kind);
        }
        std::vector<int> depths;
        for (int n = n1; n <= n2; ++n) depths.push_back(n);
        const auto series = fupnum::fup_decay_series(ladder, depths);
        writeText(csvPath, io::normSeriesCsv(series));
        const auto fit = fupnum::fit_exponent(series);
        json out{{"config", configEcho(g, json{{"set", spec}, {"scales", scales}})},
                 {"fit", io::toJson(fit)},
                 {"series", io::toJson(series)}};
        writeJson(fitPath, out);
        writeManifest(g, "ok", "fup");
        return 0;
    }

    fupnum::FIOSpec spec;
    spec.rho = rho;
    spec.C1 = c1;
    if (phase == "hyperbolic-log")
        spec.phase = fupnum::PhaseKind::HyperbolicLog;
    else if (phase == "euclidean-fourier")
        spec.phase = fupnum::PhaseKind::EuclideanFourier;
    else if (phase == "circle-model")
        spec.phase = fupnum::PhaseKind::CircleModel;
    else
        throw std::invalid_argument("fup: unknown phase " + phase);

    fupnum::NormSeries series;
    series.setId = "circle-r" + std::to_string(radius);
    for (int k = n1; k <= n2; ++k) {
        const double h = std::pow(2.0, -k);
        fupnum::FIONormResult r;
        if (spec.phase == fupnum::PhaseKind::CircleModel)
            r = fupnum::fio_norm_circle_model(spec, h);
        else
            r = fupnum::fio_norm_circle(spec, radius, h);
        if (!r.converged)
            throw std::runtime_error("fup: grid refinement check failed at h = " +
                                     std::to_string(h));
        fupnum::NormPoint pt;
        pt.scaleN = 1.0 / h;
        pt.h = h;
        pt.norm = r.norm;
        pt.method = r.method;
        pt.residual = r.relChange;
        series.points.push_back(pt);
    }
    writeText(csvPath, io::normSeriesCsv(series));
    const auto fit = fupnum::fit_exponent(series);
    json out{{"config", configEcho(g, json{{"phase", phase},
                                           {"scales", scales},
                                           {"rho", rho},
                                           {"c1", c1},
                                           {"radius", radius}})},
             {"fit", io::toJson(fit)},
             {"series", io::toJson(series)}};
    writeJson(fitPath, out);
    writeManifest(g, "ok", "fup");
    return 0;
}

int runResonances(const GlobalOpts& g, const std::string& spectrumPath, int nMax,
                  const std::string& csvPath, const std::string& outPath) {
    resonances::SurfaceSpectrum spec;
    if (spectrumPath.empty()) {
        spec = resonances::demo_spectrum();
    } else {
        const json j = readJsonFile(spectrumPath);
        spec.mu = j.at("mu").get<std::vector<double>>();
        spec.source = j.value("source", "user-supplied");
    }
    const auto table = resonances::fuchsian_resonances(spec, nMax);
    const auto gap = resonances::essential_gap(table);
    writeText(csvPath, io::resonanceCsv(table));
    json out{{"config", configEcho(g, json{{"spectrum", spectrumPath.empty() ? "demo" : spectrumPath},
                                           {"nmax", nMax}})},
             {"table", io::toJson(table)},
             {"gap", {{"size", gap.gap},
                      {"violators", gap.violators.size()},
                      {"low_lying", gap.lowLying.size()}}}};
    writeJson(outPath, out);
    writeManifest(g, "ok", "resonances");
    return 0;
}

int runPipeline(const GlobalOpts& g, int kochDepth, int gridBase, int gridDepth, double Cd,
                bool withFup, const std::string& outDir) {
    fs::create_directories(outDir);
    const auto koch = geometry::build_koch(kochDepth);
    geometry::BoundingBox box;
    box.side = 10.0;  // curve sets live in B(0,5)
    const auto set = geometry::discretize_curve(koch, gridBase, gridDepth, box);

    const double cs = set.cellSide();
    const auto reg = porosity::estimate_regularity(set, 2.0 * cs, 1.0, 200, g.seed);
    const auto arc = porosity::estimate_three_point_constant(koch);

    constants::ChainInputs in;
    in.delta = std::min(1.95, std::max(1.05, reg.delta));
    in.Cmu = std::max(1.0, reg.cMu);
    in.Carc = std::max(1.0, arc.cArc);
    in.Cd = Cd;
    const auto chain = constants::report_gap_chain(in);

    const json cfg = configEcho(g, json{{"koch_depth", kochDepth},
                                        {"grid_base", gridBase},
                                        {"grid_depth", gridDepth},
                                        {"Cd", Cd}});
    writeJson((fs::path(outDir) / "regularity.json").string(),
              json{{"config", cfg}, {"estimate", io::toJson(reg)}});
    writeJson((fs::path(outDir) / "arc.json").string(),
              json{{"config", cfg}, {"estimate", io::toJson(arc)}});
    writeJson((fs::path(outDir) / "chain.json").string(),
              json{{"config", cfg}, {"report", io::toJson(chain)}});

    if (withFup) {
        fupnum::LadderSpec ladder;
        ladder.kind = fupnum::LadderSpec::Kind::Cantor;
        ladder.base = 3;
        ladder.keptX = {{0, 2}};
        ladder.d = 1;
        const auto series = fupnum::fup_decay_series(ladder, {2, 3, 4, 5, 6});
        writeText((fs::path(outDir) / "fup_series.csv").string(), io::normSeriesCsv(series));
        writeJson((fs::path(outDir) / "fup_fit.json").string(),
                  json{{"config", cfg}, {"fit", io::toJson(fupnum::fit_exponent(series))}});
    }
    writeManifest(g, "ok", "pipeline");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractal uncertainty laboratory"};
    app.require_subcommand(1);

    GlobalOpts g;
    if (const char* env = std::getenv("FUPLAB_THREADS")) g.threads = std::atoi(env);
    app.add_option("--seed", g.seed, "seed recorded in every artifact");
    app.add_option("--out-dir", g.outDir, "directory for manifests and error reports");
    app.add_option("--threads", g.threads, "thread budget (default FUPLAB_THREADS or 1)");

    // generate
    auto* gen = app.add_subcommand("generate", "build a set or curve from a JSON set-spec");
    std::string genSpec, genInline, genOut = "-";
    gen->add_option("--spec", genSpec, "set-spec JSON file");
    gen->add_option("--inline", genInline, "set-spec JSON literal");
    gen->add_option("--out", genOut, "output file (default stdout)");

    // certify
    auto* cert = app.add_subcommand("certify", "porosity certification");
    std::string certSet, certKind = "balls", certOut = "-";
    double certNu = 0.1, certA0 = 0.01, certA1 = 1.0;
    int certDirs = 64, certL = 3, certMaxDepth = 0;
    cert->add_option("--set", certSet, "set JSON (DyadicSet or set-spec)")->required();
    cert->add_option("--kind", certKind, "balls | lines | box");
    cert->add_option("--nu", certNu, "porosity parameter");
    cert->add_option("--alpha0", certA0, "lower scale");
    cert->add_option("--alpha1", certA1, "upper scale");
    cert->add_option("--directions", certDirs, "segment directions (lines)");
    cert->add_option("--L", certL, "box-porosity scale");
    cert->add_option("--max-depth", certMaxDepth, "box-porosity depth limit");
    cert->add_option("--out", certOut, "certificate JSON output");

    // constants
    auto* cons = app.add_subcommand("constants", "evaluate a constant chain");
    std::string consChain = "fup", consOut = "-";
    constants::ChainInputs in;
    cons->add_option("--chain", consChain, "fup | damping | gap | hs");
    cons->add_option("--nu", in.nu);
    cons->add_option("--d", in.d);
    cons->add_option("--cd", in.Cd);
    cons->add_option("--mu", in.muScale);
    cons->add_option("--c1", in.c1);
    cons->add_option("--cphi", in.Cphi);
    cons->add_option("--sphi", in.cphi);
    cons->add_option("--delta", in.delta);
    cons->add_option("--cmu", in.Cmu);
    cons->add_option("--carc", in.Carc);
    cons->add_option("--K", in.K);
    cons->add_option("--c3star", in.c3Star);
    cons->add_option("--out", consOut);

    // weight
    auto* wgt = app.add_subcommand("weight", "build the annulus weight over a set");
    std::string wgtSet, wgtOut = "-", wgtReport;
    double wgtNu = 0.1, wgtMu = 20.0, wgtH = 1.0 / 1024, wgtAlpha = -1.0, wgtScale = 1.0;
    bool wgtVerify = false;
    int wgtBudget = 10000;
    wgt->add_option("--set", wgtSet, "set JSON; Y = scaled cell centers")->required();
    wgt->add_option("--nu", wgtNu);
    wgt->add_option("--mu", wgtMu, "lower porosity scale");
    wgt->add_option("--hval", wgtH, "semiclassical scale h");
    wgt->add_option("--alpha", wgtAlpha, "exponent; default picks the admissible midpoint");
    wgt->add_option("--scale", wgtScale, "scale factor applied to Y");
    wgt->add_flag("--verify", wgtVerify, "run the hypothesis verification");
    wgt->add_option("--budget", wgtBudget, "verification sample budget");
    wgt->add_option("--out", wgtOut);
    wgt->add_option("--report-out", wgtReport);

    // fup
    auto* fup = app.add_subcommand("fup", "localization norm series and exponent fit");
    std::string fupSet = R"({"kind":"cantor","base":3,"kept":[[0,2]]})";
    std::string fupScales = "2..6", fupPhase, fupCsv = "-", fupFit = "-";
    double fupRho = 0.9, fupC1 = 1.0, fupRadius = 1.0;
    fup->add_option("--set", fupSet, "ladder spec JSON (DFT mode)");
    fup->add_option("--scales", fupScales, "n1..n2 (depths, or -log2 h in phase mode)");
    fup->add_option("--phase", fupPhase, "hyperbolic-log | euclidean-fourier | circle-model");
    fup->add_option("--rho", fupRho);
    fup->add_option("--c1", fupC1);
    fup->add_option("--radius", fupRadius, "circle radius (phase mode)");
    fup->add_option("--csv", fupCsv, "series CSV output");
    fup->add_option("--out", fupFit, "fit JSON output");

    // resonances
    auto* res = app.add_subcommand("resonances", "explicit resonance table");
    std::string resSpectrum, resCsv = "-", resOut = "-";
    int resNMax = 3;
    res->add_option("--spectrum", resSpectrum, "JSON file with {\"mu\": [...]}; default demo");
    res->add_option("--nmax", resNMax);
    res->add_option("--csv", resCsv);
    res->add_option("--out", resOut);

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "curve -> estimates -> gap chain");
    int pipeKochDepth = 4, pipeGridBase = 2, pipeGridDepth = 7;
    double pipeCd = 1.0;
    bool pipeWithFup = false;
    std::string pipeOutDir = "pipeline-out";
    pipe->add_option("--depth", pipeKochDepth, "curve iteration depth");
    pipe->add_option("--grid-base", pipeGridBase);
    pipe->add_option("--grid-depth", pipeGridDepth);
    pipe->add_option("--cd", pipeCd);
    pipe->add_flag("--with-fup", pipeWithFup);
    pipe->add_option("--dir", pipeOutDir, "pipeline artifact directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return runGenerate(g, genSpec, genInline, genOut);
        if (cert->parsed())
            return runCertify(g, certSet, certKind, certNu, certA0, certA1, certDirs, certL,
                              certMaxDepth, certOut);
        if (cons->parsed()) return runConstants(g, consChain, in, consOut);
        if (wgt->parsed())
            return runWeight(g, wgtSet, wgtNu, wgtMu, wgtH, wgtAlpha, wgtScale, wgtVerify,
                             wgtBudget, wgtOut, wgtReport);
        if (fup->parsed())
            return runFup(g, fupSet, fupScales, fupPhase, fupRho, fupC1, fupRadius, fupCsv,
                          fupFit);
        if (res->parsed()) return runResonances(g, resSpectrum, resNMax, resCsv, resOut);
        if (pipe->parsed())
            return runPipeline(g, pipeKochDepth, pipeGridBase, pipeGridDepth, pipeCd,
                               pipeWithFup, pipeOutDir);
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        writeErrorManifest(g, "validate", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        writeErrorManifest(g, "validate", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        writeErrorManifest(g, "run", e.what());
        return 1;
    }
    return 2;
}
