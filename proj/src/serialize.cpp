#include "fuplab/serialize.hpp"

#include <algorithm>
#include <sstream>

namespace fuplab::io {

namespace {

geometry::Vec2 vecFromJson(const json& a) {
    geometry::Vec2 v(0.0, 0.0);
    v.x() = a.at(0).get<double>();
    if (a.size() > 1) v.y() = a.at(1).get<double>();
    return v;
}

}  // namespace

json toJson(const geometry::BoundingBox& box) {
    return json{{"center", {box.center.x(), box.center.y()}}, {"side", box.side}};
}

geometry::BoundingBox boxFromJson(const json& j) {
    geometry::BoundingBox b;
    b.center = vecFromJson(j.at("center"));
    b.side = j.at("side").get<double>();
    return b;
}

json toJson(const geometry::DyadicSet& s) {
    json cells = json::array();
    for (const auto& c : s.cells) {
        if (s.dim == 1)
            cells.push_back(json::array({c.x()}));
        else
            cells.push_back(json::array({c.x(), c.y()}));
    }
    return json{{"d", s.dim},   {"base", s.base},         {"depth", s.depth},
                {"bbox", toJson(s.box)}, {"cells", std::move(cells)}};
}

geometry::DyadicSet dyadicSetFromJson(const json& j) {
    geometry::DyadicSet s;
    s.dim = j.at("d").get<int>();
    s.base = j.at("base").get<int>();
    s.depth = j.at("depth").get<int>();
    s.box = boxFromJson(j.at("bbox"));
    for (const auto& c : j.at("cells"))
        s.cells.emplace_back(c.at(0).get<int>(), c.size() > 1 ? c.at(1).get<int>() : 0);
    s.normalize();
    return s;
}

json toJson(const geometry::ClosedPolyline& p) {
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back(json::array({v.x(), v.y()}));
    return json{{"vertices", std::move(verts)}, {"closed", true}};
}

geometry::ClosedPolyline polylineFromJson(const json& j) {
    geometry::ClosedPolyline p;
    for (const auto& v : j.at("vertices")) p.vertices.push_back(vecFromJson(v));
    p.validate();
    return p;
}

SetSpecResult buildFromSetSpec(const json& spec) {
    SetSpecResult out;
    const std::string kind = spec.at("kind").get<std::string>();
    geometry::BoundingBox box;
    if (kind == "curve-grid") box.side = 10.0;  // curve sets default to B(0,5)
    if (spec.contains("bbox")) box = boxFromJson(spec.at("bbox"));

    if (kind == "cantor" || kind == "product") {
        geometry::IFSSpec ifs;
        ifs.base = spec.at("base").get<int>();
        ifs.depth = spec.at("depth").get<int>();
        for (const auto& axis : spec.at("kept"))
            ifs.kept.push_back(axis.get<std::vector<int>>());
        if (kind == "product" && ifs.kept.size() != 2)
            throw std::invalid_argument("set-spec: product needs two kept digit sets");
        out.set = geometry::build_cantor(ifs, box);
        return out;
    }
    if (kind == "koch") {
        out.isCurve = true;
        out.curve = geometry::build_koch(spec.at("depth").get<int>());
        return out;
    }
    if (kind == "curve-grid") {
        const int curveDepth = spec.value("curve_depth", 4);
        geometry::ClosedPolyline koch = geometry::build_koch(curveDepth);
        out.set = geometry::discretize_curve(koch, spec.at("base").get<int>(),
                                             spec.at("depth").get<int>(), box);
        return out;
    }
    throw std::invalid_argument("set-spec: unknown kind '" + kind + "'");
}

namespace {

json windowJson(const porosity::ScanWindow& w) {
    json j{{"scale", w.scale}, {"center", {w.center.x(), w.center.y()}}};
    if (w.angle >= 0.0) j["angle"] = w.angle;
    return j;
}

}  // namespace

json toJson(const porosity::PorosityCertificate& cert) {
    json j;
    switch (cert.kind) {
        case porosity::PorosityKind::Balls:
            j["kind"] = "balls";
            break;
        case porosity::PorosityKind::Lines:
            j["kind"] = "lines";
            break;
        case porosity::PorosityKind::Box:
            j["kind"] = "box";
            break;
    }
    j["verdict"] = cert.holds() ? "holds" : "violated";
    j["vacuous"] = cert.vacuous;
    if (cert.kind == porosity::PorosityKind::Box) {
        j["L"] = cert.boxScaleL;
        j["max_depth"] = cert.boxMaxDepth;
        if (!cert.holds()) {
            j["violation"] = {{"depth", cert.violationDepth},
                              {"cell", {cert.violationCell.x(), cert.violationCell.y()}}};
        }
    } else {
        j["nu"] = cert.nu;
        j["alpha0"] = cert.alpha0;
        j["alpha1"] = cert.alpha1;
        j["scan"] = {{"stride_fraction", cert.params.strideFraction},
                     {"ladder_ratio", cert.params.ladderRatio},
                     {"directions", cert.params.directions},
                     {"rescan_factor", cert.params.rescanFactor}};
        json ws = json::array();
        for (const auto& [win, pt] : cert.witnessSamples)
            ws.push_back(json{{"window", windowJson(win)}, {"witness", {pt.x(), pt.y()}}});
        j["witness_samples"] = std::move(ws);
        if (cert.violation) j["violation"] = windowJson(*cert.violation);
    }
    return j;
}

json toJson(const porosity::MeasureBoundReport& rep) {
    json j{{"total_measure", rep.totalMeasure},
           {"box_bound", rep.boxBound},
           {"box_slack", rep.boxSlack},
           {"box_depth_count", rep.boxDepthCount},
           {"gamma_exact", rep.gammaExact},
           {"gamma_balls", rep.gammaBalls},
           {"gamma_lines", rep.gammaLines},
           {"min_ball_slack", rep.minBallSlack},
           {"min_segment_slack", rep.minSegmentSlack}};
    auto sampleJson = [](const porosity::MeasureBoundSample& s) {
        json q{{"center", {s.center.x(), s.center.y()}},
               {"size", s.radiusOrLength},
               {"measure", s.measure},
               {"bound", s.bound},
               {"slack", s.slack}};
        if (s.angle >= 0.0) q["angle"] = s.angle;
        return q;
    };
    json balls = json::array();
    for (const auto& s : rep.ballSamples) balls.push_back(sampleJson(s));
    json segs = json::array();
    for (const auto& s : rep.segmentSamples) segs.push_back(sampleJson(s));
    j["ball_samples"] = std::move(balls);
    j["segment_samples"] = std::move(segs);
    return j;
}

json toJson(const porosity::RegularityEstimate& est) {
    json counts = json::array();
    for (const auto& [r, n] : est.coveringCounts) counts.push_back(json::array({r, n}));
    return json{{"delta", est.delta},
                {"c_mu", est.cMu},
                {"r_min", est.rMin},
                {"r_max", est.rMax},
                {"covering_counts", std::move(counts)}};
}

json toJson(const porosity::ArcConstantEstimate& est) {
    return json{{"c_arc", est.cArc},
                {"pair", {est.maximizerPair.first, est.maximizerPair.second}},
                {"short_arc_diameter", est.shortArcDiameter},
                {"chord", est.chord}};
}

json toJson(const constants::ConstantChainReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries) {
        json v{{"name", e.name},
               {"rep", e.value.repTag()},
               {"mantissa", e.value.mantissaString()},
               {"sign", e.value.sign()},
               {"provenance", e.provenance}};
        if (auto d = e.value.toDouble()) v["value"] = *d;
        entries.push_back(std::move(v));
    }
    return json{{"chain", rep.chain}, {"entries", std::move(entries)}};
}

json toJson(const weights::WeightField& field) {
    json annuli = json::array();
    for (const auto& a : field.annuli) {
        json cubes = json::array();
        for (const auto& c : a.cubes) {
            if (field.dim == 1)
                cubes.push_back(json::array({c.x()}));
            else
                cubes.push_back(json::array({c.x(), c.y()}));
        }
        annuli.push_back(json{{"k", a.k},
                              {"W", a.Wk},
                              {"amplitude", a.amplitude},
                              {"cubes", std::move(cubes)},
                              {"r_min", a.rMin},
                              {"r_max", a.rMax}});
    }
    return json{{"dim", field.dim},   {"s", field.s},
                {"alpha", field.alpha}, {"mu_scale", field.muScale},
                {"h", field.h},       {"k0", field.k0},
                {"bump", "radial-exp"}, {"annuli", std::move(annuli)}};
}

weights::WeightField weightFieldFromJson(const json& j) {
    weights::WeightField f;
    f.dim = j.at("dim").get<int>();
    f.s = j.at("s").get<double>();
    f.alpha = j.at("alpha").get<double>();
    f.muScale = j.at("mu_scale").get<double>();
    f.h = j.at("h").get<double>();
    f.k0 = j.at("k0").get<int>();
    for (const auto& a : j.at("annuli")) {
        weights::AnnulusRecord rec;
        rec.k = a.at("k").get<int>();
        rec.Wk = a.at("W").get<double>();
        rec.amplitude = a.at("amplitude").get<double>();
        rec.rMin = a.at("r_min").get<double>();
        rec.rMax = a.at("r_max").get<double>();
        for (const auto& c : a.at("cubes"))
            rec.cubes.emplace_back(c.at(0).get<int>(), c.size() > 1 ? c.at(1).get<int>() : 0);
        std::sort(rec.cubes.begin(), rec.cubes.end(),
                  [](const weights::Idx2& u, const weights::Idx2& v) {
                      return u.x() != v.x() ? u.x() < v.x() : u.y() < v.y();
                  });
        f.annuli.push_back(std::move(rec));
    }
    return f;
}

json toJson(const weights::HypothesisReport& rep) {
    return json{{"c_reg", rep.cReg},
                {"c_reg_per_order", rep.cRegPerOrder},
                {"c_gr", rep.cGr},
                {"c_gr_coarse", rep.cGrCoarse},
                {"c_gr_rel_change", rep.cGrRelChange},
                {"damping_lhs_max", rep.dampingLhsMax},
                {"damping_const_simple", rep.dampingConstSimple},
                {"damping_const_log_improved", rep.dampingConstLogImproved},
                {"damping_slack", rep.dampingSlack},
                {"sample_budget", rep.sampleBudget}};
}

std::string hypothesisReportCsv(const weights::HypothesisReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "quantity,value\n";
    os << "c_reg," << rep.cReg << "\n";
    for (int a = 0; a < 4; ++a)
        os << "c_reg_order_" << a << "," << rep.cRegPerOrder[a] << "\n";
    os << "c_gr," << rep.cGr << "\n";
    os << "c_gr_rel_change," << rep.cGrRelChange << "\n";
    os << "damping_lhs_max," << rep.dampingLhsMax << "\n";
    os << "damping_const_simple," << rep.dampingConstSimple << "\n";
    os << "damping_const_log_improved," << rep.dampingConstLogImproved << "\n";
    os << "damping_slack," << rep.dampingSlack << "\n";
    return os.str();
}

json toJson(const fupnum::NormSeries& series) {
    json pts = json::array();
    for (const auto& p : series.points)
        pts.push_back(json{{"N", p.scaleN},
                           {"h", p.h},
                           {"norm", p.norm},
                           {"method", p.method},
                           {"residual", p.residual},
                           {"iterations", p.iterations}});
    return json{{"set", series.setId}, {"points", std::move(pts)}};
}

json toJson(const fupnum::ExponentFit& fit) {
    return json{{"beta_emp", fit.beta},
                {"log_c", fit.logC},
                {"r2", fit.r2},
                {"residuals", fit.residuals}};
}

std::string normSeriesCsv(const fupnum::NormSeries& series) {
    std::ostringstream os;
    os.precision(17);
    os << "scale,norm,method,residual\n";
    for (const auto& p : series.points)
        os << p.scaleN << "," << p.norm << "," << p.method << "," << p.residual << "\n";
    return os.str();
}

json toJson(const resonances::ResonanceTable& table) {
    json entries = json::array();
    for (const auto& e : table.entries)
        entries.push_back(json{{"k", e.k},
                               {"n", e.n},
                               {"re_s", e.s.real()},
                               {"im_s", e.s.imag()},
                               {"re_lambda", e.lambda.real()},
                               {"im_lambda", e.lambda.imag()},
                               {"bucket", e.trivial ? "trivial" : (e.lowLying ? "low-lying" : "bulk")}});
    return json{{"entries", std::move(entries)},
                {"max_re_s_nontrivial", table.maxReSNontrivial}};
}

std::string resonanceCsv(const resonances::ResonanceTable& table) {
    std::ostringstream os;
    os.precision(17);
    os << "k,n,re_s,im_s,re_lambda,im_lambda,bucket\n";
    for (const auto& e : table.entries)
        os << e.k << "," << e.n << "," << e.s.real() << "," << e.s.imag() << ","
           << e.lambda.real() << "," << e.lambda.imag() << ","
           << (e.trivial ? "trivial" : (e.lowLying ? "low-lying" : "bulk")) << "\n";
    return os.str();
}

}  // namespace fuplab::io
