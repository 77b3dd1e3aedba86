#include "fuplab/porosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

namespace fuplab::porosity {

namespace {

long packLattice(long i, long j) { return i + (1L << 26) * j; }

double nextBelow(double x) { return std::nextafter(x, 0.0); }

}  // namespace

// ---------------------------------------------------------------------------
// CellDistanceIndex

namespace {

// Felzenszwalb 1D squared-distance transform; f may contain +inf entries.
void edt1d(const float* f, float* out, long n, std::vector<int>& v, std::vector<float>& z) {
    const float inf = std::numeric_limits<float>::infinity();
    v.assign(n, 0);
    z.assign(n + 1, 0.0f);
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (long q = 1; q < n; ++q) {
        if (f[q] == inf) continue;
        float s = 0.0f;
        while (k >= 0) {
            const long p = v[k];
            if (f[p] == inf) {
                --k;
                continue;
            }
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0f * (q - p));
            if (s <= z[k])
                --k;
            else
                break;
        }
        if (k < 0) {
            k = 0;
            v[0] = static_cast<int>(q);
            z[0] = -inf;
            z[1] = inf;
        } else {
            ++k;
            v[k] = static_cast<int>(q);
            z[k] = s;
            z[k + 1] = inf;
        }
    }
    k = 0;
    for (long q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const long p = v[k];
        out[q] = f[p] == inf ? inf : (q - p) * (q - p) + f[p];
    }
}

}  // namespace

CellDistanceIndex::CellDistanceIndex(const DyadicSet& s)
    : dim_(s.dim), empty_(s.cells.empty()), cs_(s.cellSide()),
      halfDiag_(0.5 * s.cellSide() * std::sqrt(static_cast<double>(s.dim))),
      lo_(s.box.low()), extent_(s.gridExtent()) {
    if (empty_) return;
    const double total = dim_ == 2 ? static_cast<double>(extent_) * static_cast<double>(extent_)
                                   : static_cast<double>(extent_);
    if (total > double(1L << 26))
        throw std::invalid_argument("CellDistanceIndex: grid too large");
    const size_t n = static_cast<size_t>(total);
    occ_.assign(n, 0);
    for (const Idx2& c : s.cells)
        occ_[static_cast<size_t>(c.x() + (dim_ == 2 ? extent_ * static_cast<long>(c.y()) : 0))] = 1;

    // Exact center-to-center EDT, used as a conservative screen for coarse
    // thresholds; distances are in units of the cell side.
    std::vector<float> sq(n);
    const float inf = std::numeric_limits<float>::infinity();
    for (size_t i = 0; i < n; ++i) sq[i] = occ_[i] ? 0.0f : inf;
    std::vector<int> v;
    std::vector<float> z;
    std::vector<float> scratch(extent_), out(extent_);
    if (dim_ == 1) {
        edt1d(sq.data(), out.data(), extent_, v, z);
        std::copy(out.begin(), out.end(), sq.begin());
    } else {
        for (long j = 0; j < extent_; ++j) {
            std::copy(sq.begin() + j * extent_, sq.begin() + (j + 1) * extent_, scratch.begin());
            edt1d(scratch.data(), sq.data() + j * extent_, extent_, v, z);
        }
        for (long i = 0; i < extent_; ++i) {
            for (long j = 0; j < extent_; ++j) scratch[j] = sq[i + extent_ * j];
            edt1d(scratch.data(), out.data(), extent_, v, z);
            for (long j = 0; j < extent_; ++j) sq[i + extent_ * j] = out[j];
        }
    }
    centerDist_.resize(n);
    for (size_t i = 0; i < n; ++i)
        centerDist_[i] = std::sqrt(sq[i]) * static_cast<float>(cs_);
}

bool CellDistanceIndex::ringScan(const Vec2& p, double t, long ci, long cj) const {
    const long kMax = static_cast<long>(std::floor(t / cs_)) + 2;
    for (long k = 0; k <= kMax; ++k) {
        if (static_cast<double>(k - 1) * cs_ > t) return false;
        const long i0 = std::max(0L, ci - k), i1 = std::min(extent_ - 1, ci + k);
        const long j0 = dim_ == 2 ? std::max(0L, cj - k) : 0;
        const long j1 = dim_ == 2 ? std::min(extent_ - 1, cj + k) : 0;
        for (long j = j0; j <= j1; ++j) {
            const bool jEdge = dim_ == 2 && (j == cj - k || j == cj + k);
            const long step = (jEdge || dim_ == 1) ? 1 : (i1 - i0 > 0 ? i1 - i0 : 1);
            for (long i = i0; i <= i1; i += step) {
                if (!jEdge && dim_ == 2 && i != ci - k && i != ci + k) continue;
                if (dim_ == 1 && std::abs(i - ci) != k) continue;
                if (!occ_[static_cast<size_t>(i + (dim_ == 2 ? extent_ * j : 0))]) continue;
                const Vec2 cellLo = lo_ + cs_ * Vec2(static_cast<double>(i), static_cast<double>(j));
                if (geometry::pointBoxDistance(p, cellLo, cellLo + Vec2::Constant(cs_), dim_) <= t)
                    return true;
            }
        }
        if (dim_ == 1 && k > 0) {
            // ring scan above only visits |i-ci| == k; both sides handled
        }
    }
    return false;
}

bool CellDistanceIndex::anyWithin(const Vec2& p, double t) const {
    if (empty_ || t < 0.0) return false;
    long ci = static_cast<long>(std::floor((p.x() - lo_.x()) / cs_));
    long cj = dim_ == 2 ? static_cast<long>(std::floor((p.y() - lo_.y()) / cs_)) : 0;
    ci = std::clamp(ci, 0L, extent_ - 1);
    cj = std::clamp(cj, 0L, extent_ - 1);
    const Vec2 center = lo_ + cs_ * Vec2(ci + 0.5, dim_ == 2 ? cj + 0.5 : 0.0);
    Vec2 dc = p - center;
    if (dim_ == 1) dc.y() = 0.0;
    const double qc = dc.norm();
    const double D = centerDist_[static_cast<size_t>(ci + (dim_ == 2 ? extent_ * cj : 0))];
    // dist_box(p) lies in [D - qc - halfDiag, D + qc].
    if (D + qc <= t) return true;
    if (D - qc - halfDiag_ > t) return false;
    return ringScan(p, t, ci, cj);
}

double CellDistanceIndex::distance(const Vec2& p, double cap) const {
    if (empty_) return std::numeric_limits<double>::infinity();
    long ci = static_cast<long>(std::floor((p.x() - lo_.x()) / cs_));
    long cj = dim_ == 2 ? static_cast<long>(std::floor((p.y() - lo_.y()) / cs_)) : 0;
    ci = std::clamp(ci, 0L, extent_ - 1);
    cj = std::clamp(cj, 0L, extent_ - 1);
    double best = std::numeric_limits<double>::infinity();
    const long kCap = static_cast<long>(std::floor(cap / cs_)) + 2;
    for (long k = 0; k <= kCap; ++k) {
        if (static_cast<double>(k - 1) * cs_ > std::min(best, cap)) break;
        const long i0 = std::max(0L, ci - k), i1 = std::min(extent_ - 1, ci + k);
        const long j0 = dim_ == 2 ? std::max(0L, cj - k) : 0;
        const long j1 = dim_ == 2 ? std::min(extent_ - 1, cj + k) : 0;
        for (long j = j0; j <= j1; ++j) {
            for (long i = i0; i <= i1; ++i) {
                if (std::max(std::abs(i - ci), dim_ == 2 ? std::abs(j - cj) : 0L) != k) continue;
                if (!occ_[static_cast<size_t>(i + (dim_ == 2 ? extent_ * j : 0))]) continue;
                const Vec2 cellLo = lo_ + cs_ * Vec2(static_cast<double>(i), static_cast<double>(j));
                best = std::min(best, geometry::pointBoxDistance(
                                          p, cellLo, cellLo + Vec2::Constant(cs_), dim_));
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Grid scans

namespace {

std::vector<double> ladderScales(double boxSide, double a0, double a1, double ratio) {
    if (!(ratio > 1.0)) throw std::invalid_argument("porosity scan: ladder ratio must exceed 1");
    std::vector<double> rungs;
    for (double R = boxSide / ratio; R > a0; R /= ratio) {
        if (R < a1) rungs.push_back(R);
        if (rungs.size() > 200) break;
    }
    if (rungs.empty() && a0 < a1) rungs.push_back(std::sqrt(a0 * a1));
    return rungs;
}

// Candidate offsets on the stride lattice inside a ball of radius `half`,
// sorted by decreasing norm (gap witnesses tend to sit near the rim).
std::vector<Vec2> ballOffsets(double g, double half, int dim) {
    std::vector<Vec2> offs;
    const long m = static_cast<long>(std::floor(half / g + 1e-12));
    if (dim == 1) {
        for (long i = -m; i <= m; ++i) offs.emplace_back(static_cast<double>(i) * g, 0.0);
    } else {
        for (long i = -m; i <= m; ++i)
            for (long j = -m; j <= m; ++j) {
                const Vec2 v(static_cast<double>(i) * g, static_cast<double>(j) * g);
                if (v.norm() <= half + 1e-15 * half) offs.push_back(v);
            }
    }
    std::sort(offs.begin(), offs.end(), [](const Vec2& a, const Vec2& b) {
        const double na = a.squaredNorm(), nb = b.squaredNorm();
        if (na != nb) return na > nb;
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    return offs;
}

struct RungScanner {
    const DyadicSet& set;
    const CellDistanceIndex& index;
    PorosityKind kind;
    double nuTest, nuGrid;
    const ScanParams& params;
    bool rescue;
    std::vector<std::pair<ScanWindow, Vec2>>* witnessSink;

    std::optional<ScanWindow> violation{};

    bool isWitness(const Vec2& q, double clearancePred) const {
        return !index.anyWithin(q, clearancePred);
    }

    bool ballWindowHasWitness(const Vec2& c, const std::vector<Vec2>& offs,
                              double clearancePred, Vec2* w) const {
        for (const Vec2& off : offs) {
            if (off.squaredNorm() == 0.0) continue;  // hard center already failed
            const Vec2 q = c + off;
            if (isWitness(q, clearancePred)) {
                *w = q;
                return true;
            }
        }
        return false;
    }

    bool lineWindowHasWitness(const Vec2& c, const Vec2& u, double g, double half,
                              double clearancePred, Vec2* w) const {
        const long mMax = static_cast<long>(std::floor(half / g + 1e-12));
        for (long m = mMax; m >= 1; --m) {
            for (int sign = +1; sign >= -1; sign -= 2) {
                const Vec2 q = c + (static_cast<double>(sign * m) * g) * u;
                if (isWitness(q, clearancePred)) {
                    *w = q;
                    return true;
                }
            }
        }
        return false;
    }

    // Returns false when a violated window was found (short circuit).
    bool scanRung(double R) {
        const double g = params.strideFraction * nuGrid * R;
        const double clearance = nuTest * R;
        const double clearancePred = nextBelow(clearance);
        const double half = R / 2.0;
        const Vec2 lo = set.box.low();
        const double side = set.box.side;
        const int dim = set.dim;

        const long iMinFit = static_cast<long>(std::ceil(half / g - 0.5 - 1e-9));
        const long iMaxFit = static_cast<long>(std::floor((side - half) / g - 0.5 + 1e-9));
        if (iMaxFit < iMinFit) return true;  // no window fits in the box at this scale

        std::vector<Vec2> offs;
        std::vector<Vec2> offsFine;
        if (kind == PorosityKind::Balls || dim == 1) {
            offs = ballOffsets(g, half, dim);
            if (rescue) offsFine = ballOffsets(g / params.rescanFactor, half, dim);
        }
        std::vector<Vec2> dirs;
        if (kind == PorosityKind::Lines && dim == 2) {
            for (int k = 0; k < params.directions; ++k) {
                const double th = M_PI * static_cast<double>(k) / params.directions;
                dirs.emplace_back(std::cos(th), std::sin(th));
            }
        }

        std::unordered_set<long> visited;
        const double reach = clearance + g;
        for (const Idx2& cell : set.cells) {
            const Vec2 cLo = set.cellLow(cell);
            const Vec2 cHi = set.cellHigh(cell);
            long pi0 = static_cast<long>(std::floor((cLo.x() - reach - lo.x()) / g - 0.5)) - 1;
            long pi1 = static_cast<long>(std::ceil((cHi.x() + reach - lo.x()) / g - 0.5)) + 1;
            pi0 = std::max(pi0, iMinFit);
            pi1 = std::min(pi1, iMaxFit);
            long pj0 = 0, pj1 = 0;
            if (dim == 2) {
                pj0 = static_cast<long>(std::floor((cLo.y() - reach - lo.y()) / g - 0.5)) - 1;
                pj1 = static_cast<long>(std::ceil((cHi.y() + reach - lo.y()) / g - 0.5)) + 1;
                pj0 = std::max(pj0, iMinFit);
                pj1 = std::min(pj1, iMaxFit);
            }
            for (long i = pi0; i <= pi1; ++i) {
                for (long j = pj0; j <= pj1; ++j) {
                    if (!visited.insert(packLattice(i, j)).second) continue;
                    const Vec2 c = lo + Vec2((i + 0.5) * g, dim == 2 ? (j + 0.5) * g : 0.0);
                    if (!index.anyWithin(c, clearancePred)) continue;  // center is its own witness

                    if (kind == PorosityKind::Balls || dim == 1) {
                        Vec2 w;
                        if (ballWindowHasWitness(c, offs, clearancePred, &w)) {
                            sinkWitness(ScanWindow{R, c, -1.0}, w);
                            continue;
                        }
                        if (rescue && ballWindowHasWitness(c, offsFine, clearancePred, &w)) {
                            sinkWitness(ScanWindow{R, c, -1.0}, w);
                            continue;
                        }
                        violation = ScanWindow{R, c, -1.0};
                        return false;
                    }

                    // Line windows: one segment per direction through this center.
                    for (size_t k = 0; k < dirs.size(); ++k) {
                        const Vec2& u = dirs[k];
                        const Vec2 e0 = c - half * u;
                        const Vec2 e1 = c + half * u;
                        const Vec2 bhi = set.box.high();
                        if (e0.x() < lo.x() || e0.x() > bhi.x() || e0.y() < lo.y() ||
                            e0.y() > bhi.y() || e1.x() < lo.x() || e1.x() > bhi.x() ||
                            e1.y() < lo.y() || e1.y() > bhi.y())
                            continue;  // only windows fully inside the box count
                        Vec2 w;
                        if (lineWindowHasWitness(c, u, g, half, clearancePred, &w)) {
                            sinkWitness(ScanWindow{R, c, M_PI * static_cast<double>(k) / params.directions}, w);
                            continue;
                        }
                        if (rescue &&
                            lineWindowHasWitness(c, u, g / params.rescanFactor, half, clearancePred, &w)) {
                            sinkWitness(ScanWindow{R, c, M_PI * static_cast<double>(k) / params.directions}, w);
                            continue;
                        }
                        violation = ScanWindow{R, c, M_PI * static_cast<double>(k) / params.directions};
                        return false;
                    }
                }
            }
        }
        return true;
    }

    void sinkWitness(const ScanWindow& w, const Vec2& q) {
        if (witnessSink && witnessSink->size() < static_cast<size_t>(params.maxWitnessSamples))
            witnessSink->emplace_back(w, q);
    }
};

void validatePorosityArgs(double nu, double a0, double a1) {
    if (!(nu > 0.0 && nu < 1.0)) throw std::domain_error("porosity: nu must lie in (0,1)");
    if (!(a0 < a1)) throw std::domain_error("porosity: requires alpha0 < alpha1");
    if (!(a0 >= 0.0)) throw std::domain_error("porosity: alpha0 must be >= 0");
}

}  // namespace

PorosityCertificate certify_ball_porosity(const DyadicSet& s, double nu, double alpha0,
                                          double alpha1, const ScanParams& params) {
    validatePorosityArgs(nu, alpha0, alpha1);
    PorosityCertificate cert;
    cert.kind = PorosityKind::Balls;
    cert.nu = nu;
    cert.alpha0 = alpha0;
    cert.alpha1 = alpha1;
    cert.params = params;

    if (s.cells.empty()) {
        cert.vacuous = true;
        cert.witnessSamples.emplace_back(
            ScanWindow{alpha1 / 2.0, s.box.center, -1.0}, s.box.center);
        return cert;
    }

    CellDistanceIndex index(s);
    RungScanner scanner{s, index, PorosityKind::Balls, nu, nu, params, true,
                        &cert.witnessSamples, {}};
    for (double R : ladderScales(s.box.side, alpha0, alpha1, params.ladderRatio)) {
        if (!scanner.scanRung(R)) {
            cert.verdict = Verdict::Violated;
            cert.violation = scanner.violation;
            return cert;
        }
    }
    return cert;
}

PorosityCertificate certify_line_porosity(const DyadicSet& s, double nu, double alpha0,
                                          double alpha1, int directions,
                                          const ScanParams& params) {
    validatePorosityArgs(nu, alpha0, alpha1);
    if (s.dim == 1) return certify_ball_porosity(s, nu, alpha0, alpha1, params);
    if (directions < 16)
        throw std::invalid_argument("certify_line_porosity: needs at least 16 directions");

    ScanParams p = params;
    p.directions = directions;
    PorosityCertificate cert;
    cert.kind = PorosityKind::Lines;
    cert.nu = nu;
    cert.alpha0 = alpha0;
    cert.alpha1 = alpha1;
    cert.params = p;

    if (s.cells.empty()) {
        cert.vacuous = true;
        cert.witnessSamples.emplace_back(
            ScanWindow{alpha1 / 2.0, s.box.center, 0.0}, s.box.center);
        return cert;
    }

    CellDistanceIndex index(s);
    RungScanner scanner{s, index, PorosityKind::Lines, nu, nu, p, true, &cert.witnessSamples, {}};
    for (double R : ladderScales(s.box.side, alpha0, alpha1, p.ladderRatio)) {
        if (!scanner.scanRung(R)) {
            cert.verdict = Verdict::Violated;
            cert.violation = scanner.violation;
            return cert;
        }
    }
    return cert;
}

bool scan_holds_on_grid(const DyadicSet& s, PorosityKind kind, double nuTest, double nuGrid,
                        double alpha0, double alpha1, const ScanParams& params) {
    validatePorosityArgs(nuGrid, alpha0, alpha1);
    if (s.cells.empty()) return true;
    CellDistanceIndex index(s);
    RungScanner scanner{s, index, s.dim == 1 ? PorosityKind::Balls : kind,
                        nuTest, nuGrid, params, false, nullptr, {}};
    for (double R : ladderScales(s.box.side, alpha0, alpha1, params.ladderRatio))
        if (!scanner.scanRung(R)) return false;
    return true;
}

PorosityCertificate certify_box_porosity(const DyadicSet& s, int scaleL, int maxDepth) {
    if (scaleL < 3) throw std::invalid_argument("certify_box_porosity: scale L must be >= 3");
    if (maxDepth < 0) throw std::invalid_argument("certify_box_porosity: maxDepth must be >= 0");

    PorosityCertificate cert;
    cert.kind = PorosityKind::Box;
    cert.boxScaleL = scaleL;
    cert.boxMaxDepth = maxDepth;
    cert.alpha0 = 0.0;
    cert.alpha1 = s.box.side;

    if (s.cells.empty()) {
        cert.vacuous = true;
        return cert;
    }

    const int d = s.dim;
    if (scaleL == s.base) {
        // Grid-aligned reading: depth-n blocks of the set's own hierarchy.
        if (maxDepth + 1 > s.depth)
            throw std::invalid_argument(
                "certify_box_porosity: maxDepth must stay below the construction depth");
        for (int n = 0; n <= maxDepth; ++n) {
            long blockOver = 1;
            for (int i = 0; i < s.depth - n; ++i) blockOver *= scaleL;
            const long childOver = blockOver / scaleL;
            std::unordered_set<long> blocks, childBlocks;
            const long stride = 1L << 26;
            for (const Idx2& c : s.cells) {
                blocks.insert(c.x() / blockOver + stride * (c.y() / blockOver));
                childBlocks.insert(c.x() / childOver + stride * (c.y() / childOver));
            }
            for (long key : blocks) {
                const long bx = key % stride, by = key / stride;
                bool hasEmptyChild = false;
                for (long dx = 0; dx < scaleL && !hasEmptyChild; ++dx)
                    for (long dy = 0; dy < (d == 2 ? scaleL : 1) && !hasEmptyChild; ++dy)
                        if (!childBlocks.count(bx * scaleL + dx + stride * (by * scaleL + dy)))
                            hasEmptyChild = true;
                if (!hasEmptyChild) {
                    cert.verdict = Verdict::Violated;
                    cert.violationDepth = n;
                    cert.violationCell = Idx2(static_cast<int>(bx), static_cast<int>(by));
                    return cert;
                }
            }
        }
        return cert;
    }

    // Geometric reading: partition the box into (2 L^n)^d congruent cubes per depth
    // and test occupancy by closed overlap with the cell union.
    const Vec2 lo = s.box.low();
    auto occupancy = [&](int n) {
        std::unordered_set<long> occ;
        double cubes = 2.0;
        for (int i = 0; i < n; ++i) cubes *= scaleL;
        if ((d == 2 ? cubes * cubes : cubes) > double(1L << 26))
            throw std::invalid_argument("certify_box_porosity: partition too fine");
        const double side = s.box.side / cubes;
        const long stride = 1L << 26;
        for (const Idx2& c : s.cells) {
            const Vec2 a = s.cellLow(c), b = s.cellHigh(c);
            const long i0 = static_cast<long>(std::floor((a.x() - lo.x()) / side));
            const long i1 = std::min<long>(static_cast<long>(std::floor((b.x() - lo.x()) / side)),
                                           static_cast<long>(cubes) - 1);
            const long j0 = d == 2 ? static_cast<long>(std::floor((a.y() - lo.y()) / side)) : 0;
            const long j1 = d == 2
                                ? std::min<long>(static_cast<long>(std::floor((b.y() - lo.y()) / side)),
                                                 static_cast<long>(cubes) - 1)
                                : 0;
            for (long i = std::max(i0, 0L); i <= i1; ++i)
                for (long j = std::max(j0, 0L); j <= j1; ++j) occ.insert(i + stride * j);
        }
        return occ;
    };

    std::unordered_set<long> occCur = occupancy(0);
    for (int n = 0; n <= maxDepth; ++n) {
        std::unordered_set<long> occNext = occupancy(n + 1);
        const long stride = 1L << 26;
        for (long key : occCur) {
            const long bx = key % stride, by = key / stride;
            bool hasEmptyChild = false;
            for (long dx = 0; dx < scaleL && !hasEmptyChild; ++dx)
                for (long dy = 0; dy < (d == 2 ? scaleL : 1) && !hasEmptyChild; ++dy)
                    if (!occNext.count(bx * scaleL + dx + stride * (by * scaleL + dy)))
                        hasEmptyChild = true;
            if (!hasEmptyChild) {
                cert.verdict = Verdict::Violated;
                cert.violationDepth = n;
                cert.violationCell = Idx2(static_cast<int>(bx), static_cast<int>(by));
                return cert;
            }
        }
        occCur = std::move(occNext);
    }
    return cert;
}

double max_porosity(const DyadicSet& s, PorosityKind kind, double alpha0, double alpha1,
                    int directions, double tol) {
    if (s.cells.empty())
        throw std::domain_error("max_porosity: undefined for an empty (vacuous) set");
    auto holds = [&](double nu) {
        if (kind == PorosityKind::Lines && s.dim == 2)
            return certify_line_porosity(s, nu, alpha0, alpha1, directions).holds();
        return certify_ball_porosity(s, nu, alpha0, alpha1).holds();
    };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (holds(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

PorosityTransforms porosity_transforms(double nu, double nuPrime, double r, double dilation,
                                       double alpha0, double alpha1) {
    if (!(nu > 0.0 && nu < 1.0)) throw std::domain_error("porosity_transforms: nu in (0,1)");
    if (!(nuPrime > 0.0 && nuPrime < nu))
        throw std::domain_error("porosity_transforms: requires 0 < nu' < nu");
    if (!(dilation > 0.0)) throw std::domain_error("porosity_transforms: dilation must be > 0");
    if (!(alpha0 < r && r < alpha1))
        throw std::domain_error("porosity_transforms: requires alpha0 < r < alpha1");
    PorosityTransforms t;
    t.neighborhoodNu = nuPrime;
    t.neighborhoodAlpha0 = r / (nu - nuPrime);
    t.neighborhoodAlpha1 = alpha1;
    t.dilationNu = nu;
    t.dilationAlpha0 = dilation * alpha0;
    t.dilationAlpha1 = dilation * alpha1;
    return t;
}

DyadicSet restrict_to_line(const DyadicSet& s, const Line& line) {
    if (s.dim != 2) throw std::invalid_argument("restrict_to_line: needs a 2-dimensional set");
    const Vec2 u = line.dir.normalized();
    const Vec2 o = line.point;

    // Clip the line against every cell; collect parameter intervals.
    std::vector<std::pair<double, double>> intervals;
    for (const Idx2& c : s.cells) {
        const Vec2 lo = s.cellLow(c), hi = s.cellHigh(c);
        double t0 = -std::numeric_limits<double>::infinity();
        double t1 = std::numeric_limits<double>::infinity();
        bool miss = false;
        for (int a = 0; a < 2 && !miss; ++a) {
            if (u[a] == 0.0) {
                if (o[a] < lo[a] || o[a] > hi[a]) miss = true;
            } else {
                double ta = (lo[a] - o[a]) / u[a];
                double tb = (hi[a] - o[a]) / u[a];
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
                if (t0 > t1) miss = true;
            }
        }
        if (!miss) intervals.emplace_back(t0, t1);
    }

    DyadicSet out;
    out.dim = 1;
    out.base = s.base;
    const double side1 = s.box.side * std::sqrt(2.0);
    const double tCenter = (s.box.center - o).dot(u);
    out.box.center = Vec2(tCenter, 0.0);
    out.box.side = side1;
    int depth1 = 0;
    while (side1 / std::pow(static_cast<double>(s.base), depth1) > s.cellSide() && depth1 < 40)
        ++depth1;
    out.depth = depth1;

    const double cs1 = out.cellSide();
    const double lo1 = tCenter - side1 / 2.0;
    const long ext = out.gridExtent();
    std::unordered_set<long> seen;
    for (const auto& [t0, t1] : intervals) {
        long i0 = static_cast<long>(std::floor((t0 - lo1) / cs1));
        long i1 = static_cast<long>(std::ceil((t1 - lo1) / cs1)) - 1;
        i0 = std::max(i0, 0L);
        i1 = std::min(i1, ext - 1);
        for (long i = i0; i <= i1; ++i)
            if (seen.insert(i).second) out.cells.emplace_back(static_cast<int>(i), 0);
    }
    out.normalize();
    return out;
}

// ---------------------------------------------------------------------------
// Measure bounds

double diskBoxArea(const Vec2& c, double radius, const Vec2& lo, const Vec2& hi) {
    const double x0 = std::max(lo.x() - c.x(), -radius);
    const double x1 = std::min(hi.x() - c.x(), radius);
    if (x0 >= x1) return 0.0;
    const double y0 = lo.y() - c.y();
    const double y1 = hi.y() - c.y();
    const double R2 = radius * radius;

    auto chordHalf = [&](double x) { return std::sqrt(std::max(0.0, R2 - x * x)); };
    // Antiderivative of sqrt(R^2 - x^2).
    auto F = [&](double x) {
        const double xc = std::clamp(x / radius, -1.0, 1.0);
        return 0.5 * (x * chordHalf(x) + R2 * std::asin(xc));
    };

    std::vector<double> cuts{x0, x1};
    for (double y : {y0, y1}) {
        if (std::abs(y) < radius) {
            const double xb = std::sqrt(R2 - y * y);
            for (double s : {-xb, xb})
                if (s > x0 && s < x1) cuts.push_back(s);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    double area = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        if (b - a <= 0.0) continue;
        const double xm = 0.5 * (a + b);
        const double s = chordHalf(xm);
        const double top = std::min(y1, s);
        const double bot = std::max(y0, -s);
        if (top <= bot) continue;
        const bool topIsArc = s < y1;
        const bool botIsArc = -s > y0;
        double piece = 0.0;
        if (topIsArc)
            piece += F(b) - F(a);
        else
            piece += y1 * (b - a);
        if (botIsArc)
            piece += F(b) - F(a);
        else
            piece -= y0 * (b - a);
        area += piece;
    }
    return area;
}

double lineSliceMeasure(const DyadicSet& s, const Line& line, double t0, double t1) {
    const Vec2 u = line.dir.normalized();
    const Vec2 o = line.point;
    std::vector<std::pair<double, double>> ivs;
    for (const Idx2& c : s.cells) {
        const Vec2 lo = s.cellLow(c), hi = s.cellHigh(c);
        double a = t0, b = t1;
        bool miss = false;
        for (int ax = 0; ax < s.dim && !miss; ++ax) {
            if (u[ax] == 0.0) {
                if (o[ax] < lo[ax] || o[ax] > hi[ax]) miss = true;
            } else {
                double ta = (lo[ax] - o[ax]) / u[ax];
                double tb = (hi[ax] - o[ax]) / u[ax];
                if (ta > tb) std::swap(ta, tb);
                a = std::max(a, ta);
                b = std::min(b, tb);
                if (a > b) miss = true;
            }
        }
        if (!miss && b > a) ivs.emplace_back(a, b);
    }
    std::sort(ivs.begin(), ivs.end());
    double total = 0.0, curLo = 0.0, curHi = -std::numeric_limits<double>::infinity();
    bool open = false;
    for (const auto& [a, b] : ivs) {
        if (!open || a > curHi) {
            if (open) total += curHi - curLo;
            curLo = a;
            curHi = b;
            open = true;
        } else {
            curHi = std::max(curHi, b);
        }
    }
    if (open) total += curHi - curLo;
    return total;
}

MeasureBoundReport check_measure_bounds(const DyadicSet& s, const PorosityCertificate& cert,
                                        int sampleCount, unsigned seed, double Cd) {
    if (!cert.holds() || cert.vacuous)
        throw std::invalid_argument("check_measure_bounds: requires a non-vacuous holding certificate");
    if (cert.kind == PorosityKind::Box)
        throw std::invalid_argument("check_measure_bounds: requires a ball or line certificate");

    const int d = s.dim;
    const double nu = cert.nu;
    const double a0 = cert.alpha0, a1 = cert.alpha1;

    MeasureBoundReport rep;
    rep.totalMeasure = s.measure();
    rep.gammaExact = 0.0;
    rep.gammaBalls = std::pow(nu, d) / (Cd * (1.0 + std::log(1.0 / nu)));
    rep.gammaLines = nu / (Cd * (1.0 + std::log(1.0 / nu)));

    // Box-porosity measure decay on the set's own hierarchy.
    rep.boxDepthCount = 0;
    rep.boxBound = std::pow(s.box.side, d);
    if (s.depth >= 1) {
        const auto boxCert = certify_box_porosity(s, s.base, s.depth - 1);
        if (boxCert.holds()) {
            rep.boxDepthCount = s.depth;
            const double q = 1.0 - std::pow(static_cast<double>(s.base), -d);
            rep.boxBound = std::pow(s.box.side, d) * std::pow(q, rep.boxDepthCount);
        }
    }
    rep.boxSlack = rep.totalMeasure > 0.0 ? rep.boxBound / rep.totalMeasure
                                          : std::numeric_limits<double>::infinity();

    const long L = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(d)) / nu));
    rep.gammaExact = std::log(1.0 / (1.0 - std::pow(static_cast<double>(L), -d))) /
                     std::log(static_cast<double>(L));

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Vec2 lo = s.box.low();
    const double side = s.box.side;
    const double rHi = std::min(a1, side / 2.0);

    // 2^d R^d (1 - L^-d)^N with N counting the valid partition depths for R.
    auto decayBound = [&](double R, long Lb, int dd) {
        const int N = static_cast<int>(std::floor(std::log(R / a0) / std::log(static_cast<double>(Lb)))) + 1;
        const double q = 1.0 - std::pow(static_cast<double>(Lb), -dd);
        return std::pow(2.0 * R, dd) * std::pow(q, std::max(N, 0));
    };

    rep.minBallSlack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sampleCount; ++i) {
        MeasureBoundSample smp;
        smp.center = lo + side * Vec2(unit(rng), d == 2 ? unit(rng) : 0.0);
        if (d == 1) smp.center.y() = 0.0;
        smp.radiusOrLength = a0 * std::pow(rHi / a0, unit(rng));
        const double R = smp.radiusOrLength;
        double measure = 0.0;
        if (d == 2) {
            for (const Idx2& c : s.cells)
                measure += diskBoxArea(smp.center, R, s.cellLow(c), s.cellHigh(c));
        } else {
            Line ax{smp.center, Vec2(1.0, 0.0)};
            measure = lineSliceMeasure(s, ax, -R, R);
        }
        smp.measure = measure;
        smp.bound = decayBound(R, L, d);
        smp.slack = measure > 0.0 ? smp.bound / measure : std::numeric_limits<double>::infinity();
        rep.minBallSlack = std::min(rep.minBallSlack, smp.slack);
        rep.ballSamples.push_back(smp);
    }

    rep.minSegmentSlack = std::numeric_limits<double>::infinity();
    if (d == 2) {
        const long L1 = static_cast<long>(std::ceil(1.0 / nu));
        for (int i = 0; i < sampleCount; ++i) {
            MeasureBoundSample smp;
            smp.center = lo + side * Vec2(unit(rng), unit(rng));
            smp.angle = M_PI * unit(rng);
            smp.radiusOrLength = a0 * std::pow(rHi / a0, unit(rng));
            const double R = smp.radiusOrLength;
            Line ln{smp.center, Vec2(std::cos(smp.angle), std::sin(smp.angle))};
            smp.measure = lineSliceMeasure(s, ln, -R / 2.0, R / 2.0);
            const int N =
                static_cast<int>(std::floor(std::log(R / a0) / std::log(static_cast<double>(L1)))) + 1;
            smp.bound = 2.0 * R * std::pow(1.0 - 1.0 / static_cast<double>(L1), std::max(N, 0));
            smp.slack =
                smp.measure > 0.0 ? smp.bound / smp.measure : std::numeric_limits<double>::infinity();
            rep.minSegmentSlack = std::min(rep.minSegmentSlack, smp.slack);
            rep.segmentSamples.push_back(smp);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Regularity and arc constants

RegularityEstimate estimate_regularity(const DyadicSet& s, double rMin, double rMax,
                                       int samples, unsigned seed) {
    if (s.cells.empty()) throw std::invalid_argument("estimate_regularity: empty set");
    if (s.cells.size() < 2)
        throw std::invalid_argument("estimate_regularity: degenerate single-cell set");
    if (!(rMin > 0.0 && rMin < rMax))
        throw std::invalid_argument("estimate_regularity: needs 0 < rMin < rMax");

    // Covering counts over boxes holding cell centers, on a base-aligned
    // geometric ladder; base alignment keeps self-similar counting exact.
    auto centerCount = [&](double r) {
        std::unordered_set<long> seen;
        const Vec2 lo = s.box.low();
        const long stride = 1L << 26;
        for (const Idx2& c : s.cells) {
            const Vec2 p = s.cellCenter(c);
            const long i = static_cast<long>(std::floor((p.x() - lo.x()) / r));
            const long j =
                s.dim == 2 ? static_cast<long>(std::floor((p.y() - lo.y()) / r)) : 0;
            seen.insert(i + stride * j);
        }
        return static_cast<long>(seen.size());
    };

    RegularityEstimate est;
    est.rMin = rMin;
    est.rMax = rMax;
    const double ratio = static_cast<double>(s.base);
    for (double r = rMax; r >= rMin * (1.0 - 1e-12); r /= ratio)
        est.coveringCounts.emplace_back(r, centerCount(r));
    if (est.coveringCounts.size() < 2)
        throw std::invalid_argument("estimate_regularity: needs at least 2 scales in range");

    const int m = static_cast<int>(est.coveringCounts.size());
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        A(i, 0) = std::log(1.0 / est.coveringCounts[i].first);
        A(i, 1) = 1.0;
        y(i) = std::log(static_cast<double>(est.coveringCounts[i].second));
    }
    const Eigen::Vector2d beta = A.colPivHouseholderQr().solve(y);
    est.delta = beta(0);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<size_t> pick(0, s.cells.size() - 1);
    const double total = static_cast<double>(s.cells.size());
    double cMu = 1.0;
    for (int i = 0; i < samples; ++i) {
        const Vec2 x0 = s.cellCenter(s.cells[pick(rng)]);
        const double r = rMin * std::pow(rMax / rMin, unit(rng));
        long cnt = 0;
        const double r2 = r * r;
        for (const Idx2& c : s.cells) {
            Vec2 diff = s.cellCenter(c) - x0;
            if (s.dim == 1) diff.y() = 0.0;
            if (diff.squaredNorm() <= r2) ++cnt;
        }
        const double mu = static_cast<double>(cnt) / total;
        const double rd = std::pow(r, est.delta);
        cMu = std::max({cMu, mu / rd, rd / mu});
    }
    est.cMu = cMu;
    return est;
}

namespace {

// Convex hull (monotone chain) over a small point set; ccw order.
std::vector<Vec2> convexHull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) {
                              return a.x() == b.x() && a.y() == b.y();
                          }),
              pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Vec2> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// Running diameter of a growing point set; hull kept for farthest-point scans.
struct DiameterTracker {
    std::vector<Vec2> hull;
    double diam2 = 0.0;

    void add(const Vec2& p) {
        for (const Vec2& q : hull) diam2 = std::max(diam2, (p - q).squaredNorm());
        if (hull.size() < 3) {
            hull.push_back(p);
            if (hull.size() == 3) hull = convexHull(hull);
            return;
        }
        // Extend the hull only when p falls outside it.
        bool inside = true;
        const size_t n = hull.size();
        for (size_t i = 0; i < n && inside; ++i) {
            const Vec2& a = hull[i];
            const Vec2& b = hull[(i + 1) % n];
            if ((b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x()) < 0)
                inside = false;
        }
        if (!inside) {
            hull.push_back(p);
            hull = convexHull(hull);
        }
    }
    double diameter() const { return std::sqrt(diam2); }
};

}  // namespace

ArcConstantEstimate estimate_three_point_constant(const ClosedPolyline& curve) {
    curve.validate();
    {
        std::vector<Vec2> sorted = curve.vertices;
        std::sort(sorted.begin(), sorted.end(), [](const Vec2& a, const Vec2& b) {
            return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
        });
        for (size_t i = 0; i + 1 < sorted.size(); ++i)
            if (sorted[i].x() == sorted[i + 1].x() && sorted[i].y() == sorted[i + 1].y())
                throw std::invalid_argument(
                    "estimate_three_point_constant: requires closed Jordan curve without repeated vertices");
    }

    const auto& v = curve.vertices;
    const int n = static_cast<int>(v.size());
    ArcConstantEstimate best;
    best.cArc = 0.0;
    best.maximizerPair = {0, 0};
    best.shortArcDiameter = 0.0;
    best.chord = 0.0;

    std::vector<double> dFwd(n, 0.0), dBwd(n, 0.0);
    for (int i = 0; i < n; ++i) {
        // dFwd[j]: diameter of arc v[i..i+j]; dBwd[j]: diameter of arc v[i+j..i+n].
        DiameterTracker fwd, bwd;
        fwd.add(v[i]);
        bwd.add(v[i]);  // arc closes back at v[i]
        for (int j = 1; j < n; ++j) {
            fwd.add(v[(i + j) % n]);
            dFwd[j] = fwd.diameter();
            bwd.add(v[(i + n - j) % n]);
            dBwd[n - j] = bwd.diameter();
        }
        for (int j = 1; j < n; ++j) {
            const int other = (i + j) % n;
            if (other < i) continue;  // count unordered pairs once, i < other
            const double chord = (v[i] - v[other]).norm();
            if (chord == 0.0) continue;
            const double shortDiam = std::min(dFwd[j], dBwd[j]);
            const double ratio = shortDiam / chord;
            if (ratio > best.cArc) {
                best.cArc = ratio;
                best.maximizerPair = {i, other};
                best.shortArcDiameter = shortDiam;
                best.chord = chord;
            }
        }
    }
    return best;
}

MonotoneTriple monotone_triple(const std::array<int, 5>& perm) {
    std::array<bool, 5> seen{};
    for (int x : perm) {
        if (x < 1 || x > 5 || seen[x - 1])
            throw std::invalid_argument("monotone_triple: input must be a permutation of 1..5");
        seen[x - 1] = true;
    }
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            for (int k = j + 1; k < 5; ++k) {
                if (perm[i] < perm[j] && perm[j] < perm[k]) return {i, j, k, true};
                if (perm[i] > perm[j] && perm[j] > perm[k]) return {i, j, k, false};
            }
    throw std::logic_error("monotone_triple: no monotone triple found");  // unreachable
}

OffLinePointResult find_point_off_line(const DyadicSet& sample, const Vec2& center, double r,
                                       const Line& line, const OffLinePointParams& params) {
    if (!(r > 0.0 && r < 0.5))
        throw std::domain_error("find_point_off_line: requires 0 < r < 1/2");
    if (!(params.cOut >= 1.0)) throw std::domain_error("find_point_off_line: requires C_out >= 1");
    if (!(params.delta > 1.0))
        throw std::domain_error("find_point_off_line: requires regularity exponent > 1");

    const double rPrime =
        0.99 * r / std::pow(4.0 * std::pow(5.0, params.delta) * params.cMuTilde * params.cMuTilde,
                            1.0 / (params.delta - 1.0));
    const Vec2 u = line.dir.normalized();

    OffLinePointResult res;
    res.found = false;
    res.packingRadius = rPrime;
    res.packedCount = 0;
    res.distanceToLine = 0.0;
    res.point = center;

    std::vector<Vec2> packed;
    double bestDist = -1.0;
    for (const Idx2& c : sample.cells) {
        const Vec2 p = sample.cellCenter(c);
        if ((p - center).norm() > r) continue;
        bool ok = true;
        for (const Vec2& q : packed)
            if ((p - q).norm() < 2.0 * rPrime) {
                ok = false;
                break;
            }
        if (!ok) continue;
        packed.push_back(p);
        const Vec2 d = (p - line.point) - ((p - line.point).dot(u)) * u;
        const double dist = d.norm();
        if (dist > bestDist) {
            bestDist = dist;
            res.point = p;
            res.distanceToLine = dist;
        }
    }
    res.packedCount = static_cast<int>(packed.size());
    if (bestDist >= r / params.cOut) res.found = true;
    return res;
}

}  // namespace fuplab::porosity
