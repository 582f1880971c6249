#include "gcn/normalizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "gcn/cauchy.hpp"
#include "gcn/smoothing.hpp"
#include "gcn/spline.hpp"

namespace gcn {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double zeta_norm(const Deformation& e, int k) { return ck_norm(zeta(e).fields(), k); }

double mc_sup(const Deformation& e) {
    MCResidual r = mc_residual(e);
    return *std::max_element(r.norms, r.norms + 4);
}

Section cov_part(const Section& s) {
    Section out(s.g);
    const Mask vec = (1u << s.g.n) - 1;
    for (const auto& [mask, f] : s.c)
        if (mask & ~vec) out.add(mask, f);
    return out;
}

void pin_origin(GenVectorField& v) {
    const std::size_t o = v.g.origin();
    for (Field& x : v.X) {
        const cd c = x[o];
        for (cd& z : x.v) z -= c;
    }
}

Deformation restrict_deformation(const Deformation& e, double r) { return r < e.g.r ? restrict_to(e, r) : e; }

// Relative size of accumulated rounding in one correction step; k-th
// derivatives of rounding noise grow like h^-k.
constexpr double kRoundoff = 1e-12;

FloorEstimate round_trip_floor(const Deformation& e0, const StepResult& s, const SCIParams& p) {
    Deformation back = act_on_deformation(inverse(s.phi, p.flow), s.eps, p.flow).eps;
    Deformation diff = back - restrict_deformation(e0, back.g.r);
    const double noise = kRoundoff * std::max(e0.sup(), 1e-300);
    return {std::max(zeta_norm(diff, 0), noise),
            std::max(zeta_norm(diff, p.k_star), noise / std::pow(e0.g.h, p.k_star))};
}

TraceRow measure(int d, double t, const Deformation& e) {
    TraceRow row;
    row.d = d;
    row.t = t;
    row.r = e.g.r;
    for (int k = 0; k < 3; ++k) row.zeta[k] = zeta_norm(e, k);
    row.eps_k0 = ck_norm(e.fields(), 0);
    row.eps_k2 = ck_norm(e.fields(), 2);
    MCResidual mc = mc_residual(e);
    row.mc_c21 = mc.norms[1];
    row.mc_c12 = mc.norms[2];
    return row;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

const char* IterationTrace::header() {
    return "d,t_d,r_d,zeta_k0,zeta_k1,zeta_k2,eps_k0,eps_k2,phi_dist_k1,mc_c21,mc_c12,wall_ms";
}

std::string IterationTrace::csv() const {
    std::ostringstream os;
    os << header() << '\n';
    for (const TraceRow& r : rows) {
        os << r.d << ',' << fmt(r.t) << ',' << fmt(r.r) << ',' << fmt(r.zeta[0]) << ',' << fmt(r.zeta[1]) << ','
           << fmt(r.zeta[2]) << ',' << fmt(r.eps_k0) << ',' << fmt(r.eps_k2) << ',' << fmt(r.phi_dist_k1) << ','
           << fmt(r.mc_c21) << ',' << fmt(r.mc_c12) << ',' << fmt(std::round(r.wall_ms)) << '\n';
    }
    return os.str();
}

IterationTrace IterationTrace::parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != header()) throw DomainError("trace header mismatch");
    IterationTrace tr;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> v;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            std::size_t used = 0;
            double x = 0;
            try {
                x = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw DomainError("malformed trace cell: " + cell);
            }
            if (used != cell.size()) throw DomainError("malformed trace cell: " + cell);
            v.push_back(x);
        }
        if (v.size() != 12) throw DomainError("trace row has " + std::to_string(v.size()) + " columns");
        TraceRow r;
        r.d = static_cast<int>(v[0]);
        r.t = v[1];
        r.r = v[2];
        for (int k = 0; k < 3; ++k) r.zeta[k] = v[3 + k];
        r.eps_k0 = v[6];
        r.eps_k2 = v[7];
        r.phi_dist_k1 = v[8];
        r.mc_c21 = v[9];
        r.mc_c12 = v[10];
        r.wall_ms = v[11];
        tr.rows.push_back(r);
    }
    if (tr.rows.empty()) throw DomainError("empty trace");
    return tr;
}

GenVectorField correction_field(const Deformation& e) {
    Section s = to_section(e);
    Section b = s.part(2, 0);
    Section mixed = s.part(1, 1);
    Section forms = s.part(0, 2);
    Section inner = cov_part(bracket(b, homotopy_P(forms))) - mixed - forms;
    return vector_from_section(homotopy_P(inner).part(1, 0) + homotopy_P(inner).part(0, 1));
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iter: return "max_iter";
        case Termination::radius_exhausted: return "radius_exhausted";
        case Termination::diverged: return "diverged";
        case Termination::flow_abort: return "flow_abort";
        case Termination::singular: return "singular";
        case Termination::gate: return "gate";
    }
    return "unknown";
}

StepResult iterate_once(const Deformation& e, double t, const SCIParams& p) {
    GenVectorField v = smooth(correction_field(e), t);
    if (p.pin_origin) pin_origin(v);
    StepResult out;
    out.phi = gen_flow(v, p.flow);
    out.eps = act_on_deformation(out.phi, e, p.flow).eps;
    return out;
}

FloorEstimate discretization_floor(const Deformation& e, const SCIParams& p) {
    return round_trip_floor(e, iterate_once(e, p.t0, p), p);
}

bool passes_gate(const Deformation& e, const SCIParams& p, std::string* why) {
    std::ostringstream os;
    const double en = ck_norm(e.fields(), 3);
    const double zn = zeta_norm(e, 3);
    const double mc = mc_sup(e);
    bool ok = true;
    if (!(en <= p.gate_eps)) {
        os << "|eps|_3 = " << en << " exceeds " << p.gate_eps << "; ";
        ok = false;
    }
    if (!(zn <= p.gate_zeta)) {
        os << "|zeta|_3 = " << zn << " exceeds " << p.gate_zeta << "; ";
        ok = false;
    }
    if (!(mc <= p.gate_mc)) {
        os << "maurer-cartan residual " << mc << " exceeds " << p.gate_mc << "; ";
        ok = false;
    }
    if (why) {
        *why = os.str();
        if (!ok) why->resize(why->size() - 2);
    }
    return ok;
}

double fit_exponent(const std::vector<double>& z) {
    if (z.size() < 3) return 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double N = static_cast<double>(z.size() - 1);
    for (std::size_t d = 0; d + 1 < z.size(); ++d) {
        const double x = std::log(z[d]), y = std::log(z[d + 1]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = N * sxx - sx * sx;
    return den > 0 ? (N * sxy - sx * sy) / den : 0;
}

NormalizeResult normalize(const Deformation& e0, const SCIParams& p) {
    NormalizeResult res;
    res.psi = GenDiffeo::identity(e0.g);
    res.eps = e0;
    const double R = e0.g.r;
    std::string why;
    if (!passes_gate(e0, p, &why)) {
        res.reason = Termination::gate;
        res.message = why;
        return res;
    }
    const double mc0 = mc_sup(e0);

    Deformation e = e0;
    double t = p.t0;
    int increases = 0;
    std::vector<double> zk;
    bool have_floor = p.floor >= 0;
    if (have_floor) res.floor = {p.floor, p.floor};
    res.tol_zeta = p.tol_zeta > 0 ? p.tol_zeta : 10.0 * res.floor.k_star;
    res.tol_zeta0 = p.tol_zeta0 > 0 ? p.tol_zeta0 : 10.0 * res.floor.k0;

    auto finish = [&](Termination why_stop, std::string msg) {
        res.reason = why_stop;
        res.message = std::move(msg);
        res.eps = e;
    };

    for (int d = 0;; ++d) {
        const auto t_start = Clock::now();
        TraceRow row = measure(d, t, e);
        const double z = row.zeta[std::min(p.k_star, 2)];
        zk.push_back(z);
        if (d > 0 && zk[d] > zk[d - 1]) ++increases;
        else increases = 0;

        const bool done = have_floor && ((z <= res.tol_zeta && row.zeta[0] <= res.tol_zeta0) || row.zeta[0] == 0);
        if (done || (d == 0 && row.zeta[0] == 0)) {
            row.wall_ms = p.timing ? ms_since(t_start) : 0;
            res.trace.rows.push_back(row);
            finish(Termination::converged, "zeta below tolerance");
            break;
        }
        if (increases >= p.diverge_steps) {
            row.wall_ms = p.timing ? ms_since(t_start) : 0;
            res.trace.rows.push_back(row);
            finish(Termination::diverged, "zeta grew for " + std::to_string(increases) + " consecutive steps");
            break;
        }
        if (d >= p.max_iter) {
            row.wall_ms = p.timing ? ms_since(t_start) : 0;
            res.trace.rows.push_back(row);
            finish(Termination::max_iter, "iteration limit reached");
            break;
        }
        StepResult step;
        try {
            step = iterate_once(e, t, p);
            if (!have_floor) {
                res.floor = round_trip_floor(e0, step, p);
                have_floor = true;
                if (!(p.tol_zeta > 0)) res.tol_zeta = 10.0 * res.floor.k_star;
                if (!(p.tol_zeta0 > 0)) res.tol_zeta0 = 10.0 * res.floor.k0;
            }
            res.psi = compose(step.phi, res.psi, p.flow);
        } catch (const FlowAbort& ex) {
            row.wall_ms = p.timing ? ms_since(t_start) : 0;
            res.trace.rows.push_back(row);
            finish(Termination::flow_abort, ex.what());
            break;
        } catch (const ActionSingular& ex) {
            row.wall_ms = p.timing ? ms_since(t_start) : 0;
            res.trace.rows.push_back(row);
            finish(Termination::singular, ex.what());
            break;
        }
        row.phi_dist_k1 = diffeo_norm(step.phi, 1);
        row.wall_ms = p.timing ? ms_since(t_start) : 0;
        res.trace.rows.push_back(row);
        e = std::move(step.eps);
        ++res.effective_steps;
        if (e.g.r < p.min_radius_frac * R || res.psi.g.r < p.min_radius_frac * R) {
            res.trace.rows.push_back(measure(d + 1, std::pow(t, 1.5), e));
            finish(Termination::radius_exhausted, "radius fell below the admissible fraction of R");
            break;
        }
        t = std::pow(t, 1.5);
    }

    // contraction exponent over the steps above the floor
    std::vector<double> pre;
    const double cut = 2.0 * res.floor.k_star;
    for (double z : zk) {
        if (!(z > cut)) break;
        pre.push_back(z);
    }
    res.contraction_exponent = fit_exponent(pre);

    res.cert_tol = std::max({res.tol_zeta, 2.0 * mc0, p.cert_tol});
    res.certificate = is_normal_form(res.eps, res.cert_tol);
    if (res.reason == Termination::converged && !res.certificate.ok) res.message += "; certificate failed";
    return res;
}

Deformation dilate(const Deformation& e, double t) {
    if (!(t > 0)) throw DomainError("dilation factor must be positive");
    const double r = t * e.g.r;
    Deformation out(make_grid(e.g.n, std::min(r, 1.0), e.g.m));
    auto src = e.fields();
    auto dst = out.fields_mut();
    if (r <= 1.0) {
        for (std::size_t c = 0; c < src.size(); ++c) dst[c]->v = src[c]->v;
    } else {
        // capped at the unit domain: sample the source at y / t
        MultiSpline sp(src);
        std::vector<cd> val(src.size());
        for (std::size_t i = 0; i < out.g.size(); ++i) {
            auto y = out.g.point(i);
            double x[4];
            for (int a = 0; a < out.g.dims(); ++a) x[a] = std::clamp(y[a] / t, -e.g.r, e.g.r);
            sp.eval(x, val.data());
            for (std::size_t c = 0; c < src.size(); ++c) (*dst[c])[i] = val[c];
        }
    }
    const double s1 = t * t, s3 = 1.0 / (t * t);
    for (Field& f : out.eps1) f *= s1;
    for (Field& f : out.eps3) f *= s3;
    return out;
}

Deformation lambda_transform(const Deformation& e, double t) {
    if (!(t > 0)) throw DomainError("lambda factor must be positive");
    Deformation out = e;
    for (Field& f : out.eps1) f *= t;
    for (Field& f : out.eps3) f *= 1.0 / t;
    return out;
}

Deformation rescale_R(const Deformation& e, double t, double tol) {
    const std::size_t o = e.g.origin();
    for (const Field* f : e.fields())
        if (std::abs((*f)[o]) > tol) throw DomainError("deformation does not vanish at the origin");
    return dilate(lambda_transform(e, t * t), 1.0 / t);
}

PipelineResult full_pipeline(const Deformation& raw, const SCIParams& p, double t_min) {
    PipelineResult out;
    const double R = raw.g.r;
    auto candidate = [&](double t) {
        Deformation s = rescale_R(raw, t, p.origin_tol);
        return restrict_deformation(s, R);
    };
    double t = 1.0;
    Deformation scaled = raw;
    if (!passes_gate(raw, p)) {
        if (!passes_gate(candidate(t_min), p)) {
            out.t = t_min;
            out.message = "no admissible rescaling in the configured range";
            out.inner.reason = Termination::gate;
            passes_gate(candidate(t_min), p, &out.inner.message);
            return out;
        }
        double lo = t_min, hi = 1.0;
        for (int it = 0; it < p.bisection_steps; ++it) {
            const double mid = std::sqrt(lo * hi);
            if (passes_gate(candidate(mid), p)) lo = mid;
            else hi = mid;
        }
        t = lo;
        scaled = candidate(t);
    }
    out.t = t;
    out.rescale_ratio = ck_norm(scaled.fields(), 3) / (t * ck_norm(raw.fields(), 3));
    out.inner = normalize(scaled, p);
    const double s = 1.0 / (t * t);
    Deformation nf = out.inner.eps;
    nf *= s;
    out.normal_form = decompose(nf).eps1;
    out.equivalence = lambda_on_diffeo(out.inner.psi, s);
    out.message = to_string(out.inner.reason);
    if (out.inner.reason == Termination::converged) {
        // the chain applied to the dilated input must land on the rescaled output
        Deformation dilated = lambda_transform(scaled, s);
        Deformation lhs = act_on_deformation(out.equivalence, dilated, p.flow).eps;
        const double r = std::min(lhs.g.r, nf.g.r);
        Deformation a = restrict_deformation(lhs, r), b = restrict_deformation(nf, r);
        out.equivalence_residual = (a - b).sup() / std::max(b.sup(), 1e-300);
    }
    return out;
}

std::string summary_json(const NormalizeResult& r, const SCIParams& p) {
    nlohmann::json j;
    j["schema"] = 1;
    j["params"] = {{"t0", p.t0},
                   {"k_star", p.k_star},
                   {"tol_zeta", p.tol_zeta},
                   {"tol_zeta0", p.tol_zeta0},
                   {"max_iter", p.max_iter},
                   {"min_radius_frac", p.min_radius_frac},
                   {"gate_eps", p.gate_eps},
                   {"gate_zeta", p.gate_zeta},
                   {"gate_mc", p.gate_mc},
                   {"substeps", p.flow.substeps},
                   {"flow_c", p.flow.c}};
    j["termination"] = to_string(r.reason);
    j["message"] = r.message;
    j["effective_steps"] = r.effective_steps;
    j["tol_zeta_used"] = r.tol_zeta;
    j["tol_zeta0_used"] = r.tol_zeta0;
    j["floor"] = {{"k0", r.floor.k0}, {"k_star", r.floor.k_star}};
    j["contraction_exponent"] = r.contraction_exponent;
    j["final_radius"] = r.eps.g.r;
    if (!r.trace.rows.empty()) {
        const TraceRow& last = r.trace.rows.back();
        j["final"] = {{"zeta_k0", last.zeta[0]}, {"zeta_k1", last.zeta[1]}, {"zeta_k2", last.zeta[2]},
                      {"eps_k0", last.eps_k0}, {"mc_c21", last.mc_c21}, {"mc_c12", last.mc_c12}};
    }
    j["certificate"] = {{"ok", r.certificate.ok},
                        {"tolerance", r.cert_tol},
                        {"zeta_norm", r.certificate.zeta_norm},
                        {"dbar_eps1", r.certificate.dbar_eps1},
                        {"self_bracket", r.certificate.self_bracket}};
    return j.dump(2);
}

}  // namespace gcn
