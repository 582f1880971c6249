#include "gcn/scenario.hpp"

#include <cmath>
#include <json.hpp>

namespace gcn {

using oracle::Poly;
using oracle::PolySection;
using oracle::QC;
using oracle::Rational;

namespace {

Rational to_rational(double x) {
    const long long den = 1000000;
    return Rational(std::llround(x * den), den);
}

double poly_sup(const Poly& p, int n) {
    GridSpec g = make_grid(n, 1.0, 9);
    return p.sample(g).sup();
}

nlohmann::json poly_json(const Poly& p) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [e, c] : p.terms())
        a.push_back({{"exp", {e[0], e[1], e[2], e[3]}}, {"re", c.re.str()}, {"im", c.im.str()}});
    return a;
}

Poly poly_from_json(const nlohmann::json& a) {
    Poly p;
    for (const auto& t : a) {
        oracle::Monomial e{};
        for (int k = 0; k < 4; ++k) e[k] = t.at("exp").at(k).get<int>();
        p += Poly::monomial(e, QC(Rational(t.at("re").get<std::string>()), Rational(t.at("im").get<std::string>())));
    }
    return p;
}

nlohmann::json section_json(const PolySection& s) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [mask, p] : s.c) a.push_back({{"mask", mask}, {"terms", poly_json(p)}});
    return a;
}

PolySection section_from_json(int n, const nlohmann::json& a) {
    PolySection s(n);
    for (const auto& t : a) s.add(t.at("mask").get<Mask>(), poly_from_json(t.at("terms")));
    return s;
}

// d B = 0 on the exact coefficients
bool is_closed(const std::vector<Poly>& B, int n) {
    const int D = 2 * n;
    for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b)
            for (int c = b + 1; c < D; ++c) {
                Poly s = B[pair_index(b, c, D)].d_real(a) - B[pair_index(a, c, D)].d_real(b) +
                         B[pair_index(a, b, D)].d_real(c);
                if (!s.is_zero()) return false;
            }
    return true;
}

bool is_real(const Poly& p) {
    // real iff the coefficient of z^a zbar^b is the conjugate of that of z^b zbar^a
    for (const auto& [e, c] : p.terms()) {
        oracle::Monomial f{e[2], e[3], e[0], e[1]};
        auto it = p.terms().find(f);
        if (it == p.terms().end()) return false;
        if (!(it->second.re == c.re && it->second.im == -c.im)) return false;
    }
    return true;
}

}  // namespace

Poly real_x(int i) { return QC(Rational(1, 2)) * (Poly::z(i) + Poly::zbar(i)); }
Poly real_y(int i) { return QC(0, Rational(-1, 2)) * (Poly::z(i) - Poly::zbar(i)); }

bool Scrambler::is_trivial() const {
    for (const Poly& b : B)
        if (!b.is_zero()) return false;
    return v.is_zero();
}

GenDiffeo Scrambler::build(const GridSpec& g, const FlowParams& p) const {
    GenDiffeo f(g);
    for (std::size_t k = 0; k < B.size() && k < f.B.size(); ++k) f.B[k] = real_part(B[k].sample(g));
    if (v.is_zero()) return f;
    GenDiffeo flow = gen_flow(vector_from_section(v.sample(g)), p);
    return compose(f, flow, p);
}

Deformation Scenario::sample(const GridSpec& g) const {
    if (g.n != n) throw DomainError("scenario and grid differ in dimension");
    Deformation base = from_section(seed.sample(g));
    if (scrambler.is_trivial()) return base;
    return act_on_deformation(scrambler.build(g), base).eps;
}

Scenario gen_holomorphic_poisson(int n, const Poly& coeff) {
    if (n != 2) throw DomainError("holomorphic poisson scenarios need n = 2");
    for (int i = 0; i < 2; ++i)
        if (!coeff.d_zbar(i).is_zero()) throw DomainError("bivector coefficient is not holomorphic");
    Scenario s;
    s.name = "poisson";
    s.n = 2;
    s.seed = PolySection(2);
    s.seed.add(0b0011u, coeff);
    s.scrambler.v = PolySection(2);
    s.integrable = oracle::mc(s.seed).is_zero();
    s.normal_form = true;
    return s;
}

Scenario gen_gauge_scrambled(const Scenario& base, const Scrambler& phi0) {
    const int D = 2 * base.n;
    if (!phi0.B.empty() && static_cast<int>(phi0.B.size()) != D * (D - 1) / 2)
        throw DomainError("two-form has the wrong number of components");
    for (const Poly& b : phi0.B) {
        if (!is_real(b)) throw DomainError("two-form is not real");
        if (poly_sup(b, base.n) > 0.5) throw DomainError("two-form exceeds the scrambler gate");
    }
    if (!phi0.B.empty() && !is_closed(phi0.B, base.n)) throw DomainError("two-form is not closed");
    for (const auto& [mask, p] : phi0.v.c) {
        if (popcount(mask) != 1) throw DomainError("scrambling field must be a section of L*");
        if (poly_sup(p, base.n) > 0.1) throw DomainError("scrambling field exceeds the scrambler gate");
    }
    if (!phi0.v.is_zero() && phi0.v.n != base.n) throw DomainError("scrambling field has the wrong dimension");
    Scenario s = base;
    s.name = base.name + "_scrambled";
    s.scrambler = phi0;
    if (phi0.v.is_zero()) s.scrambler.v = PolySection(base.n);
    s.normal_form = phi0.is_trivial() && base.normal_form;
    return s;
}

Scenario gen_beltrami(int n, const Poly& mu) {
    if (n != 1) throw DomainError("beltrami scenarios need n = 1");
    if (!(poly_sup(mu, 1) < 1.0)) throw DomainError("beltrami coefficient must have sup below 1");
    Scenario s;
    s.name = "beltrami";
    s.n = 1;
    s.seed = PolySection(1);
    s.seed.add(0b11u, mu);
    s.scrambler.v = PolySection(1);
    s.integrable = oracle::mc(s.seed).is_zero();
    s.normal_form = mu.is_zero();
    return s;
}

Scenario named_scenario(const std::string& name, double param) {
    if (name == "poisson") return gen_holomorphic_poisson(2, Poly::z(0));
    if (name == "poisson_sq") {
        Scenario s = gen_holomorphic_poisson(2, Poly::z(1) * Poly::z(1));
        s.name = name;
        return s;
    }
    if (name == "g2" || name == "g2_large") {
        const bool large = name == "g2_large";
        const double kappa = param > 0 ? param : 1e-2;
        const QC scale(to_rational(kappa));
        Poly coeff = Poly::z(0);
        if (large) coeff = QC(10) * coeff;
        Scrambler sc;
        sc.B.assign(6, Poly());
        // axes (x1, y1, x2, y2) = 0..3
        Poly c1 = large ? QC(2) * real_x(0) : Poly::constant(QC(1));
        sc.B[pair_index(0, 3, 4)] = scale * c1;
        sc.B[pair_index(1, 2, 4)] = scale * real_y(0);
        Scenario s = gen_gauge_scrambled(gen_holomorphic_poisson(2, coeff), sc);
        s.name = name;
        return s;
    }
    if (name == "beltrami") {
        Scenario s = gen_beltrami(1, Poly::constant(QC(to_rational(param >= 0 ? param : 0.05))));
        return s;
    }
    throw DomainError("unknown scenario " + name);
}

std::vector<std::string> scenario_names() { return {"poisson", "poisson_sq", "g2", "g2_large", "beltrami"}; }

std::string scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["schema"] = 1;
    j["name"] = s.name;
    j["n"] = s.n;
    j["seed"] = section_json(s.seed);
    nlohmann::json b = nlohmann::json::array();
    for (const Poly& p : s.scrambler.B) b.push_back(poly_json(p));
    j["B"] = b;
    j["v"] = section_json(s.scrambler.v);
    j["integrable"] = s.integrable;
    j["normal_form"] = s.normal_form;
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        if (j.at("schema").get<int>() != 1) throw DomainError("unsupported scenario schema");
        Scenario s;
        s.name = j.at("name").get<std::string>();
        s.n = j.at("n").get<int>();
        if (s.n != 1 && s.n != 2) throw DomainError("scenario dimension must be 1 or 2");
        s.seed = section_from_json(s.n, j.at("seed"));
        for (const auto& b : j.at("B")) s.scrambler.B.push_back(poly_from_json(b));
        s.scrambler.v = section_from_json(s.n, j.at("v"));
        s.integrable = j.at("integrable").get<bool>();
        s.normal_form = j.at("normal_form").get<bool>();
        return s;
    } catch (const nlohmann::json::exception& ex) {
        throw DomainError(std::string("malformed scenario: ") + ex.what());
    } catch (const std::runtime_error& ex) {
        throw DomainError(std::string("malformed scenario: ") + ex.what());
    }
}

}  // namespace gcn
