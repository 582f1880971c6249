#pragma once

#include <string>
#include <vector>

#include "gcn/calculus.hpp"
#include "gcn/section.hpp"

namespace gcn {

// Generalized diffeomorphism (B, phi): phi = Id + disp, B is a
// closed real 2-form with components B[pair_index(a, b, 2n)] on dx_a ^ dx_b.
struct GenDiffeo {
    GridSpec g;
    std::vector<Field> disp;
    std::vector<Field> B;

    GenDiffeo() = default;
    explicit GenDiffeo(const GridSpec& grid);
    static GenDiffeo identity(const GridSpec& grid) { return GenDiffeo(grid); }

    std::vector<const Field*> fields() const;
    // 2n x 2n antisymmetric matrix entry B_ab at node i
    double b(int a, int c, std::size_t i) const;
};

struct FlowParams {
    int substeps = 32;
    double c = 0;  // radius-shrink constant; 0 selects 2n
    double shrink_c(int n) const { return c > 0 ? c : 2.0 * n; }
};

class FlowAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ActionSingular : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// X + xi in real coordinates: X^{1,0} + conj and xi^{0,1} + conj.
RealPair realify(const GenVectorField& v);

struct FlowReport {
    GenDiffeo phi;
    int exits = 0;     // trajectories that left the domain at the first attempted radius
    double predicted_radius = 0;
};

// Time-one flow of X_r together with B = integral_0^1 phi_t^* (d xi) dt.
FlowReport flow_real(const RealPair& u, const FlowParams& p);
FlowReport time1_flow(const RealPair& Xr, const FlowParams& p);
std::vector<Field> bfield_of_flow(const RealPair& u, const FlowParams& p);
GenDiffeo gen_flow(const GenVectorField& v, const FlowParams& p);

GenDiffeo restrict_to(const GenDiffeo& f, double r2);

// max(|B|_{k-1}, |phi - Id|_k), with |B|_0 when k = 0
double diffeo_norm(const GenDiffeo& f, int k);

// (B, phi) o (B', psi) = (psi^* B + B', phi o psi)
GenDiffeo compose(const GenDiffeo& Phi, const GenDiffeo& Psi, const FlowParams& p = {});
GenDiffeo inverse(const GenDiffeo& Phi, const FlowParams& p = {});

// Phi_* u = DPhi(u) relocated by phi^{-1}
RealPair pushforward_section(const GenDiffeo& Phi, const RealPair& u, const FlowParams& p = {});

struct ActionResult {
    Deformation eps;
    double skew_defect = 0;  // symmetric part of the raw graph matrix before projection
};

ActionResult act_on_deformation(const GenDiffeo& Phi, const Deformation& e, const FlowParams& p = {});

// d/dt (Phi_{tv} . eps) at t = 0 for the real flow of v, from the Courant
// bracket of realify(v) with frame sections of the deformed bundle.
Deformation deformation_velocity(const Deformation& e, const GenVectorField& v);

// Radius that keeps phi^{-1} inside the domain of Phi, from the radius law.
double action_radius(const GenDiffeo& Phi, const FlowParams& p);

// (t^{-1} B, phi)
GenDiffeo lambda_on_diffeo(const GenDiffeo& Phi, double t);

}  // namespace gcn
