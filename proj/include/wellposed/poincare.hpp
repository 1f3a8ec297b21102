#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "wellposed/measures.hpp"

namespace wellposed {

enum class PoincareCriterion {
    payne_weinberger,
    log_concave_diam,
    bakry_emery,
    bobkov,
    holley_stroock,
    muckenhoupt_1d,
    francesi_1,
    francesi_2,
    francesi_3,
};

std::string to_string(PoincareCriterion c);

/// A certified upper bound on the order-q Poincare constant C_q[mu],
/// tagged with the criterion that produced it.
struct PoincareBound {
    double value = 0.0;
    double order_q = 2.0;
    PoincareCriterion criterion = PoincareCriterion::payne_weinberger;
    std::map<std::string, double> inputs; // parameters that entered the formula
};

/// Lebesgue measure on a bounded convex domain: C <= diam/pi.
PoincareBound bound_payne_weinberger(double diam);

/// Any log-concave measure on a bounded convex domain obeys the same
/// diameter bound (caller asserts log-concavity).
PoincareBound bound_log_concave_diam(double diam);

/// Bakry-Emery: Hess(V) >= alpha I with alpha > 0 gives C <= 1/sqrt(alpha).
PoincareBound bound_bakry_emery(double alpha);

/// Bobkov: a log-concave measure on R^d satisfies
/// C <= 12 sqrt(3) (∫ |theta - mean|^2 dmu)^{1/2}.
PoincareBound bound_bobkov(double variance, int dim = 1);

/// Holley-Stroock perturbation: C^2[mu] <= exp(osc) C^2[nu], osc being the
/// oscillation sup V - inf V of the log-perturbation.
PoincareBound bound_holley_stroock(const PoincareBound& base, double osc);

struct MuckenhouptBound {
    PoincareBound bound;
    double d_minus = 0.0;
    double d_plus = 0.0;
};

/// One-dimensional Muckenhoupt-type bound: with m the median,
///   D^-(q) = sup_{x in (a,m)} ∫_a^x q * ∫_x^m 1/q,
///   D^+(q) = sup_{x in (m,b)} ∫_x^b q * ∫_m^x 1/q,
/// and C[mu] <= 2 max(sqrt(D^+), sqrt(D^-)). The sup is scanned on a
/// 512-point grid and polished by golden-section search.
MuckenhouptBound bound_muckenhoupt_1d(const Distribution1D& d);

/// Scalar-field inputs for the scaling bounds of measures e^{-nV-U}.
/// Suprema over the ball B_R are grid-maximized when not supplied.
struct FrancesiParams {
    double alpha = 0.0;            // Hess(V) >= alpha I (required)
    double h = 0.0;                // Hess(U) >= h I
    std::optional<double> c;       // variant 2: theta . grad V >= c|theta|
    std::optional<double> ell;     // variant 2: theta . grad U >= ell|theta|
    std::optional<double> R;       // ball radius (variants 2,3)
    std::optional<double> c1, c2;  // variant 3 drift constants
    std::optional<double> C_R;     // variant 2 universal constant (must be given)
    std::optional<double> sup_grad_V;   // V_R
    std::optional<double> sup_grad_U;   // U_R
    std::optional<double> sup_lap_V;    // V_R^*
    std::optional<double> sup_WR;       // sup |grad U||grad V|
    std::optional<double> omega_R;      // sup_{B_R} V - inf V
    int dim = 1;
};

/// Scaling bounds for mu_n = e^{-nV-U} dtheta; the returned value is the
/// square root of the variant's bound on C^2[mu_n].
///
/// Missing suprema are filled by maximizing V, U callbacks over B_R on a
/// 1024-point grid (1d) or 64x64 (2d); C_R for variant 2 has no printed
/// value anywhere and must be supplied by the caller.
PoincareBound bound_francesi(const std::function<double(double)>& V,
                             const std::function<double(double)>& U,
                             int n, int variant, FrancesiParams params);

} // namespace wellposed
