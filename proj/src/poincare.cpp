#include "wellposed/poincare.hpp"

#include <cmath>

namespace wellposed {

std::string to_string(PoincareCriterion c) {
    switch (c) {
        case PoincareCriterion::payne_weinberger: return "payne_weinberger";
        case PoincareCriterion::log_concave_diam: return "log_concave_diam";
        case PoincareCriterion::bakry_emery: return "bakry_emery";
        case PoincareCriterion::bobkov: return "bobkov";
        case PoincareCriterion::holley_stroock: return "holley_stroock";
        case PoincareCriterion::muckenhoupt_1d: return "muckenhoupt_1d";
        case PoincareCriterion::francesi_1: return "francesi_1";
        case PoincareCriterion::francesi_2: return "francesi_2";
        case PoincareCriterion::francesi_3: return "francesi_3";
    }
    return "?";
}

PoincareBound bound_payne_weinberger(double diam) {
    if (!(diam > 0.0) || !std::isfinite(diam))
        throw NumericError("payne_weinberger: diameter must be positive finite");
    return {diam / M_PI, 2.0, PoincareCriterion::payne_weinberger, {{"diam", diam}}};
}

PoincareBound bound_log_concave_diam(double diam) {
    PoincareBound b = bound_payne_weinberger(diam);
    b.criterion = PoincareCriterion::log_concave_diam;
    return b;
}

PoincareBound bound_bakry_emery(double alpha) {
    if (!(alpha > 0.0)) throw InvalidCurvature("bakry_emery: alpha must be positive");
    return {1.0 / std::sqrt(alpha), 2.0, PoincareCriterion::bakry_emery,
            {{"alpha", alpha}}};
}

PoincareBound bound_bobkov(double variance, int dim) {
    if (!(variance > 0.0)) throw NumericError("bobkov: variance must be positive");
    return {12.0 * std::sqrt(3.0) * std::sqrt(variance), 2.0,
            PoincareCriterion::bobkov,
            {{"variance", variance}, {"dim", static_cast<double>(dim)}}};
}

PoincareBound bound_holley_stroock(const PoincareBound& base, double osc) {
    if (!(osc >= 0.0) || !std::isfinite(osc))
        throw NumericError("holley_stroock: oscillation must be finite nonnegative");
    PoincareBound b = base;
    b.value = base.value * std::exp(0.5 * osc);
    b.criterion = PoincareCriterion::holley_stroock;
    b.inputs["base_value"] = base.value;
    b.inputs["osc"] = osc;
    return b;
}

namespace {

double golden_max(const std::function<double(double)>& f, double a, double b) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 80 && b - a > 1e-12 * (1.0 + std::abs(a)); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

} // namespace

MuckenhouptBound bound_muckenhoupt_1d(const Distribution1D& d) {
    const Interval dom = d.cached_range();
    const double m = d.median();
    QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    spec.rel_tol = 1e-9;
    spec.max_subdivisions = 800;

    auto q = [&](double t) { return d.unnormalized(t); };
    auto inv_q = [&](double t) {
        double v = q(t);
        if (!(v > 0.0)) throw NonConvergent("muckenhoupt: density vanishes inside support");
        return 1.0 / v;
    };
    // cumulative pieces are re-integrated per x; the norm stays scale-free
    // since q appears once directly and once reciprocally
    const double norm = d.normalizer();
    auto d_minus_at = [&](double x) {
        if (x <= dom.lo || x >= m) return 0.0;
        double left = integrate(q, {dom.lo, x}, spec) / norm;
        double right = integrate(inv_q, {x, m}, spec) * norm;
        return left * right;
    };
    auto d_plus_at = [&](double x) {
        if (x <= m || x >= dom.hi) return 0.0;
        double right = integrate(q, {x, dom.hi}, spec) / norm;
        double left = integrate(inv_q, {m, x}, spec) * norm;
        return right * left;
    };

    const int kGrid = 512;
    double dminus = 0.0, arg_m = 0.5 * (dom.lo + m);
    for (int i = 1; i < kGrid; ++i) {
        double x = dom.lo + (m - dom.lo) * i / kGrid;
        double v = d_minus_at(x);
        if (v > dminus) {
            dminus = v;
            arg_m = x;
        }
    }
    double cell = (m - dom.lo) / kGrid;
    dminus = std::max(dminus, golden_max(d_minus_at, std::max(dom.lo, arg_m - cell),
                                         std::min(m, arg_m + cell)));

    double dplus = 0.0, arg_p = 0.5 * (m + dom.hi);
    for (int i = 1; i < kGrid; ++i) {
        double x = m + (dom.hi - m) * i / kGrid;
        double v = d_plus_at(x);
        if (v > dplus) {
            dplus = v;
            arg_p = x;
        }
    }
    cell = (dom.hi - m) / kGrid;
    dplus = std::max(dplus, golden_max(d_plus_at, std::max(m, arg_p - cell),
                                       std::min(dom.hi, arg_p + cell)));

    if (!std::isfinite(dminus) || !std::isfinite(dplus))
        throw NonConvergent("muckenhoupt: D+ / D- not finite");

    MuckenhouptBound out;
    out.d_minus = dminus;
    out.d_plus = dplus;
    out.bound = {2.0 * std::max(std::sqrt(dplus), std::sqrt(dminus)), 2.0,
                 PoincareCriterion::muckenhoupt_1d,
                 {{"d_minus", dminus}, {"d_plus", dplus}, {"median", m}}};
    return out;
}

PoincareBound bound_francesi(const std::function<double(double)>& V,
                             const std::function<double(double)>& U,
                             int n, int variant, FrancesiParams p) {
    if (!(p.alpha > 0.0)) throw InvalidCurvature("francesi: alpha must be positive");
    auto grid_sup = [&](const std::function<double(double)>& f, double R) {
        double s = -kInf;
        const int g = 1024;
        for (int i = 0; i <= g; ++i) s = std::max(s, f(-R + 2.0 * R * i / g));
        return s;
    };
    auto grid_sup_abs_d1 = [&](const std::function<double(double)>& f, double R) {
        double s = 0.0;
        const int g = 1024;
        for (int i = 0; i <= g; ++i) {
            double t = -R + 2.0 * R * i / g;
            s = std::max(s, std::abs(derivative_fd(f, t)));
        }
        return s;
    };

    PoincareBound b;
    b.order_q = 2.0;
    b.inputs["n"] = n;
    b.inputs["alpha"] = p.alpha;
    b.inputs["h"] = p.h;

    if (variant == 1) {
        if (!(n > -p.h / p.alpha))
            throw ThresholdViolation("francesi(1): requires n > -h/alpha");
        double c2 = 1.0 / (n * p.alpha + p.h);
        b.value = std::sqrt(c2);
        b.criterion = PoincareCriterion::francesi_1;
        return b;
    }

    if (!p.R) throw MissingParam("francesi: R required for variants 2 and 3");
    const double R = *p.R;
    const double d_R = (p.dim - 1) / R;

    if (variant == 2) {
        if (!p.c || !p.ell) throw MissingParam("francesi(2): c and ell required");
        if (!p.C_R)
            throw MissingParam("francesi(2): C_R is never printed in closed form "
                               "and must be supplied");
        if (!(n > std::max(-p.h / p.alpha, (d_R + 1.0 - *p.ell) / *p.c)))
            throw ThresholdViolation("francesi(2): n below threshold");
        double V_R = p.sup_grad_V ? *p.sup_grad_V : grid_sup_abs_d1(V, R);
        double U_R = p.sup_grad_U ? *p.sup_grad_U : grid_sup_abs_d1(U, R);
        double num = p.alpha * n + p.h +
                     (*p.c * n + *p.ell - d_R + n * V_R + U_R) * (*p.C_R);
        double den = (p.alpha * n + p.h) * (*p.c * n + *p.ell - 1.0 - d_R);
        if (!(den > 0.0)) throw ThresholdViolation("francesi(2): denominator not positive");
        b.value = std::sqrt(num / den);
        b.criterion = PoincareCriterion::francesi_2;
        b.inputs["V_R"] = V_R;
        b.inputs["U_R"] = U_R;
        b.inputs["C_R"] = *p.C_R;
        return b;
    }

    if (variant == 3) {
        if (!p.c1 || !p.c2) throw MissingParam("francesi(3): c1 and c2 required");
        if (!(n > std::max(1.0 + 1.0 / *p.c2, -p.h / p.alpha)))
            throw ThresholdViolation("francesi(3): n below threshold");
        double lapV;
        if (p.sup_lap_V) {
            lapV = *p.sup_lap_V;
        } else {
            lapV = 0.0;
            const int g = 1024;
            for (int i = 0; i <= g; ++i) {
                double t = -R + 2.0 * R * i / g;
                double hstep = 1e-5 * std::max(1.0, std::abs(t));
                double dd = (V(t + hstep) - 2.0 * V(t) + V(t - hstep)) / (hstep * hstep);
                lapV = std::max(lapV, std::abs(dd));
            }
        }
        double W_R;
        if (p.sup_WR) {
            W_R = *p.sup_WR;
        } else {
            W_R = 0.0;
            const int g = 1024;
            for (int i = 0; i <= g; ++i) {
                double t = -R + 2.0 * R * i / g;
                W_R = std::max(W_R, std::abs(derivative_fd(U, t)) *
                                        std::abs(derivative_fd(V, t)));
            }
        }
        double omega;
        if (p.omega_R) {
            omega = *p.omega_R;
        } else {
            double supV = grid_sup(V, R);
            // inf over R^d scanned on a generous window around B_R
            double infV = kInf;
            const int g = 4096;
            for (int i = 0; i <= g; ++i) {
                double t = -20.0 * R + 40.0 * R * i / g;
                infV = std::min(infV, V(t));
            }
            omega = supV - infV;
        }
        double num = p.alpha * n + p.h + std::exp(omega) * (*p.c1 * n + lapV + W_R);
        double den = (p.alpha * n + p.h) * (*p.c1) * n;
        b.value = std::sqrt(num / den);
        b.criterion = PoincareCriterion::francesi_3;
        b.inputs["sup_lap_V"] = lapV;
        b.inputs["W_R"] = W_R;
        b.inputs["omega_R"] = omega;
        return b;
    }
    throw NumericError("francesi: variant must be 1, 2 or 3");
}

} // namespace wellposed
