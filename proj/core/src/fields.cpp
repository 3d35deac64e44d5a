#include "sgsim/fields.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "sgsim/model.hpp"

namespace sgsim {

namespace {

bool is_2d(FieldKind k) { return k == FieldKind::Linear2D || k == FieldKind::Nonlinear2D; }
bool is_linear(FieldKind k) { return k == FieldKind::Linear1D || k == FieldKind::Linear2D; }

}  // namespace

FieldSample field_at(const FieldModel& f, double x, double y) {
    FieldSample s;
    switch (f.kind) {
        case FieldKind::Linear1D:
            s.Bx = f.B0 + f.eta * x;
            break;
        case FieldKind::Nonlinear1D:
            s.Bx = f.B0 - f.eta * x * x;
            break;
        case FieldKind::Linear2D:
            s.Bx = f.B0 + f.eta * x;
            s.By = -f.eta * f.y_gradient_scale * y;
            break;
        case FieldKind::Nonlinear2D:
            s.Bx = f.B0 - f.eta * (x * x - y * y);
            s.By = 2.0 * f.eta * f.y_gradient_scale * x * y;
            break;
    }
    return s;
}

MaxwellResiduals maxwell_residuals(const FieldModel& f, const GridSpec& grid) {
    if (!is_2d(f.kind))
        throw std::invalid_argument("maxwell_residuals: 1D field kinds are not supported");
    MaxwellResiduals r;
    const int n = grid.points_per_axis;
    const double h = grid.half_extent;
    const double g = f.y_gradient_scale;
    for (int i = 0; i < n; ++i) {
        const double x = n > 1 ? -h + 2.0 * h * i / (n - 1) : 0.0;
        for (int j = 0; j < n; ++j) {
            const double y = n > 1 ? -h + 2.0 * h * j / (n - 1) : 0.0;
            double div, curl;
            if (f.kind == FieldKind::Linear2D) {
                // dBx/dx = eta, dBy/dy = -g eta, dBy/dx = 0, dBx/dy = 0
                div = f.eta + (-g * f.eta);
                curl = 0.0 - 0.0;
            } else {
                // dBx/dx = -2 eta x, dBy/dy = 2 g eta x
                // dBy/dx =  2 g eta y, dBx/dy = 2 eta y
                div = -2.0 * f.eta * x + 2.0 * g * f.eta * x;
                curl = 2.0 * g * f.eta * y - 2.0 * f.eta * y;
            }
            r.max_abs_div = std::max(r.max_abs_div, std::abs(div));
            r.max_abs_curl = std::max(r.max_abs_curl, std::abs(curl));
        }
    }
    return r;
}

double potential_energy(const FieldModel& f, const PhysicalConstants& c, double mass,
                        int spin_x, double x, double y) {
    const FieldSample b = field_at(f, x, y);
    const double b_sq = b.Bx * b.Bx + b.By * b.By;
    return -(c.chi_rho * mass / (2.0 * c.mu0)) * b_sq + c.hbar * c.gamma_e * spin_x * b.Bx;
}

namespace {

struct Term {
    double value;
    const char* label;
};

void pick_dominant(const std::vector<Term>& terms, double& total, std::string& label) {
    total = 0.0;
    double best = -1.0;
    for (const auto& t : terms) {
        total += t.value;
        if (std::abs(t.value) > best) {
            best = std::abs(t.value);
            label = t.label;
        }
    }
}

}  // namespace

ForceSample force_at(const FieldModel& f, const PhysicalConstants& c, double mass,
                     int spin_x, double x, double y, bool include_sy_terms, double s_y) {
    ForceSample out;
    out.position = {x, y};
    const double cm = c.chi_rho * mass / c.mu0;  // chi m / mu0, negative
    const double hg = c.hbar * c.gamma_e;
    const double g = f.y_gradient_scale;

    std::vector<Term> fx, fy;
    if (is_linear(f.kind)) {
        const double eta = f.eta;
        fx.push_back({cm * eta * eta * x, "diamagnetic_gradient_x"});
        fx.push_back({cm * f.B0 * eta, "diamagnetic_bias"});
        fx.push_back({-hg * spin_x * eta, "spin_x"});
        if (is_2d(f.kind)) {
            fy.push_back({cm * g * g * eta * eta * y, "diamagnetic_gradient_y"});
            if (include_sy_terms) fy.push_back({hg * s_y * g * eta, "spin_y"});
        }
    } else {
        const double eta = f.eta;
        if (!is_2d(f.kind)) {
            // -dU/dx for Bx = B0 - eta x^2
            fx.push_back({2.0 * cm * eta * eta * x * x * x, "diamagnetic_quartic"});
            fx.push_back({-2.0 * cm * f.B0 * eta * x, "inverted_quadratic"});
            fx.push_back({2.0 * hg * spin_x * eta * x, "spin_x"});
        } else {
            fx.push_back({2.0 * cm * eta * eta * x * x * x, "diamagnetic_quartic_x"});
            fx.push_back({-2.0 * cm * f.B0 * eta * x, "inverted_quadratic"});
            fx.push_back({2.0 * hg * spin_x * eta * x, "spin_x"});
            fx.push_back({2.0 * cm * eta * eta * (2.0 * g * g - 1.0) * x * y * y, "diamagnetic_cross_x"});
            if (include_sy_terms) fx.push_back({-2.0 * hg * s_y * g * eta * y, "spin_y"});

            fy.push_back({2.0 * cm * eta * eta * y * y * y, "diamagnetic_quartic_y"});
            fy.push_back({2.0 * cm * f.B0 * eta * y, "confining_quadratic"});
            fy.push_back({-2.0 * hg * spin_x * eta * y, "spin_x"});
            fy.push_back({2.0 * cm * eta * eta * (2.0 * g * g - 1.0) * x * x * y, "diamagnetic_cross_y"});
            if (include_sy_terms) fy.push_back({-2.0 * hg * s_y * g * eta * x, "spin_y"});
        }
    }

    pick_dominant(fx, out.force[0], out.dominant_term[0]);
    if (!fy.empty()) pick_dominant(fy, out.force[1], out.dominant_term[1]);
    return out;
}

double larmor_frequency(const PhysicalConstants& c, double B0) {
    return std::abs(c.gamma_e * B0);
}

YConfinementReport y_confinement_report(const FieldModel& f, const PhysicalConstants& c,
                                        double mass, double sigma0,
                                        double superposition_scale) {
    if (!is_2d(f.kind))
        throw std::invalid_argument("y_confinement_report: 2D field kind required");
    YConfinementReport r;
    if (f.kind == FieldKind::Linear2D) {
        r.omega_y = omega_harmonic(c, f.eta);
    } else {
        r.omega_y = omega_inverted(c, f.B0, f.eta);
    }
    r.amplitude = sigma0;
    r.ratio = superposition_scale > 0.0 ? r.amplitude / superposition_scale : 0.0;
    return r;
}

}  // namespace sgsim
