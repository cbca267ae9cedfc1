#include "qd/sigma.hpp"

#include <cmath>

#include "qd/quadrature.hpp"

namespace qd {

namespace {
const double kQuadTol = 5e-11;

double abs_u_minus_a(double u, double x, double y) {
    return std::hypot(u - x, y);
}
}  // namespace

// Horizontal-leg contribution. On [0,1] the integrand is purely imaginary, so
// only the parts of [0,x] outside [0,1] contribute to the real part.
double sigma_F(double x, double y) {
    if (x >= 0.0 && x <= 1.0) return 0.0;
    if (x > 1.0) {
        // u = 1 + (x-1) sin^2(psi) absorbs the sqrt(u-1) zero at u=1
        double L = x - 1.0;
        auto f = [&](double psi) {
            double s = std::sin(psi), c = std::cos(psi);
            double u = 1.0 + L * s * s;
            return cplx(2.0 * std::pow(L, 1.5) * abs_u_minus_a(u, x, y) * s * s * c /
                        std::sqrt(u));
        };
        return adaptive_gl(f, 0.0, PI / 2.0, kQuadTol).value.real();
    }
    // x < 0: u = -v^2 turns sqrt((u-1)/u) into sqrt(v^2+1)/v and cancels the pole
    double vx = std::sqrt(-x);
    auto f = [&](double v) {
        return cplx(-2.0 * std::abs(cplx(v * v + x, -y)) * std::sqrt(1.0 + v * v));
    };
    return adaptive_gl(f, 0.0, vx, kQuadTol).value.real();
}

// Vertical-leg contribution; t = sin^2(psi) tames both the sqrt(1-t) factor at
// t=1 and the 1/sqrt(t) blow-up of Im sqrt(1-1/(ity)) when x = 0.
double sigma_G(double x, double y) {
    auto f = [&](double psi) {
        double s = std::sin(psi), c = std::cos(psi);
        double t = s * s;
        cplx w = std::sqrt(cplx(1.0, 0.0) - 1.0 / cplx(x, t * y));
        // sqrt(1-t^2) dt = (c sqrt(1+t)) (2 s c dpsi)
        return cplx(-2.0 * y * y * s * c * c * std::sqrt(1.0 + t) * w.imag());
    };
    return adaptive_gl(f, 0.0, PI / 2.0, kQuadTol).value.real();
}

double sigma_value(cplx a) {
    if (a.imag() <= 0.0) throw DomainError("sigma_value needs Im a > 0");
    return sigma_F(a.real(), a.imag()) + sigma_G(a.real(), a.imag());
}

const char* region_name(Region r) {
    switch (r) {
        case Region::Omega1: return "Omega1";
        case Region::Sigma: return "Sigma";
        default: return "Omega2";
    }
}

namespace {
// Calibrate the sign convention once against a known two-short interior point.
double calibration() {
    static const double flip = sigma_value(cplx(1.6, 2.0)) > 0.0 ? 1.0 : -1.0;
    return flip;
}
}  // namespace

Classification classify_apex(cplx a, double sigma_band) {
    double S = calibration() * sigma_value(a);
    Region r;
    if (std::abs(S) <= sigma_band)
        r = Region::Sigma;
    else if (a.real() <= 1.0 || S < 0.0)
        r = Region::Omega2;
    else
        r = Region::Omega1;
    return {r, S, std::abs(S)};
}

double sigma_partial_derivative_check(cplx a, double h) {
    if (!(a.real() > 1.0 && a.imag() > 0.0))
        throw DomainError("partial derivative check only applies for Re a > 1, Im a > 0");
    double x = a.real(), y = a.imag();
    auto S = [&](double xx) { return sigma_F(xx, y) + sigma_G(xx, y); };
    return calibration() * (S(x + h) - S(x - h)) / (2.0 * h);
}

namespace {
// Newton in x at fixed y; the locus is steep everywhere (its tangent never
// approaches horizontal), so x(y) continuation with this corrector is stable.
bool correct_x(double& x, double y, double tol) {
    for (int it = 0; it < 40; ++it) {
        double S = sigma_F(x, y) + sigma_G(x, y);
        if (std::abs(S) <= tol) return true;
        double h = 1e-6 * std::max(1.0, std::abs(x));
        double d = (sigma_F(x + h, y) + sigma_G(x + h, y) -
                    sigma_F(x - h, y) - sigma_G(x - h, y)) /
                   (2.0 * h);
        if (!(std::abs(d) > 0.0)) return false;
        double dx = S / d;
        if (std::abs(dx) > 0.5) dx = dx > 0 ? 0.5 : -0.5;
        x -= dx;
    }
    return false;
}
}  // namespace

SigmaCurve trace_sigma(double max_abs_z, double step) {
    const double kAccept = 1e-9;
    SigmaCurve out;
    out.points.push_back(cplx(1.0, 0.0));
    out.arclen.push_back(0.0);
    out.residual.push_back(0.0);

    // first step: launch at pi/3 above the real axis, then correct
    cplx z(1.0 + 0.01 * std::cos(PI / 3.0), 0.01 * std::sin(PI / 3.0));
    {
        double x = z.real();
        if (!correct_x(x, z.imag(), kAccept)) {
            out.complete = false;
            return out;
        }
        z = cplx(x, z.imag());
    }
    out.points.push_back(z);
    out.arclen.push_back(std::abs(z - cplx(1.0)));
    out.residual.push_back(sigma_F(z.real(), z.imag()) + sigma_G(z.real(), z.imag()));
    out.tangent_deg_at_origin = std::arg(z - cplx(1.0)) * 180.0 / PI;

    while (std::abs(z) < max_abs_z) {
        cplx prev = out.points[out.points.size() - 2];
        cplx dir = z - prev;
        dir /= std::abs(dir);
        double h = std::min(step, std::max(0.01, 0.05 * std::abs(z - cplx(1.0))));
        bool accepted = false;
        while (h >= 1e-6) {
            cplx zp = z + h * dir;
            double x = zp.real();
            if (correct_x(x, zp.imag(), kAccept) && x > 1.0) {
                cplx zn(x, zp.imag());
                out.arclen.push_back(out.arclen.back() + std::abs(zn - z));
                z = zn;
                out.points.push_back(z);
                out.residual.push_back(sigma_F(x, zp.imag()) + sigma_G(x, zp.imag()));
                accepted = true;
                break;
            }
            h *= 0.5;
        }
        if (!accepted) {
            out.complete = false;
            break;
        }
    }
    out.far_arg_deg = std::arg(out.points.back()) * 180.0 / PI;
    return out;
}

}  // namespace qd
