#include "cellhom/integrand.hpp"

#include <algorithm>
#include <cmath>

namespace cellhom {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double frac01(double v) { return v - std::floor(v); }

// |xi|^p via the squared norm; the default p = 4 avoids pow in the hot loop.
double p_power(double n2, double p) {
    if (p == 4.0) return n2 * n2;
    if (p == 2.0) return n2;
    return std::pow(n2, 0.5 * p);
}

// p |xi|^{p-2} xi, with the removable singularity at xi = 0 (p > 2).
Mat2 p_power_grad(const Mat2& xi, double p) {
    const double n2 = frobenius_sq(xi);
    if (n2 == 0.0) return Mat2{};
    if (p == 4.0) return (4.0 * n2) * xi;
    return (p * std::pow(n2, 0.5 * p - 1.0)) * xi;
}

}  // namespace

double h_eval(double x) {
    if (!(x > 0.0)) throw std::domain_error("h_eval: argument must be positive");
    return 1.0 / x;
}

double h_prime(double x) {
    if (!(x > 0.0)) throw std::domain_error("h_prime: argument must be positive");
    return -1.0 / (x * x);
}

bool in_G(const Mat2& xi) {
    return std::min(1.0 + xi.a11, 1.0 + xi.a22) >
           std::max(std::fabs(xi.a12), std::fabs(xi.a21));
}

double g_eval(const Mat2& xi) {
    if (!in_G(xi)) return kInf;
    return h_eval(det2(identity2() + xi));
}

double G_eval(const Mat2& xi, double p) {
    if (!in_G(xi)) return kInf;
    return p_power(frobenius_sq(xi), p) + g_eval(xi);
}

double phi_coeff(const Vec2& x) {
    return 1.0 + 0.5 * std::sin(kTwoPi * frac01(x.x)) * std::sin(kTwoPi * frac01(x.y));
}

double phi_eval(const Vec2& x, const Mat2& xi, double p) {
    return phi_coeff(x) * p_power(frobenius_sq(xi), p);
}

double W_eval(const Vec2& x, const Mat2& xi, double p) {
    if (!in_G(xi)) return kInf;
    return phi_eval(x, xi, p) + g_eval(xi);
}

Mat2 grad_W(const Vec2& x, const Mat2& xi, double p) {
    if (!in_G(xi)) throw std::domain_error("grad_W: xi outside the effective domain");
    const Mat2 f = identity2() + xi;
    return phi_coeff(x) * p_power_grad(xi, p) + h_prime(det2(f)) * cof2(f);
}

IntegrandParams growth_constants() {
    IntegrandParams c;
    c.p = 4.0;
    c.r = 1.0;
    c.alpha = 0.5;
    c.beta = 1.5;
    c.c = 0.5;
    return c;
}

double DomainGeometry::boundary_ray(const Mat2& direction) const {
    if (frobenius(direction) == 0.0)
        throw std::invalid_argument("boundary_ray: zero direction");
    const double s0 = 1e-6;
    if (!in_G(s0 * direction))
        throw std::invalid_argument("boundary_ray: ray leaves the domain immediately");

    // Grow until the ray exits; the domain is star-shaped about 0.
    double lo = s0;
    double hi = s0;
    const double cap = 1e12;
    while (in_G(hi * direction)) {
        lo = hi;
        hi *= 2.0;
        if (hi > cap) return kInf;
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (in_G(mid * direction) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double boundary_ray(const Mat2& direction) {
    return DomainGeometry{}.boundary_ray(direction);
}

Mat2 GDensity::grad_xi(const Vec2&, const Mat2& xi) const {
    if (!in_G(xi)) throw std::domain_error("GDensity::grad_xi: xi outside the domain");
    const Mat2 f = identity2() + xi;
    return p_power_grad(xi, params_.p) + h_prime(det2(f)) * cof2(f);
}

Mat2 PhiDensity::grad_xi(const Vec2& x, const Mat2& xi) const {
    return phi_coeff(x) * p_power_grad(xi, params_.p);
}

Mat2 WDensity::grad_xi(const Vec2& x, const Mat2& xi) const {
    return grad_W(x, xi, params_.p);
}

Mat2 GSmallDensity::grad_xi(const Vec2&, const Mat2& xi) const {
    if (!in_G(xi)) throw std::domain_error("GSmallDensity::grad_xi: xi outside the domain");
    const Mat2 f = identity2() + xi;
    return h_prime(det2(f)) * cof2(f);
}

std::unique_ptr<EnergyDensity> make_density(const std::string& id, double p) {
    if (id == "W") return std::make_unique<WDensity>(p);
    if (id == "G") return std::make_unique<GDensity>(p);
    if (id == "Phi") return std::make_unique<PhiDensity>(p);
    if (id == "g") return std::make_unique<GSmallDensity>();
    if (id == "doublewell") return std::make_unique<DoubleWellDensity>();
    throw std::invalid_argument("unknown integrand id: " + id);
}

}  // namespace cellhom
