#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "cellhom/algebra2d.hpp"

namespace cellhom {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Growth/coercivity parameters of an extended-real integrand:
//   alpha*G(xi) <= W(x,xi) <= beta*(1+G(xi))   and   c*|xi|^p <= W(x,xi).
struct IntegrandParams {
    double p = 4.0;      // growth exponent, > 2
    double r = 1.0;      // h-scaling exponent, <= 1
    double alpha = 0.5;
    double beta = 1.5;
    double c = 0.5;
};

// Extended-real integrand W(x, xi) with values in [0, +inf], 1-periodic in x.
// +inf is an ordinary value (never an exception); the effective domain is
// x-independent and exposed through in_domain().
class EnergyDensity {
public:
    virtual ~EnergyDensity() = default;

    virtual double eval(const Vec2& x, const Mat2& xi) const = 0;
    // Defined wherever eval is finite; throws std::domain_error otherwise.
    virtual Mat2 grad_xi(const Vec2& x, const Mat2& xi) const = 0;
    virtual bool in_domain(const Mat2& xi) const = 0;
    // ru-usc denominator weight a(x); 1-periodic, > 0.
    virtual double weight_a(const Vec2& /*x*/) const { return 1.0; }
    virtual const IntegrandParams& params() const = 0;
    virtual std::string id() const = 0;
};

// --- the concrete closed forms -------------------------------------------

// h(x) = 1/x on (0, inf); convex, nonincreasing, h(lx) <= h(x)/l^r with r=1.
double h_eval(double x);
double h_prime(double x);

// Effective domain: min{1+xi11, 1+xi22} > max{|xi12|, |xi21|}.
bool in_G(const Mat2& xi);

// g(xi) = h(det(I+xi)) on the domain, +inf outside.
double g_eval(const Mat2& xi);

// G(xi) = |xi|_F^p + g(xi) on the domain, +inf outside.
double G_eval(const Mat2& xi, double p = 4.0);

// Coefficient of the default modulated p-power density at x (1-periodic).
double phi_coeff(const Vec2& x);

// Phi(x, xi) = (1 + sin(2 pi x1) sin(2 pi x2) / 2) * |xi|_F^p.
double phi_eval(const Vec2& x, const Mat2& xi, double p = 4.0);

// W(x, xi) = Phi(x, xi) + g(xi) on the domain, +inf outside.
double W_eval(const Vec2& x, const Mat2& xi, double p = 4.0);

// Analytic xi-gradient of W; requires in_G(xi).
Mat2 grad_W(const Vec2& x, const Mat2& xi, double p = 4.0);

// (alpha, beta, c) valid for the default W against G.
IntegrandParams growth_constants();

// Geometry of the effective domain: membership, scaling, boundary rays.
struct DomainGeometry {
    bool contains(const Mat2& xi) const { return in_G(xi); }
    // sup{ s > 0 : s*direction in G }, bisected to 1e-10; +inf when the ray
    // never leaves the domain.  Throws std::invalid_argument for the zero
    // direction or an infeasible small-s start.
    double boundary_ray(const Mat2& direction) const;
};

double boundary_ray(const Mat2& direction);

// --- EnergyDensity instances ----------------------------------------------

// x-independent quasiconvex reference density G.
class GDensity final : public EnergyDensity {
public:
    explicit GDensity(double p = 4.0) { params_.p = p; }
    double eval(const Vec2&, const Mat2& xi) const override { return G_eval(xi, params_.p); }
    Mat2 grad_xi(const Vec2& x, const Mat2& xi) const override;
    bool in_domain(const Mat2& xi) const override { return in_G(xi); }
    const IntegrandParams& params() const override { return params_; }
    std::string id() const override { return "G"; }

private:
    IntegrandParams params_;
};

// Oscillating quasiconvex part alone; ru-usc weight 2.
class PhiDensity final : public EnergyDensity {
public:
    explicit PhiDensity(double p = 4.0) { params_.p = p; }
    double eval(const Vec2& x, const Mat2& xi) const override { return phi_eval(x, xi, params_.p); }
    Mat2 grad_xi(const Vec2& x, const Mat2& xi) const override;
    bool in_domain(const Mat2&) const override { return true; }
    double weight_a(const Vec2&) const override { return 2.0; }
    const IntegrandParams& params() const override { return params_; }
    std::string id() const override { return "Phi"; }

private:
    IntegrandParams params_;
};

// The full density W = Phi + g with the determinant barrier; ru-usc weight 2.
class WDensity final : public EnergyDensity {
public:
    explicit WDensity(double p = 4.0) { params_ = growth_constants(); params_.p = p; }
    double eval(const Vec2& x, const Mat2& xi) const override { return W_eval(x, xi, params_.p); }
    Mat2 grad_xi(const Vec2& x, const Mat2& xi) const override;
    bool in_domain(const Mat2& xi) const override { return in_G(xi); }
    double weight_a(const Vec2&) const override { return 2.0; }
    const IntegrandParams& params() const override { return params_; }
    std::string id() const override { return "W"; }

private:
    IntegrandParams params_;
};

// The barrier part alone (for ru-usc modulus runs); weight 1.
class GSmallDensity final : public EnergyDensity {
public:
    GSmallDensity() = default;
    double eval(const Vec2&, const Mat2& xi) const override { return g_eval(xi); }
    Mat2 grad_xi(const Vec2& x, const Mat2& xi) const override;
    bool in_domain(const Mat2& xi) const override { return in_G(xi); }
    const IntegrandParams& params() const override { return params_; }
    std::string id() const override { return "g"; }

private:
    IntegrandParams params_;
};

// Double-well demo density (|xi|_F^2 - 1)^2: finite everywhere, not
// quasiconvex, used to exercise pointwise quasiconvexification.
class DoubleWellDensity final : public EnergyDensity {
public:
    DoubleWellDensity() { params_.p = 4.0; }
    double eval(const Vec2&, const Mat2& xi) const override {
        const double s = frobenius_sq(xi) - 1.0;
        return s * s;
    }
    Mat2 grad_xi(const Vec2&, const Mat2& xi) const override {
        return 4.0 * (frobenius_sq(xi) - 1.0) * xi;
    }
    bool in_domain(const Mat2&) const override { return true; }
    const IntegrandParams& params() const override { return params_; }
    std::string id() const override { return "doublewell"; }

private:
    IntegrandParams params_;
};

// Freezes the x-slot of another density (Dacorogna pointwise relaxation).
class FrozenXDensity final : public EnergyDensity {
public:
    FrozenXDensity(const EnergyDensity& inner, Vec2 x0) : inner_(inner), x0_(x0) {}
    double eval(const Vec2&, const Mat2& xi) const override { return inner_.eval(x0_, xi); }
    Mat2 grad_xi(const Vec2&, const Mat2& xi) const override { return inner_.grad_xi(x0_, xi); }
    bool in_domain(const Mat2& xi) const override { return inner_.in_domain(xi); }
    double weight_a(const Vec2& x) const override { return inner_.weight_a(x); }
    const IntegrandParams& params() const override { return inner_.params(); }
    std::string id() const override { return inner_.id() + "@frozen"; }

private:
    const EnergyDensity& inner_;
    Vec2 x0_;
};

// Factory for the ids accepted in experiment configs.
std::unique_ptr<EnergyDensity> make_density(const std::string& id, double p = 4.0);

}  // namespace cellhom
