#pragma once

#include <cmath>

namespace cellhom {

// Point in the unit cell (or its dilations).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }

// 2x2 real matrix; holds deformation-gradient perturbations, cofactors,
// and element gradients.
struct Mat2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 0.0;
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}
inline Mat2 operator*(double s, const Mat2& a) {
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}
inline bool operator==(const Mat2& a, const Mat2& b) {
    return a.a11 == b.a11 && a.a12 == b.a12 && a.a21 == b.a21 && a.a22 == b.a22;
}

inline Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

inline double det2(const Mat2& a) { return a.a11 * a.a22 - a.a12 * a.a21; }

// Sign convention: d det(A) / d A_ij = cof2(A)_ij, no transpose.
inline Mat2 cof2(const Mat2& a) { return {a.a22, -a.a21, -a.a12, a.a11}; }

// tr(cof(A)^T B); symmetric in (A, B).  The polarization of det:
//   det(l*A + (1-l)*B) = l^2 det A + (1-l)^2 det B + l(1-l) mixed_det(A, B).
inline double mixed_det(const Mat2& a, const Mat2& b) {
    // Grouped so that swapping (a, b) reproduces the identical float result.
    return (a.a11 * b.a22 + a.a22 * b.a11) - (a.a12 * b.a21 + a.a21 * b.a12);
}

inline double frobenius(const Mat2& a) {
    return std::sqrt(a.a11 * a.a11 + a.a12 * a.a12 + a.a21 * a.a21 + a.a22 * a.a22);
}

inline double frobenius_sq(const Mat2& a) {
    return a.a11 * a.a11 + a.a12 * a.a12 + a.a21 * a.a21 + a.a22 * a.a22;
}

inline bool all_finite(const Mat2& a) {
    return std::isfinite(a.a11) && std::isfinite(a.a12) &&
           std::isfinite(a.a21) && std::isfinite(a.a22);
}

}  // namespace cellhom
