#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace polariton
{
using cplx = std::complex<double>;

//---------------------------------------------------------------------------//
// Real 3-vector. Wavevectors and velocities live here.
struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](std::size_t i) const
    {
        return i == 0 ? x : (i == 1 ? y : z);
    }

    friend constexpr Vec3 operator+(Vec3 const& a, Vec3 const& b)
    {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Vec3 operator-(Vec3 const& a, Vec3 const& b)
    {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Vec3 operator-(Vec3 const& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 const& a)
    {
        return {s * a.x, s * a.y, s * a.z};
    }
    friend constexpr bool operator==(Vec3 const&, Vec3 const&) = default;
};

constexpr double dot(Vec3 const& a, Vec3 const& b)
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(Vec3 const& a) { return std::sqrt(dot(a, a)); }

// Unit vector from polar angle theta (from +z) and azimuth phi, scaled by r.
inline Vec3 spherical(double r, double theta, double phi)
{
    return {r * std::sin(theta) * std::cos(phi),
            r * std::sin(theta) * std::sin(phi),
            r * std::cos(theta)};
}

//---------------------------------------------------------------------------//
// Complex 3-vector.
struct CVec3
{
    std::array<cplx, 3> v{};

    CVec3() = default;
    CVec3(cplx a, cplx b, cplx c) : v{a, b, c} {}
    CVec3(Vec3 const& r) : v{r.x, r.y, r.z} {}  // NOLINT: implicit by design of k

    cplx& operator[](std::size_t i) { return v[i]; }
    cplx const& operator[](std::size_t i) const { return v[i]; }
};

inline cplx dot(CVec3 const& a, CVec3 const& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

//---------------------------------------------------------------------------//
/*!
 * Complex 3x3 dyadic, row-major: (i, j) is (output, input) index.
 */
class CDyad3
{
  public:
    CDyad3() = default;

    static CDyad3 identity()
    {
        CDyad3 r;
        r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
        return r;
    }

    static CDyad3 diag(cplx a, cplx b, cplx c)
    {
        CDyad3 r;
        r(0, 0) = a;
        r(1, 1) = b;
        r(2, 2) = c;
        return r;
    }

    cplx& operator()(std::size_t i, std::size_t j) { return m_[3 * i + j]; }
    cplx const& operator()(std::size_t i, std::size_t j) const
    {
        return m_[3 * i + j];
    }

    std::array<cplx, 9> const& data() const { return m_; }

    CDyad3& operator+=(CDyad3 const& o)
    {
        for (std::size_t i = 0; i < 9; ++i)
            m_[i] += o.m_[i];
        return *this;
    }
    CDyad3& operator-=(CDyad3 const& o)
    {
        for (std::size_t i = 0; i < 9; ++i)
            m_[i] -= o.m_[i];
        return *this;
    }
    CDyad3& operator*=(cplx s)
    {
        for (auto& x : m_)
            x *= s;
        return *this;
    }

    friend CDyad3 operator+(CDyad3 a, CDyad3 const& b) { return a += b; }
    friend CDyad3 operator-(CDyad3 a, CDyad3 const& b) { return a -= b; }
    friend CDyad3 operator*(cplx s, CDyad3 a) { return a *= s; }
    friend CDyad3 operator*(CDyad3 a, cplx s) { return a *= s; }
    friend bool operator==(CDyad3 const&, CDyad3 const&) = default;

  private:
    std::array<cplx, 9> m_{};
};

inline CDyad3 matmul(CDyad3 const& a, CDyad3 const& b)
{
    CDyad3 r;
    for (std::size_t i = 0; i < 3; ++i)
    {
        for (std::size_t j = 0; j < 3; ++j)
        {
            cplx s = 0.0;
            for (std::size_t l = 0; l < 3; ++l)
                s += a(i, l) * b(l, j);
            r(i, j) = s;
        }
    }
    return r;
}

inline CDyad3 operator*(CDyad3 const& a, CDyad3 const& b) { return matmul(a, b); }

inline CVec3 apply(CDyad3 const& a, CVec3 const& u)
{
    CVec3 r;
    for (std::size_t i = 0; i < 3; ++i)
        r[i] = a(i, 0) * u[0] + a(i, 1) * u[1] + a(i, 2) * u[2];
    return r;
}

inline CDyad3 transpose(CDyad3 const& a)
{
    CDyad3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            r(i, j) = a(j, i);
    return r;
}

inline CDyad3 conjugate(CDyad3 const& a)
{
    CDyad3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            r(i, j) = std::conj(a(i, j));
    return r;
}

inline CDyad3 dagger(CDyad3 const& a) { return conjugate(transpose(a)); }

inline CDyad3 outer(CVec3 const& u, CVec3 const& v)
{
    CDyad3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            r(i, j) = u[i] * v[j];
    return r;
}

inline double frobenius_sq(CDyad3 const& a)
{
    double s = 0.0;
    for (auto const& x : a.data())
        s += std::norm(x);
    return s;
}

inline double frobenius(CDyad3 const& a) { return std::sqrt(frobenius_sq(a)); }

// skew(v) u = v x u
inline CDyad3 skew(CVec3 const& v)
{
    CDyad3 r;
    r(0, 1) = -v[2];
    r(0, 2) = v[1];
    r(1, 0) = v[2];
    r(1, 2) = -v[0];
    r(2, 0) = -v[1];
    r(2, 1) = v[0];
    return r;
}

/*!
 * Cross product acting on the right (column) index:
 * (A x k)_ij = sum_lm A_il eps_ljm k_m.
 *
 * Under this convention A x k == A . skew(k), and the unit dyadic gives
 * z x 1 == skew(z).
 */
inline CDyad3 cross_right(CDyad3 const& a, CVec3 const& k)
{
    CDyad3 r;
    for (std::size_t i = 0; i < 3; ++i)
    {
        // row i of A is a vector a_i; (A x k) row i is a_i x k
        cplx const a0 = a(i, 0), a1 = a(i, 1), a2 = a(i, 2);
        r(i, 0) = a1 * k[2] - a2 * k[1];
        r(i, 1) = a2 * k[0] - a0 * k[2];
        r(i, 2) = a0 * k[1] - a1 * k[0];
    }
    return r;
}

// Left-index reading, (k x A)_ij = sum_lm eps_ilm k_l A_mj. Diagnostic only.
inline CDyad3 cross_left(CVec3 const& k, CDyad3 const& a)
{
    return matmul(skew(k), a);
}

}  // namespace polariton
