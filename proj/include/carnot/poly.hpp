#pragma once

// Sparse polynomials in (x, y, t, s) where s is an auxiliary symbol bound to
// a fixed cutoff polynomial via s = 1 - g(x,y,t); derivatives apply the
// chain rule ds = -dg.  This makes invariant-field applications to the
// compactly supported spline profiles exact to round-off, at any order.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "carnot/group.hpp"

namespace carnot {

class Poly {
  public:
    using Key = std::uint32_t;  // packed exponents, 8 bits each: x | y<<8 | t<<16 | s<<24

    static Key key(int ex, int ey, int et, int es) {
        return static_cast<Key>(ex) | (static_cast<Key>(ey) << 8) | (static_cast<Key>(et) << 16) |
               (static_cast<Key>(es) << 24);
    }

    static Poly constant(double c) {
        Poly p;
        if (c != 0.0) p.terms_[key(0, 0, 0, 0)] = c;
        return p;
    }
    static Poly monomial(int ex, int ey, int et, int es, double c = 1.0) {
        Poly p;
        if (c != 0.0) p.terms_[key(ex, ey, et, es)] = c;
        return p;
    }

    bool empty() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    Poly& operator+=(const Poly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    Poly operator+(const Poly& o) const {
        Poly r = *this;
        r += o;
        return r;
    }
    Poly operator*(double c) const {
        Poly r;
        if (c == 0.0) return r;
        for (const auto& [k, v] : terms_) r.terms_[k] = v * c;
        return r;
    }
    Poly operator*(const Poly& o) const {
        Poly r;
        for (const auto& [ka, ca] : terms_)
            for (const auto& [kb, cb] : o.terms_) {
                // exponent fields add without carry as long as each stays < 256
                r.add_term(ka + kb, ca * cb);
            }
        return r;
    }

    /// Partial derivative in variable v (0=x,1=y,2=t,3=s), no chain rule.
    Poly partial(int v) const {
        Poly r;
        const int shift = 8 * v;
        for (const auto& [k, c] : terms_) {
            const int e = static_cast<int>((k >> shift) & 0xff);
            if (e == 0) continue;
            r.add_term(k - (1u << shift), c * e);
        }
        return r;
    }

    double eval(double x, double y, double t, double s) const {
        int mx = 0, my = 0, mt = 0, ms = 0;
        for (const auto& [k, c] : terms_) {
            mx = std::max(mx, static_cast<int>(k & 0xff));
            my = std::max(my, static_cast<int>((k >> 8) & 0xff));
            mt = std::max(mt, static_cast<int>((k >> 16) & 0xff));
            ms = std::max(ms, static_cast<int>((k >> 24) & 0xff));
        }
        thread_local std::vector<double> px, py, pt, ps;
        fill_powers(px, x, mx);
        fill_powers(py, y, my);
        fill_powers(pt, t, mt);
        fill_powers(ps, s, ms);
        double acc = 0.0;
        for (const auto& [k, c] : terms_)
            acc += c * px[k & 0xff] * py[(k >> 8) & 0xff] * pt[(k >> 16) & 0xff] *
                   ps[(k >> 24) & 0xff];
        return acc;
    }

    const std::map<Key, double>& terms() const { return terms_; }

  private:
    static void fill_powers(std::vector<double>& buf, double v, int maxe) {
        buf.assign(static_cast<std::size_t>(maxe) + 1, 1.0);
        for (int i = 1; i <= maxe; ++i) buf[i] = buf[i - 1] * v;
    }
    void add_term(Key k, double c) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (c != 0.0) terms_[k] = c;
        } else {
            it->second += c;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    std::map<Key, double> terms_;
};

/// Full derivative of P(x,y,t,s(x,y,t)) in coordinate v, with s bound to
/// 1 - g so that ds/dv = -dg/dv.
inline Poly chain_partial(const Poly& p, int v, const Poly& g) {
    Poly r = p.partial(v);
    Poly ds = p.partial(3) * (g.partial(v) * -1.0);
    r += ds;
    return r;
}

/// Invariant-field application (first-order part only; all five fields are
/// first order on H^1).  Coefficients match field_coefficients.
inline Poly apply_field_poly(FieldId id, const Poly& p, const Poly& g) {
    const Poly dx = chain_partial(p, 0, g);
    const Poly dy = chain_partial(p, 1, g);
    const Poly dt = chain_partial(p, 2, g);
    const Poly y = Poly::monomial(0, 1, 0, 0);
    const Poly x = Poly::monomial(1, 0, 0, 0);
    switch (id) {
        case FieldId::XL: return dx + y * dt * 2.0;
        case FieldId::YL: return dy + x * dt * -2.0;
        case FieldId::XR: return dx + y * dt * -2.0;
        case FieldId::YR: return dy + x * dt * 2.0;
        case FieldId::T: return dt;
    }
    throw std::logic_error("apply_field_poly: bad FieldId");
}

/// The homogeneous quartic |z|^4 + t^2 whose unit sublevel set is the
/// support of the spline profiles.
inline Poly norm_quartic() {
    Poly g;
    g += Poly::monomial(4, 0, 0, 0);
    g += Poly::monomial(2, 2, 0, 0, 2.0);
    g += Poly::monomial(0, 4, 0, 0);
    g += Poly::monomial(0, 0, 2, 0);
    return g;
}

/// Compactly supported spline profile: value = P(x,y,t,s) with s = (1-g)+,
/// zero outside {g <= 1}.  C^(p-1) smooth when every term carries s^m with
/// m >= p - |derivatives applied|.
class SplineProfile {
  public:
    SplineProfile() : g_(norm_quartic()) {}
    explicit SplineProfile(Poly p) : poly_(std::move(p)), g_(norm_quartic()) {}

    /// The base bump (1-g)+^p, p >= 1.
    static SplineProfile bump(int p) {
        if (p < 1) throw std::invalid_argument("SplineProfile::bump: order must be >= 1");
        return SplineProfile(Poly::monomial(0, 0, 0, p));
    }

    SplineProfile apply_field(FieldId id) const {
        return SplineProfile(apply_field_poly(id, poly_, g_));
    }

    SplineProfile scaled(double c) const { return SplineProfile(poly_ * c); }

    double operator()(const GroupPoint& pt) const {
        const double g = g_.eval(pt.x, pt.y, pt.t, 0.0);
        if (g >= 1.0) return 0.0;
        return poly_.eval(pt.x, pt.y, pt.t, 1.0 - g);
    }

    const Poly& poly() const { return poly_; }

  private:
    Poly poly_;
    Poly g_;
};

/// Polynomial-times-Gaussian profiles: sum of P_i(x,y,t) exp(-|p-c_i|^2 / (2 w_i^2)).
/// Closed under invariant-field application, so iterated divergences are
/// exact.  Effective support radius ~ 6w beyond which values are below 1e-7
/// of peak.
class GaussProfile {
  public:
    struct Atom {
        Poly poly;          // s-free
        GroupPoint center;  // center of the exponent
        double width_xy = 1.0;
        double width_t = 1.0;
    };

    GaussProfile() = default;
    static GaussProfile gaussian(const GroupPoint& center, double width, double amplitude = 1.0) {
        GaussProfile p;
        p.atoms_.push_back({Poly::constant(amplitude), center, width, width});
        return p;
    }
    /// Anisotropic variant: separate horizontal and central widths (the
    /// natural shape under group dilations, which scale t by r^2).
    static GaussProfile gaussian_aniso(const GroupPoint& center, double width_xy, double width_t,
                                       double amplitude = 1.0) {
        GaussProfile p;
        p.atoms_.push_back({Poly::constant(amplitude), center, width_xy, width_t});
        return p;
    }

    GaussProfile& operator+=(const GaussProfile& o) {
        atoms_.insert(atoms_.end(), o.atoms_.begin(), o.atoms_.end());
        return *this;
    }

    GaussProfile scaled(double c) const {
        GaussProfile r = *this;
        for (auto& a : r.atoms_) a.poly = a.poly * c;
        return r;
    }

    GaussProfile apply_field(FieldId id) const {
        GaussProfile r;
        for (const auto& a : atoms_) {
            // D(P e^{-q}) = (DP - P Dq) e^{-q}
            const double ixy = 1.0 / (a.width_xy * a.width_xy);
            const double it = 1.0 / (a.width_t * a.width_t);
            Poly qx = (Poly::monomial(1, 0, 0, 0) + Poly::constant(-a.center.x)) * ixy;
            Poly qy = (Poly::monomial(0, 1, 0, 0) + Poly::constant(-a.center.y)) * ixy;
            Poly qt = (Poly::monomial(0, 0, 1, 0) + Poly::constant(-a.center.t)) * it;
            auto full = [&](int v, const Poly& dq) { return a.poly.partial(v) + a.poly * dq * -1.0; };
            const Poly dx = full(0, qx);
            const Poly dy = full(1, qy);
            const Poly dt = full(2, qt);
            const Poly xm = Poly::monomial(1, 0, 0, 0);
            const Poly ym = Poly::monomial(0, 1, 0, 0);
            Poly out;
            switch (id) {
                case FieldId::XL: out = dx + ym * dt * 2.0; break;
                case FieldId::YL: out = dy + xm * dt * -2.0; break;
                case FieldId::XR: out = dx + ym * dt * -2.0; break;
                case FieldId::YR: out = dy + xm * dt * 2.0; break;
                case FieldId::T: out = dt; break;
            }
            r.atoms_.push_back({out, a.center, a.width_xy, a.width_t});
        }
        return r;
    }

    double operator()(const GroupPoint& p) const {
        double acc = 0.0;
        for (const auto& a : atoms_) {
            const double dx = p.x - a.center.x;
            const double dy = p.y - a.center.y;
            const double dt = p.t - a.center.t;
            const double q = 0.5 * (dx * dx + dy * dy) / (a.width_xy * a.width_xy) +
                             0.5 * dt * dt / (a.width_t * a.width_t);
            if (q > 40.0) continue;  // below 4e-18 of peak
            acc += a.poly.eval(p.x, p.y, p.t, 0.0) * std::exp(-q);
        }
        return acc;
    }

    double max_xy_radius() const {
        double r = 0.0;
        for (const auto& a : atoms_)
            r = std::max(r, std::max(std::abs(a.center.x), std::abs(a.center.y)) + 9.0 * a.width_xy);
        return r;
    }
    double max_t_radius() const {
        double r = 0.0;
        for (const auto& a : atoms_) r = std::max(r, std::abs(a.center.t) + 9.0 * a.width_t);
        return r;
    }

    const std::vector<Atom>& atoms() const { return atoms_; }

  private:
    std::vector<Atom> atoms_;
};

}  // namespace carnot
