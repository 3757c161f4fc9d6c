#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "carnot/calculus.hpp"
#include "carnot/rng.hpp"
#include "carnot/serialize.hpp"

using namespace carnot;

namespace {

/// Unit-mass Gaussian with homogeneity-adapted widths (t-width = 4 * xy
/// width) so group dilations keep both axes resolvable together.
ProfileFunction unit_mass_gaussian(double width) {
    const double wt = 4.0 * width;
    const double norm = std::pow(2.0 * M_PI, -1.5) / (width * width * wt);
    return profile_from_gauss(GaussProfile::gaussian_aniso(identity(), width, wt, norm), 0);
}

}  // namespace

TEST_CASE("sample and integrate basics") {
    const GridSpec spec = GridSpec::cube(1.0, 16);
    auto ones = sample([](const GroupPoint&) { return 1.0; }, spec);
    CHECK(integrate(ones) == Catch::Approx(8.0).epsilon(1e-12));

    // Symmetric Gaussian gives symmetric samples.
    auto g = sample([](const GroupPoint& p) { return std::exp(-p.x * p.x - p.y * p.y - p.t * p.t); },
                    spec);
    CHECK(g.at(3, 5, 7) == Catch::Approx(g.at(12, 10, 8)).epsilon(1e-12));

    // Unit Gaussian integrates to 1 on the default 64^3 grid.
    const GridSpec dflt = GridSpec::cube(6.0, 64);
    const double norm = std::pow(2.0 * M_PI, -1.5);
    const ProfileFunction ug =
        profile_from_gauss(GaussProfile::gaussian(identity(), 1.0, norm), 0);
    CHECK(integrate(sample(ug.eval, dflt)) == Catch::Approx(1.0).margin(1e-4));

    // Linearity to round-off.
    Rng rng(71);
    GridFunction a = sample([&](const GroupPoint& p) { return std::sin(p.x + p.t); }, spec);
    GridFunction b = sample([&](const GroupPoint& p) { return std::cos(p.y); }, spec);
    GridFunction combo(spec);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = 2.5 * a.values[i] - 1.25 * b.values[i];
    CHECK(integrate(combo) ==
          Catch::Approx(2.5 * integrate(a) - 1.25 * integrate(b)).margin(1e-12));

    CHECK_THROWS_AS(GridSpec::cube(1.0, 300).validate(), std::invalid_argument);
}

TEST_CASE("trilinear interpolation contract") {
    const GridSpec spec = GridSpec::cube(1.0, 12);
    auto lin = sample([](const GroupPoint& p) { return 1.0 + 2.0 * p.x - p.y + 0.5 * p.t; }, spec);
    // Stored value at a node.
    CHECK(interpolate(lin, spec.node(4, 7, 2)) == Catch::Approx(lin.at(4, 7, 2)).epsilon(1e-12));
    // Exact on linear functions inside the node hull.
    Rng rng(73);
    for (int i = 0; i < 500; ++i) {
        const GroupPoint p = rng.point_in_box(0.9);
        CHECK(interpolate(lin, p) ==
              Catch::Approx(1.0 + 2.0 * p.x - p.y + 0.5 * p.t).margin(1e-10));
    }
    // Zero outside the box.
    CHECK(interpolate(lin, {1.5, 0, 0}) == 0.0);
    CHECK(interpolate(lin, {0, -1.01, 0}) == 0.0);

    // sample-interpolate round trip error obeys the second-order bound.
    auto smooth = [](const GroupPoint& p) { return std::sin(2.0 * p.x) * std::cos(p.y + p.t); };
    const GridSpec fine = GridSpec::cube(1.0, 24);
    auto tab = sample(smooth, fine);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const GroupPoint p = rng.point_in_box(0.8);
        worst = std::max(worst, std::abs(interpolate(tab, p) - smooth(p)));
    }
    const double h = fine.spacing(0);
    CHECK(worst <= 3.0 * h * h);  // |f''| <= ~5 here
}

TEST_CASE("convolution approximate identity and invariance") {
    // Spacing 0.125 keeps the finest dilated profile (sigma = 0.075) resolved.
    const GridSpec spec = GridSpec::cube(1.5, 24);
    auto f = sample([](const GroupPoint& p) { return std::exp(-2.0 * (p.x * p.x + p.y * p.y + p.t * p.t)); },
                    spec);

    double prev_err = 1e18;
    for (double r : {1.0, 2.0, 4.0}) {
        const ProfileFunction phi = dilate_profile(unit_mass_gaussian(0.3), r);
        GridFunction approx = op_left(f, phi);
        double err2 = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const double d = approx.values[i] - f.values[i];
            err2 += d * d;
        }
        err2 = std::sqrt(err2 * spec.cell_volume());
        CHECK(err2 < prev_err);
        prev_err = err2;
    }

    // Left-invariance: translate f on the left, compare with translating the
    // convolution.  tau_a f (x) = f(a^{-1} x).
    auto g = sample([](const GroupPoint& p) { return std::exp(-3.0 * ((p.x - 0.2) * (p.x - 0.2) + p.y * p.y + 0.5 * p.t * p.t)); },
                    spec);
    const GroupPoint a{0.25, -0.15, 0.1};
    auto fa = sample([&](const GroupPoint& p) { return interpolate(f, multiply(inverse(a), p)); },
                     spec);
    GridFunction conv = convolve(f, g);
    GridFunction conv_a = convolve(fa, g);
    double worst = 0.0;
    for (int i = 5; i < 15; ++i)
        for (int j = 5; j < 15; ++j)
            for (int k = 5; k < 15; ++k) {
                const GroupPoint x = spec.node(i, j, k);
                const double lhs = interpolate(conv, multiply(inverse(a), x));
                worst = std::max(worst, std::abs(lhs - conv_a.at(i, j, k)));
            }
    const double scale = linf_norm(conv);
    CHECK(worst <= 0.05 * scale);
}

TEST_CASE("convolution is noncommutative on offset data") {
    const GridSpec spec = GridSpec::cube(2.0, 16);
    auto f = sample([](const GroupPoint& p) {
        return std::exp(-6.0 * ((p.x - 0.5) * (p.x - 0.5) + p.y * p.y + p.t * p.t));
    }, spec);
    auto g = sample([](const GroupPoint& p) {
        return std::exp(-6.0 * (p.x * p.x + (p.y - 0.5) * (p.y - 0.5) + p.t * p.t));
    }, spec);
    GridFunction fg = convolve(f, g);
    GridFunction gf = convolve(g, f);
    double diff2 = 0.0;
    for (std::size_t i = 0; i < fg.values.size(); ++i) {
        const double d = fg.values[i] - gf.values[i];
        diff2 += d * d;
    }
    diff2 = std::sqrt(diff2 * spec.cell_volume());
    // Quadrature tolerance proxy: interpolation error scale of the smooth field.
    const double tol = 1e-3 * l2_norm(fg);
    CHECK(diff2 > 10.0 * tol);
}

TEST_CASE("convolve rejects oversized quadratic loops") {
    GridSpec big = GridSpec::cube(1.0, 64);  // 64^3 squared exceeds 2^30
    GridFunction f(big), g(big);
    CHECK_THROWS_AS(convolve(f, g), std::invalid_argument);
}

TEST_CASE("young-type sanity at grid scale") {
    const GridSpec spec = GridSpec::cube(1.5, 14);
    Rng rng(79);
    auto f = sample([&](const GroupPoint& p) { return std::sin(3 * p.x) + 0.3 * p.t; }, spec);
    auto g = sample([&](const GroupPoint& p) { return std::cos(2 * p.y - p.t); }, spec);
    GridFunction conv = convolve(f, g);
    CHECK(linf_norm(conv) <= l1_norm(f) * linf_norm(g) * (1.0 + 1e-12));
}

TEST_CASE("two-sided operator: tensor terms, commutation, zero kernel") {
    // Taller t-box: convolutions spread mass in t and both orders must see it.
    const GridSpec spec({-2, -2, -5}, {2, 2, 5}, {14, 14, 32});
    auto f = sample([](const GroupPoint& p) {
        return std::exp(-2.0 * (p.x * p.x + p.y * p.y + p.t * p.t)) * (1.0 + 0.5 * p.x);
    }, spec);
    const ProfileFunction k1 = unit_mass_gaussian(0.3);
    const ProfileFunction k2 = unit_mass_gaussian(0.35);

    // Op_T(k1 (x) k2) = Op_L(k1) Op_R(k2) = Op_R(k2) Op_L(k1).
    GridFunction via_rl = op_left(op_right(k2, f), k1);
    GridFunction via_lr = op_right(k2, op_left(f, k1));
    GridFunction via_op = op_two_sided({TensorTerm{k1, k2, 1.0, 1.0}}, f);
    double commute = 0.0, same = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        commute = std::max(commute, std::abs(via_rl.values[i] - via_lr.values[i]));
        same = std::max(same, std::abs(via_rl.values[i] - via_op.values[i]));
    }
    CHECK(commute <= 1e-2 * linf_norm(via_rl));
    CHECK(same == 0.0);

    // Delta-approximant tensor pairs converge to f.
    double prev = 1e18;
    for (double r : {1.0, 2.0}) {
        GridFunction approx = op_two_sided(
            {TensorTerm{unit_mass_gaussian(0.4), unit_mass_gaussian(0.4), r, r}}, f);
        double err2 = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const double d = approx.values[i] - f.values[i];
            err2 += d * d;
        }
        err2 = std::sqrt(err2 * spec.cell_volume());
        CHECK(err2 < prev);
        prev = err2;
    }

    // Zero kernel annihilates.
    ProfileFunction zero;
    zero.eval = [](const GroupPoint&) { return 0.0; };
    zero.support_radius = 1.0;
    GridFunction z = op_two_sided({TensorTerm{zero, zero, 1.0, 1.0}}, f);
    CHECK(linf_norm(z) == 0.0);

    RawTwoVariableKernel raw{[](const GroupPoint&, const GroupPoint&) { return 1.0; }};
    CHECK_THROWS_AS(op_two_sided(raw, f), std::invalid_argument);
}

TEST_CASE("transference lift basics") {
    const GridSpec spec = GridSpec::cube(1.5, 12);
    auto f = sample([](const GroupPoint& p) { return p.x + 2.0 * p.y - 0.5 * p.t; }, spec);
    auto E = transfer_E(f);
    Rng rng(83);
    for (int i = 0; i < 100; ++i) {
        const GroupPoint x = rng.point_in_box(0.9);
        CHECK(E(x, identity()) == Catch::Approx(interpolate(f, x)).margin(1e-12));
    }
    auto c = sample([](const GroupPoint&) { return 3.25; }, spec);
    auto Ec = transfer_E(c);
    for (int i = 0; i < 50; ++i) {
        const GroupPoint x = rng.point_in_box(0.4);
        const GroupPoint y = rng.point_in_box(0.4);
        if (hom_norm(multiply(inverse(y), x)) > 1.0) continue;  // stay inside the box
        CHECK(Ec(x, y) == Catch::Approx(3.25).margin(1e-12));
    }
}

TEST_CASE("grid function json round trip") {
    const GridSpec spec({-1, -2, -3}, {1, 0.5, 3}, {5, 6, 7});
    Rng rng(89);
    GridFunction g(spec);
    for (auto& v : g.values) v = rng.uniform(-5.0, 5.0);
    const Json j = to_json(g);
    GridFunction back = grid_function_from_json(j);
    REQUIRE(back.spec == g.spec);
    for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(back.values[i] == g.values[i]);
}
