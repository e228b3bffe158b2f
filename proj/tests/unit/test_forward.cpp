#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "ictomo/detection.hpp"
#include "ictomo/errors.hpp"
#include "ictomo/geometry.hpp"
#include "ictomo/spectrum.hpp"
#include "ictomo/system_matrix.hpp"
#include "oracles.hpp"

using namespace ictomo;
using namespace ictomo::forward;

namespace {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double segment_total(const std::vector<RaySegment>& segs) {
    double s = 0;
    for (const auto& seg : segs) s += seg.length;
    return s;
}

}  // namespace

TEST_CASE("default geometry") {
    Geometry g;
    CHECK(g.n_angles() == 8);
    CHECK(g.tilt_degrees.front() == -30.0);
    CHECK(g.tilt_degrees.back() == 22.5);
    CHECK(g.detector_nu * g.pixel_pitch == doctest::Approx(13440.0));
    CHECK(g.demagnified_pitch() == doctest::Approx(0.084));
    CHECK(g.demagnified_pitch() * g.detector_nu >= 2.4);
    CHECK(g.n_rays() == 8192);
    CHECK(g.grid().space_diagonal() == doctest::Approx(std::sqrt(2 * 2.4 * 2.4 + 2.4 * 2.4)));
}

TEST_CASE("degenerate geometry is a configuration error") {
    Geometry g;
    g.voxel_size.x = 0;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g = {};
    g.magnification = 0;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g = {};
    g.tilt_degrees.clear();
    CHECK_THROWS_AS((void)build_system_matrix(g), ConfigError);
}

TEST_CASE("axial ray crosses the full y extent") {
    Geometry g;
    const std::size_t zero_tilt = 4;
    REQUIRE(g.tilt_degrees[zero_tilt] == 0.0);
    // Continuous detector centre: exactly on the optical axis.
    const Ray axis = g.pixel_ray(zero_tilt, 15.5, 15.5);
    CHECK(axis.direction.y == doctest::Approx(1.0));
    CHECK(segment_total(trace_ray(g.grid(), axis)) == doctest::Approx(2.4).epsilon(1e-12));

    // Nearest real pixel: 42 nm off axis in x and z, chord set by the y faces.
    const auto a = build_system_matrix(g);
    const std::size_t row = g.ray_index(zero_tilt, 16, 16);
    const Ray r = g.pixel_ray(zero_tilt, 16, 16);
    const double analytic = 2.4 / r.direction.y;
    CHECK(a.row_sum(row) == doctest::Approx(analytic).epsilon(1e-12));
    CHECK(a.row_sum(row) == doctest::Approx(2.4).epsilon(1e-4));
}

TEST_CASE("a ray that misses gives an empty row") {
    Geometry g;
    g.detector_nu = g.detector_nv = 64;  // wider detector so the corners clear the object
    const auto a = build_system_matrix(g);
    const std::size_t row = g.ray_index(0, 0, 0);
    CHECK(a.row_columns(row).empty());
    CHECK(a.row_sum(row) == 0.0);
}

TEST_CASE("system matrix invariants") {
    Geometry g;
    const auto a = build_system_matrix(g);
    CHECK(a.rows() == 8192);
    CHECK(a.cols() == 2048);
    const double diag = g.grid().space_diagonal();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (double v : a.row_values(i)) CHECK(v >= 0.0);
        const std::size_t angle = i / g.rays_per_angle();
        const auto pix = i % g.rays_per_angle();
        const Ray r = g.pixel_ray(angle, double(pix % g.detector_nu), double(pix / g.detector_nu));
        const double chord = box_chord_length(g.grid(), r);
        CHECK(a.row_sum(i) <= chord + 1e-12);
        CHECK(a.row_sum(i) == doctest::Approx(chord).epsilon(1e-12));
        CHECK(chord <= diag + 1e-12);
    }
}

TEST_CASE("system matrix does not depend on worker count") {
    Geometry g;
    const auto a = build_system_matrix(g, 1);
    const auto b = build_system_matrix(g, 3);
    REQUIRE(a.nnz() == b.nnz());
    for (std::size_t i = 0; i < a.rows(); i += 97) {
        const auto ca = a.row_columns(i), cb = b.row_columns(i);
        const auto va = a.row_values(i), vb = b.row_values(i);
        CHECK(std::equal(ca.begin(), ca.end(), cb.begin(), cb.end()));
        CHECK(std::equal(va.begin(), va.end(), vb.begin(), vb.end()));
    }
}

TEST_CASE("transpose is the adjoint") {
    Geometry g;
    const auto a = build_system_matrix(g);
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> x(a.cols()), y(a.rows());
    for (auto& v : x) v = u(eng);
    for (auto& v : y) v = u(eng);
    const auto ax = a.apply(x);
    const auto aty = a.apply_transpose(y);
    double lhs = 0, rhs = 0;
    for (std::size_t i = 0; i < y.size(); ++i) lhs += ax[i] * y[i];
    for (std::size_t j = 0; j < x.size(); ++j) rhs += x[j] * aty[j];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("single-voxel grid agrees with dense sampling") {
    Geometry g;
    g.dims = {1, 1, 1};
    g.tilt_degrees.clear();
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> tilt(-90, 90);
    for (int k = 0; k < 20; ++k) g.tilt_degrees.push_back(tilt(eng));
    const double voxel_diag = std::sqrt(0.15 * 0.15 + 0.15 * 0.15 + 0.3 * 0.3);
    int hits = 0;
    for (std::size_t a = 0; a < g.n_angles(); ++a) {
        for (double iu = 13.5; iu <= 17.5; iu += 0.5) {
            for (double iv = 12.5; iv <= 18.5; iv += 0.75) {
                const Ray r = g.pixel_ray(a, iu, iv);
                const auto segs = trace_ray(g.grid(), r);
                const double traced = segment_total(segs);
                CHECK(traced <= voxel_diag + 1e-12);
                const auto dense = oracle::dense_sample_lengths(g.grid(), r);
                if (dense[0] > 1e-6) {
                    ++hits;
                    CHECK(std::abs(traced - dense[0]) <= 1e-3 * dense[0]);
                } else {
                    CHECK(traced < 1e-6);
                }
            }
        }
    }
    CHECK(hits > 100);
}

TEST_CASE("random rays agree with dense sampling voxel by voxel") {
    Geometry g;
    std::mt19937_64 eng(2718);
    std::uniform_real_distribution<double> tilt(-30, 22.5), pix(4, 27);
    g.tilt_degrees.clear();
    for (int k = 0; k < 30; ++k) g.tilt_degrees.push_back(tilt(eng));
    for (std::size_t a = 0; a < g.n_angles(); ++a) {
        const Ray r = g.pixel_ray(a, pix(eng), pix(eng));
        const auto dense = oracle::dense_sample_lengths(g.grid(), r);
        std::vector<double> traced(dense.size(), 0.0);
        for (const auto& s : trace_ray(g.grid(), r)) traced[s.voxel] += s.length;
        const double total = sum(dense);
        REQUIRE(total > 0.1);
        CHECK(std::abs(sum(traced) - total) <= 1e-3 * total);
        for (std::size_t j = 0; j < dense.size(); ++j) CHECK(std::abs(traced[j] - dense[j]) < 1e-3);
    }
}

TEST_CASE("copper attenuation table") {
    const auto table = copper_attenuation_table();
    REQUIRE(table.size() == 2);
    const double a1 = tabulated_alpha(9362.0, 8.96);
    const double a2 = tabulated_alpha(9442.0, 8.96);
    CHECK(a2 < a1);
    // mu/rho (cm^2/g) * rho (g/cm^3) -> 1/cm -> 1/um.
    CHECK(a1 == doctest::Approx(table[0].mass_attenuation_cm2_g * 8.96 * 1e-4));
    CHECK_THROWS_AS((void)tabulated_alpha(8000.0, 8.96), ConfigError);
    CHECK_THROWS_AS((void)tabulated_alpha(9500.0, 8.96), ConfigError);
}

TEST_CASE("calibrated coefficients") {
    const std::vector<double> e{9362.0, 9442.0}, w{0.5, 0.5};
    const auto alpha = calibrate_alpha(e, w);
    REQUIRE(alpha.size() == 2);
    CHECK(alpha[1] < alpha[0]);
    CHECK(alpha[1] / alpha[0] == doctest::Approx(tabulated_alpha(9442, 8.96) / tabulated_alpha(9362, 8.96)));
    CHECK(weighted_transmission(alpha, w, 0.15) == doctest::Approx(0.98).epsilon(1e-9));
    for (double a : alpha) {
        const double t = std::exp(-a * 0.15);
        CHECK(t >= 0.975);
        CHECK(t <= 0.985);
    }

    MaterialConstants raw;
    raw.target_transmission.reset();
    const auto tab = calibrate_alpha(e, w, raw);
    CHECK(tab[0] == doctest::Approx(tabulated_alpha(9362, 8.96)));

    const std::vector<double> bad{7000.0};
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS((void)calibrate_alpha(bad, one), ConfigError);
}

TEST_CASE("spectrum validation") {
    auto s = Spectrum::reference(640);
    CHECK_NOTHROW(s.validate());
    CHECK(s.lines.size() == 2);
    CHECK(s.lines[0].energy_ev == 9362.0);
    CHECK(s.lines[1].energy_ev == 9442.0);
    CHECK(s.lines[0].weight == 0.5);
    s.photons_per_ray = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = Spectrum::reference(640);
    s.lines[0].weight = 0.7;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("expected counts") {
    Geometry g;
    const auto a = build_system_matrix(g);
    const auto spec = Spectrum::reference(640);

    SUBCASE("empty object transmits everything") {
        const auto g0 = expected_counts(a, BinaryVolume(g.dims), spec);
        for (double v : g0) CHECK(v == doctest::Approx(640.0).epsilon(1e-14));
    }
    SUBCASE("one voxel width of copper") {
        const std::vector<double> p{0.15};
        const auto g0 = expected_from_projections(p, spec);
        CHECK(g0[0] / 640.0 >= 0.975);
        CHECK(g0[0] / 640.0 <= 0.985);
    }
    SUBCASE("scalar two-line formula") {
        const double L = 0.37;
        const std::vector<double> p{L};
        const double a1 = spec.lines[0].alpha_per_um, a2 = spec.lines[1].alpha_per_um;
        CHECK(expected_from_projections(p, spec)[0] == doctest::Approx(320.0 * (std::exp(-a1 * L) + std::exp(-a2 * L))));
    }
    SUBCASE("single line is plain Beer-Lambert") {
        Spectrum mono;
        mono.photons_per_ray = 1000;
        mono.lines = {{9400.0, 1.0, 0.2, 0.8}};
        const std::vector<double> p{1.3};
        CHECK(expected_from_projections(p, mono)[0] == doctest::Approx(800.0 * std::exp(-0.26)));
    }
    SUBCASE("negative voxel values are rejected") {
        std::vector<double> f(a.cols(), 0.0);
        f[5] = -0.1;
        CHECK_THROWS_AS((void)expected_counts(a, f, spec), DomainError);
    }
    SUBCASE("adding copper never brightens a pixel") {
        std::mt19937_64 eng(8);
        std::uniform_real_distribution<double> u(0, 1);
        std::vector<double> f(a.cols());
        for (auto& v : f) v = u(eng);
        const auto before = expected_counts(a, f, spec);
        for (int k = 0; k < 20; ++k) {
            auto f2 = f;
            f2[eng() % f2.size()] = 1.0;
            const auto after = expected_counts(a, f2, spec);
            for (std::size_t i = 0; i < after.size(); ++i) CHECK(after[i] <= before[i]);
        }
    }
    SUBCASE("counts scale linearly with the photon budget") {
        BinaryVolume v(g.dims);
        v.set(3, 4, 0, true);
        v.set(8, 8, 4, true);
        const auto g1 = expected_counts(a, v, Spectrum::reference(320));
        const auto g2 = expected_counts(a, v, Spectrum::reference(5000));
        for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g2[i] / g1[i] == doctest::Approx(5000.0 / 320.0));
    }
}

TEST_CASE("Poisson sampling") {
    SUBCASE("zero mean gives zero") {
        const std::vector<double> g0(1000, 0.0);
        for (double v : sample_counts(g0, 4)) CHECK(v == 0.0);
    }
    SUBCASE("deterministic in the seed") {
        const std::vector<double> g0(500, 37.5);
        CHECK(sample_counts(g0, 9) == sample_counts(g0, 9));
        CHECK(sample_counts(g0, 9) != sample_counts(g0, 10));
    }
    SUBCASE("moments at mean 640") {
        const std::size_t n = 100000;
        const std::vector<double> g0(n, 640.0);
        const auto g = sample_counts(g0, 31337);
        double m = 0;
        for (double v : g) {
            CHECK(v == std::floor(v));
            m += v;
        }
        m /= n;
        double var = 0;
        for (double v : g) var += (v - m) * (v - m);
        var /= (n - 1);
        // Var of the sample variance for a Poisson(lambda): lambda/n + 2 lambda^2/(n-1).
        CHECK(std::abs(m - 640.0) < 3 * std::sqrt(640.0 / n));
        CHECK(std::abs(var - 640.0) < 3 * std::sqrt(640.0 / n + 2 * 640.0 * 640.0 / (n - 1)));
    }
}
