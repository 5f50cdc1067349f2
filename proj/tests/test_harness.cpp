#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numbers>

#include "fzr/harness.hpp"
#include "fzr/parabolic.hpp"

using namespace fzr;

namespace {
Ensemble snapshot(const std::vector<ZeroRangeConfig>& configs) {
    Ensemble ens;
    for (const auto& c : configs) {
        ObservationSet run;
        run.process = "fzrp";
        run.geometry = c.geometry;
        Observation f;
        f.state = c.heights;
        run.frames.push_back(f);
        ens.push_back(run);
    }
    return ens;
}
} // namespace

TEST(Harness, ParallelForCoversEveryIndex) {
    std::vector<std::atomic<int>> hit(1000);
    parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i]++; });
    for (auto& h : hit) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                     if (i == 7) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}

TEST(Harness, BlockAverage) {
    const std::vector<std::int32_t> x{0, 3, 1, 0, 5, 2, 0, 1};
    const auto b = block_average(x, 2, true);
    double s = 0, t = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += b[i];
        t += x[i];
    }
    EXPECT_NEAR(s, t, 1e-12);
    EXPECT_NEAR(b[0], (0 + 1 + 0 + 3 + 1) / 5.0, 1e-15);
    const auto line = block_average(x, 2, false);
    EXPECT_NEAR(line[0], (0 + 3 + 1) / 3.0, 1e-15);
    EXPECT_NEAR(line[7], (2 + 0 + 1) / 3.0, 1e-15);
    EXPECT_THROW(block_average(x, 4, true), std::invalid_argument);
}

TEST(Harness, EmpiricalPairing) {
    const auto ones = ExclusionConfig(LatticeGeometry::torus(16), std::vector<std::uint8_t>(16, 1));
    EXPECT_NEAR(empirical_pairing(ones, [](double) { return 1.0; }), 1.0, 1e-15);
    const auto empty = ExclusionConfig(LatticeGeometry::torus(16), std::vector<std::uint8_t>(16, 0));
    EXPECT_EQ(empirical_pairing(empty, [](double u) { return std::exp(u); }), 0.0);
    const std::int64_t n = 100000;
    const auto eta = sample_bernoulli_profile(Profile::constant(0.8), n, 3);
    const double v = empirical_pairing(eta, [](double u) { return std::cos(2 * std::numbers::pi * u); });
    EXPECT_LE(std::abs(v), 4 * std::sqrt(0.16 / double(n)));
}

TEST(Harness, HydroErrorAtStationaryConstant) {
    const std::int64_t n = 1024;
    const std::size_t replicas = 4;
    const double t = 0.01, rho = 0.6;
    const auto params = SimParams::symmetric(t, {t}, 11);
    const auto ens = run_exclusion_ensemble(Profile::constant(rho), LatticeGeometry::torus(n), double(n), params,
                                            replicas, 0);
    const auto pde = DensityField::torus(64, rho);
    const std::size_t l = default_block_radius(n);
    const double noise = 4 * std::sqrt(rho * (1 - rho) / double(l * replicas));
    EXPECT_LE(hydro_error(ens, pde, t), noise);
}

TEST(Harness, HydroErrorDiscriminatesTime) {
    const std::int64_t n = 1024;
    const double t = 0.01;
    const auto params = SimParams::symmetric(t, {t}, 5);
    const auto profile = Profile::step(0.8, 0.3);
    const auto ens = run_exclusion_ensemble(profile, LatticeGeometry::torus(n), double(n), params, 4, 0);
    const auto u0 = DensityField::from_profile(profile, DensityField::torus(512));
    SolverOptions opt;
    opt.times = {t};
    const auto sol = solve_parabolic(u0, Flux::H(), 2 * t, opt);
    const double matched = hydro_error(ens, sol.at(t), t);
    const double wrong = hydro_error(ens, sol.at(2 * t), t);
    EXPECT_LT(matched, wrong);
    EXPECT_LE(matched, 0.05);
}

TEST(Harness, TaggedHoleAtTimeZeroAndFrozen) {
    const std::int64_t n = 64;
    auto params = SimParams::symmetric(0.01, {0.0, 0.005, 0.01}, 2);
    const auto eta = ExclusionConfig::from_particles(LatticeGeometry::torus(n), {1, 3, 5, 7, 9});
    Ensemble ens{run_fep(eta, params)};
    for (double t : {0.0, 0.005, 0.01}) {
        const auto rep = tagged_hole_check(ens, 0.0, t);
        EXPECT_DOUBLE_EQ(rep.mean, 0.0);  // first hole is the origin and nothing moves
    }
    const auto moving = sample_bernoulli_profile(Profile::constant(0.7), n, 9);
    Ensemble e2{run_fep(moving, params)};
    const double x1 = double(detail::first_hole_from_origin(moving));
    EXPECT_DOUBLE_EQ(tagged_hole_check(e2, 0.0, 0.0).mean, x1 / double(n));
}

TEST(Harness, TaggedHoleUnwrapsAcrossTheSeam) {
    // The tag of the mapped and the direct runs agree in law; here only that
    // the unwrapped coordinate is consistent with the wrapped index.
    const std::int64_t n = 32;
    const auto eta = sample_bernoulli_profile(Profile::constant(0.75), n, 4);
    const auto run = run_fep(eta, SimParams::symmetric(0.5, {0.5}, 4));
    const auto& f = run.frames.back();
    const double x = tag_coordinate(run, f);
    EXPECT_EQ((std::int64_t(x) % n + n) % n, f.tag_site);
    EXPECT_EQ(std::int64_t(x) - f.tag_displacement, detail::first_hole_from_origin(eta));
}

TEST(Harness, TaggedHoleCountsDegenerateRuns) {
    const auto full = ExclusionConfig(LatticeGeometry::torus(8), std::vector<std::uint8_t>(8, 1));
    const auto open = ExclusionConfig::from_particles(LatticeGeometry::torus(8), {1, 2, 3});
    const auto params = SimParams::symmetric(0.1, {0.1}, 1);
    Ensemble ens{run_fep(full, params), run_fep(open, params)};
    const auto rep = tagged_hole_check(ens, 0.0, 0.1);
    EXPECT_EQ(rep.degenerate, 1u);
    EXPECT_EQ(rep.deviations.size(), 1u);
    EXPECT_THROW(tagged_hole_check(Ensemble{ens[0]}, 0.0, 0.1), std::runtime_error);
}

TEST(Harness, OneBlockDiagnostic) {
    EXPECT_EQ(one_block_diagnostic(snapshot({ZeroRangeConfig::on_torus(std::vector<std::int32_t>(512, 0))}), 8), 0.0);
    EXPECT_EQ(one_block_diagnostic(snapshot({ZeroRangeConfig::on_torus({1, 0, 1, 1, 0, 1, 0, 0})}), 2), 0.0);
    const std::int64_t m = 4096;
    const auto ens = snapshot({sample_equilibrium_zr(2.0, m, 1), sample_equilibrium_zr(2.0, m, 2)});
    const double d16 = one_block_diagnostic(ens, 16), d32 = one_block_diagnostic(ens, 32),
                 d64 = one_block_diagnostic(ens, 64);
    EXPECT_LE(d64, 0.05);
    EXPECT_LT(d32, d16);
    EXPECT_LT(d64, d32);
}

TEST(Harness, TwoBlockDiagnostic) {
    const auto flat = snapshot({ZeroRangeConfig::on_torus(std::vector<std::int32_t>(1024, 3))});
    const auto rep0 = two_block_diagnostic(flat, 8, 1.0 / 32);
    EXPECT_EQ(rep0.unrestricted, 0.0);
    EXPECT_EQ(rep0.restricted, 0.0);
    EXPECT_EQ(rep0.restricted_fraction, 1.0);
    EXPECT_THROW(two_block_diagnostic(flat, 32, 1.0 / 32), std::invalid_argument);
    const auto eq = snapshot({sample_equilibrium_zr(2.0, 4096, 7)});
    const auto rep = two_block_diagnostic(eq, 32, 1.0 / 32);
    EXPECT_LE(rep.unrestricted, 0.05);
    EXPECT_LE(rep.restricted, 0.05);
    EXPECT_GT(rep.restricted_fraction, 0.9);
}

TEST(Harness, InitialTvClosedForm) {
    // alpha = 2: geometric(1/3 (2/3)^k) vs equilibrium((1/2)^k, k >= 1); the
    // geometric law dominates at k = 0 and k >= 4, so
    // TV = 1/3 + sum_{k>=4} ((2/3)^k / 3 - (1/2)^k) = 1/3 + 16/81 - 1/8.
    EXPECT_NEAR(initial_equilibrium_tv(2.0), 263.0 / 648.0, 1e-14);
    EXPECT_THROW(equilibration_check(1.0, 64, {0.0}, 1, 0, 1), std::invalid_argument);
}

TEST(Harness, EquilibrationStartsAtClosedFormAndDecreases) {
    const auto rows = equilibration_check(2.0, 1024, {0.0, 50.0, 400.0}, 16, 3, 0);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0].tv, 263.0 / 648.0, 0.01);
    EXPECT_LT(rows[1].tv, rows[0].tv);
    EXPECT_LT(rows[2].tv, rows[1].tv);
}

TEST(Harness, MaxHeight) {
    const auto frozen = snapshot({ZeroRangeConfig::on_torus({1, 0, 1, 0, 0, 1})});
    EXPECT_EQ(max_height_report(frozen).max, 1);
    const auto three = snapshot({ZeroRangeConfig::on_torus(std::vector<std::int32_t>(16, 3))});
    const auto rep = max_height_report(three);
    EXPECT_EQ(rep.max, 3);
    EXPECT_NEAR(rep.threshold, std::log(16.0) * std::log(16.0), 1e-12);
    EXPECT_FALSE(rep.flagged);
    const auto tall = snapshot({ZeroRangeConfig::on_torus({0, 0, 9, 0})});
    EXPECT_TRUE(max_height_report(tall).flagged);
}
