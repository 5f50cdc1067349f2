#include <gtest/gtest.h>

#include "fzr/dynamics.hpp"
#include "fzr/measures.hpp"

using namespace fzr;

namespace {
// Total jump rate of a 0/1 configuration, recomputed from scratch.  Outside
// a line window sites count as empty.
double total_rate(const std::vector<std::int32_t>& eta, bool torus, double p = 1, double q = 1) {
    const auto n = std::int64_t(eta.size());
    auto at = [&](std::int64_t x) {
        return torus ? eta[std::size_t((x % n + n) % n)] : (x >= 0 && x < n ? eta[std::size_t(x)] : 0);
    };
    double c = 0;
    for (std::int64_t x = 0; x < n; ++x) {
        if (!torus && x + 1 >= n) break;
        if (at(x) == 1 && at(x + 1) == 0 && at(x - 1) == 1) c += p;
        if (at(x) == 0 && at(x + 1) == 1 && at(x + 2) == 1) c += q;
    }
    return c;
}
} // namespace

TEST(Params, Validation) {
    auto s = SimParams::symmetric(1.0, {0.5, 1.0});
    EXPECT_NO_THROW(s.validate());
    s.observation_times = {0.7, 0.5};
    EXPECT_THROW(s.validate(), std::invalid_argument);
    auto a = SimParams::asymmetric(0.75, 1.0);
    EXPECT_NO_THROW(a.validate());
    a.p_prime = 0.5;
    EXPECT_THROW(a.validate(), std::invalid_argument);
    EXPECT_THROW(SimParams::asymmetric(0.4, 1.0).validate(), std::invalid_argument);
    EXPECT_DOUBLE_EQ(SimParams::symmetric(1).clock_factor(100), 1e4);
}

TEST(Fep, ConservesParticlesAndFollowsRules) {
    const auto eta0 = sample_bernoulli_profile(Profile::step(0.9, 0.5), 64, 3);
    ASSERT_GT(particle_count(eta0), 32);
    auto params = SimParams::symmetric(0.5, {0.1, 0.2, 0.3, 0.4, 0.5}, 9);
    FepEngine engine(eta0, params);
    const auto k = particle_count(eta0);
    auto prev = engine.occupancy();
    for (int i = 0; i < 20000; ++i) {
        const auto ev = engine.advance(1e18);
        ASSERT_TRUE(ev) << "supercritical ring cannot freeze";
        const auto now = engine.occupancy();
        // One particle jumped from `from` to `to` and had an occupied neighbour behind.
        ASSERT_EQ(prev[std::size_t(ev->from)], 1);
        ASSERT_EQ(prev[std::size_t(ev->to)], 0);
        const auto behind = (ev->from - ev->direction + 64) % 64;
        ASSERT_EQ(prev[std::size_t(behind)], 1);
        ASSERT_EQ(now[std::size_t(ev->from)], 0);
        ASSERT_EQ(now[std::size_t(ev->to)], 1);
        std::vector<std::int32_t> v(now.begin(), now.end());
        ASSERT_NEAR(engine.total_rate(), total_rate(v, true), 1e-9);
        prev = now;
    }
    std::int64_t kk = 0;
    for (auto v : prev) kk += v;
    EXPECT_EQ(kk, k);
}

TEST(Fep, LineWindowRespectsWalls) {
    const auto g = LatticeGeometry::line(-20, 20, 10);
    const auto eta0 = sample_bernoulli_profile(Profile::constant(0.7), g, 40.0, 5);
    auto params = SimParams::asymmetric(0.75, 1.0, {}, 2);
    params.scale = 40;
    FepEngine engine(eta0, params);
    for (int i = 0; i < 5000; ++i) {
        const auto ev = engine.advance(1e18);
        if (!ev) break;
        ASSERT_GE(ev->to, 0);
        ASSERT_LT(ev->to, g.sites());
        const auto v = engine.occupancy();
        std::vector<std::int32_t> w(v.begin(), v.end());
        ASSERT_NEAR(engine.total_rate(), total_rate(w, false, 0.75, 0.25), 1e-9);
    }
}

TEST(Fep, DeterministicAndReplicaDependent) {
    const auto eta0 = sample_bernoulli_profile(Profile::constant(0.6), 256, 1);
    auto params = SimParams::symmetric(0.01, {0.005, 0.01}, 42);
    const auto a = run_fep(eta0, params);
    const auto b = run_fep(eta0, params);
    EXPECT_EQ(a.frames.back().state, b.frames.back().state);
    EXPECT_EQ(a.total_events, b.total_events);
    params.replica = 1;
    const auto c = run_fep(eta0, params);
    EXPECT_NE(a.frames.back().state, c.frames.back().state);
}

TEST(Fep, CurrentsMatchDensityChange) {
    const auto eta0 = sample_bernoulli_profile(Profile::step(0.8, 0.3), 128, 7);
    const auto out = run_fep(eta0, SimParams::symmetric(0.002, {0.002}, 3));
    const auto& f = out.frames.back();
    for (std::int64_t x = 0; x < 128; ++x) {
        const auto in = f.current[std::size_t((x + 127) % 128)] - f.current[std::size_t(x)];
        EXPECT_EQ(f.state[std::size_t(x)] - eta0.occupancy[std::size_t(x)], in);
    }
}

TEST(Fep, DegenerateWithoutHoles) {
    const auto full = ExclusionConfig(LatticeGeometry::torus(12), std::vector<std::uint8_t>(12, 1));
    const auto out = run_fep(full, SimParams::symmetric(1.0, {1.0}));
    EXPECT_TRUE(out.degenerate);
    EXPECT_EQ(out.total_events, 0u);
}

TEST(Zr, MovesOnlyFromPiles) {
    const auto w0 = sample_geometric_profile(Profile::constant(1.2), 100, 8);
    ZeroRangeEngine engine({&w0}, SimParams::symmetric(1.0));
    auto prev = engine.heights();
    for (int i = 0; i < 20000; ++i) {
        const auto ev = engine.advance(1e18);
        ASSERT_TRUE(ev);
        ASSERT_GE(prev[std::size_t(ev->from)], 2);
        const auto& now = engine.heights();
        ASSERT_EQ(now[std::size_t(ev->from)], prev[std::size_t(ev->from)] - 1);
        ASSERT_EQ(now[std::size_t(ev->to)], prev[std::size_t(ev->to)] + 1);
        std::int64_t active = 0;
        for (auto h : now) active += h >= 2;
        ASSERT_DOUBLE_EQ(engine.total_rate(), 2.0 * double(active));
        prev = now;
    }
}

TEST(Zr, LineWallThinning) {
    const auto g = LatticeGeometry::line(0, 4, 0);
    const ZeroRangeConfig w0(g, {5, 0, 0, 0});
    auto params = SimParams::asymmetric(1.0, 1.0);
    ZeroRangeEngine engine({&w0}, params);
    while (engine.advance(1e6)) {
    }
    EXPECT_EQ(engine.heights(), (std::vector<std::int32_t>{1, 1, 1, 2}));
    EXPECT_EQ(total_mass(engine.config()), 5);
}

TEST(Coupled, PreservesOrderAndSignChanges) {
    const auto [w, z] = sample_monotone_coupling(Profile::constant(1.5), 2.5, 200, 13);
    CoupledZeroRangeEngine engine({&w, &z}, SimParams::symmetric(1.0));
    for (int i = 0; i < 50000; ++i) {
        ASSERT_TRUE(engine.advance(1e18));
        for (std::size_t y = 0; y < 200; ++y) ASSERT_LE(engine.heights(0)[y], engine.heights(1)[y]);
    }
}

TEST(SignChanges, Counts) {
    EXPECT_EQ(sign_changes({1, 0, 3, 0}, {0, 0, 4, 1}, false), 1);
    EXPECT_EQ(sign_changes({1, 0, 3, 0}, {0, 0, 4, 1}, true), 2);
    EXPECT_EQ(sign_changes({1, 1}, {1, 1}, true), 0);
}

TEST(Walls, LightConeFlag) {
    const auto g = LatticeGeometry::line(-10, 10, 2);
    const auto eta0 = sample_bernoulli_profile(Profile::constant(0.7), g, 20.0, 5);
    auto params = SimParams::asymmetric(1.0, 1.0, {1.0}, 2);
    params.scale = 20;
    EXPECT_TRUE(run_fep(eta0, params).boundary_reached);
    const auto g2 = LatticeGeometry::line(-10, 10, 400);
    const auto eta1 = sample_bernoulli_profile(Profile::constant(0.7), g2, 20.0, 5);
    EXPECT_FALSE(run_fep(eta1, params).boundary_reached);
}
