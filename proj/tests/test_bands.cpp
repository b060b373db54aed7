#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tubeband/bands.hpp"
#include "tubeband/error.hpp"
#include "tubeband/sim.hpp"
#include "tubeband/tube.hpp"

using namespace tubeband;

namespace {

Dataset design_data(std::size_t n, std::uint64_t rep = 0) {
    SimConfig cfg;
    cfg.n = n;
    return generate(cfg, rep);
}

Dataset noiseless(std::size_t n, const KnotVector& kv, const std::vector<double>& coeffs) {
    Dataset d;
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n);
        d.xs.push_back(x);
        d.ys.push_back(eval(kv, x).dot(coeffs));
    }
    return d;
}

LepskiConfig small_range(int lo, int hi) {
    LepskiConfig cfg;
    cfg.j_min = lo;
    cfg.j_max = hi;
    return cfg;
}

}  // namespace

TEST_SUITE("bands") {

TEST_CASE("method names") {
    CHECK(std::string(to_string(BandMethod::BayesLepskiTube)) == "bayes-lepski");
    CHECK(parse_band_method("bayes-lepski-tube") == BandMethod::BayesLepskiTube);
    CHECK(parse_band_method("frequentist-tube") == BandMethod::FrequentistTube);
    CHECK(parse_band_method("fixed-radius") == BandMethod::FixedRadius);
    CHECK_FALSE(parse_band_method("nope").has_value());
}

TEST_CASE("noiseless data from the prior mean: zero radius for every method") {
    const auto kv = make_knots(6, 4);
    const std::vector<double> eta{0.2, 0.9, -0.4, 1.1, 0.3, 0.8};
    const auto d = noiseless(80, kv, eta);
    PriorSpec prior;
    prior.eta_coeffs = eta;
    const auto cfg = small_range(6, 6);

    const auto b = credible_band(d, 0.05, cfg, prior);
    for (std::size_t k = 0; k < b.grid.size(); ++k) {
        CHECK(b.radius[k] == 0.0);
        CHECK(b.lower(k) == b.upper(k));
    }
    CounterRng rng(1, 0, 1);
    const auto f = fixed_radius_band(d, 0.05, cfg, prior, 200, rng);
    for (double r : f.radius) CHECK(r == 0.0);

    // Least-squares fit interpolates spline data; sigma_hat is rounding noise from r'r - z'Mz.
    const auto fr = frequentist_band(d, 0.05, cfg);
    for (double r : fr.radius) CHECK(r <= 1e-4);
}

TEST_CASE("credible band: pointwise radius is w times posterior sd, variable width") {
    const auto d = design_data(500);
    LepskiConfig cfg;
    const auto bs = credible_band_with_state(d, 0.05, cfg, PriorSpec{});
    const auto& band = bs.band;
    REQUIRE(band.grid.size() == 512u);
    CHECK(band.selected_j == bs.state.dimension());
    CHECK(band.arc_length == arc_length(bs.state).value);
    CHECK(band.w == solve_quantile(band.arc_length, 0.05).w);
    double lo = 1e300;
    double hi = 0.0;
    for (std::size_t k = 0; k < band.grid.size(); ++k) {
        CHECK(band.radius[k] == band.w * std::sqrt(bs.state.var_at(band.grid[k])));
        CHECK(band.center[k] == bs.state.mean_at(band.grid[k]));
        lo = std::min(lo, band.radius[k]);
        hi = std::max(hi, band.radius[k]);
    }
    CHECK(hi / lo > 1.0);

    // Stable across runs.
    const auto again = credible_band(d, 0.05, cfg, PriorSpec{});
    CHECK(again.center == band.center);
    CHECK(again.radius == band.radius);
    CHECK(again.selected_j == band.selected_j);
}

TEST_CASE("frequentist band") {
    const auto d = design_data(300, 3);
    const auto cfg = small_range(8, 8);
    const auto fb = frequentist_band_with_state(d, 0.05, cfg);
    const oracle::Mat B = oracle::design(8, 4, d.xs);
    const oracle::Vec ls = B.colPivHouseholderQr().solve(oracle::to_vec(d.ys));
    for (std::size_t k = 0; k < fb.band.grid.size(); k += 17) {
        const double ref = oracle::basis(8, 4, fb.band.grid[k]).dot(ls);
        CHECK(std::abs(fb.band.center[k] - ref) <= 1e-5);
    }
    CHECK(fb.band.noise == NoiseEstimate::ResidualDf);
    // Classical residual variance.
    const oracle::Vec res = oracle::to_vec(d.ys) - B * ls;
    CHECK(fb.band.sigma_hat * fb.band.sigma_hat == doctest::Approx(res.squaredNorm() / (300 - 8)).epsilon(1e-6));

    // Limit of the credible band as the prior precision vanishes.
    PriorSpec weak;
    weak.omega_inv = 1e-9;
    const auto limit = credible_band(d, 0.05, cfg, weak);
    const auto eb = frequentist_band(d, 0.05, cfg, NoiseEstimate::EmpiricalBayes);
    for (std::size_t k = 0; k < eb.grid.size(); ++k) {
        CHECK(std::abs(eb.center[k] - limit.center[k]) <= 1e-3);
        CHECK(std::abs(eb.radius[k] - limit.radius[k]) <= 1e-3);
    }
}

TEST_CASE("fixed-radius band: quantile stability and credibility") {
    const auto d = design_data(500, 1);
    const auto cfg = small_range(12, 12);
    CounterRng r1(5, 0, 1);
    CounterRng r2(6, 0, 1);
    const auto a = fixed_radius_band_with_state(d, 0.05, cfg, PriorSpec{}, 10'000, r1);
    const auto b = fixed_radius_band(d, 0.05, cfg, PriorSpec{}, 100'000, r2);
    CHECK(std::abs(a.band.radius[0] - b.radius[0]) <= 0.02 * b.radius[0]);
    for (double r : a.band.radius) CHECK(r == a.band.radius[0]);
    CHECK(a.band.draws == 10'000);

    CounterRng r3(7, 0, 2);
    const double cred = posterior_credibility(a.band, a.state, 10'000, r3);
    CHECK(cred >= 0.95 - 0.02);

    CounterRng r4(8, 0, 1);
    CHECK_THROWS_AS((void)fixed_radius_band(d, 0.05, cfg, PriorSpec{}, 50, r4), Error);
}

TEST_CASE("tube band credibility is at least the nominal level") {
    const auto d = design_data(500, 2);
    LepskiConfig cfg;
    const auto bs = credible_band_with_state(d, 0.05, cfg, PriorSpec{});
    CounterRng rng(11, 0, 3);
    const int draws = 10'000;
    const double cred = posterior_credibility(bs.band, bs.state, draws, rng);
    const double mc = std::sqrt(0.05 * 0.95 / draws);
    CHECK(cred >= 0.95 - 3.0 * mc);
}

TEST_CASE("contains") {
    Band band;
    band.grid = {0.0, 0.5, 1.0};
    band.center = {1.0, 2.0, 3.0};
    band.radius = {0.0, 0.0, 0.0};
    CHECK(contains(band, band.center));
    CHECK_FALSE(contains(band, std::vector<double>{1.0, 2.0 + 1e-12, 3.0}));
    band.radius = {0.5, 0.5, 0.5};
    CHECK(contains(band, std::vector<double>{1.5, 1.5, 3.0}));  // boundary is inside
    CHECK_THROWS_AS((void)contains(band, std::vector<double>{1.0}), Error);

    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        Band b;
        std::vector<double> f;
        for (int k = 0; k < 20; ++k) {
            b.grid.push_back(k / 19.0);
            b.center.push_back(u(gen));
            b.radius.push_back(std::abs(u(gen)) * 0.3);
            f.push_back(b.center.back() + u(gen) * 0.32);
        }
        bool inside = true;
        for (int k = 0; k < 20; ++k) {
            if (f[k] < b.center[k] - b.radius[k] || f[k] > b.center[k] + b.radius[k]) inside = false;
        }
        REQUIRE(contains(b, f) == inside);
    }
}

TEST_CASE("gamma validation") {
    const auto d = design_data(100);
    const auto cfg = small_range(6, 8);
    CHECK_THROWS_AS((void)credible_band(d, 0.0, cfg, PriorSpec{}), Error);
    CHECK_THROWS_AS((void)credible_band(d, 1.0, cfg, PriorSpec{}), Error);
    CHECK_THROWS_AS((void)frequentist_band(d, 1.5, cfg), Error);
}

}  // TEST_SUITE
