#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tubeband/error.hpp"
#include "tubeband/lepski.hpp"
#include "tubeband/sim.hpp"

using namespace tubeband;

namespace {

Dataset design_data(std::size_t n, std::uint64_t rep = 0, std::uint64_t seed = 20240601) {
    SimConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    return generate(cfg, rep);
}

PosteriorState hand_state(const KnotVector& kv, std::vector<double> theta) {
    const int J = kv.dimension();
    return PosteriorState(kv, BandedSymMatrix::identity(J),
                          BandedCholesky(BandedSymMatrix::identity(J)), std::move(theta), 1.0,
                          std::vector<double>(static_cast<std::size_t>(J), 0.0), 10);
}

}  // namespace

TEST_SUITE("lepski") {

TEST_CASE("candidate endpoints") {
    LepskiConfig cfg;
    struct Row {
        std::size_t n;
        int lo;
        int hi10;
        int hie;
    };
    // floor(n / log^2 n) in both bases; the natural-log range is lifted to j_min.
    for (const Row r : {Row{50, 4, 17, 4}, Row{100, 4, 25, 4}, Row{300, 4, 48, 9},
                        Row{500, 4, 68, 12}, Row{1000, 4, 111, 20}, Row{2000, 4, 183, 34}}) {
        cfg.endpoint_log = EndpointLog::Base10;
        auto range = cfg.resolve(r.n);
        CHECK(range.j_min == r.lo);
        CHECK(range.j_max == r.hi10);
        cfg.endpoint_log = EndpointLog::Natural;
        range = cfg.resolve(r.n);
        CHECK(range.j_min == r.lo);
        CHECK(range.j_max == r.hie);
    }
    cfg.j_min = 6;
    cfg.j_max = 9;
    const auto fixed = cfg.resolve(500);
    CHECK(fixed.j_min == 6);
    CHECK(fixed.j_max == 9);
    cfg.j_min = 3;
    CHECK_THROWS_AS((void)cfg.resolve(500), Error);
    cfg.j_min = 10;
    CHECK_THROWS_AS((void)cfg.resolve(500), Error);
    LepskiConfig small_grid;
    small_grid.grid_size = 32;
    CHECK_THROWS_AS(small_grid.validate(), Error);
}

TEST_CASE("asymptotic threshold arithmetic") {
    CHECK(threshold_asymptotic(7, 1.0, 14, 1.0) == doctest::Approx(std::sqrt(7 * std::log(7.0) / 14)));
    CHECK(threshold_asymptotic(7, 1.0, 14, 1.0) == doctest::Approx(0.98638).epsilon(1e-5));
    CHECK(threshold_asymptotic(7, 1.0, 14, 0.0) == 0.0);
    CHECK(threshold_asymptotic(11, 0.3, 400, 2.0) / threshold_asymptotic(11, 0.3, 800, 2.0) ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS((void)threshold_asymptotic(1, 1.0, 10, 1.0), Error);
}

TEST_CASE("practical threshold against the dense oracle") {
    const auto d = design_data(200);
    PriorSpec prior;
    for (int J : {6, 11, 17}) {
        const auto s = fit(d, J, 4, prior);
        const auto ref = oracle::posterior(J, 4, d.xs, d.ys, 0.0, prior.omega_inv);
        double m = 1e300;
        for (double x : uniform_grid(512)) {
            const oracle::Vec b = oracle::basis(J, 4, x);
            m = std::min(m, b.dot(ref.M * b));
        }
        const double expect = std::sqrt(ref.sigma_sq) * std::sqrt(m) * std::sqrt(std::log(J));
        CHECK(threshold_practical(s, 512) == doctest::Approx(expect).epsilon(1e-9));
    }
    Dataset flat;
    for (int i = 1; i <= 50; ++i) {
        flat.xs.push_back(i / 50.0);
        flat.ys.push_back(0.0);
    }
    CHECK(threshold_practical(fit(flat, 8, 4, prior), 512) == 0.0);
}

TEST_CASE("practical threshold snapshot across J") {
    // Regression snapshot on seeded data: V_J grows with J here.
    const auto d = design_data(500);
    double prev = 0.0;
    for (int J : {6, 10, 20, 40}) {
        const double v = threshold_practical(fit(d, J, 4, PriorSpec{}), 512);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("sup_diff") {
    const auto kv = make_knots(9, 4);
    std::vector<double> theta{0.1, 0.4, -0.3, 1.0, 0.2, 0.0, -0.5, 0.7, 0.3};
    const auto a = hand_state(kv, theta);
    CHECK(sup_diff(a, a, 512) == 0.0);
    for (int k : {0, 3, 8}) {
        auto t = theta;
        t[static_cast<std::size_t>(k)] += 0.8;
        const auto b = hand_state(kv, t);
        CHECK(sup_diff(a, b, 512) == sup_diff(b, a, 512));
        double coarse = 0.0;
        double fine = 0.0;
        for (double x : uniform_grid(512)) coarse = std::max(coarse, eval(kv, x)[k]);
        for (double x : uniform_grid(5120)) fine = std::max(fine, eval(kv, x)[k]);
        CHECK(sup_diff(a, b, 512) == doctest::Approx(0.8 * coarse).epsilon(1e-13));
        CHECK(sup_diff(a, b, 512) <= 0.8 * fine + 1e-15);
        CHECK(sup_diff(a, b, 512) >= 0.8 * fine * (1.0 - 1e-3));
    }
}

TEST_CASE("huge tau never triggers; zero tau triggers at once") {
    const auto d = design_data(500);
    LepskiConfig cfg;
    cfg.mode = ThresholdMode::Asymptotic;
    cfg.tau = 1e12;
    auto t = select(d, cfg, PriorSpec{});
    CHECK(t.selected == t.j_min);
    CHECK(t.reason == StopReason::ExhaustedAtJmin);
    for (const auto& c : t.comparisons) CHECK_FALSE(c.violated);

    cfg.mode = ThresholdMode::Practical;
    cfg.tau = 0.0;
    t = select(d, cfg, PriorSpec{});
    CHECK(t.selected == t.j_max);
    CHECK(t.reason == StopReason::DefaultedJmax);
    REQUIRE(t.comparisons.size() == 1u);
    CHECK(t.comparisons[0].j == t.j_max - 1);
}

TEST_CASE("single candidate") {
    LepskiConfig cfg;
    cfg.j_min = 7;
    cfg.j_max = 7;
    const auto t = select(design_data(100), cfg, PriorSpec{});
    CHECK(t.selected == 7);
    CHECK(t.comparisons.empty());
    CHECK(t.reason == StopReason::ExhaustedAtJmin);
}

TEST_CASE("simulation setup: range, determinism, snapshot, trace consistency") {
    const auto d = design_data(500, 0, 7);
    LepskiConfig cfg;
    const auto a = select_with_fits(d, cfg, PriorSpec{});
    cfg.parallel_fits = false;
    const auto b = select_with_fits(design_data(500, 0, 7), cfg, PriorSpec{});
    const auto& t = a.trace;
    CHECK(t.selected >= t.j_min);
    CHECK(t.selected <= t.j_max);
    CHECK(t.selected == b.trace.selected);
    CHECK(t.comparisons.size() == b.trace.comparisons.size());
    for (std::size_t k = 0; k < t.comparisons.size(); ++k) {
        CHECK(t.comparisons[k].sup_diff == b.trace.comparisons[k].sup_diff);
        CHECK(t.comparisons[k].threshold == b.trace.comparisons[k].threshold);
    }
    CHECK(t.j_min == 4);
    CHECK(t.j_max == 68);
    CHECK(t.selected == 55);
    CHECK(std::string(to_string(t.reason)) == "triggered");

    // Every comparison above the stopping point passed; the last scanned j failed.
    bool any_last = false;
    for (const auto& c : t.comparisons) {
        CHECK(c.i > c.j);
        CHECK(c.violated == (c.sup_diff > c.threshold));
        if (c.j >= t.selected) CHECK_FALSE(c.violated);
        if (c.j == t.selected - 1 && c.violated) any_last = true;
        CHECK(c.j >= t.selected - 1);
        CHECK(c.threshold == t.candidate(c.i).threshold);
    }
    CHECK(any_last);
    // Scan order: j descending, i ascending within j.
    for (std::size_t k = 1; k < t.comparisons.size(); ++k) {
        const auto& p = t.comparisons[k - 1];
        const auto& c = t.comparisons[k];
        CHECK((c.j < p.j || (c.j == p.j && c.i == p.i + 1)));
    }

    // Cached fits equal fresh fits.
    for (int J : {t.j_min, t.selected, t.j_max}) {
        const auto fresh = fit(d, J, 4, PriorSpec{});
        const auto& cached = a.fit_for(J);
        CHECK(cached.sigma_hat() == fresh.sigma_hat());
        for (double x : {0.0, 0.3, 0.5, 1.0}) CHECK(cached.mean_at(x) == fresh.mean_at(x));
        CHECK(t.candidate(J).threshold == threshold_practical(fresh, 512));
    }
}

TEST_CASE("selection stays in range over many seeds and both modes") {
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        for (auto mode : {ThresholdMode::Practical, ThresholdMode::Asymptotic}) {
            LepskiConfig cfg;
            cfg.mode = mode;
            cfg.parallel_fits = false;
            const auto t = select(design_data(150, rep), cfg, PriorSpec{});
            CHECK(t.selected >= t.j_min);
            CHECK(t.selected <= t.j_max);
        }
    }
}

TEST_CASE("names") {
    CHECK(std::string(to_string(StopReason::ExhaustedAtJmin)) == "exhausted-at-jmin");
    CHECK(std::string(to_string(StopReason::DefaultedJmax)) == "defaulted-jmax");
    CHECK(std::string(to_string(ThresholdMode::Asymptotic)) == "asymptotic");
    CHECK(std::string(to_string(EndpointLog::Base10)) == "log10");
}

}  // TEST_SUITE
