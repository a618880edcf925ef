#include <doctest.h>

#include <cmath>
#include <vector>

#include "classeq/designer.hpp"
#include "classeq/voters.hpp"
#include "test_support.hpp"

using namespace classeq;

namespace {

const double kPhi = 0.75;

Scenario acc_n01(double t = 0.0) {
    return testsupport::normal_scenario(0.0, 1.0, t, kPhi, DesignerPayoffs::accuracy());
}
Scenario acc_n11(double t = 0.0) {
    return testsupport::normal_scenario(1.0, 1.0, t, kPhi, DesignerPayoffs::accuracy());
}

// Test-side 1-D argmax of the payoff in delta0 at a fixed reward: dense scan
// plus golden refinement, independent of the solver internals.
double grid_best_delta0(double delta1, double reward, const Scenario& s) {
    auto payoff = [&](double d0) { return designer_expected_payoff({delta1, d0}, reward, s); };
    double best_x = 0.0, best_v = payoff(0.0);
    constexpr int kN = 2001;
    for (int i = 1; i < kN; ++i) {
        const double x = double(i) / (kN - 1);
        const double v = payoff(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double lo = std::max(0.0, best_x - 1.0 / (kN - 1));
    double hi = std::min(1.0, best_x + 1.0 / (kN - 1));
    constexpr double kGolden = 0.6180339887498949;
    double c = hi - kGolden * (hi - lo), d = lo + kGolden * (hi - lo);
    double fc = payoff(c), fd = payoff(d);
    for (int it = 0; it < 80; ++it) {
        if (fc >= fd) {
            hi = d; d = c; fd = fc; c = hi - kGolden * (hi - lo); fc = payoff(c);
        } else {
            lo = c; c = d; fc = fd; d = lo + kGolden * (hi - lo); fd = payoff(d);
        }
    }
    return fc >= fd ? c : d;
}

// Independent oracle for the equilibrium critical point: the delta0 whose
// best response to the reward it induces (r = k / rho) is itself.
double fixed_point_delta0_oracle(double k, double delta1, const Scenario& s) {
    auto mismatch = [&](double d0) {
        const double r = k / responsiveness({delta1, d0}, s.accuracy);
        return grid_best_delta0(delta1, r, s) - d0;
    };
    double lo = 0.05, hi = 0.95;
    double flo = mismatch(lo);
    for (double x = 0.1; x <= 0.95; x += 0.05) {
        const double fx = mismatch(x);
        if ((flo < 0) != (fx < 0)) {
            hi = x;
            break;
        }
        lo = x;
        flo = fx;
    }
    for (int it = 0; it < 45; ++it) {
        const double m = 0.5 * (lo + hi);
        if ((mismatch(m) < 0) == (flo < 0)) {
            lo = m;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("expected payoff reference values") {
    // any null classifier earns the sincere-prevalence mix
    for (double d1 : {0.0, 0.4, 1.0}) {
        CHECK(designer_expected_payoff({d1, 1.0 - d1}, 17.0, acc_n01()) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(designer_expected_payoff({1.0, 1.0}, 10.0, acc_n01()) ==
          doctest::Approx(0.75).epsilon(1e-5));
    auto ineff = testsupport::normal_scenario(1.0, 1.0, 1.25, kPhi, {1.0, 0.0, 0.9, 0.0});
    CHECK(designer_expected_payoff({0.0, 1.0}, 0.0, ineff) ==
          doctest::Approx(0.7572102715).epsilon(1e-8));
}

TEST_CASE("expected payoff equals the cell-weighted confusion fractions") {
    testsupport::SweepRng rng(37);
    for (int i = 0; i < 200; ++i) {
        auto s = testsupport::normal_scenario(
            rng.uniform(-1.0, 1.0), rng.uniform(0.4, 2.0), 0.0, rng.uniform(0.51, 1.0),
            {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0),
             rng.uniform(0.0, 2.0)});
        const Classifier c{rng.uniform(), rng.uniform()};
        const double r = rng.uniform(-8.0, 8.0);
        const double pi = prevalence(c, s.accuracy, r, *s.distribution);
        const auto cf = confusion_fractions(pi, c, s.accuracy);
        const double via_cells = s.designer.a1 * cf.tp + s.designer.a0 * cf.fn +
                                 s.designer.b1 * cf.tn + s.designer.b0 * cf.fp;
        CHECK(designer_expected_payoff(c, r, s) == doctest::Approx(via_cells).epsilon(1e-12));
        const double lo = std::min({s.designer.a1, s.designer.a0, s.designer.b1, s.designer.b0});
        const double hi = std::max({s.designer.a1, s.designer.a0, s.designer.b1, s.designer.b0});
        CHECK(designer_expected_payoff(c, r, s) >= lo - 1e-12);
        CHECK(designer_expected_payoff(c, r, s) <= hi + 1e-12);
    }
}

TEST_CASE("accuracy alignment classification") {
    CHECK(accuracy_alignment({1, 0, 1, 0}) == AccuracyAlignment::StronglyAligned);
    CHECK(accuracy_alignment({1, 1, 0, 0}) == AccuracyAlignment::Both);
    CHECK(accuracy_alignment({0, 1, 0, 1}) == AccuracyAlignment::StronglyMisaligned);
    CHECK(accuracy_alignment({1, 0, 0, 1}) == AccuracyAlignment::Neither);
    CHECK(accuracy_alignment(DesignerPayoffs::moral_hazard(0.3)) ==
          AccuracyAlignment::StronglyAligned);
    CHECK(accuracy_alignment(DesignerPayoffs::predatory()) == AccuracyAlignment::StronglyAligned);
}

TEST_CASE("critical point in delta0 at the equilibrium threshold") {
    auto s1 = acc_n01(0.5);
    const double k1 = solve_k_roots(s1).k1;
    CHECK(k1 == doctest::Approx(1.117327115817).epsilon(1e-9));
    const double d0 = delta0_critical(k1, 1.0, s1);
    CHECK(d0 == doctest::Approx(0.669128295332).epsilon(1e-8));
    // independent fixed-point oracle agrees
    CHECK(fixed_point_delta0_oracle(k1, 1.0, s1) == doctest::Approx(d0).epsilon(2e-5));

    auto s2 = acc_n11(0.5);
    const double k0 = solve_k_roots(s2).k0;
    CHECK(delta0_critical(k0, 0.0, s2) == doctest::Approx(0.9610140896).epsilon(1e-8));
}

TEST_CASE("critical point in delta1 at the equilibrium threshold") {
    auto s2 = acc_n11(0.5);
    const double k0 = solve_k_roots(s2).k0;
    CHECK(delta1_critical(k0, 1.0, s2) == doctest::Approx(0.1751608648).epsilon(1e-7));
    auto s1 = acc_n01(0.5);
    const double k1 = solve_k_roots(s1).k1;
    CHECK(delta1_critical(k1, 0.0, s1) == doctest::Approx(0.7213283121).epsilon(1e-7));
}

TEST_CASE("critical points satisfy the first-order condition at fixed reward") {
    // the closed form solves d(payoff)/d(delta) = 0 once the reward is set to
    // k / rho at the critical classifier; verified by central differences
    auto check_foc_delta0 = [](double k, double delta1, const Scenario& s) {
        const double d0 = delta0_critical(k, delta1, s);
        REQUIRE(d0 > 0.0);
        REQUIRE(d0 < 1.0);
        const double r = k / responsiveness({delta1, d0}, s.accuracy);
        const double deriv = testsupport::central_difference(
            [&](double x) { return designer_expected_payoff({delta1, x}, r, s); }, d0, 1e-6);
        CHECK(std::abs(deriv) <= 1e-8);
    };
    auto s1 = acc_n01(0.5);
    check_foc_delta0(solve_k_roots(s1).k1, 1.0, s1);
    auto s2 = acc_n11(0.5);
    check_foc_delta0(solve_k_roots(s2).k0, 0.0, s2);

    auto ineff = testsupport::normal_scenario(1.0, 1.0, 1.25, kPhi, {1.0, 0.0, 0.9, 0.0});
    const double k1 = solve_k_roots(ineff).k1;
    const double d0 = delta0_critical(k1, 1.0, ineff);
    CHECK(d0 == doctest::Approx(0.9095780380).epsilon(1e-8));
    const double r = k1 / responsiveness({1.0, d0}, ineff.accuracy);
    CHECK(r == doctest::Approx(4.2446379609).epsilon(1e-8));
    const double deriv = testsupport::central_difference(
        [&](double x) { return designer_expected_payoff({1.0, x}, r, ineff); }, d0, 1e-6);
    CHECK(std::abs(deriv) <= 1e-8);
}

TEST_CASE("compliance payoffs make the critical point degenerate") {
    auto s = testsupport::normal_scenario(0.0, 1.0, 0.5, kPhi, DesignerPayoffs::compliance());
    CHECK_THROWS_AS(delta0_critical(1.0, 1.0, s), degenerate_denominator_error);
    CHECK_THROWS_AS(delta1_critical(1.0, 0.0, s), degenerate_denominator_error);
}

TEST_CASE("clamping rules") {
    // values inside the unit interval pass through; outside values clamp
    auto s1 = acc_n01(0.5);
    const double k1 = solve_k_roots(s1).k1;
    const double inside = clamped_delta_star(k1, Coordinate::Delta1, 1.0, s1);
    CHECK(inside == doctest::Approx(delta0_critical(k1, 1.0, s1)).epsilon(1e-12));
    CHECK_THROWS_AS(clamped_delta_star(0.5, Coordinate::Delta1, 0.3, s1),
                    std::invalid_argument);

    // sweep payoffs and thresholds until the raw critical point leaves the
    // unit interval on both sides; the clamp must saturate each time
    testsupport::SweepRng rng(301);
    bool clamped_low = false, clamped_high = false;
    for (int i = 0; i < 400 && !(clamped_low && clamped_high); ++i) {
        auto s = testsupport::normal_scenario(
            rng.uniform(-1.5, 1.5), rng.uniform(0.4, 1.5), rng.uniform(0.0, 1.5),
            rng.uniform(0.55, 0.95),
            {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0),
             rng.uniform(0.0, 2.0)});
        const double k = rng.uniform(-2.0, 2.0);
        const double held = rng.uniform() < 0.5 ? 0.0 : 1.0;
        const auto coord = rng.uniform() < 0.5 ? Coordinate::Delta1 : Coordinate::Delta0;
        try {
            const double raw = coord == Coordinate::Delta1 ? delta0_critical(k, held, s)
                                                           : delta1_critical(k, held, s);
            const double clamped = clamped_delta_star(k, coord, held, s);
            CHECK(clamped == doctest::Approx(std::clamp(raw, 0.0, 1.0)).epsilon(1e-12));
            if (raw < 0.0) {
                CHECK(clamped == 0.0);
                clamped_low = true;
            }
            if (raw > 1.0) {
                CHECK(clamped == 1.0);
                clamped_high = true;
            }
        } catch (const degenerate_denominator_error&) {
            continue;
        }
    }
    CHECK(clamped_low);
    CHECK(clamped_high);
}

TEST_CASE("best response reproduces the fixed-reward examples") {
    const auto br1 = designer_best_response(10.0, acc_n01());
    REQUIRE(br1.classifiers.size() == 1);
    CHECK(br1.classifiers[0].delta1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(br1.classifiers[0].delta0 == doctest::Approx(0.3732935572).epsilon(1e-6));
    CHECK(br1.payoff == doctest::Approx(0.8872562481).epsilon(1e-9));

    const auto br2 = designer_best_response(10.0, acc_n11());
    REQUIRE(br2.classifiers.size() == 1);
    CHECK(br2.classifiers[0].delta1 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(br2.classifiers[0].delta0 == doctest::Approx(0.9168886013).epsilon(1e-6));
    CHECK(br2.payoff == doctest::Approx(0.8657341332).epsilon(1e-9));
}

TEST_CASE("best response for compliance-type payoffs") {
    auto s = testsupport::normal_scenario(0.0, 1.0, 0.5, kPhi, DesignerPayoffs::compliance());
    const auto pos = designer_best_response(3.0, s);
    REQUIRE(pos.classifiers.size() == 1);
    CHECK(pos.classifiers[0].delta1 == 1.0);
    CHECK(pos.classifiers[0].delta0 == 1.0);
    const auto neg = designer_best_response(-3.0, s);
    REQUIRE(neg.classifiers.size() == 1);
    CHECK(neg.classifiers[0].delta1 == 0.0);
    CHECK(neg.classifiers[0].delta0 == 0.0);
    CHECK_FALSE(pos.everything_optimal);

    const auto flat = designer_best_response(0.0, s);
    CHECK(flat.everything_optimal);
    auto s_eq = testsupport::normal_scenario(0.0, 1.0, 0.5, kPhi, {0.7, 0.7, 0.7, 0.7});
    CHECK(designer_best_response(5.0, s_eq).everything_optimal);
}

TEST_CASE("best response at zero reward is the corner dictated by sincere prevalence") {
    const auto br = designer_best_response(0.0, acc_n01());
    CHECK_FALSE(br.everything_optimal);
    REQUIRE(br.classifiers.size() == 1);
    CHECK(br.classifiers[0].delta1 == 1.0);
    CHECK(br.classifiers[0].delta0 == 1.0);
    CHECK(br.payoff == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("best response is deterministic and lexicographically ordered") {
    // a designer caring only about true negatives at zero reward is
    // indifferent along a face; returned argmaxes are sorted
    auto s = testsupport::normal_scenario(0.0, 1.0, 0.5, kPhi, DesignerPayoffs::predatory());
    const auto br = designer_best_response(-2.0, s);
    for (size_t i = 1; i < br.classifiers.size(); ++i) {
        const auto& a = br.classifiers[i - 1];
        const auto& b = br.classifiers[i];
        CHECK((a.delta1 < b.delta1 || (a.delta1 == b.delta1 && a.delta0 < b.delta0)));
    }
    for (const auto& c : br.classifiers) {
        CHECK(designer_expected_payoff(c, -2.0, s) >= br.payoff - kArgmaxTolerance);
    }
}

TEST_CASE("payoff is single-peaked in delta0 for aligned payoffs at positive reward") {
    auto s = acc_n01();
    auto payoff = [&](double d0) { return designer_expected_payoff({1.0, d0}, 10.0, s); };
    int local_maxima = 0;
    constexpr int kN = 1001;  // 1e-3 grid
    for (int i = 1; i + 1 < kN; ++i) {
        const double prev = payoff(double(i - 1) / (kN - 1));
        const double cur = payoff(double(i) / (kN - 1));
        const double next = payoff(double(i + 1) / (kN - 1));
        if (cur > prev && cur > next) ++local_maxima;
    }
    CHECK(local_maxima == 1);
    // restricted to delta1 the payoff is corner-maximized
    auto payoff1 = [&](double d1) { return designer_expected_payoff({d1, 0.4}, 10.0, s); };
    double interior_best = 0.0;
    for (int i = 1; i + 1 < 101; ++i) {
        interior_best = std::max(interior_best, payoff1(double(i) / 100));
    }
    CHECK(std::max(payoff1(0.0), payoff1(1.0)) >= interior_best - 1e-12);
}

TEST_CASE("corner property on a randomized sweep") {
    testsupport::SweepRng rng(101);
    int tested = 0;
    while (tested < 50) {
        DesignerPayoffs dp{rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0),
                           rng.uniform(0.0, 2.0)};
        if (std::abs(dp.a1 + dp.b1 - dp.a0 - dp.b0) < 0.05) continue;
        auto s = testsupport::normal_scenario(rng.uniform(-2.0, 2.0), rng.uniform(0.3, 2.5), 0.0,
                                              rng.uniform(0.55, 0.98), dp);
        double r = rng.uniform(0.1, 20.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const auto br = designer_best_response(r, s);
        for (const auto& c : br.classifiers) {
            const double corner_gap =
                std::min({c.delta1, 1.0 - c.delta1, c.delta0, 1.0 - c.delta0});
            CHECK(corner_gap <= 1e-6);
        }
        ++tested;
    }
}

TEST_CASE("limiting classifiers concentrate mass and payoff in their cell") {
    const std::vector<double> rewards{10.0, 100.0, 1000.0, 10000.0};
    auto s = testsupport::normal_scenario(0.0, 1.0, 0.0, kPhi, DesignerPayoffs::accuracy());
    const auto report = limit_payoff_check(s, rewards);
    REQUIRE(report.rewards.size() == 4);

    for (const auto& track : report.cells) {
        // fractions increase along the reward sequence and approach one
        for (size_t i = 1; i < track.fractions.size(); ++i) {
            CHECK(track.fractions[i] >= track.fractions[i - 1] - 1e-12);
        }
        CHECK(track.fractions.back() >= 0.999);
    }
    // frozen mid-sequence values: with a unit-scale distribution the behavior
    // threshold at reward 1e3 is only 0.5, so the fractions sit near 0.69
    CHECK(report.cells[0].fractions[2] == doctest::Approx(0.69129).epsilon(1e-4));
    CHECK(report.cells[2].fractions[2] == doctest::Approx(0.690944).epsilon(1e-4));

    // payoff approaches the targeted cell value for the accuracy designer
    CHECK(report.cells[0].payoffs[2] == doctest::Approx(0.691521).epsilon(1e-4));
    CHECK(std::abs(report.cells[0].payoffs[3] - 1.0) <= 0.01);

    auto pred = testsupport::normal_scenario(0.0, 1.0, 0.0, kPhi, DesignerPayoffs::predatory());
    const auto pred_report = limit_payoff_check(pred, rewards);
    CHECK(std::abs(pred_report.cells[2].payoffs[3] - 1.0) <= 0.01);

    // a tight cost distribution reaches the limit already at reward 1e3
    auto tight = testsupport::normal_scenario(0.0, 0.1, 0.0, kPhi, DesignerPayoffs::accuracy());
    const auto tight_report = limit_payoff_check(tight, std::vector<double>{1000.0});
    for (const auto& track : tight_report.cells) {
        CHECK(track.fractions[0] >= 0.99);
    }
}

TEST_CASE("null classifiers are reward-invariant") {
    auto s = testsupport::normal_scenario(0.3, 1.2, 0.0, 0.8, DesignerPayoffs::moral_hazard(0.5));
    const double at_zero = designer_expected_payoff({0.25, 0.75}, 0.0, s);
    CHECK(designer_expected_payoff({0.25, 0.75}, 1e6, s) ==
          doctest::Approx(at_zero).epsilon(1e-12));
}

TEST_CASE("mixed-alignment fallback still finds the lattice optimum") {
    // payoffs rewarding decision 1 on compliers and decision 1 on
    // non-compliers asymmetrically: neither aligned nor misaligned
    auto s = testsupport::normal_scenario(0.2, 1.0, 0.0, 0.8, {1.0, 0.0, 0.0, 0.6});
    CHECK(accuracy_alignment(s.designer) == AccuracyAlignment::Neither);
    for (double r : {-4.0, -1.0, 2.0, 7.0}) {
        const auto br = designer_best_response(r, s);
        double lattice_best = 0.0;
        constexpr int kRes = 161;
        for (int i = 0; i < kRes; ++i) {
            for (int j = 0; j < kRes; ++j) {
                lattice_best = std::max(
                    lattice_best, designer_expected_payoff(
                                      {double(i) / (kRes - 1), double(j) / (kRes - 1)}, r, s));
            }
        }
        CHECK(br.payoff >= lattice_best - 1e-6);
    }
}
