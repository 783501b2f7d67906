#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "frozen_values.hpp"
#include "qthermo/bath_physics.hpp"
#include "qthermo/device.hpp"
#include "qthermo/population_dynamics.hpp"
#include "qthermo/quasiparticle.hpp"

using namespace qthermo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

DeviceParams<double> r4i_qubit() { return device_preset("R4-I")->qubit; }

Population<double> random_population(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Population<double> p(u(gen), u(gen), u(gen));
    return p / p.sum();
}

RateSet<double> random_rates(std::mt19937_64& gen) {
    // overall scale over four decades, two decades of spread within a set
    std::uniform_real_distribution<double> scale(3.0, 7.0), spread(-1.0, 1.0);
    const double s = std::pow(10.0, scale(gen));
    auto draw = [&] { return s * std::pow(10.0, spread(gen)); };
    return {draw(), draw(), draw(), draw()};
}

}  // namespace

TEST_CASE("rate_set limits and defaults", "[population_dynamics]") {
    const auto q = r4i_qubit();
    const auto cold = rate_set(q, 1e-4);
    CHECK(cold.ge_up == 0.0);
    CHECK(cold.ef_up == 0.0);
    CHECK_THAT(cold.ef_down, WithinRel(2 * cold.ge_down, 1e-14));
    CHECK_THAT(cold.ge_down, WithinRel(q.gamma1_base / (2 * M_PI), 1e-14));

    const auto unit = rate_set(q, 1e-4, {}, {LifetimeConvention::unit, RateModel::split_total});
    CHECK_THAT(unit.ge_down, WithinRel(q.gamma1_base, 1e-14));

    for (double t : {0.03, 0.1, 0.2}) {
        for (auto model : {RateModel::split_total, RateModel::bath}) {
            const auto r = rate_set(q, t, {}, {LifetimeConvention::two_pi, model});
            CHECK_THAT(r.ge_up / r.ge_down, WithinRel(boltzmann_ratio(q.omega_ge, t), 1e-12));
            CHECK_THAT(r.ef_up / r.ef_down, WithinRel(boltzmann_ratio(q.omega_ef, t), 1e-12));
        }
    }
    CHECK_THROWS_AS(rate_set(q, 0.0), DomainError);
    CHECK_THROWS_AS(rate_set(q, 0.1, {-1.0, 0.0}), DomainError);
}

TEST_CASE("rate_set with quasiparticle relaxation matches the oracle", "[population_dynamics]") {
    const Device d = *device_preset("R4-I");
    auto q = d.qubit;
    q.gamma1_base = 2 * M_PI / 5.5e-6;
    const double gqp = gamma1_qp(d.qubit, d.junction, 0.1);
    const auto r = rate_set(q, 0.1, {gqp, 2 * gqp});
    CHECK_THAT(r.ge_up, WithinRel(frozen::lossy_rates_100mK[0], 1e-11));
    CHECK_THAT(r.ge_down, WithinRel(frozen::lossy_rates_100mK[1], 1e-11));
    CHECK_THAT(r.ef_up, WithinRel(frozen::lossy_rates_100mK[2], 1e-11));
    CHECK_THAT(r.ef_down, WithinRel(frozen::lossy_rates_100mK[3], 1e-11));
}

TEST_CASE("steady_state", "[population_dynamics]") {
    const RateSet<double> asym{0.2, 1.0, 0.1, 2.0};
    CHECK_THAT(partition_function(asym), WithinRel(1.21, 1e-14));
    const auto p = steady_state(asym);
    CHECK_THAT(p(0), WithinRel(1 / 1.21, 1e-14));
    CHECK_THAT(p(1), WithinRel(0.2 / 1.21, 1e-14));
    CHECK_THAT(p(2), WithinRel(0.01 / 1.21, 1e-14));

    const auto g = steady_state(RateSet<double>{0, 1, 0, 3});
    CHECK(g == Population<double>(1, 0, 0));

    const auto q = r4i_qubit();
    for (double t : {0.02, 0.05, 0.1, 0.2, 0.4}) {
        const auto s = steady_state(rate_set(q, t));
        const auto b = boltzmann_populations(q.omega_ge, q.omega_ef, t);
        for (int i = 0; i < 3; ++i) CHECK_THAT(s(i), WithinAbs(b(i), 1e-10));
    }
    CHECK_THROWS_AS(steady_state(RateSet<double>{1, 0, 1, 1}), DomainError);
    CHECK_THROWS_AS(steady_state(RateSet<double>{1, 1, 1, 0}), DomainError);
    CHECK_THROWS_AS(steady_state(RateSet<double>{-1, 1, 1, 1}), DomainError);
}

TEST_CASE("evolution coefficients", "[population_dynamics]") {
    const RateSet<double> r{3e4, 2e5, 5e4, 4e5};
    const auto [a0, a1] = decay_exponents(r);
    CHECK(a0 < 0);
    CHECK(a1 < 0);
    CHECK_THAT(a0 + a1, WithinRel(-r.total(), 1e-13));
    const double prod = r.ge_down * r.ef_down + r.ge_up * r.ef_up + r.ge_up * r.ef_down;
    CHECK_THAT(a0 * a1, WithinRel(prod, 1e-12));

    const Population<double> p0(0.2, 0.5, 0.3);
    const auto c = evolution_coefficients(p0, r);
    CHECK_FALSE(c.degenerate());
    CHECK_THAT((c.zeta + c.eta + c.xi - p0).cwiseAbs().maxCoeff(), WithinAbs(0.0, 1e-12));
    CHECK_THAT(c.xi.sum(), WithinAbs(1.0, 1e-14));

    const auto s = evolution_coefficients(steady_state(r), r);
    CHECK(s.zeta.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(s.eta.cwiseAbs().maxCoeff() < 1e-15);

    const double dt = 1e-3 / r.max_rate();
    for (double t : {1e-7, 1e-6, 3e-6, 1e-5, 4e-5}) {
        const auto a = evolve_analytic(p0, r, t);
        const auto n = evolve_numeric(p0, r, t, dt);
        CHECK((a - n).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("evolve_analytic limits", "[population_dynamics]") {
    const RateSet<double> r{1e4, 2e5, 2e4, 4e5};
    const Population<double> p0(0.0, 0.0, 1.0);
    CHECK(evolve_analytic(p0, r, 0.0) == p0);
    const auto [a0, a1] = decay_exponents(r);
    const double slow = std::min(std::abs(a0), std::abs(a1));
    const auto late = evolve_analytic(p0, r, 100.0 / slow);
    CHECK((late - steady_state(r)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(evolve_analytic(p0, r, -1.0), DomainError);
}

TEST_CASE("evolve_numeric step control", "[population_dynamics]") {
    const RateSet<double> r{1e4, 2e5, 2e4, 4e5};
    const Population<double> p0(1.0, 0.0, 0.0);
    CHECK(evolve_numeric(p0, r, 0.0, 1e-9) == p0);
    CHECK_THROWS_AS(evolve_numeric(p0, r, 1e-5, 1e-6), DomainError);

    // conservation over 10⁶ steps
    const double dt = 0.05 / r.max_rate();
    const auto p = evolve_numeric(Population<double>(0.3, 0.3, 0.4), r, dt * 1e6, dt);
    CHECK_THAT(p.sum(), WithinAbs(1.0, 1e-10));
}

TEST_CASE("degenerate exponents fall back to integration", "[population_dynamics]") {
    // a = b = c = d gives a double root when ge_down·ef_up vanishes
    const RateSet<double> r{0.0, 1e5, 0.0, 1e5};
    const Population<double> p0(0.1, 0.3, 0.6);
    const auto c = evolution_coefficients(p0, r);
    CHECK(c.degenerate());
    for (double t : {1e-6, 5e-6, 3e-5}) {
        const auto a = evolve_analytic(p0, r, t);
        // closed form for the double root
        const double k = 1e5;
        const double pf = 0.6 * std::exp(-k * t);
        const double pe = (0.3 + 0.6 * k * t) * std::exp(-k * t);
        CHECK_THAT(a(2), WithinAbs(pf, 1e-9));
        CHECK_THAT(a(1), WithinAbs(pe, 1e-9));
        CHECK_THAT(a.sum(), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("time averaged population", "[population_dynamics]") {
    const RateSet<double> r{2e4, 3e5, 4e4, 6e5};
    const Population<double> p0(0.1, 0.2, 0.7);
    const double window = 2e-6;
    const auto avg = time_averaged(p0, r, window);
    // trapezoid check on the analytic trajectory
    const int n = 20000;
    Population<double> acc = Population<double>::Zero();
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * evolve_analytic(p0, r, window * i / n);
    }
    acc /= n;
    CHECK((avg - acc).cwiseAbs().maxCoeff() < 1e-8);
    CHECK_THAT(avg.sum(), WithinAbs(1.0, 1e-12));
    CHECK(time_averaged(p0, r, 0.0) == p0);
}

TEST_CASE("pulses", "[population_dynamics]") {
    const Population<double> g(1, 0, 0);
    const auto p = apply_pulse(g, PulseKind::ge, 0.9);
    CHECK_THAT(p(0), WithinAbs(0.1, 1e-15));
    CHECK_THAT(p(1), WithinAbs(0.9, 1e-15));
    CHECK(p(2) == 0.0);

    const Population<double> q(0.6, 0.3, 0.1);
    CHECK(apply_pulse(q, PulseKind::ge, 1.0) == Population<double>(0.3, 0.6, 0.1));
    CHECK(apply_pulse(q, PulseKind::ef, 1.0) == Population<double>(0.6, 0.1, 0.3));
    CHECK(apply_pulse(apply_pulse(q, PulseKind::ef, 1.0), PulseKind::ef, 1.0) == q);
    CHECK(apply_pulse(q, PulseKind::ge, 0.0) == q);

    for (auto kind : {PulseKind::ge, PulseKind::ef}) {
        for (double d : {0.0, 0.3, 0.8, 1.0}) {
            const auto m = pulse_matrix(kind, d);
            CHECK((m.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
            CHECK((m.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
        }
    }
    CHECK_THROWS_AS(apply_pulse(q, PulseKind::ge, 1.1), DomainError);
    CHECK_THROWS_AS(apply_pulse(q, PulseKind::ef, -0.1), DomainError);
}

TEST_CASE("population validation", "[population_dynamics]") {
    CHECK_NOTHROW(validate_population(Population<double>(0.5, 0.5, 0.0)));
    CHECK_THROWS_AS(validate_population(Population<double>(0.5, 0.6, 0.0)), DomainError);
    CHECK_THROWS_AS(validate_population(Population<double>(1.1, -0.1, 0.0)), DomainError);
    CHECK_THROWS_AS(validate_population(Population<double>(NAN, 0.5, 0.5)), DomainError);
}

TEST_CASE("random chains conserve probability and positivity", "[population_dynamics]") {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto r = random_rates(gen);
        Population<double> p = random_population(gen);
        for (int step = 0; step < 20; ++step) {
            const double roll = u(gen);
            if (roll < 0.3) {
                p = apply_pulse(p, PulseKind::ge, u(gen));
            } else if (roll < 0.6) {
                p = apply_pulse(p, PulseKind::ef, u(gen));
            } else {
                p = evolve_analytic(p, r, u(gen) * 20.0 / r.max_rate());
            }
            REQUIRE(std::abs(p.sum() - 1.0) < 1e-9);
            REQUIRE(p.minCoeff() >= -1e-12);
            REQUIRE(p.maxCoeff() <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("analytic and numeric solutions agree on random instances", "[population_dynamics]") {
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = random_rates(gen);
        const auto p0 = random_population(gen);
        const auto [a0, a1] = decay_exponents(r);
        const double t = u(gen) * 20.0 / std::min(std::abs(a0), std::abs(a1));
        const auto a = evolve_analytic(p0, r, t);
        const auto n = evolve_numeric(p0, r, t, 0.01 / r.max_rate());
        REQUIRE((a - n).cwiseAbs().maxCoeff() < 1e-7);
    }
}
