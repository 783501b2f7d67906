#include "catch_amalgamated.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "frozen_values.hpp"
#include "qthermo/bath_physics.hpp"
#include "qthermo/special_functions.hpp"

using namespace qthermo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const double w6649 = units::omega_from_ghz(6.649);
const double hbar = Constants<double>::hbar;
const double kB = Constants<double>::k_B;
}  // namespace

TEST_CASE("bose_einstein closed form", "[bath_physics]") {
    CHECK_THAT(bose_einstein(w6649, 0.2), WithinRel(frozen::bose_6649_200mK, 1e-13));
    // rounded value quoted for this point
    CHECK_THAT(bose_einstein(w6649, 0.2), WithinRel(0.25441, 1e-4));
    CHECK(bose_einstein(w6649, 1e-3) < 1e-100);
    CHECK(bose_einstein(w6649, 1e-5) == 0.0);

    const double t_ln2 = hbar * w6649 / (kB * std::log(2.0));
    CHECK_THAT(bose_einstein(w6649, t_ln2), WithinRel(1.0, 1e-14));
}

TEST_CASE("bose_einstein is increasing in T", "[bath_physics]") {
    double prev = 0;
    for (double t = 0.005; t < 5.0; t *= 1.1) {
        const double n = bose_einstein(w6649, t);
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("bose_einstein rejects bad inputs", "[bath_physics]") {
    CHECK_THROWS_AS(bose_einstein(w6649, 0.0), DomainError);
    CHECK_THROWS_AS(bose_einstein(w6649, -0.1), DomainError);
    CHECK_THROWS_AS(bose_einstein(-1.0, 0.1), DomainError);
    CHECK_THROWS_AS(bose_einstein(w6649, std::nan("")), DomainError);
    CHECK_THROWS_AS(bose_einstein(std::numeric_limits<double>::infinity(), 0.1), DomainError);
}

TEST_CASE("bath_rates obey detailed balance", "[bath_physics]") {
    const auto r = bath_rates(BathSpec<double>{0.2, 1.0}, w6649);
    CHECK_THAT(r.up, WithinRel(frozen::bose_6649_200mK, 1e-13));
    CHECK_THAT(r.down, WithinRel(frozen::bose_6649_200mK + 1.0, 1e-13));
    CHECK_THAT(r.up / r.down, WithinRel(std::exp(-frozen::x_6649_200mK), 1e-12));

    const auto cold = bath_rates(BathSpec<double>{1e-4, 3.0}, w6649);
    CHECK(cold.up == 0.0);
    CHECK(cold.down == 3.0);

    for (double t : {0.01, 0.05, 0.1, 0.3, 1.0, 10.0}) {
        const auto q = bath_rates(BathSpec<double>{t, 2.5}, w6649);
        CHECK_THAT(q.up / q.down, WithinRel(boltzmann_ratio(w6649, t), 1e-12));
    }
    CHECK_THROWS_AS(bath_rates(BathSpec<double>{0.1, -1.0}, w6649), DomainError);
}

TEST_CASE("aggregate_baths two-bath oracle", "[bath_physics]") {
    const std::array<BathSpec<double>, 2> baths{{{0.1, 1.0}, {0.3, 0.5}}};
    const auto s = aggregate_baths<double>(baths, w6649);
    CHECK_THAT(s.mean_photon_number, WithinRel(frozen::agg_nbar, 1e-12));
    CHECK_THAT(s.pe_over_pg, WithinRel(frozen::agg_ratio, 1e-12));
    CHECK_THAT(s.effective_temperature, WithinRel(frozen::agg_teff, 1e-12));
    CHECK_THAT(s.total_gamma1, WithinRel(frozen::agg_gamma1, 1e-12));
    CHECK(s.effective_temperature > 0.1);
    CHECK(s.effective_temperature < 0.3);
}

TEST_CASE("aggregate_baths single and symmetric baths", "[bath_physics]") {
    const std::array<BathSpec<double>, 1> one{{{0.12, 0.7}}};
    const auto s = aggregate_baths<double>(one, w6649);
    CHECK_THAT(s.effective_temperature, WithinRel(0.12, 1e-12));
    CHECK_THAT(s.mean_photon_number, WithinRel(bose_einstein(w6649, 0.12), 1e-12));
    CHECK_THAT(s.total_gamma1, WithinRel(gamma1_vs_T(0.7, w6649, 0.12), 1e-12));

    const std::array<BathSpec<double>, 2> sym{{{0.08, 2.0}, {0.25, 2.0}}};
    const auto t = aggregate_baths<double>(sym, w6649);
    const double expected = 0.5 * (bose_einstein(w6649, 0.08) + bose_einstein(w6649, 0.25));
    CHECK_THAT(t.mean_photon_number, WithinRel(expected, 1e-12));
}

TEST_CASE("aggregate_baths effective temperature lies between bath temperatures", "[bath_physics]") {
    const std::vector<std::array<double, 4>> cases{
        {0.02, 1.0, 0.5, 0.01}, {0.05, 3.0, 0.09, 1.0}, {0.15, 0.2, 0.3, 7.0}, {0.4, 1.0, 1.2, 1.0}};
    for (const auto& c : cases) {
        const std::array<BathSpec<double>, 2> b{{{c[0], c[1]}, {c[2], c[3]}}};
        const double t = aggregate_baths<double>(b, w6649).effective_temperature;
        CHECK(t >= c[0] * (1 - 1e-12));
        CHECK(t <= c[2] * (1 + 1e-12));
    }
}

TEST_CASE("aggregate_baths errors", "[bath_physics]") {
    std::vector<BathSpec<double>> none;
    CHECK_THROWS_AS(aggregate_baths<double>(none, w6649), DomainError);
    const std::array<BathSpec<double>, 2> zero{{{0.1, 0.0}, {0.2, 0.0}}};
    CHECK_THROWS_AS(aggregate_baths<double>(zero, w6649), DomainError);
}

TEST_CASE("teff_from_ratio", "[bath_physics]") {
    CHECK_THAT(teff_from_ratio(0.024, w6649), WithinRel(frozen::teff_ratio_0024, 1e-12));
    CHECK_THAT(teff_from_ratio(0.024, w6649), WithinAbs(0.085, 0.002));
    CHECK_THAT(teff_from_ratio(std::exp(-1.0), w6649), WithinRel(hbar * w6649 / kB, 1e-14));
    CHECK_THAT(teff_from_ratio(boltzmann_ratio(w6649, 0.15), w6649), WithinRel(0.15, 1e-12));
    for (double t = 0.01; t <= 10.0; t *= 1.3) {
        CHECK_THAT(teff_from_ratio(boltzmann_ratio(w6649, t), w6649), WithinRel(t, 1e-9));
    }
    CHECK(teff_from_ratio(0.02, w6649) < teff_from_ratio(0.03, w6649));
    CHECK_THROWS_AS(teff_from_ratio(0.0, w6649), DomainError);
    CHECK_THROWS_AS(teff_from_ratio(1.0, w6649), DomainError);
    CHECK_THROWS_AS(teff_from_ratio(1.5, w6649), DomainError);
    CHECK_THROWS_AS(teff_from_ratio(-0.1, w6649), DomainError);
}

TEST_CASE("boltzmann_populations", "[bath_physics]") {
    const auto p = boltzmann_populations(units::omega_from_ghz(6.65), units::omega_from_ghz(6.42), 0.3);
    CHECK_THAT(p(1) / p(0), WithinRel(frozen::pe_over_pg_300, 1e-12));
    CHECK_THAT(p(2) / p(0), WithinRel(frozen::pf_over_pg_300, 1e-12));
    CHECK_THAT(p(1) / p(0), WithinAbs(0.35, 0.01));
    CHECK_THAT(p(2) / p(0), WithinAbs(0.12, 0.01));

    const auto cold = boltzmann_populations(w6649, units::omega_from_ghz(6.417), 1e-4);
    CHECK(cold(0) == 1.0);
    CHECK(cold(1) == 0.0);
    CHECK(cold(2) == 0.0);

    const Eigen::Vector3d flat(1e-23, 1e-23, 1e-23);
    const auto eq = boltzmann_populations<double, 3>(flat, 0.1);
    for (int i = 0; i < 3; ++i) CHECK_THAT(eq(i), WithinRel(1.0 / 3.0, 1e-14));

    for (double t = 0.01; t < 3.0; t *= 1.5) {
        const auto q = boltzmann_populations(w6649, units::omega_from_ghz(6.417), t);
        CHECK_THAT(q.sum(), WithinAbs(1.0, 1e-12));
        CHECK(q(0) >= q(1));
        CHECK(q(1) >= q(2));
    }
    const Eigen::Vector3d unsorted(0.0, 2e-24, 1e-24);
    CHECK_THROWS_AS((boltzmann_populations<double, 3>(unsorted, 0.1)), DomainError);
    CHECK_THROWS_AS(boltzmann_populations(w6649, w6649, 0.0), DomainError);
}

TEST_CASE("gamma1_vs_T", "[bath_physics]") {
    const double g0 = units::omega_from_mhz(0.19);
    CHECK_THAT(gamma1_vs_T(g0, w6649, 0.2), WithinRel(frozen::gamma1_vs_T_019MHz_200mK, 1e-12));
    CHECK_THAT(gamma1_vs_T(g0, w6649, 1e-3), WithinRel(g0, 1e-15));
    // dγ₁/dn = 2γ₁⁰
    const double t1 = 0.1, t2 = 0.2;
    const double slope = (gamma1_vs_T(g0, w6649, t2) - gamma1_vs_T(g0, w6649, t1)) /
                         (bose_einstein(w6649, t2) - bose_einstein(w6649, t1));
    CHECK_THAT(slope, WithinRel(2 * g0, 1e-10));
    CHECK_THROWS_AS(gamma1_vs_T(0.0, w6649, 0.1), DomainError);
}

TEST_CASE("photon_mixing_relation", "[bath_physics]") {
    CHECK(photon_mixing_relation(0.3, 1.0, 0.0) == 0.3);
    CHECK(photon_mixing_relation(0.0, 0.6, 0.02) == 0.02);
    CHECK_THAT(photon_mixing_relation(0.1, 0.97, 0.023), WithinRel(0.97 * 0.1 + 0.023, 1e-15));
    CHECK_THROWS_AS(photon_mixing_relation(0.1, 1.2, 0.0), DomainError);
    CHECK_THROWS_AS(photon_mixing_relation(0.1, -0.1, 0.0), DomainError);
    CHECK_THROWS_AS(photon_mixing_relation(0.1, 0.5, -0.01), DomainError);
}

TEST_CASE("resonator_teff", "[bath_physics]") {
    const double w5 = units::omega_from_ghz(5.0);
    CHECK_THAT(resonator_teff(1.0, w5), WithinRel(frozen::resonator_teff_n1_5GHz, 1e-12));
    for (double t : {0.02, 0.1, 0.5, 2.0}) {
        CHECK_THAT(resonator_teff(bose_einstein(w5, t), w5), WithinRel(t, 1e-10));
    }
    for (double n : {150.0, 1e3, 1e5}) {
        CHECK_THAT(resonator_teff(n, w5), WithinRel(hbar * w5 * n / kB, 0.01));
    }
    CHECK_THROWS_AS(resonator_teff(0.0, w5), DomainError);
    CHECK_THROWS_AS(resonator_teff(-1.0, w5), DomainError);
    CHECK_THAT(temperature_from_occupation(bose_einstein(w6649, 0.09), w6649), WithinRel(0.09, 1e-10));
}

TEST_CASE("bessel K0 against quadrature", "[bath_physics]") {
    for (std::size_t i = 0; i < std::size(frozen::k0_x); ++i) {
        INFO("x = " << frozen::k0_x[i]);
        CHECK_THAT(bessel_k0(frozen::k0_x[i]), WithinRel(frozen::k0_v[i], 1e-13));
    }
    CHECK_THAT(bessel_i0(0.0), WithinRel(1.0, 1e-15));
    // Wronskian-free check: cosh(x)K0(x) for large x ~ √(π/8x)
    CHECK_THAT(cosh_times_k0(400.0), WithinRel(std::sqrt(M_PI / (8 * 400.0)) * (1 - 1.0 / 3200), 1e-6));
    CHECK_THROWS_AS(bessel_k0(0.0), DomainError);
}

TEST_CASE("unit conversions and lifetime convention", "[bath_physics]") {
    CHECK_THAT(units::ghz_from_omega(units::omega_from_ghz(6.649)), WithinRel(6.649, 1e-15));
    CHECK_THAT(units::uev_from_joule(units::joule_from_uev(180.0)), WithinRel(180.0, 1e-15));
    CHECK_THAT(lifetime_from_rate(units::omega_from_mhz(1.0)), WithinRel(1e-6, 1e-14));
    CHECK_THAT(lifetime_from_rate(2.0, LifetimeConvention::unit), WithinRel(0.5, 1e-15));
    CHECK_THAT(rate_from_lifetime(lifetime_from_rate(3.3e5)), WithinRel(3.3e5, 1e-15));
    CHECK_THAT(transfer_rate(2 * M_PI * 5.0), WithinRel(5.0, 1e-15));
    CHECK_THAT(transfer_rate(5.0, LifetimeConvention::unit), WithinRel(5.0, 1e-15));
}
