// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fdrsma/channel.hpp"
#include "oracles.hpp"

using namespace fdrsma;

TEST_CASE("phase offset hand values") {
    CHECK(phase_offset(Position2D{0.0, 0.0}, 1.23, -0.7) == 0.0);
    // y-only projection at theta = pi/2
    CHECK(phase_offset(Position2D{0.0, 1.0}, oracle::kPi / 2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // x-only projection at theta = 0, phi = pi/2
    CHECK(phase_offset(Position2D{1.0, 0.0}, 0.0, oracle::kPi / 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    // mixed case against the formula written out
    Position2D p{0.3, -0.4};
    double th = 0.9, ph = 2.1;
    CHECK(phase_offset(p, th, ph) ==
          doctest::Approx(0.3 * std::cos(th) * std::sin(ph) - 0.4 * std::sin(th)).epsilon(1e-15));
}

TEST_CASE("field response vector basics") {
    double wl = 0.01;
    std::vector<double> th = {0.0, 1.0, 2.0}, ph = {0.5, 1.5, 2.5};

    SUBCASE("origin gives all-ones") {
        auto f = field_response_vector(Position2D{0.0, 0.0}, th, ph, wl);
        for (const auto& e : f) {
            CHECK(e.re == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(e.im == doctest::Approx(0.0).epsilon(1e-15));
        }
    }

    SUBCASE("unit modulus everywhere") {
        std::mt19937_64 rng(7);
        for (int k = 0; k < 50; ++k) {
            auto p = oracle::random_pos(rng, 0.02);
            auto f = field_response_vector(p, th, ph, wl);
            for (const auto& e : f) CHECK(abs2(e) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    SUBCASE("quarter-wavelength offset along a pure-y path gives j") {
        // theta = pi/2 puts the whole projection on y; rho = wl/4 means a
        // phase of pi/2.
        auto f = field_response_vector(Position2D{0.0, wl / 4.0}, {oracle::kPi / 2.0}, {0.0}, wl);
        CHECK(f.size() == 1);
        CHECK(f[0].re == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(f[0].im == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("periodic in the projection with period lambda") {
        auto f0 = field_response_vector(Position2D{0.0, 0.003}, {oracle::kPi / 2.0}, {0.0}, wl);
        auto f1 = field_response_vector(Position2D{0.0, 0.003 + wl}, {oracle::kPi / 2.0}, {0.0}, wl);
        CHECK(f0[0].re == doctest::Approx(f1[0].re).epsilon(1e-9));
        CHECK(f0[0].im == doctest::Approx(f1[0].im).epsilon(1e-9));
    }

    SUBCASE("rejects bad arguments") {
        CHECK_THROWS_AS(field_response_vector(Position2D{0.0, 0.0}, {}, {}, wl),
                        std::invalid_argument);
        CHECK_THROWS_AS(field_response_vector(Position2D{0.0, 0.0}, {0.1}, {0.1, 0.2}, wl),
                        std::invalid_argument);
        CHECK_THROWS_AS(field_response_vector(Position2D{0.0, 0.0}, {0.1}, {0.1}, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("assemblers match the naive-loop oracles") {
    std::mt19937_64 rng(11);
    double wl = 0.01;
    for (int draw = 0; draw < 20; ++draw) {
        auto ps = oracle::random_paths(rng, 3, 4);
        auto t_bs = oracle::random_positions(rng, 4, 0.02);
        auto r_bs = oracle::random_positions(rng, 4, 0.02);
        auto r_dl = oracle::random_pos(rng, 0.02);
        auto t_ul = oracle::random_pos(rng, 0.02);

        auto hd = assemble_dl_channel(t_bs, r_dl, ps, wl);
        auto hd_o = oracle::dl_channel(t_bs, r_dl, ps, wl);
        for (size_t n = 0; n < hd.size(); ++n) {
            CHECK(hd[n].re == doctest::Approx(hd_o[n].real()).epsilon(1e-12));
            CHECK(hd[n].im == doctest::Approx(hd_o[n].imag()).epsilon(1e-12));
        }

        auto hu = assemble_ul_channel(t_ul, r_bs, ps, wl);
        auto hu_o = oracle::ul_channel(t_ul, r_bs, ps, wl);
        for (size_t m = 0; m < hu.size(); ++m) {
            CHECK(hu[m].re == doctest::Approx(hu_o[m].real()).epsilon(1e-12));
            CHECK(hu[m].im == doctest::Approx(hu_o[m].imag()).epsilon(1e-12));
        }

        auto hs = assemble_si_channel(t_bs, r_bs, ps, wl);
        auto hs_o = oracle::si_channel(t_bs, r_bs, ps, wl);
        for (size_t n = 0; n < hs.size(); ++n)
            for (size_t m = 0; m < hs[n].size(); ++m) {
                CHECK(hs[n][m].re == doctest::Approx(hs_o[n][m].real()).epsilon(1e-12));
                CHECK(hs[n][m].im == doctest::Approx(hs_o[n][m].imag()).epsilon(1e-12));
            }

        auto hx = assemble_xlink_channel(t_ul, r_dl, ps, wl);
        auto hx_o = oracle::xlink_channel(t_ul, r_dl, ps, wl);
        CHECK(hx.re == doctest::Approx(hx_o.real()).epsilon(1e-12));
        CHECK(hx.im == doctest::Approx(hx_o.imag()).epsilon(1e-12));
    }
}

TEST_CASE("single-path identity PRM at the origin gives all-ones channels") {
    PathSet ps;
    ps.theta_t = {0.7};
    ps.phi_t = {1.1};
    ps.theta_r = {0.2};
    ps.phi_r = {2.0};
    ps.prm = {{{1.0, 0.0}}};
    std::vector<Position2D> origin4(4, {0.0, 0.0});
    auto hd = assemble_dl_channel(origin4, {0.0, 0.0}, ps, 0.01);
    for (const auto& e : hd) {
        CHECK(e.re == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(e.im == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("channel assembly is linear in the path responses") {
    std::mt19937_64 rng(3);
    double wl = 0.01;
    auto ps = oracle::random_paths(rng, 2, 3);
    auto ps2 = ps;
    for (auto& row : ps2.prm)
        for (auto& e : row) e *= 2.5;
    auto t = oracle::random_positions(rng, 3, 0.02);
    auto r = oracle::random_pos(rng, 0.02);
    auto h1 = assemble_dl_channel(t, r, ps, wl);
    auto h2 = assemble_dl_channel(t, r, ps2, wl);
    for (size_t n = 0; n < h1.size(); ++n) {
        CHECK(h2[n].re == doctest::Approx(2.5 * h1[n].re).epsilon(1e-12));
        CHECK(h2[n].im == doctest::Approx(2.5 * h1[n].im).epsilon(1e-12));
    }
}

TEST_CASE("mirrored positions conjugate the channel when the PRM is real") {
    std::mt19937_64 rng(5);
    double wl = 0.01;
    auto ps = oracle::random_paths(rng, 2, 2);
    for (auto& row : ps.prm)
        for (auto& e : row) e = {e.real(), 0.0};
    auto t_ul = oracle::random_pos(rng, 0.02);
    auto r_bs = oracle::random_positions(rng, 3, 0.02);
    auto h = assemble_ul_channel(t_ul, r_bs, ps, wl);
    Position2D t_m{-t_ul.x, -t_ul.y};
    std::vector<Position2D> r_m;
    for (const auto& p : r_bs) r_m.push_back({-p.x, -p.y});
    auto hm = assemble_ul_channel(t_m, r_m, ps, wl);
    for (size_t m = 0; m < h.size(); ++m) {
        CHECK(hm[m].re == doctest::Approx(h[m].re).epsilon(1e-12));
        CHECK(hm[m].im == doctest::Approx(-h[m].im).epsilon(1e-12));
    }
}

TEST_CASE("instance sampler") {
    SystemConfig cfg;
    cfg.finalize();

    SUBCASE("deterministic in the seed") {
        auto a = sample_instance(cfg, 42);
        auto b = sample_instance(cfg, 42);
        CHECK(a.dl_paths[0].theta_t == b.dl_paths[0].theta_t);
        CHECK(a.si_paths.prm == b.si_paths.prm);
        CHECK(a.ul_placements[0].x == b.ul_placements[0].x);
        auto c = sample_instance(cfg, 43);
        CHECK(a.dl_paths[0].theta_t != c.dl_paths[0].theta_t);
    }

    SUBCASE("shapes and diagonal PRMs") {
        auto inst = sample_instance(cfg, 1);
        REQUIRE(inst.dl_paths.size() == 2);
        REQUIRE(inst.ul_paths.size() == 2);
        REQUIRE(inst.xlink_paths.size() == 2);
        REQUIRE(inst.xlink_paths[0].size() == 2);
        for (const auto& ps : inst.dl_paths) {
            CHECK(ps.lt() == cfg.n_paths);
            CHECK(ps.lr() == cfg.n_paths);
            for (int i = 0; i < ps.lr(); ++i)
                for (int l = 0; l < ps.lt(); ++l)
                    if (i != l) CHECK(ps.prm[i][l] == std::complex<double>(0.0, 0.0));
        }
    }

    SUBCASE("angles in range, placements in the cell") {
        auto inst = sample_instance(cfg, 9);
        for (double a : inst.si_paths.theta_t) {
            CHECK(a >= 0.0);
            CHECK(a <= 2.0 * oracle::kPi);
        }
        for (const auto& p : inst.dl_placements) {
            CHECK(std::abs(p.x) <= cfg.cell_size);
            CHECK(std::abs(p.y) <= cfg.cell_size);
        }
    }

    SUBCASE("PRM entry variance tracks the link budget") {
        // Monte Carlo moment check over many instances: diagonal entries of
        // the DL PRMs are CSCG with per-path variance g0 d^-alpha / L.
        double acc = 0.0;
        double expected = 0.0;
        int count = 0;
        for (std::uint64_t s = 0; s < 2000; ++s) {
            auto inst = sample_instance(cfg, 1000 + s);
            for (int d = 0; d < cfg.n_dl; ++d) {
                for (int l = 0; l < cfg.n_paths; ++l) {
                    acc += std::norm(inst.dl_paths[d].prm[l][l]) /
                           inst.dl_budgets[d].variance_per_path;
                    ++count;
                }
                double dist = std::hypot(inst.dl_placements[d].x, inst.dl_placements[d].y);
                expected = cfg.g0 * std::pow(dist, -cfg.alpha) / cfg.n_paths;
                CHECK(inst.dl_budgets[d].variance_per_path ==
                      doctest::Approx(expected).epsilon(1e-12));
            }
        }
        // normalized second moment must be 1 within 2% (count = 24000)
        CHECK(acc / count == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("rescale_si scales the SI path responses only") {
    SystemConfig cfg;
    cfg.finalize();
    auto inst = sample_instance(cfg, 4);
    auto before = inst;
    double hi = db_to_linear(-30.0);
    rescale_si(inst, cfg.si_gain, hi);
    double scale = std::sqrt(hi / cfg.si_gain);
    for (int i = 0; i < inst.si_paths.lr(); ++i)
        for (int l = 0; l < inst.si_paths.lt(); ++l) {
            CHECK(inst.si_paths.prm[i][l].real() ==
                  doctest::Approx(before.si_paths.prm[i][l].real() * scale).epsilon(1e-12));
        }
    CHECK(inst.dl_paths[0].prm == before.dl_paths[0].prm);
    CHECK(inst.ul_paths[0].prm == before.ul_paths[0].prm);
}
