#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nuc/partition.hpp"
#include "oracles.hpp"

using namespace nuc;

namespace {

GridConfig make_config(PartitionScheme scheme, int n_r = 120, double r_max = 50.0) {
  GridConfig config;
  config.scheme = std::move(scheme);
  config.n_r = n_r;
  config.r_max = r_max;
  return config;
}

std::vector<double> edges_vector(const RadialBoundaries& b) {
  return {b.edges().data(), b.edges().data() + b.edges().size()};
}

}  // namespace

TEST_CASE("radial intervals follow each progression") {
  const Eigen::ArrayXd api = radial_intervals(Api{0.05, 0.0062}, 120, 50.0);
  CHECK(api[0] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(api[1] == doctest::Approx(0.0562).epsilon(1e-15));

  const Eigen::ArrayXd gpi = radial_intervals(Gpi{0.05, 1.0541}, 120, 50.0);
  CHECK(gpi[2] == doctest::Approx(0.05 * 1.0541 * 1.0541).epsilon(1e-12));
  CHECK(gpi[2] == doctest::Approx(0.0555563405).epsilon(1e-9));

  const Eigen::ArrayXd uniform = radial_intervals(Uniform{}, 120, 50.0);
  CHECK(uniform[0] == doctest::Approx(50.0 / 120).epsilon(1e-15));
  CHECK((uniform == uniform[0]).all());

  // 8:3:1 split of 120 bins over [0,15,30,50]
  const Eigen::ArrayXd pw =
      radial_intervals(Piecewise{{0.0, 15.0, 30.0, 50.0}, {80, 30, 10}}, 120, 50.0);
  CHECK(pw[0] == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(pw[79] == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(pw[80] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pw[109] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pw[110] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pw[119] == doctest::Approx(2.0).epsilon(1e-15));

  const Eigen::ArrayXd inc = radial_intervals(IncreasingD{0.05, 0.005, 0.00003}, 120, 50.0);
  CHECK(inc[0] == doctest::Approx(0.05).epsilon(1e-15));
  // consecutive differences grow by d_prime
  CHECK(inc[2] - inc[1] - (inc[1] - inc[0]) == doctest::Approx(0.00003).epsilon(1e-9));
}

TEST_CASE("scheme parameters are validated") {
  CHECK_THROWS_AS(radial_intervals(Api{0.0, 0.0062}, 120, 50.0), config_error);
  CHECK_THROWS_AS(radial_intervals(Api{-0.05, 0.0062}, 120, 50.0), config_error);
  CHECK_THROWS_AS(radial_intervals(Api{0.05, -0.0001}, 120, 50.0), config_error);
  CHECK_THROWS_AS(radial_intervals(Gpi{0.05, 1.0}, 120, 50.0), config_error);
  CHECK_THROWS_AS(radial_intervals(Gpi{0.05, 0.9}, 120, 50.0), config_error);
  CHECK_THROWS_AS(radial_intervals(IncreasingD{0.05, 0.005, -1e-9}, 120, 50.0), config_error);
  // counts must sum to n_r
  CHECK_THROWS_AS(radial_intervals(Piecewise{{0.0, 15.0, 30.0, 50.0}, {80, 30, 9}}, 120, 50.0),
                  config_error);
  // bounds must increase from 0
  CHECK_THROWS_AS(radial_intervals(Piecewise{{0.0, 30.0, 15.0, 50.0}, {80, 30, 10}}, 120, 50.0),
                  config_error);
  CHECK_THROWS_AS(radial_intervals(Piecewise{{1.0, 15.0, 30.0, 50.0}, {80, 30, 10}}, 120, 50.0),
                  config_error);
}

TEST_CASE("monotonicity of growing schemes") {
  const struct {
    PartitionScheme scheme;
  } growing[] = {{Api{0.05, 0.0062}}, {Gpi{0.05, 1.0541}}, {IncreasingD{0.05, 0.0052, 2.5e-5}}};
  for (const auto& [scheme] : growing) {
    const Eigen::ArrayXd iv = radial_intervals(scheme, 240, 50.0);
    for (int i = 0; i + 1 < 240; ++i) CHECK(iv[i] < iv[i + 1]);
  }
  // d = 0 degenerates to a constant progression
  const Eigen::ArrayXd flat = radial_intervals(Api{0.05, 0.0}, 64, 50.0);
  CHECK((flat == 0.05).all());
}

TEST_CASE("api boundaries cover the published extent") {
  const RadialBoundaries b = build_boundaries(make_config(Api{0.05, 0.0062}));
  CHECK(b.bin_count() == 120);
  CHECK(b.edge(0) == 0.0);
  // arithmetic series: 120*0.05 + 0.0062*120*119/2
  CHECK(std::abs(b.last_edge() - 50.268) < 1e-9);
}

TEST_CASE("uniform boundaries end exactly at r_max") {
  const RadialBoundaries b = build_boundaries(make_config(Uniform{}));
  CHECK(b.last_edge() == 50.0);
  CHECK(b.edge(60) == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("gpi with published parameters passes 50 m at bin 77") {
  const RadialBoundaries b = build_boundaries(make_config(Gpi{0.05, 1.0541}));
  // oracle: scan the cumulative sums
  int first = -1;
  for (int i = 0; i <= 120; ++i) {
    if (b.edge(i) >= 50.0) {
      first = i;
      break;
    }
  }
  CHECK(first == 77);
  CHECK(b.edge(76) < 50.0);
  // far bins exist but the scene never reaches them
  CHECK(b.last_edge() > 500.0);
}

TEST_CASE("boundary differences reproduce the interval sequence") {
  const PartitionScheme schemes[] = {Uniform{}, Api{0.05, 0.0062}, Gpi{0.05, 1.0541},
                                     Piecewise{{0.0, 15.0, 30.0, 50.0}, {80, 30, 10}},
                                     IncreasingD{0.05, 0.0052, 2.5e-5}};
  for (const auto& scheme : schemes) {
    const GridConfig config = make_config(scheme);
    const RadialBoundaries b = build_boundaries(config);
    const Eigen::ArrayXd iv = radial_intervals(scheme, config.n_r, config.r_max);
    for (int i = 0; i < config.n_r; ++i) {
      CHECK(b.interval(i) == doctest::Approx(iv[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("radial_index agrees with the linear-scan oracle") {
  const GridConfig config = make_config(Api{0.05, 0.0062});
  const RadialBoundaries b = build_boundaries(config);
  const auto edges = edges_vector(b);

  CHECK(radial_index(b, 0.0, OutOfRangePolicy::ClampToEdge) == 0);
  CHECK(radial_index(b, 25.0, OutOfRangePolicy::ClampToEdge) == 82);
  CHECK(*nuctest::scan_radial_index(edges, 25.0, OutOfRangePolicy::ClampToEdge) == 82);
  CHECK(radial_index(b, 60.0, OutOfRangePolicy::ClampToEdge) == 119);
  CHECK_FALSE(radial_index(b, 60.0, OutOfRangePolicy::Drop).has_value());
  CHECK_FALSE(radial_index(b, b.last_edge(), OutOfRangePolicy::Drop).has_value());
  CHECK_THROWS_AS(radial_index(b, -0.1, OutOfRangePolicy::ClampToEdge), std::invalid_argument);
}

TEST_CASE("closed-form api lookup matches binary search and the scan oracle") {
  const GridConfig config = make_config(Api{0.05, 0.0062});
  const RadialBoundaries b = build_boundaries(config);
  const ApiRadialLookup fast(Api{0.05, 0.0062}, b);
  const auto edges = edges_vector(b);

  std::mt19937_64 rng(12345);
  const auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 100000; ++trial) {
    const double r = unit() * b.last_edge();
    const auto a = fast(r, OutOfRangePolicy::ClampToEdge);
    const auto c = radial_index(b, r, OutOfRangePolicy::ClampToEdge);
    const auto o = nuctest::scan_radial_index(edges, r, OutOfRangePolicy::ClampToEdge);
    REQUIRE(a == c);
    REQUIRE(a == o);
    // round trip containment
    REQUIRE(b.edge(*a) <= r);
    REQUIRE(r < b.edge(*a + 1));
  }
  // every exact edge value and its floating-point neighbors, both policies
  for (int i = 0; i <= b.bin_count(); ++i) {
    for (const double r : {b.edge(i), std::nextafter(b.edge(i), 0.0),
                           std::nextafter(b.edge(i), 1e9)}) {
      if (r < 0.0) continue;
      for (const auto policy : {OutOfRangePolicy::ClampToEdge, OutOfRangePolicy::Drop}) {
        CHECK(fast(r, policy) == radial_index(b, r, policy));
        CHECK(fast(r, policy) == nuctest::scan_radial_index(edges, r, policy));
      }
    }
  }
  // degenerate d = 0
  const GridConfig flat_config = make_config(Api{0.4, 0.0});
  const RadialBoundaries fb = build_boundaries(flat_config);
  const ApiRadialLookup flat(Api{0.4, 0.0}, fb);
  for (int trial = 0; trial < 1000; ++trial) {
    const double r = unit() * fb.last_edge();
    CHECK(flat(r, OutOfRangePolicy::Drop) == radial_index(fb, r, OutOfRangePolicy::Drop));
  }
}

TEST_CASE("uniform cell volumes obey the 2i+1 law") {
  const GridConfig config = make_config(Uniform{}, 480);
  const RadialBoundaries b = build_boundaries(config);
  const double v0 = cell_volume(b, 0, 0, 0, config);
  for (int i = 0; i < 480; ++i) {
    const double ratio = cell_volume(b, i, 0, 0, config) / v0;
    CHECK(std::abs(ratio - (2.0 * i + 1.0)) / (2.0 * i + 1.0) <= 1e-12);
  }
  CHECK(cell_volume(b, 1, 0, 0, config) / v0 == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("api first cell volume is (h*b/2)*a0^2") {
  const GridConfig config = make_config(Api{0.05, 0.0062});
  const RadialBoundaries b = build_boundaries(config);
  const double expected =
      0.5 * config.height_bin_width() * config.angular_bin_width() * 0.05 * 0.05;
  CHECK(cell_volume(b, 0, 0, 0, config) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("api volume doubling ratio approaches 8 from below") {
  const GridConfig config = make_config(Api{0.05, 0.0062}, 480);
  const RadialBoundaries b = build_boundaries(config);
  const auto vol = [&](int i) { return cell_volume(b, i, 0, 0, config); };
  double prev_gap = 8.0;
  for (const int i : {20, 40, 80}) {
    const double ratio = vol(2 * i) / vol(i);
    const double gap = std::abs(ratio - 8.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(std::abs(vol(160) / vol(80) - 8.0) / 8.0 <= 0.15);
}

TEST_CASE("volumes are invariant in j and k and partition the cylinder") {
  const GridConfig config = make_config(Api{0.05, 0.0062});
  const RadialBoundaries b = build_boundaries(config);
  CHECK(cell_volume(b, 40, 0, 0, config) == cell_volume(b, 40, 359, 31, config));
  CHECK(cell_volume(b, 7, 12, 3, config) == cell_volume(b, 7, 200, 30, config));
  CHECK_THROWS_AS(cell_volume(b, 120, 0, 0, config), std::out_of_range);
  CHECK_THROWS_AS(cell_volume(b, 0, 360, 0, config), std::out_of_range);
  CHECK_THROWS_AS(cell_volume(b, 0, 0, 32, config), std::out_of_range);

  double total = 0.0;
  for (int i = 0; i < config.n_r; ++i) total += cell_volume(b, i, 0, 0, config);
  const double expected = 0.5 * config.height_bin_width() * config.angular_bin_width() *
                          b.last_edge() * b.last_edge();
  CHECK(total == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("receptive length sums three consecutive intervals") {
  const GridConfig uniform = make_config(Uniform{});
  const RadialBoundaries ub = build_boundaries(uniform);
  CHECK(receptive_length(ub, 60) == doctest::Approx(1.25).epsilon(1e-12));

  const GridConfig api = make_config(Api{0.05, 0.0062});
  const RadialBoundaries ab = build_boundaries(api);
  CHECK(receptive_length(ab, 60) == doctest::Approx(1.266).epsilon(1e-12));
  // edges keep only the neighbors that exist
  CHECK(receptive_length(ab, 0) == doctest::Approx(0.05 + 0.0562).epsilon(1e-12));
  CHECK(receptive_length(ab, 119) ==
        doctest::Approx(ab.edge(120) - ab.edge(118)).epsilon(1e-15));
  CHECK_THROWS_AS(receptive_length(ab, -1), std::out_of_range);
  CHECK_THROWS_AS(receptive_length(ab, 120), std::out_of_range);
}

TEST_CASE("multiscale intervals collapse to the base progression at s=0") {
  const Api api{0.05, 0.0062};
  CHECK(multiscale_interval(api, 0, 5) == doctest::Approx(0.081).epsilon(1e-15));
  for (int i = 0; i < 100; ++i) {
    CHECK(multiscale_interval(api, 0, i) == doctest::Approx(0.05 + i * 0.0062).epsilon(1e-15));
  }
}

TEST_CASE("multiscale intervals merge pairwise") {
  const Api api{0.05, 0.0062};
  CHECK(multiscale_interval(api, 1, 0) == doctest::Approx(0.1062).epsilon(1e-13));
  CHECK(multiscale_interval(api, 1, 1) == doctest::Approx(0.131).epsilon(1e-13));
  // each coarse interval is the sum of its two children
  for (int s = 1; s <= 3; ++s) {
    for (int i = 0; i < 60; ++i) {
      const double merged =
          multiscale_interval(api, s - 1, 2 * i) + multiscale_interval(api, s - 1, 2 * i + 1);
      CHECK(multiscale_interval(api, s, i) == doctest::Approx(merged).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(multiscale_interval(PartitionScheme{Gpi{}}, 1, 0), config_error);
  CHECK_THROWS_AS(multiscale_interval(PartitionScheme{Uniform{}}, 1, 0), config_error);
}

TEST_CASE("multiscale boundaries are exact subsamples") {
  const RadialBoundaries base = build_boundaries(make_config(Api{0.05, 0.0062}));
  for (int s = 1; s <= 3; ++s) {
    const RadialBoundaries coarse = multiscale_boundaries(base, s);
    CHECK(coarse.bin_count() == 120 >> s);
    for (int i = 0; i <= coarse.bin_count(); ++i) {
      CHECK(coarse.edge(i) == base.edge(i << s));  // bitwise equal
    }
    // and the subsampled intervals match the closed form
    for (int i = 0; i < coarse.bin_count(); ++i) {
      CHECK(coarse.interval(i) ==
            doctest::Approx(multiscale_interval(Api{0.05, 0.0062}, s, i)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(multiscale_boundaries(build_boundaries(make_config(Api{}, 121)), 1),
                  config_error);
}

TEST_CASE("grid config invariants") {
  GridConfig config;
  config.validate();

  GridConfig bad = config;
  bad.n_phi = 0;
  CHECK_THROWS_AS(bad.validate(), config_error);
  bad = config;
  bad.z_min = 2.0;
  bad.z_max = -4.0;
  CHECK_THROWS_AS(bad.validate(), config_error);
  bad = config;
  bad.r_max = 0.0;
  CHECK_THROWS_AS(bad.validate(), config_error);
  bad = config;
  bad.scales = 2;
  bad.n_phi = 361;
  CHECK_THROWS_AS(bad.validate(), config_error);
  bad.n_phi = 360;
  bad.validate();  // 120, 360, 32 all even
}
