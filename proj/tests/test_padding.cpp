#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "spadfit/histogram.hpp"
#include "spadfit/numeric.hpp"
#include "spadfit/padding.hpp"

using namespace spadfit;

namespace {

Histogram make_hist(std::vector<double> densities, double t_r = 10.0) {
  Histogram hist;
  hist.cycle_length = t_r;
  hist.bin_width = t_r / static_cast<double>(densities.size());
  hist.densities = std::move(densities);
  hist.sample_count = 1000;
  return hist;
}

}  // namespace

TEST_CASE("select_offset") {
  SUBCASE("flat histogram ties to offset zero") {
    const Histogram hist = make_hist(std::vector<double>(200, 0.1));
    CHECK(select_offset(hist).offset == 0.0);
  }

  SUBCASE("unique smoothed minimum wins") {
    std::vector<double> densities(200, 0.2);
    // V-shaped dip with its unique bottom at bin 120
    for (int i = 110; i <= 130; ++i) {
      densities[i] = 0.2 - 0.015 * (10 - std::abs(i - 120));
    }
    const Histogram hist = make_hist(std::move(densities));
    CHECK(select_offset(hist).offset == doctest::Approx(120 * 0.05));
  }

  SUBCASE("spike at bin zero pushes the cut away") {
    std::vector<double> densities(200, 0.05);
    densities[0] = 5.0;
    for (int i = 95; i <= 105; ++i) densities[i] = 0.002;
    const Histogram hist = make_hist(std::move(densities));
    const double offset = select_offset(hist).offset;
    CHECK(offset > 4.0);
    CHECK(offset < 6.0);
  }
}

TEST_CASE("wrap_shift") {
  const PaddingPlan plan{3.0, 10.0};

  SUBCASE("zero offset is the identity") {
    const TimestampSet data{{0.5, 4.0, 9.0}, Frame::relative, 10.0};
    const TimestampSet out = wrap_shift(data, PaddingPlan{0.0, 10.0});
    CHECK(out.values == data.values);
  }

  SUBCASE("single value wraps by modular arithmetic") {
    const TimestampSet data{{1.0}, Frame::relative, 10.0};
    CHECK(wrap_shift(data, plan).values == std::vector<double>{8.0});
  }

  SUBCASE("shift then inverse shift restores the multiset") {
    oracle::TestRng rng(13);
    TimestampSet data{{}, Frame::relative, 10.0};
    for (int i = 0; i < 300; ++i) data.values.push_back(rng.uniform(0.0, 10.0));
    std::sort(data.values.begin(), data.values.end());
    const TimestampSet shifted = wrap_shift(data, plan);
    const TimestampSet back = wrap_shift(shifted, PaddingPlan{7.0, 10.0});
    REQUIRE(back.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      CHECK(back.values[i] == doctest::Approx(data.values[i]).epsilon(1e-12));
    }
  }

  SUBCASE("length and range preserved") {
    const TimestampSet data{{0.0, 2.9999, 3.0, 9.9999}, Frame::relative, 10.0};
    const TimestampSet out = wrap_shift(data, plan);
    REQUIRE(out.size() == data.size());
    for (double y : out.values) {
      REQUIRE(y >= 0.0);
      REQUIRE(y < 10.0);
    }
    CHECK(std::is_sorted(out.values.begin(), out.values.end()));
  }
}

TEST_CASE("unwrap_pdf") {
  GummParams params;
  params.cycle_length = 10.0;
  params.uniform_weight = 0.3;
  params.components = {{0.7, 6.0, 0.4}};

  SUBCASE("zero offset equals the plain density") {
    const PaddingPlan plan{0.0, 10.0};
    for (double y = 0.05; y < 10.0; y += 0.5) {
      CHECK(unwrap_pdf(params, plan, y) == doctest::Approx(pdf(params, y)));
    }
  }

  SUBCASE("uniform-only density is shift invariant") {
    GummParams uniform;
    uniform.cycle_length = 10.0;
    uniform.uniform_weight = 1.0;
    for (double offset : {0.0, 1.7, 5.0, 9.95}) {
      const PaddingPlan plan{offset, 10.0};
      CHECK(unwrap_pdf(uniform, plan, 4.2) == doctest::Approx(0.1));
    }
  }

  SUBCASE("fitted peak appears at the unwrapped position") {
    const PaddingPlan plan{3.5, 10.0};
    // params has its peak at 6.0 in the padded frame; in the original frame
    // the maximum must sit at mod(6.0 + 3.5, 10) = 9.5.
    double best_y = 0.0, best_value = -1.0;
    for (double y = 0.0; y < 10.0; y += 0.001) {
      const double v = unwrap_pdf(params, plan, y);
      if (v > best_value) {
        best_value = v;
        best_y = y;
      }
    }
    CHECK(best_y == doctest::Approx(9.5).epsilon(1e-3));
  }

  SUBCASE("integral over one period is offset invariant") {
    for (double offset : {0.0, 1.3, 4.05, 8.6}) {
      const PaddingPlan plan{offset, 10.0};
      const double seam = std::fmod(10.0 - offset, 10.0);
      auto f = [&](double y) { return unwrap_pdf(params, plan, y); };
      // integrate piecewise around the seam where the density jumps
      const double integral = integrate_adaptive(f, 0.0, seam, 1e-12) +
                              integrate_adaptive(f, seam, 10.0, 1e-12);
      const double reference =
          integrate_adaptive([&](double y) { return pdf(params, y); }, 0.0,
                             10.0, 1e-12);
      CHECK(std::fabs(integral - reference) < 1e-9);
    }
  }
}
