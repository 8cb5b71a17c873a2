#include <doctest.h>

#include <cmath>

#include "rmtlab/rng.hpp"

using namespace rmtlab;

TEST_CASE("distinct triples give distinct first outputs") {
    Stream a = derive_stream(42, 0, 0);
    Stream b = derive_stream(42, 0, 1);
    Stream c = derive_stream(42, 1, 0);
    const auto x = a.next_u64();
    CHECK(x != b.next_u64());
    CHECK(x != c.next_u64());
}

TEST_CASE("same triple replays the same stream") {
    Stream a = derive_stream(42, 0, 0);
    Stream b = derive_stream(42, 0, 0);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("unit draws stay inside the open interval") {
    Stream s(12345);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.next_unit();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("streams from different trials are uncorrelated") {
    Stream a = derive_stream(42, 0, 0);
    Stream b = derive_stream(42, 1, 0);
    const int n = 100000;
    double sa = 0.0, sb = 0.0, sab = 0.0, saa = 0.0, sbb = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a.next_gaussian();
        const double y = b.next_gaussian();
        sa += x;
        sb += y;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    const double var_a = saa / n - (sa / n) * (sa / n);
    const double var_b = sbb / n - (sb / n) * (sb / n);
    const double r = cov / std::sqrt(var_a * var_b);
    CHECK(std::fabs(r) < 0.01);
}

TEST_CASE("gaussian draws have the right first moments") {
    Stream s = derive_stream(7, 0, 0);
    const int n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = s.next_gaussian();
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::fabs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.005));
}
