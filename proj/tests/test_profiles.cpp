#include <doctest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rmtlab/profiles.hpp"

using namespace rmtlab;

TEST_CASE("full profile basics") {
    const auto p100 = full_wigner_profile(100);
    CHECK(p100.sigma_star() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p100.includes_diagonal());

    const auto p1 = full_wigner_profile(1);
    CHECK(p1.entry(0, 0) == 1.0);
    CHECK(validate(p1).passes());

    const auto p4 = full_wigner_profile(4);
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += p4.entry(i, j) * p4.entry(i, j);
        CHECK(row == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(full_wigner_profile(0), DimensionMismatch);
}

TEST_CASE("clique union profile") {
    const auto p = clique_union_profile(10, 4);
    CHECK(p.sigma_star() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.block_count() == 2);
    CHECK(p.block_size() == 5);
    CHECK(!p.includes_diagonal());
    CHECK(p.entry(0, 0) == 0.0);
    CHECK(p.entry(0, 4) == doctest::Approx(0.5));
    CHECK(p.entry(0, 5) == 0.0);  // across blocks
    CHECK(validate(p).passes());

    const auto t = clique_union_profile(6, 2);
    CHECK(t.sigma_star() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(validate(t).passes());

    CHECK_THROWS_AS(clique_union_profile(10, 3), DimensionMismatch);
    CHECK_THROWS_AS(clique_union_profile(6, 1), InvalidDegree);
}

TEST_CASE("band profile") {
    const auto p = band_profile(8, 2);
    for (int i = 0; i < 8; ++i) {
        int nonzero = 0;
        double row = 0.0;
        for (int j = 0; j < 8; ++j) {
            const double s = p.entry(i, j);
            if (s != 0.0) {
                ++nonzero;
                CHECK(s == doctest::Approx(0.5));
            }
            row += s * s;
        }
        CHECK(nonzero == 4);
        CHECK(row == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(validate(p).passes());

    const auto cycle = band_profile(5, 1);
    CHECK(cycle.sigma_star() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(validate(cycle).passes());

    CHECK_THROWS_AS(band_profile(4, 2), InvalidBandwidth);
    CHECK_THROWS_AS(band_profile(8, 0), InvalidBandwidth);
}

TEST_CASE("random regular profile is d-regular and doubly stochastic") {
    const auto p = random_regular_profile(8, 3, 7);
    for (int i = 0; i < 8; ++i) {
        double row = 0.0;
        int deg = 0;
        for (int j = 0; j < 8; ++j) {
            row += p.entry(i, j) * p.entry(i, j);
            if (p.entry(i, j) != 0.0) ++deg;
        }
        CHECK(deg == 3);
        CHECK(row == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(p.entry(i, i) == 0.0);
    }
    CHECK(validate(p).passes());
    CHECK_THROWS_AS(random_regular_profile(5, 3, 1), InvalidDegree);  // n*d odd
    CHECK_THROWS_AS(random_regular_profile(4, 4, 1), InvalidDegree);  // d >= n
}

TEST_CASE("random regular graphs are reproducible bit for bit") {
    const auto a = random_regular_graph(64, 3, 123);
    const auto b = random_regular_graph(64, 3, 123);
    CHECK(a.adjacency == b.adjacency);
    const auto c = random_regular_graph(64, 3, 124);
    CHECK(a.adjacency != c.adjacency);
}

TEST_CASE("pairing model succeeds within the retry cap for d=3") {
    // simplicity probability per attempt is about exp(-(d^2-1)/4) = exp(-2),
    // so 1000 restarts fail with probability (1-e^-2)^1000, i.e. never
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        try {
            random_regular_profile(1000, 3, seed);
            ++successes;
        } catch (const GenerationFailure&) {
        }
    }
    CHECK(successes >= 99);
}

TEST_CASE("every constructor output validates") {
    CHECK(validate(full_wigner_profile(50)).passes());
    CHECK(validate(full_wigner_profile(50)).max_row_sum_deviation <= 1e-15);
    CHECK(validate(full_wigner_profile(4)).max_row_sum_deviation == 0.0);  // binary-exact sigma
    CHECK(validate(clique_union_profile(12, 3)).passes());
    CHECK(validate(band_profile(11, 3)).passes());
    CHECK(validate(random_regular_profile(20, 4, 9)).passes());
}

TEST_CASE("validate flags a perturbed entry") {
    const int n = 50;
    const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> entries(static_cast<std::size_t>(n) * n, sigma);
    entries[2 * n + 3] += 1e-6;
    entries[3 * n + 2] += 1e-6;
    const auto p = VarianceProfile::custom(n, entries, true);
    const auto report = validate(p);
    CHECK(!report.passes());
    // row sum of squares moves by 2e-6 sigma + 1e-12
    const double expected = 2e-6 * sigma + 1e-12;
    CHECK(report.max_row_sum_deviation == doctest::Approx(expected).epsilon(1e-6));
    CHECK(report.max_asymmetry == 0.0);
}

TEST_CASE("validate flags asymmetry and negativity") {
    std::vector<double> entries{0.0, 1.0, 0.9, 0.0};
    const auto p = VarianceProfile::custom(2, entries, false);
    CHECK(validate(p).max_asymmetry == doctest::Approx(0.1));
    std::vector<double> neg{0.0, -1.0, -1.0, 0.0};
    CHECK(validate(VarianceProfile::custom(2, neg, false)).min_entry == -1.0);
}

TEST_CASE("json serialization carries the declared fields") {
    const auto j = clique_union_profile(10, 4).to_json();
    CHECK(j["n"] == 10);
    CHECK(j["kind"] == "clique_union");
    CHECK(j["d"] == 4);
    CHECK(j["includes_diagonal"] == false);
    const auto jr = random_regular_profile(8, 3, 7).to_json();
    CHECK(jr["seed"] == 7);

    std::ostringstream os;
    full_wigner_profile(2).write_entries_csv(os);
    CHECK(os.str() == "0.70710678118654746,0.70710678118654746\n"
                      "0.70710678118654746,0.70710678118654746\n");
}

TEST_CASE("row support iteration matches entries") {
    for (const auto& p : {clique_union_profile(12, 3), band_profile(9, 2),
                          random_regular_profile(12, 4, 3), full_wigner_profile(6)}) {
        for (int i = 0; i < p.n(); ++i) {
            const auto support = p.row_support_upper(i);
            std::size_t idx = 0;
            for (int j = i; j < p.n(); ++j) {
                const bool live = p.entry(i, j) != 0.0;
                const bool listed = idx < support.size() && support[idx] == j;
                CHECK(live == listed);
                if (listed) ++idx;
            }
            CHECK(idx == support.size());
        }
    }
}
