#include <doctest.h>

#include <cmath>
#include <vector>

#include "endure/cost_model.hpp"
#include "endure/errors.hpp"
#include "endure/rng.hpp"
#include "endure/types.hpp"
#include "fixtures.hpp"

using namespace endure;

TEST_CASE("policy expansion patterns") {
    CHECK(expand_policy(Policy::tiering, 5.0, 3) == std::vector<double>{4.0, 4.0, 4.0});
    CHECK(expand_policy(Policy::lazy_leveling, 5.0, 3) == std::vector<double>{4.0, 4.0, 1.0});
    CHECK(expand_policy(Policy::leveling, 2.0, 1) == std::vector<double>{1.0});
    CHECK(expand_policy(Policy::one_leveling, 6.0, 4) ==
          std::vector<double>{5.0, 1.0, 1.0, 1.0});
    CHECK(expand_policy(Policy::fluid, 6.0, 3, 3.0, 2.0) ==
          std::vector<double>{3.0, 3.0, 2.0});

    CHECK_THROWS_AS(expand_policy(Policy::klsm, 5.0, 3), ConfigError);
    CHECK_THROWS_AS(expand_policy(Policy::fluid, 5.0, 3, 0.5, 1.0), ConfigError);
    CHECK_THROWS_AS(expand_policy(Policy::leveling, 5.0, 0), ConfigError);
}

TEST_CASE("capacity refitting truncates or repeats the deepest value") {
    CHECK(expand_capacities({1.0, 2.0, 3.0}, 2) == std::vector<double>{1.0, 2.0});
    CHECK(expand_capacities({1.0, 2.0}, 4) == std::vector<double>{1.0, 2.0, 2.0, 2.0});
    CHECK_THROWS_AS(expand_capacities({}, 3), ConfigError);
}

TEST_CASE("policy names round-trip") {
    for (Policy p : {Policy::leveling, Policy::tiering, Policy::lazy_leveling,
                     Policy::one_leveling, Policy::fluid, Policy::klsm})
        CHECK(policy_from_string(to_string(p)) == p);
    CHECK(policy_from_string("lazy-leveling") == Policy::lazy_leveling);
    CHECK(policy_from_string("1-leveling") == Policy::one_leveling);
    CHECK(policy_from_string("k-lsm") == Policy::klsm);
    CHECK_THROWS_AS(policy_from_string("compacting"), ConfigError);
}

TEST_CASE("classification inverts expansion") {
    SystemParams sys = fixtures::desk_sys();
    const double T = 6.0;
    for (Policy p : {Policy::leveling, Policy::tiering, Policy::lazy_leveling,
                     Policy::one_leveling}) {
        LsmDesign d = make_design(p, T, 4e6, sys);
        REQUIRE(d.K.size() >= 3);  // patterns are ambiguous at trivial depths
        CHECK(classify_design(d) == p);
    }
    LsmDesign fl = make_design(Policy::fluid, T, 4e6, sys, 3.0, 2.0);
    CHECK(classify_design(fl) == Policy::fluid);
    LsmDesign kl = make_design(Policy::leveling, T, 4e6, sys);
    kl.K[1] = 2.0;
    kl.K[0] = 4.0;
    CHECK(classify_design(kl) == Policy::klsm);
}

TEST_CASE("named layouts cost exactly like their explicit capacity vectors") {
    SplitMix64 rng(0xca9ab1e5ULL);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        fixtures::RandomInput in = fixtures::random_input(rng);
        const double T = in.d.T;
        const int L = level_count(T, in.sys, in.sys.m - in.d.m_filt);
        const double full = T - 1.0;
        const double k_u = 1.0 + rng.next_double() * (T - 2.0);
        const double k_l = 1.0 + rng.next_double() * (T - 2.0);

        struct Case {
            Policy p;
            std::vector<double> k;
        };
        std::vector<Case> cases = {
            {Policy::leveling, std::vector<double>(std::size_t(L), 1.0)},
            {Policy::tiering, std::vector<double>(std::size_t(L), full)},
            {Policy::lazy_leveling, std::vector<double>(std::size_t(L), full)},
            {Policy::one_leveling, std::vector<double>(std::size_t(L), 1.0)},
            {Policy::fluid, std::vector<double>(std::size_t(L), k_u)},
        };
        cases[2].k.back() = 1.0;
        cases[3].k.front() = full;
        cases[4].k.back() = k_l;

        for (const Case& c : cases) {
            LsmDesign named = (c.p == Policy::fluid)
                                  ? make_design(c.p, T, in.d.m_filt, in.sys, k_u, k_l)
                                  : make_design(c.p, T, in.d.m_filt, in.sys);
            LsmDesign raw{T, in.d.m_filt, c.k};
            CostVector a = cost_vector(named, in.sys);
            CostVector b = cost_vector(raw, in.sys);
            for (std::size_t i = 0; i < 4; ++i) {
                CAPTURE(trial);
                CAPTURE(to_string(c.p));
                CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
            }
            ++checked;
        }
    }
    CHECK(checked == 600);
}

TEST_CASE("klsm capacity choice changes nothing when it matches a named policy") {
    SystemParams sys = fixtures::desk_sys();
    const Workload w{0.3, 0.3, 0.2, 0.2};
    LsmDesign tier = make_design(Policy::tiering, 5.0, 6e6, sys);
    LsmDesign same{5.0, 6e6, std::vector<double>(tier.K.size(), 4.0)};
    CHECK(total_cost(w, tier, sys) == doctest::Approx(total_cost(w, same, sys)).epsilon(1e-15));
}
