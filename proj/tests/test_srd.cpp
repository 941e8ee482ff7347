#include "nsc/error.hpp"
#include "nsc/srd.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace nsc;
using doctest::Approx;

namespace {

std::vector<int> to_vec(const Eigen::VectorXi &v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("golden standard") {
    PerformanceMatrix m = testing::cancer_errors_matrix();
    CHECK(golden_standard(m, GoldStrategy::row_min)(0) == 0.0);
    CHECK(golden_standard(m, GoldStrategy::row_max)(0) == 2.7);

    PerformanceMatrix pair;
    pair.values.resize(2, 2);
    pair.values << 2, 4, 1, 1;
    CHECK(golden_standard(pair, GoldStrategy::row_mean)(0) == 3.0);

    PerformanceMatrix single;
    single.values.resize(3, 1);
    single.values << 0.3, 0.1, 0.2;
    for (const auto g : {GoldStrategy::row_min, GoldStrategy::row_max, GoldStrategy::row_mean}) {
        CHECK(golden_standard(single, g) == single.values.col(0));
    }
    CHECK(parse_gold_strategy("MEAN") == GoldStrategy::row_mean);
    CHECK_THROWS_AS((void)parse_gold_strategy("median"), ArgumentError);
}

TEST_CASE("rank vectors") {
    Eigen::VectorXd v(3);
    v << 0.5, 0.1, 0.9;
    CHECK(to_vec(rank_vector(v)) == std::vector<int>{2, 1, 3});
    Eigen::VectorXd tied(3);
    tied << 1, 1, 2;
    CHECK(to_vec(rank_vector(tied)) == std::vector<int>{1, 2, 3});
    CHECK(has_ties(tied));
    CHECK_FALSE(has_ties(v));
    const PerformanceMatrix m = testing::cancer_errors_matrix();
    CHECK(to_vec(rank_vector(m.values.col(1))) == std::vector<int>{1, 2, 3, 6, 4, 5, 7, 8, 9, 10});

    std::mt19937_64 rng(6);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> x(static_cast<std::size_t>(2 + rng() % 12));
        for (double &e : x) {
            e = std::round(normal(rng) * 3.0);
        }
        const Eigen::Map<const Eigen::VectorXd> mapped(x.data(), static_cast<Index>(x.size()));
        REQUIRE(to_vec(rank_vector(mapped)) == oracle::ranks(x));
    }
}

TEST_CASE("table of mean test errors") {
    const PerformanceMatrix m = testing::cancer_errors_matrix();
    const SrdResult res = srd(m, GoldStrategy::row_min);
    CHECK(res.max_srd == 50);
    CHECK(to_vec(res.srd_raw) == std::vector<int>{12, 4, 8});
    CHECK(res.srd_scaled(0) == Approx(24.0));
    CHECK(res.srd_scaled(1) == Approx(8.0));
    CHECK(res.srd_scaled(2) == Approx(16.0));
    CHECK(res.null.mode == NullMode::exact);
    for (Index j = 0; j < 3; ++j) {
        CHECK(res.significant(j));
    }
    CHECK(res.warnings.empty());

    const std::vector<std::vector<int>> expected_ranks{
        {2, 6, 1, 3, 4, 5, 8, 7, 9, 10}, {1, 2, 3, 6, 4, 5, 7, 8, 9, 10}, {2, 1, 3, 7, 4, 5, 6, 8, 9, 10}};
    CHECK(to_vec(res.gold_rank) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    for (Index j = 0; j < 3; ++j) {
        CHECK(to_vec(res.method_ranks.col(j)) == expected_ranks[static_cast<std::size_t>(j)]);
    }

    std::ostringstream details;
    write_srd_details(res, m, details);
    const std::string text = details.str();
    CHECK(text.find("Leukemia1,3,4,3,3,1,11.5,6,2,11.79,7,3") != std::string::npos);
    CHECK(text.find("sum,,,,,12,,,4,,,8") != std::string::npos);
}

TEST_CASE("srd basics") {
    SUBCASE("columns ranked like the gold score zero") {
        PerformanceMatrix m;
        m.values.resize(5, 2);
        m.values << 1, 2, 2, 3, 3, 4, 4, 5, 5, 6;
        const SrdResult res = srd(m, GoldStrategy::row_min);
        CHECK(res.srd_raw(0) == 0);
        CHECK(res.srd_raw(1) == 0);
        CHECK(res.max_srd == 12);
    }
    SUBCASE("strictly monotone maps leave SRD unchanged") {
        std::mt19937_64 rng(14);
        std::uniform_real_distribution<double> unit(0.0, 10.0);
        for (int trial = 0; trial < 200; ++trial) {
            PerformanceMatrix m;
            m.values.resize(8, 3);
            for (Index i = 0; i < m.values.size(); ++i) {
                m.values(i) = unit(rng);
            }
            // Column 0 stays the row minimum under both maps, so the gold is fixed.
            m.values.col(0).array() -= 20.0;
            const SrdResult a = srd(m, GoldStrategy::row_min);
            PerformanceMatrix mapped = m;
            mapped.values.col(1) = m.values.col(1).array().exp() * 3.0 + 1.0;
            mapped.values.col(2) = m.values.col(2).array().cube();
            const SrdResult b = srd(mapped, GoldStrategy::row_min);
            REQUIRE(a.srd_raw == b.srd_raw);
            REQUIRE(a.method_ranks == b.method_ranks);
        }
    }
    SUBCASE("higher-is-better flips the rank vectors") {
        std::mt19937_64 rng(15);
        std::normal_distribution<double> normal;
        for (int trial = 0; trial < 200; ++trial) {
            PerformanceMatrix m;
            const Index r = 2 + static_cast<Index>(rng() % 8);
            m.values.resize(r, 2);
            for (Index i = 0; i < m.values.size(); ++i) {
                m.values(i) = normal(rng);
            }
            const SrdResult low = srd(m, GoldStrategy::row_min);
            m.lower_is_better = false;
            const SrdResult high = srd(m, GoldStrategy::row_max);
            for (Index j = 0; j < 2; ++j) {
                REQUIRE((low.method_ranks.col(j).array() + high.method_ranks.col(j).array() == int(r) + 1).all());
            }
            REQUIRE((high.srd_raw.array() <= high.max_srd).all());
        }
    }
    SUBCASE("ties produce warnings") {
        PerformanceMatrix m;
        m.values.resize(3, 2);
        m.values << 1, 2, 1, 3, 2, 4;
        m.col_names = {"a", "b"};
        m.row_names = {"x", "y", "z"};
        const SrdResult res = srd(m, GoldStrategy::row_min);
        CHECK(res.warnings.size() >= 1);
    }
    SUBCASE("invalid matrices") {
        PerformanceMatrix m;
        m.values.resize(1, 2);
        m.values << 1, 2;
        CHECK_THROWS_AS((void)srd(m, GoldStrategy::row_min), ValidationError);
        m.values.resize(2, 1);
        m.values << 1, std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS((void)srd(m, GoldStrategy::row_min), ValidationError);
    }
}

TEST_CASE("maximum SRD matches brute force") {
    for (int r = 1; r <= 8; ++r) {
        const auto counts = oracle::permutation_srd_counts(r);
        CHECK(max_srd(r) == counts.rbegin()->first);
        for (const auto &[value, count] : counts) {
            CHECK(value % 2 == 0);
        }
    }
    CHECK(max_srd(10) == 50);
    CHECK(max_srd(11) == 60);
}

TEST_CASE("exact null distribution") {
    SUBCASE("small cases") {
        const auto two = exact_null_distribution(2);
        CHECK(two.probability.size() == 3);
        CHECK(two.probability[0] == Approx(0.5));
        CHECK(two.probability[2] == Approx(0.5));
        const auto three = exact_null_distribution(3);
        CHECK(three.probability[0] == Approx(1.0 / 6));
        CHECK(three.probability[2] == Approx(2.0 / 6));
        CHECK(three.probability[4] == Approx(3.0 / 6));
    }
    SUBCASE("counts equal enumeration") {
        for (int r = 2; r <= 8; ++r) {
            const auto counts = oracle::permutation_srd_counts(r);
            const auto dp = displacement_counts(r);
            for (std::size_t v = 0; v < dp.size(); ++v) {
                const auto it = counts.find(static_cast<int>(v));
                REQUIRE(dp[v] == (it == counts.end() ? 0U : it->second));
            }
            REQUIRE(static_cast<int>(dp.size()) - 1 == counts.rbegin()->first);
            const auto null = exact_null_distribution(r);
            double total = 0.0;
            for (std::size_t v = 0; v < null.probability.size(); ++v) {
                total += null.probability[v];
            }
            REQUIRE(total == Approx(1.0).epsilon(1e-14));
        }
    }
    SUBCASE("ten cases") {
        const auto null = exact_null_distribution(10);
        double total = 0.0;
        for (const double p : null.probability) {
            total += p;
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
        CHECK(null.cdf(4) < 0.05);
        CHECK(null.cdf(4) == Approx(1.7e-5).epsilon(0.05));
        CHECK(null.quantile(0.05) == 20.0);
        CHECK(null.cdf(20) >= 0.05);
        CHECK(null.cdf(18) < 0.05);
    }
    SUBCASE("range") {
        CHECK_THROWS_AS((void)exact_null_distribution(1), ArgumentError);
        CHECK_THROWS_AS((void)exact_null_distribution(14), ArgumentError);
        CHECK(null_distribution(13).mode == NullMode::exact);
        CHECK(null_distribution(14).mode == NullMode::normal);
    }
}

TEST_CASE("displacement moments match enumeration") {
    for (int r = 2; r <= 8; ++r) {
        const auto counts = oracle::permutation_srd_counts(r);
        double n = 0, s1 = 0, s2 = 0;
        for (const auto &[value, count] : counts) {
            n += static_cast<double>(count);
            s1 += static_cast<double>(count) * value;
            s2 += static_cast<double>(count) * value * value;
        }
        const auto mom = displacement_moments(r);
        CHECK(mom.mean == Approx(s1 / n).epsilon(1e-12));
        CHECK(mom.variance == Approx(s2 / n - (s1 / n) * (s1 / n)).epsilon(1e-10));
    }
}

TEST_CASE("normal approximation agrees with permutation sampling") {
    const Index r = 20;
    const auto null = normal_approx_null(r);
    CHECK(null.mode == NullMode::normal);
    CHECK(null.sd > 0.0);

    std::mt19937_64 rng(2718);
    std::vector<int> perm(static_cast<std::size_t>(r));
    const int draws = 1000000;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (int d = 0; d < draws; ++d) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        double v = 0;
        for (int i = 0; i < r; ++i) {
            v += std::abs(perm[static_cast<std::size_t>(i)] - i);
        }
        s1 += v;
        s2 += v * v;
        s3 += v * v * v;
        s4 += v * v * v * v;
    }
    const double mean = s1 / draws;
    const double m2 = s2 / draws;
    const double var = m2 - mean * mean;
    const double se_mean = std::sqrt(var / draws);
    const double se_m2 = std::sqrt((s4 / draws - m2 * m2) / draws);
    CHECK(std::abs(null.mean - mean) < 3 * se_mean);
    const double model_m2 = null.sd * null.sd + null.mean * null.mean;
    CHECK(std::abs(model_m2 - m2) < 3 * se_m2);
    CHECK(null.quantile(0.5) == Approx(mean).epsilon(0.01));
    CHECK(null.quantile(0.05) < null.quantile(0.5));

    CHECK_THROWS_AS((void)normal_approx_null(13), ArgumentError);
}

TEST_CASE("reports") {
    SUBCASE("a median-like column is not significant") {
        PerformanceMatrix m;
        m.values.resize(10, 2);
        // Column 1 is a shuffle with SRD near the null median.
        const int shuffled[10] = {6, 9, 1, 10, 3, 8, 2, 7, 5, 4};
        for (int i = 0; i < 10; ++i) {
            m.values(i, 0) = i;
            m.values(i, 1) = shuffled[i];
        }
        const SrdResult res = srd(m, GoldStrategy::row_mean);
        CHECK(res.srd_raw(1) >= res.percentiles.xx1);
        CHECK_FALSE(res.significant(1));
        CHECK(res.percentiles.xx1 <= res.percentiles.med);
        CHECK(res.percentiles.med <= res.percentiles.xx19);
    }
    SUBCASE("tables") {
        const SrdResult res = srd(testing::cancer_errors_matrix(), GoldStrategy::row_min);
        std::ostringstream methods, dist;
        write_srd_report(res, methods, dist);
        CHECK(methods.str().find("STh,12,24,") != std::string::npos);
        CHECK(methods.str().find("significant") != std::string::npos);
        CHECK(methods.str().find("not-significant") == std::string::npos);
        std::istringstream rows(dist.str());
        std::string line;
        std::getline(rows, line);
        double total = 0.0;
        double last_cumulative = 0.0;
        while (std::getline(rows, line)) {
            std::vector<std::string> cells;
            std::stringstream ss(line);
            for (std::string cell; std::getline(ss, cell, ',');) {
                cells.push_back(cell);
            }
            REQUIRE(cells.size() == 4);
            total += std::stod(cells[2]);
            last_cumulative = std::stod(cells[3]);
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
        CHECK(std::abs(last_cumulative - 1.0) < 1e-12);
    }
    SUBCASE("leave-one-out spread") {
        const PerformanceMatrix m = testing::cancer_errors_matrix();
        const auto loo = srd_leave_one_out(m, GoldStrategy::row_min);
        REQUIRE(loo.size() == 3);
        for (const auto &v : loo) {
            CHECK(v.size() == 10);
        }
        // Dropping GCM (last everywhere) leaves the other ranks unchanged.
        CHECK(loo[0][9] == 12);
        PerformanceMatrix small = m;
        small.values = m.values.topRows(2);
        small.row_names.resize(2);
        CHECK_THROWS_AS((void)srd_leave_one_out(small, GoldStrategy::row_min), ValidationError);
    }
    SUBCASE("reading a matrix file") {
        const auto dir = testing::temp_dir("srd_read");
        testing::write_file(dir / "errors.csv", testing::cancer_errors_csv());
        const PerformanceMatrix m = read_performance_matrix(dir / "errors.csv");
        CHECK(m.values == testing::cancer_errors_matrix().values);
        CHECK(m.row_names.front() == "Lung2");
        CHECK(m.col_names == std::vector<std::string>{"STh", "OTh", "HTh"});
    }
}
