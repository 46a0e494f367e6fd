#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hnswmerge/vecstore.hpp"
#include "oracles.hpp"

namespace hm = hnswmerge;

namespace {

hm::Dataset two_points() { return hm::Dataset(2, {0.0F, 0.0F, 3.0F, 4.0F}); }

TEST(Distance, IdentityIsZeroAndCounted) {
    oracle::Fixture f(two_points(), hm::MetricKind::kSquaredEuclidean, hm::kPhaseMerge);
    EXPECT_EQ(f.dist(1, 1), 0.0);
    EXPECT_EQ(f.meter.count(hm::kPhaseMerge), 1u);
}

TEST(Distance, EuclideanThreeFourFive) {
    oracle::Fixture f(two_points(), hm::MetricKind::kEuclidean);
    EXPECT_DOUBLE_EQ(f.dist(0, 1), 5.0);
}

TEST(Distance, SquaredEuclidean) {
    oracle::Fixture f(two_points());
    EXPECT_DOUBLE_EQ(f.dist(0, 1), 25.0);
}

TEST(Distance, FreeFunctionChargesNamedPhase) {
    const auto data = two_points();
    hm::DistanceMeter meter;
    EXPECT_DOUBLE_EQ(hm::distance(meter, "x", 0, 1, data, hm::MetricKind::kSquaredEuclidean), 25.0);
    EXPECT_EQ(meter.count("x"), 1u);
}

TEST(Distance, OutOfRangeIdThrows) {
    oracle::Fixture f(two_points());
    EXPECT_THROW(f.dist(0, 2), std::invalid_argument);
}

TEST(Distance, QueryVector) {
    oracle::Fixture f(two_points());
    const float q[] = {3.0F, 0.0F};
    EXPECT_DOUBLE_EQ(f.dist.to_query(q, 1), 16.0);
    EXPECT_EQ(f.meter.total(), 1u);
}

TEST(Distance, MatchesIndependentKernel) {
    oracle::Fixture f(oracle::uniform_points(50, 37, 3));
    for (hm::VectorId a = 0; a < 50; a += 7) {
        for (hm::VectorId b = 0; b < 50; b += 3) {
            const double want = static_cast<double>(oracle::squared_l2(f.data.row(a), f.data.row(b)));
            EXPECT_NEAR(f.dist(a, b), want, 1e-9 * (1.0 + want));
        }
    }
}

TEST(Meter, FreshIsEmpty) {
    hm::DistanceMeter meter;
    EXPECT_TRUE(meter.snapshot().empty());
    EXPECT_EQ(meter.total(), 0u);
}

TEST(Meter, CountsPerPhase) {
    oracle::Fixture f(two_points(), hm::MetricKind::kSquaredEuclidean, hm::kPhaseMerge);
    for (int i = 0; i < 3; ++i) {
        f.dist(0, 1);
    }
    EXPECT_EQ(f.meter.snapshot(), (hm::DistanceMeter::Snapshot{{"merge", 3}}));

    hm::DistanceMeter m2;
    const hm::MeteredDistance merge(f.data, hm::MetricKind::kSquaredEuclidean, m2, hm::kPhaseMerge);
    const auto search = merge.with_phase(hm::kPhaseSearch);
    merge(0, 1);
    merge(1, 0);
    for (int i = 0; i < 5; ++i) {
        search(0, 0);
    }
    EXPECT_EQ(m2.snapshot(), (hm::DistanceMeter::Snapshot{{"merge", 2}, {"search", 5}}));
    EXPECT_EQ(m2.total(), 7u);
}

TEST(Meter, MergeFromAdds) {
    hm::DistanceMeter a;
    hm::DistanceMeter b;
    a.counter("search") = 2;
    b.counter("search") = 3;
    b.counter("merge") = 1;
    a.merge_from(b);
    EXPECT_EQ(a.count("search"), 5u);
    EXPECT_EQ(a.count("merge"), 1u);
    EXPECT_EQ(a.count("absent"), 0u);
}

TEST(BruteForce, AllSorted) {
    const float xs[] = {5.0F, -1.0F, 2.0F, 0.5F};
    oracle::Fixture f(oracle::line_points(xs));
    const float q[] = {0.0F};
    const auto got = hm::brute_force_knn(q, 4, f.dist);
    ASSERT_EQ(got.size(), 4u);
    EXPECT_EQ(got[0].id, 3u);
    EXPECT_EQ(got[1].id, 1u);
    EXPECT_EQ(got[2].id, 2u);
    EXPECT_EQ(got[3].id, 0u);
    EXPECT_EQ(f.meter.total(), 4u);
}

TEST(BruteForce, HandEnumeratedLine) {
    const float xs[] = {0.0F, 1.0F, 10.0F};
    oracle::Fixture f(oracle::line_points(xs));
    const float q[] = {0.4F};
    const auto got = hm::brute_force_knn(q, 2, f.dist);
    ASSERT_EQ(got.size(), 2u);
    EXPECT_EQ(got[0].id, 0u);
    EXPECT_EQ(got[1].id, 1u);
}

TEST(BruteForce, StoredVectorAtZero) {
    oracle::Fixture f(oracle::uniform_points(20, 4, 9));
    const auto row = f.data.row(13);
    const std::vector<float> q(row.begin(), row.end());
    const auto got = hm::brute_force_knn(q, 1, f.dist);
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0].id, 13u);
    EXPECT_EQ(got[0].distance, 0.0);
}

TEST(BruteForce, KTooLargeThrows) {
    oracle::Fixture f(two_points());
    const float q[] = {0.0F, 0.0F};
    EXPECT_THROW(hm::brute_force_knn(q, 3, f.dist), std::invalid_argument);
    EXPECT_THROW(hm::brute_force_knn(q, 0, f.dist), std::invalid_argument);
}

TEST(BruteForce, TiesBreakByLowerId) {
    const float xs[] = {1.0F, -1.0F, 1.0F};
    oracle::Fixture f(oracle::line_points(xs));
    const float q[] = {0.0F};
    const auto got = hm::brute_force_knn(q, 3, f.dist);
    EXPECT_EQ(got[0].id, 0u);
    EXPECT_EQ(got[1].id, 1u);
    EXPECT_EQ(got[2].id, 2u);
}

TEST(BruteForce, AgreesWithFullSortOracle) {
    oracle::Fixture f(oracle::uniform_points(2000, 16, 11));
    const auto queries = oracle::uniform_points(20, 16, 12);
    const auto ids = oracle::iota_ids(2000);
    for (hm::VectorId i = 0; i < 20; ++i) {
        const auto got = hm::brute_force_knn(queries.row(i), ids, 10, f.dist);
        const auto want = oracle::full_sort_knn(f.data, queries.row(i), ids, 10);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t j = 0; j < want.size(); ++j) {
            EXPECT_EQ(got[j].id, want[j]);
        }
    }
}

TEST(Dataset, RowsSliceAndGrow) {
    hm::Dataset d(2);
    const float r0[] = {1.0F, 2.0F};
    EXPECT_EQ(d.append(r0), 0u);
    const float r3[] = {7.0F, 8.0F};
    d.set_row(3, r3);
    EXPECT_EQ(d.size(), 4u);
    EXPECT_EQ(d.row(2)[0], 0.0F);
    EXPECT_EQ(d.row(3)[1], 8.0F);
    const auto s = d.slice(1, 4);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.row(2)[0], 7.0F);
    EXPECT_THROW(d.row(4), std::invalid_argument);
    const float bad[] = {1.0F};
    EXPECT_THROW(d.append(bad), std::invalid_argument);
}

TEST(Metric, ParseNames) {
    EXPECT_EQ(hm::parse_metric("l2"), hm::MetricKind::kEuclidean);
    EXPECT_EQ(hm::parse_metric("sqeuclidean"), hm::MetricKind::kSquaredEuclidean);
    EXPECT_EQ(hm::parse_metric(hm::to_string(hm::MetricKind::kEuclidean)), hm::MetricKind::kEuclidean);
    EXPECT_THROW(hm::parse_metric("cosine"), std::invalid_argument);
}

}  // namespace
