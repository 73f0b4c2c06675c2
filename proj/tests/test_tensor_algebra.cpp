#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "sigkit/errors.hpp"
#include "sigkit/tensor_algebra.hpp"

using namespace sigkit;

namespace {

TruncatedTensor random_tensor(std::uint64_t seed, int dim, int depth) {
    TruncatedTensor t = TruncatedTensor::zero(dim, depth);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& level : t.levels) {
        for (double& x : level) x = dist(rng);
    }
    return t;
}

double max_level_diff(const TruncatedTensor& a, const TruncatedTensor& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.levels.size(); ++n) {
        for (std::size_t i = 0; i < a.levels[n].size(); ++i) {
            m = std::max(m, std::abs(a.levels[n][i] - b.levels[n][i]));
        }
    }
    return m;
}

}  // namespace

TEST_SUITE("tensor_algebra") {

TEST_CASE("sig_dim matches the geometric sum") {
    CHECK(sig_dim(2, 2) == 6);
    CHECK(sig_dim(6, 3) == 258);
    CHECK(sig_dim(10, 4) == 11110);
    CHECK(sig_dim(1, 1) == 1);
    CHECK(sig_dim(1, 7) == 7);
    CHECK(sig_dim(3, 1) == 3);
    CHECK(sig_dim(5, 3) == 5 + 25 + 125);
}

TEST_CASE("sig_dim rejects non-positive dim or depth") {
    CHECK_THROWS_AS(sig_dim(0, 3), DomainError);
    CHECK_THROWS_AS(sig_dim(3, 0), DomainError);
    CHECK_THROWS_AS(sig_dim(-1, 2), DomainError);
    CHECK_THROWS_AS(sig_dim(2, -4), DomainError);
}

TEST_CASE("level sizes and offsets tile the flat signature") {
    const auto sizes = level_sizes(2, 3);
    REQUIRE(sizes.size() == 3);
    CHECK(sizes[0] == 2);
    CHECK(sizes[1] == 4);
    CHECK(sizes[2] == 8);

    const auto off = level_offsets(2, 3);
    REQUIRE(off.size() == 4);
    CHECK(off[0] == 0);
    CHECK(off[1] == 2);
    CHECK(off[2] == 6);
    CHECK(off[3] == sig_dim(2, 3));
}

TEST_CASE("tensor_product is the row-major outer product") {
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{3.0, 4.0};
    const auto p = tensor_product(a, b);
    REQUIRE(p.size() == 4);
    CHECK(p[0] == doctest::Approx(3.0));
    CHECK(p[1] == doctest::Approx(4.0));
    CHECK(p[2] == doctest::Approx(6.0));
    CHECK(p[3] == doctest::Approx(8.0));
}

TEST_CASE("tensor_product is associative") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> a(3), b(9), c(3);
    for (double& x : a) x = dist(rng);
    for (double& x : b) x = dist(rng);
    for (double& x : c) x = dist(rng);
    const auto left = tensor_product(tensor_product(a, b), c);
    const auto right = tensor_product(a, tensor_product(b, c));
    REQUIRE(left.size() == right.size());
    for (std::size_t i = 0; i < left.size(); ++i) {
        CHECK(left[i] == doctest::Approx(right[i]).epsilon(1e-12));
    }
}

TEST_CASE("restricted_exp produces scaled tensor powers") {
    const std::vector<double> v{1.0, 0.0};
    const TruncatedTensor e = restricted_exp(v, 3);
    CHECK(e.level(1) == std::vector<double>{1.0, 0.0});
    CHECK(e.level(2)[0] == doctest::Approx(0.5));
    CHECK(e.level(2)[1] == 0.0);
    CHECK(e.level(2)[2] == 0.0);
    CHECK(e.level(2)[3] == 0.0);
    CHECK(e.level(3)[0] == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("chen_product has the zero tensor as identity") {
    const TruncatedTensor a = random_tensor(3, 3, 3);
    const TruncatedTensor id = TruncatedTensor::zero(3, 3);
    CHECK(max_level_diff(chen_product(id, a), a) == 0.0);
    CHECK(max_level_diff(chen_product(a, id), a) == 0.0);
}

TEST_CASE("chen_product is associative") {
    const TruncatedTensor a = random_tensor(5, 2, 4);
    const TruncatedTensor b = random_tensor(6, 2, 4);
    const TruncatedTensor c = random_tensor(7, 2, 4);
    const TruncatedTensor left = chen_product(chen_product(a, b), c);
    const TruncatedTensor right = chen_product(a, chen_product(b, c));
    CHECK(max_level_diff(left, right) < 1e-12);
}

TEST_CASE("collinear exponentials compose additively") {
    // exp(u) ⊠ exp(v) = exp(u + v) when u and v are collinear: a straight
    // line split in two is still a straight line.
    const std::vector<double> u{0.3, -0.7, 0.2};
    std::vector<double> v(u), sum(u);
    for (double& x : v) x *= 2.0;
    for (double& x : sum) x *= 3.0;
    const TruncatedTensor lhs = chen_product(restricted_exp(u, 4), restricted_exp(v, 4));
    const TruncatedTensor rhs = restricted_exp(sum, 4);
    CHECK(max_level_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("retraced segment cancels to the identity") {
    const std::vector<double> v{0.9, -0.4};
    std::vector<double> neg(v);
    for (double& x : neg) x = -x;
    const TruncatedTensor prod = chen_product(restricted_exp(v, 4), restricted_exp(neg, 4));
    CHECK(max_level_diff(prod, TruncatedTensor::zero(2, 4)) < 1e-12);
}

TEST_CASE("flatten and unflatten round-trip") {
    const TruncatedTensor t = random_tensor(9, 3, 3);
    const FlatSignature f = flatten(t);
    CHECK(f.coeffs.size() == sig_dim(3, 3));
    const TruncatedTensor back = unflatten(f);
    CHECK(max_level_diff(t, back) == 0.0);
}

TEST_CASE("unflatten rejects mis-sized coefficient vectors") {
    FlatSignature f;
    f.dim = 2;
    f.depth = 2;
    f.coeffs.assign(5, 0.0);  // should be 6
    CHECK_THROWS_AS(unflatten(f), DomainError);
}

TEST_CASE("chen product level size bookkeeping") {
    const TruncatedTensor a = random_tensor(13, 3, 4);
    const TruncatedTensor b = random_tensor(14, 3, 4);
    const TruncatedTensor p = chen_product(a, b);
    REQUIRE(p.levels.size() == 4);
    const auto sizes = level_sizes(3, 4);
    for (int n = 1; n <= 4; ++n) {
        CHECK(p.level(n).size() == sizes[static_cast<std::size_t>(n) - 1]);
    }
}

}  // TEST_SUITE
