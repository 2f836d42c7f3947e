#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rar/coins.hpp"
#include "rar/metrics.hpp"

using namespace rar;

namespace {
Eigen::VectorXd random_simplex(int k, Rng& rng) {
    Eigen::VectorXd v(k);
    for (int i = 0; i < k; ++i) v[i] = -std::log(1.0 - rng.uniform01());
    return v / v.sum();
}
}  // namespace

TEST_SUITE_BEGIN("coins");

TEST_CASE("dbcd allocation: fixed point, example value, monotonicity") {
    Eigen::VectorXd y(2), x(2);
    y << 0.5, 0.5;
    x << 0.5, 0.5;
    Eigen::VectorXd g = dbcd_allocation(x, y, 2.0);
    CHECK(g[0] == doctest::Approx(0.5).epsilon(1e-14));

    x << 0.6, 0.4;
    g = dbcd_allocation(x, y, 2.0);
    CHECK(g[0] == doctest::Approx(0.5 * (5.0 / 6.0) * (5.0 / 6.0) /
                                  (0.5 * (5.0 / 6.0) * (5.0 / 6.0) +
                                   0.5 * (5.0 / 4.0) * (5.0 / 4.0))));
    CHECK(g[0] == doctest::Approx(0.307692).epsilon(1e-5));
    CHECK(g[1] == doctest::Approx(0.692308).epsilon(1e-5));

    // overrepresenting an arm strictly lowers its probability (gamma > 0)
    Eigen::VectorXd x2(2);
    x2 << 0.65, 0.35;
    CHECK(dbcd_allocation(x2, y, 2.0)[0] < g[0]);

    Eigen::VectorXd xz(2);
    xz << 0.0, 1.0;
    CHECK_THROWS_AS(dbcd_allocation(xz, y, 2.0), std::invalid_argument);
}

TEST_CASE("dbcd and smoothed-erade fixed point on random simplex points") {
    Rng rng(2024);
    for (int i = 0; i < 50; ++i) {
        int k = 2 + static_cast<int>(rng.uniform01() * 3);
        Eigen::VectorXd rho = random_simplex(k, rng);
        for (double gamma : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            Eigen::VectorXd g = dbcd_allocation(rho, rho, gamma);
            CHECK((g - rho).cwiseAbs().maxCoeff() < 1e-12);
        }
        for (double gamma : {0.5, 1.0, 2.0}) {
            Eigen::VectorXd g = smoothed_erade_allocation(rho, rho, gamma);
            CHECK((g - rho).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("dbcd derivative at the fixed point is -gamma (I - 1'rho)") {
    Rng rng(55);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        int k = 2 + trial % 3;
        Eigen::VectorXd rho = random_simplex(k, rng);
        if (rho.minCoeff() < 0.05) continue;
        for (double gamma : {1.0, 2.0, 4.0}) {
            for (int j = 0; j < k; ++j) {
                Eigen::VectorXd up = rho, dn = rho;
                up[j] += h;
                dn[j] -= h;
                Eigen::VectorXd der =
                    (dbcd_allocation(up, rho, gamma) - dbcd_allocation(dn, rho, gamma)) /
                    (2.0 * h);
                for (int c = 0; c < k; ++c) {
                    double expect = -gamma * ((j == c ? 1.0 : 0.0) - rho[c]);
                    CHECK(der[c] == doctest::Approx(expect).epsilon(1e-4));
                }
            }
        }
    }
}

TEST_CASE("erade probability branches") {
    CHECK(erade_probability(0.5, 0.5, 0.37) == doctest::Approx(0.5));
    CHECK(erade_probability(0.7, 0.6, 0.5) == doctest::Approx(0.3));
    CHECK(erade_probability(0.5, 0.6, 0.5) == doctest::Approx(1.0 - 0.5 * 0.4));
    // tie within tolerance returns the target itself
    CHECK(erade_probability(0.6 + 1e-13, 0.6, 0.5) == doctest::Approx(0.6));
    // alpha = 1 degenerates to the target probability in every branch
    CHECK(erade_probability(0.7, 0.6, 1.0) == doctest::Approx(0.6));
    CHECK(erade_probability(0.5, 0.6, 1.0) == doctest::Approx(0.6));
    CHECK_THROWS_AS(erade_probability(0.5, 0.5, 1.5), std::invalid_argument);
}

TEST_CASE("smoothed erade weights and example value") {
    Eigen::VectorXd y = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
    Eigen::VectorXd x(3);
    x << 0.5, 0.3, 0.2;
    // ratios y/x = (2/3, 10/9, 5/3); weights psi = (1, 1+sqrt((10/9)^2-1), 1+sqrt((5/3)^2-1))
    double w2 = 1.0 + std::sqrt(std::pow(10.0 / 9.0, 2) - 1.0);
    double w3 = 1.0 + std::sqrt(std::pow(5.0 / 3.0, 2) - 1.0);
    double sum = 1.0 + w2 + w3;
    Eigen::VectorXd g = smoothed_erade_allocation(x, y, 1.0);
    CHECK(g[0] == doctest::Approx(1.0 / sum).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(w2 / sum).epsilon(1e-12));
    CHECK(g[2] == doctest::Approx(w3 / sum).epsilon(1e-12));
    CHECK(g[0] == doctest::Approx(0.2075667).epsilon(1e-5));
    CHECK(g[1] == doctest::Approx(0.3081078).epsilon(1e-5));
    CHECK(g[2] == doctest::Approx(0.4843255).epsilon(1e-5));

    // the overweighted arm keeps weight exactly 1: its probability is y_k/sum < y_k
    CHECK(g[0] < y[0]);
    // underweighted arms gain weight > 1
    CHECK(g[2] > y[2]);
}

TEST_CASE("thompson posterior: symmetry and base cases") {
    CHECK(thompson_posterior(0, 0, 0, 0) == 0.5);
    CHECK(thompson_posterior(1, 0, 1, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // swapping the arms complements the probability
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        long long n1 = static_cast<long long>(rng.uniform01() * 20);
        long long n2 = static_cast<long long>(rng.uniform01() * 20);
        long long s1 = static_cast<long long>(rng.uniform01() * (n1 + 1));
        long long s2 = static_cast<long long>(rng.uniform01() * (n2 + 1));
        double a = thompson_posterior(s1, s2, n1, n2);
        double b = thompson_posterior(s2, s1, n2, n1);
        CHECK(a == doctest::Approx(1.0 - b).epsilon(1e-11));
    }
    CHECK_THROWS_AS(thompson_posterior(3, 0, 2, 0), std::invalid_argument);
}

TEST_CASE("thompson posterior equals the beta-integration oracle") {
    oracle::Quadrature quad(64);
    // the worked example (3,1,4,4): Beta(4,2) vs Beta(2,4)
    double expect = oracle::thompson_by_integration(3, 1, 4, 4, quad);
    CHECK(thompson_posterior(3, 1, 4, 4) == doctest::Approx(expect).epsilon(1e-11));

    // random sample up to N = 50 (quadrature stays exact: degree <= 101 < 127)
    Rng rng(99);
    for (int i = 0; i < 300; ++i) {
        long long n1 = 1 + static_cast<long long>(rng.uniform01() * 50);
        long long n2 = 1 + static_cast<long long>(rng.uniform01() * 50);
        long long s1 = static_cast<long long>(rng.uniform01() * (n1 + 1));
        long long s2 = static_cast<long long>(rng.uniform01() * (n2 + 1));
        double got = thompson_posterior(s1, s2, n1, n2);
        double want = oracle::thompson_by_integration(s1, s2, n1, n2, quad);
        CHECK(std::abs(got - want) < 1e-9);
    }
}

TEST_CASE("thall-wathen exponent") {
    CHECK(thall_wathen_probability(0.5, 0.8) == doctest::Approx(0.5));
    CHECK(thall_wathen_probability(0.8, 1.0) == doctest::Approx(0.8));
    CHECK(thall_wathen_probability(0.9, 0.5) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(thall_wathen_probability(0.9, 0.0) == doctest::Approx(0.5));
    CHECK(thall_wathen_probability(1.0, 0.5) == doctest::Approx(1.0));
    // monotone in the posterior for fixed c
    CHECK(thall_wathen_probability(0.7, 0.5) < thall_wathen_probability(0.8, 0.5));
}

TEST_CASE("smlp equals dbcd at gamma zero along a whole trial") {
    ResponseModel model = ResponseModel::bernoulli({0.7, 0.4});
    auto target = make_urn_target(2);
    SmlpPolicy smlp(target, Family::bernoulli);
    DbcdPolicy dbcd(target, Family::bernoulli, 0.0);
    WarmStart warm = WarmStart::restricted_block(1);
    TrialState a = run_trial(smlp, model, 400, warm, nullptr, 4141);
    TrialState b = run_trial(dbcd, model, 400, warm, nullptr, 4141);
    CHECK(a.assignments == b.assignments);
}

TEST_CASE("smlp probability equals the estimated target") {
    auto target = make_urn_target(2);
    SmlpPolicy smlp(target, Family::bernoulli);
    // feed responses so that p-hat = (0.7, 0.4) exactly under the raw mle
    EstimatorOptions raw;
    raw.raw_mle = true;
    SmlpPolicy mle(target, Family::bernoulli, raw);
    for (int i = 0; i < 10; ++i) {
        mle.on_assigned(0);
        mle.observe(0, i < 7 ? 1.0 : 0.0);
        mle.on_assigned(1);
        mle.observe(1, i < 4 ? 1.0 : 0.0);
    }
    Eigen::VectorXd p = mle.next_probabilities();
    CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("dbcd empirical variance decreases in gamma") {
    ResponseModel model = ResponseModel::bernoulli({0.7, 0.4});
    auto target = make_urn_target(2);
    const int n = 1500, reps = 2000;
    double prev = std::numeric_limits<double>::infinity();
    for (double gamma : {0.0, 1.0, 2.0, 4.0}) {
        double s1 = 0.0, s2 = 0.0;
        for (int r = 0; r < reps; ++r) {
            DbcdPolicy policy(target, Family::bernoulli, gamma);
            TrialState st = run_trial(policy, model, n, WarmStart::restricted_block(1),
                                      nullptr, 6006, r);
            double d = static_cast<double>(st.counts[0]) / n - 2.0 / 3.0;
            s1 += d;
            s2 += d * d;
        }
        double var = n * (s2 - s1 * s1 / reps) / (reps - 1);
        CHECK(var < prev);
        CHECK(var == doctest::Approx(dbcd_variance_binary(0.7, 0.4, gamma)).epsilon(0.15));
        prev = var;
    }
}

TEST_CASE("erade tracks m * rho within a shrinking sqrt(n) band") {
    ResponseModel model = ResponseModel::bernoulli({0.7, 0.4});
    auto target = make_urn_target(2);
    WarmStart warm = WarmStart::restricted_block(1);
    const int reps = 120;
    std::vector<int> sizes{400, 1600, 6400};
    std::vector<double> band(sizes.size(), 0.0);
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        int n = sizes[si];
        for (int r = 0; r < reps; ++r) {
            EradePolicy policy(target, Family::bernoulli, 0.5);
            TrialState st = run_trial(policy, model, n, warm, nullptr, 31337, r);
            // replay the estimator path to recover rho(theta_hat_m)
            EstimatorState est(2);
            Theta guess = default_guess(Family::bernoulli, 2);
            long long n1 = 0;
            double max_dev = 0.0;
            for (int m = 0; m < n; ++m) {
                if (m >= 2) {
                    Theta th = estimate(est, Family::bernoulli, guess);
                    double rho1 = clamp_simplex(target->rho(th), 0.01)[0];
                    max_dev = std::max(max_dev, std::abs(n1 - m * rho1));
                }
                est.add(st.assignments[m], st.responses[m]);
                if (st.assignments[m] == 0) ++n1;
            }
            band[si] += max_dev / std::sqrt(static_cast<double>(n));
        }
        band[si] /= reps;
    }
    CHECK(band[1] < band[0]);
    CHECK(band[2] < band[1]);
}

TEST_SUITE_END();
