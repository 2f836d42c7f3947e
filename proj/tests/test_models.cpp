#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rar/models.hpp"

using namespace rar;

TEST_SUITE_BEGIN("models");

TEST_CASE("bernoulli estimate shrinks away from the boundary") {
    EstimatorState st(2);
    ArmTheta guess = Eigen::VectorXd::Constant(1, 0.5);

    CHECK(estimate_arm(st, 0, Family::bernoulli, guess)[0] == doctest::Approx(0.5));

    for (int i = 0; i < 10; ++i) st.add(0, 1.0);
    double p = estimate_arm(st, 0, Family::bernoulli, guess)[0];
    CHECK(p == doctest::Approx(10.5 / 11.0));
    CHECK(p < 1.0);

    EstimatorOptions raw;
    raw.raw_mle = true;
    CHECK(estimate_arm(st, 0, Family::bernoulli, guess, raw)[0] == doctest::Approx(1.0));
}

TEST_CASE("normal estimate: moments of {1,3}") {
    EstimatorState st(2);
    st.add(0, 1.0);
    st.add(0, 3.0);
    ArmTheta guess(2);
    guess << 0.0, 1.0;
    ArmTheta t = estimate_arm(st, 0, Family::normal, guess);
    CHECK(t[0] == doctest::Approx(2.0));
    CHECK(t[1] == doctest::Approx(1.0));
}

TEST_CASE("normal variance is floored") {
    EstimatorState st(1);
    st.add(0, 2.5);
    ArmTheta guess(2);
    guess << 0.0, 1.0;
    ArmTheta t = estimate_arm(st, 0, Family::normal, guess);
    CHECK(t[1] == doctest::Approx(1e-8));
}

TEST_CASE("exponential estimate and zero-data fallback") {
    EstimatorState st(2);
    ArmTheta guess = Eigen::VectorXd::Constant(1, 3.0);
    CHECK(estimate_arm(st, 1, Family::exponential, guess)[0] == doctest::Approx(3.0));
    st.add(1, 0.5);
    st.add(1, 1.5);
    CHECK(estimate_arm(st, 1, Family::exponential, guess)[0] == doctest::Approx(1.0));
}

TEST_CASE("estimator state satisfies the Cauchy-Schwarz relation") {
    Rng rng(7);
    EstimatorState st(1);
    for (int i = 0; i < 500; ++i) {
        st.add(0, rng.normal(1.0, 2.0));
        double n = st.count(0);
        CHECK(st.sumsq(0) + 1e-9 >= st.sum(0) * st.sum(0) / n);
    }
}

TEST_CASE("fisher information closed forms") {
    CHECK(fisher_information(Family::bernoulli, Eigen::VectorXd::Constant(1, 0.5))(0, 0) ==
          doctest::Approx(4.0));
    ArmTheta nt(2);
    nt << 0.3, 1.0;
    Eigen::MatrixXd ni = fisher_information(Family::normal, nt);
    CHECK(ni(0, 0) == doctest::Approx(1.0));
    CHECK(ni(1, 1) == doctest::Approx(0.5));
    CHECK(ni(0, 1) == doctest::Approx(0.0));
    CHECK(fisher_information(Family::exponential, Eigen::VectorXd::Constant(1, 2.0))(0, 0) ==
          doctest::Approx(0.25));

    // p*q is maximized at 1/2, so the information 1/(pq) is minimized there
    double at_half = fisher_information(Family::bernoulli, Eigen::VectorXd::Constant(1, 0.5))(0, 0);
    for (double p : {0.1, 0.3, 0.7, 0.9})
        CHECK(fisher_information(Family::bernoulli, Eigen::VectorXd::Constant(1, p))(0, 0) >
              at_half);
}

TEST_CASE("fisher information rejects boundary parameters") {
    CHECK_THROWS_AS(fisher_information(Family::bernoulli, Eigen::VectorXd::Constant(1, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(fisher_information(Family::bernoulli, Eigen::VectorXd::Constant(1, 1.0)),
                    std::invalid_argument);
    ArmTheta nt(2);
    nt << 0.0, 0.0;
    CHECK_THROWS_AS(fisher_information(Family::normal, nt), std::invalid_argument);
    CHECK_THROWS_AS(fisher_information(Family::exponential, Eigen::VectorXd::Constant(1, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("fisher information matches the expected log-likelihood curvature") {
    // bernoulli: E[log f] = p0 log t + (1-p0) log(1-t)
    for (double p0 : {0.2, 0.5, 0.7}) {
        auto g = [p0](double t) { return p0 * std::log(t) + (1.0 - p0) * std::log(1.0 - t); };
        double fd = -oracle::fd_second_derivative(g, p0);
        double info =
            fisher_information(Family::bernoulli, Eigen::VectorXd::Constant(1, p0))(0, 0);
        CHECK(std::abs(fd - info) / info < 1e-4);
    }
    // normal: E[log f](mu, s2) = -0.5 log(2 pi s2) - (s0 + (mu0-mu)^2)/(2 s2)
    {
        double mu0 = 0.7, s0 = 1.3;
        auto g_mu = [&](double mu) {
            return -0.5 * std::log(2.0 * M_PI * s0) - (s0 + (mu0 - mu) * (mu0 - mu)) / (2.0 * s0);
        };
        auto g_s2 = [&](double s2) {
            return -0.5 * std::log(2.0 * M_PI * s2) - s0 / (2.0 * s2);
        };
        ArmTheta t(2);
        t << mu0, s0;
        Eigen::MatrixXd info = fisher_information(Family::normal, t);
        CHECK(std::abs(-oracle::fd_second_derivative(g_mu, mu0) - info(0, 0)) / info(0, 0) <
              1e-4);
        CHECK(std::abs(-oracle::fd_second_derivative(g_s2, s0) - info(1, 1)) / info(1, 1) <
              1e-4);
    }
    // exponential: E[log f](r) = log r - r/r0
    {
        double r0 = 2.0;
        auto g = [&](double r) { return std::log(r) - r / r0; };
        double info =
            fisher_information(Family::exponential, Eigen::VectorXd::Constant(1, r0))(0, 0);
        CHECK(std::abs(-oracle::fd_second_derivative(g, r0) - info) / info < 1e-4);
    }
}

TEST_CASE("sampling moments") {
    ResponseModel degenerate = ResponseModel::bernoulli({1.0, 0.5});
    Rng rng(11);
    for (int i = 0; i < 100; ++i) CHECK(degenerate.sample(0, rng) == doctest::Approx(1.0));

    ResponseModel bern = ResponseModel::bernoulli({0.7, 0.4});
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) mean += bern.sample(0, rng);
    mean /= 100000;
    CHECK(mean > 0.694);
    CHECK(mean < 0.706);

    ResponseModel expo = ResponseModel::exponential({2.0, 1.0});
    mean = 0.0;
    for (int i = 0; i < 100000; ++i) mean += expo.sample(0, rng);
    mean /= 100000;
    CHECK(std::abs(mean - 0.5) < 0.005);

    ResponseModel norm = ResponseModel::normal({1.0, 0.0}, {4.0, 1.0});
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < 100000; ++i) {
        double x = norm.sample(0, rng);
        m1 += x;
        m2 += x * x;
    }
    m1 /= 100000;
    m2 = m2 / 100000 - m1 * m1;
    CHECK(std::abs(m1 - 1.0) < 0.02);
    CHECK(std::abs(m2 - 4.0) < 0.1);
}

TEST_CASE("estimator is empirically consistent") {
    Rng rng(23);
    std::vector<double> errors;
    ArmTheta guess = Eigen::VectorXd::Constant(1, 0.5);
    for (int rep = 0; rep < 51; ++rep) {
        EstimatorState st(1);
        for (int i = 0; i < 10000; ++i) st.add(0, rng.bernoulli(0.3) ? 1.0 : 0.0);
        errors.push_back(std::abs(estimate_arm(st, 0, Family::bernoulli, guess)[0] - 0.3));
    }
    std::sort(errors.begin(), errors.end());
    CHECK(errors[25] < 0.02);
}

TEST_SUITE_END();
