#include "rar/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rar/delay.hpp"

namespace rar {

std::vector<long long> TrialState::recompute_counts() const {
    std::vector<long long> c(arms, 0);
    for (int x : assignments) c[x]++;
    return c;
}

void check_probability_vector(const Eigen::VectorXd& p) {
    double sum = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (!(p[i] >= -1e-15 && p[i] <= 1.0 + 1e-12) || std::isnan(p[i]))
            throw std::runtime_error("allocation probability component outside [0,1]");
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::runtime_error("allocation probabilities do not sum to 1");
}

int sample_arm(const Eigen::VectorXd& p, Rng& rng) {
    return rng.discrete(p.data(), static_cast<int>(p.size()), 1.0);
}

int DesignPolicy::assign(const Eigen::VectorXd& p, Rng& rng) {
    return sample_arm(p, rng);
}

TrialEngine::TrialEngine(DesignPolicy& policy, const ResponseModel& model, int n,
                         const WarmStart& warm, const DelayModel* delay,
                         TrialStreams& streams)
    : policy_(policy), model_(model), delay_(delay), streams_(streams), n_(n), warm_(warm) {
    model_.validate();
    if (n < 1) throw std::invalid_argument("trial size must be at least 1");
    if (policy_.arms() != model_.arms())
        throw std::invalid_argument("policy and model disagree on the number of arms");
    const int k = model_.arms();
    if (warm_.mode == WarmStart::Mode::restricted_block) {
        if (warm_.m0 < 0) throw std::invalid_argument("warm start m0 must be >= 0");
        warm_steps_ = warm_.m0 * k;
        if (n < warm_steps_)
            throw std::invalid_argument("trial size smaller than the warm-start block");
    }
    if (warm_.theta0.empty()) warm_.theta0 = default_guess(model_.family, k);
    if (static_cast<int>(warm_.theta0.size()) != k)
        throw std::invalid_argument("warm start guess arm count mismatch");
    policy_.set_guess(warm_.theta0);

    state_.arms = k;
    state_.counts.assign(k, 0);
    state_.assignments.reserve(n);
    state_.responses.reserve(n);
    state_.entry_times.reserve(n);
    state_.response_delays.reserve(n);
}

void TrialEngine::reveal_due(double now) {
    while (!pending_.empty() && pending_.front().reveal_time <= now) {
        std::pop_heap(pending_.begin(), pending_.end());
        Pending due = pending_.back();
        pending_.pop_back();
        policy_.observe(state_.assignments[due.index], state_.responses[due.index]);
    }
}

int TrialEngine::step(TrialObserver* observer) {
    if (done()) throw std::logic_error("trial already complete");
    const int k = state_.arms;
    const double t_entry = clock_;

    reveal_due(t_entry);

    Eigen::VectorXd p(k);
    int arm;
    if (m_ < warm_steps_) {
        // Permuted-block phase: every arm exactly once per block of K, so the
        // remaining arms of the current block are equally likely.
        if (block_pos_ == 0) {
            block_.resize(k);
            for (int i = 0; i < k; ++i) block_[i] = i;
            for (int i = k - 1; i > 0; --i) {
                int j = static_cast<int>(streams_.assignment.uniform01() * (i + 1));
                if (j > i) j = i;
                std::swap(block_[i], block_[j]);
            }
        }
        p.setZero();
        for (int i = block_pos_; i < k; ++i) p[block_[i]] = 1.0 / (k - block_pos_);
        arm = block_[block_pos_];
        block_pos_ = (block_pos_ + 1) % k;
    } else {
        p = policy_.next_probabilities();
        check_probability_vector(p);
        arm = policy_.assign(p, streams_.assignment);
        if (arm < 0 || arm >= k)
            throw std::runtime_error("policy returned an arm index out of range");
    }
    if (observer) observer->on_step(m_, p, arm);
    policy_.on_assigned(arm);

    const double outcome = model_.sample(arm, streams_.response);
    double r = 0.0, gap = 0.0;
    if (delay_) {
        r = delay_->response_time(arm, streams_.delay);
        gap = delay_->entry_gap(streams_.delay);
    }

    state_.assignments.push_back(arm);
    state_.responses.push_back(outcome);
    state_.entry_times.push_back(t_entry);
    state_.response_delays.push_back(r);
    state_.counts[arm]++;

    pending_.push_back(Pending{t_entry + r, m_});
    std::push_heap(pending_.begin(), pending_.end());

    clock_ = t_entry + gap;
    ++m_;
    return arm;
}

TrialState run_trial(DesignPolicy& policy, const ResponseModel& model, int n,
                     const WarmStart& warm, const DelayModel* delay, TrialStreams& streams,
                     TrialObserver* observer) {
    TrialEngine engine(policy, model, n, warm, delay, streams);
    while (!engine.done()) engine.step(observer);
    return engine.take_state();
}

TrialState run_trial(DesignPolicy& policy, const ResponseModel& model, int n,
                     const WarmStart& warm, const DelayModel* delay, std::uint64_t seed,
                     std::uint64_t replication, TrialObserver* observer) {
    TrialStreams streams = TrialStreams::make(seed, replication);
    return run_trial(policy, model, n, warm, delay, streams, observer);
}

}  // namespace rar
