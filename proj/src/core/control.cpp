#include "ava/core/control.hpp"

namespace ava {

SessionControl::State SessionControl::state() const {
    std::lock_guard lock(mu_);
    return state_;
}

void SessionControl::pause() {
    std::lock_guard lock(mu_);
    if (state_ != State::running) {
        throw InvalidTransition("pause is only valid while running");
    }
    state_ = State::paused;
}

void SessionControl::resume() {
    {
        std::lock_guard lock(mu_);
        if (state_ != State::paused) {
            throw InvalidTransition("resume is only valid while paused");
        }
        state_ = State::running;
    }
    cv_.notify_all();
}

void SessionControl::abort() {
    {
        std::lock_guard lock(mu_);
        if (state_ == State::aborted || state_ == State::finished) {
            throw InvalidTransition("session already ended");
        }
        state_ = State::aborted;
    }
    cv_.notify_all();
}

void SessionControl::override_params(ParamVector params) {
    std::lock_guard lock(mu_);
    if (state_ != State::paused) {
        throw InvalidTransition("override_params is only valid while paused");
    }
    override_ = std::move(params);
}

void SessionControl::amend_goal(std::string goal) {
    if (goal.empty()) {
        throw InvalidTransition("amended goal must not be empty");
    }
    std::lock_guard lock(mu_);
    if (state_ == State::aborted || state_ == State::finished) {
        throw InvalidTransition("session already ended");
    }
    goal_ = std::move(goal);
}

SessionControl::Directive SessionControl::checkpoint() {
    std::unique_lock lock(mu_);
    parked_ = true;
    cv_.notify_all();
    cv_.wait(lock, [&] { return state_ != State::paused; });
    parked_ = false;
    Directive d;
    d.abort = state_ == State::aborted;
    d.override_params = std::exchange(override_, std::nullopt);
    d.goal = std::exchange(goal_, std::nullopt);
    return d;
}

void SessionControl::finish() {
    {
        std::lock_guard lock(mu_);
        if (state_ != State::aborted) {
            state_ = State::finished;
        }
        finished_ = true;
    }
    cv_.notify_all();
}

bool SessionControl::wait_quiescent(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    return cv_.wait_for(lock, timeout, [&] { return finished_ || (parked_ && state_ == State::paused); });
}

}  // namespace ava
