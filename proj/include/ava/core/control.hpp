#pragma once

#include "ava/errors.hpp"
#include "ava/params.hpp"

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <string>

namespace ava {

class InvalidTransition : public Error {
public:
    explicit InvalidTransition(const std::string& message) : Error("invalid_transition", message) {}
};

// Operator commands for one running loop. Commands take effect at iteration
// boundaries: the worker calls checkpoint() before every render.
class SessionControl {
public:
    enum class State { running, paused, aborted, finished };

    struct Directive {
        bool abort = false;
        std::optional<ParamVector> override_params;
        std::optional<std::string> goal;
    };

    State state() const;

    void pause();
    void resume();
    void abort();
    // Only while paused; replaces the planner's next proposal exactly once.
    void override_params(ParamVector params);
    void amend_goal(std::string goal);

    // Worker side. Blocks while paused; returns pending directives and clears them.
    Directive checkpoint();
    // Worker side. Marks the loop as finished; later commands raise InvalidTransition.
    void finish();

    // Blocks until the worker is parked in checkpoint() or has finished. After a
    // pause, returning true means no render can start before the next resume.
    bool wait_quiescent(std::chrono::milliseconds timeout);

private:
    mutable std::mutex mu_;
    std::condition_variable cv_;
    State state_ = State::running;
    bool parked_ = false;
    bool finished_ = false;
    std::optional<ParamVector> override_;
    std::optional<std::string> goal_;
};

}  // namespace ava
