// Copyright 2026 The dqcsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Deterministic discrete-event core: a simulated clock in nanoseconds, an
 * event queue ordered by (fire time, insertion sequence), cooperative tasks
 * and the single random stream of a simulation instance.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dqcsim/sim/rng.hpp"

namespace dqcsim::sim {

/// Simulated time in nanoseconds.
using SimTime = double;
using EventId = std::uint64_t;
using HandlerId = std::uint32_t;
using TaskId = std::uint32_t;
using Token = std::uint64_t;

/// Handler id used for events scheduled with a bare callable.
inline constexpr HandlerId kClosureHandler = 0;

struct TraceEntry {
    SimTime time;
    std::uint64_t seq;
    HandlerId handler;
    Token token;

    bool operator==(const TraceEntry &) const = default;
};

enum class TaskState { Runnable, Blocked, Finished };

/// Raised by run() when the queue drains while tasks are still blocked.
class DeadlockError : public std::runtime_error {
  public:
    struct Blocked {
        std::string task;
        std::string reason;
    };

    explicit DeadlockError(std::vector<Blocked> blocked);

    const std::vector<Blocked> &blocked() const noexcept { return blocked_; }

  private:
    std::vector<Blocked> blocked_;
};

class Kernel {
  public:
    explicit Kernel(std::uint64_t seed = 0);

    Kernel(const Kernel &) = delete;
    Kernel &operator=(const Kernel &) = delete;

    HandlerId register_handler(std::string name, std::function<void(Token)> fn);

    /// Enqueue a token for `handler` at now() + delay.
    EventId schedule(SimTime delay, HandlerId handler, Token token = 0);
    EventId schedule(SimTime delay, std::function<void()> fn);

    /// Process events until the queue is empty. Returns the final clock.
    SimTime run();

    /// Clock to 0, queue, tasks and handlers cleared, RNG re-seeded.
    void reset();
    void reset(std::uint64_t seed);

    SimTime now() const noexcept { return now_; }
    std::uint64_t seed() const noexcept { return seed_; }
    Rng &rng() noexcept { return rng_; }

    // Cooperative tasks. A task's step function is invoked from a resume
    // event whenever the task is woken; it must either block, finish or
    // return with a wake-up already arranged.
    TaskId spawn(std::string name, std::function<void()> step);
    void block(TaskId id, std::string reason);
    void wake(TaskId id);
    void finish(TaskId id);
    TaskState task_state(TaskId id) const;
    const std::string &task_name(TaskId id) const;

    void set_trace_enabled(bool on) noexcept { trace_enabled_ = on; }
    const std::vector<TraceEntry> &trace() const noexcept { return trace_; }

    std::size_t pending_events() const noexcept { return queue_.size(); }

  private:
    struct Event {
        SimTime fire_time;
        std::uint64_t seq;
        HandlerId handler;
        Token token;
    };
    struct Later {
        bool operator()(const Event &a, const Event &b) const {
            if (a.fire_time != b.fire_time) {
                return a.fire_time > b.fire_time;
            }
            return a.seq > b.seq;
        }
    };
    struct Handler {
        std::string name;
        std::function<void(Token)> fn;
    };
    struct Task {
        std::string name;
        std::function<void()> step;
        TaskState state = TaskState::Runnable;
        std::string reason;
        bool resume_pending = false;
    };

    void install_builtin_handlers();
    void resume_task(Token id);

    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t seed_;
    Rng rng_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::vector<Handler> handlers_;
    // Closures for events scheduled with a bare callable, keyed by seq.
    std::unordered_map<std::uint64_t, std::function<void()>> closures_;
    std::vector<Task> tasks_;
    HandlerId resume_handler_ = 0;
    bool trace_enabled_ = true;
    std::vector<TraceEntry> trace_;
};

} // namespace dqcsim::sim
