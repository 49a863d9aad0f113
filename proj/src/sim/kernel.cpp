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

#include "dqcsim/sim/kernel.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "dqcsim/errors.hpp"

namespace dqcsim::sim {

namespace {

std::string describe(const std::vector<DeadlockError::Blocked> &blocked) {
    std::ostringstream os;
    os << "deadlock: " << blocked.size() << " task(s) blocked with an empty event queue";
    for (const auto &b : blocked) {
        os << "; " << b.task << " awaits " << b.reason;
    }
    return os.str();
}

} // namespace

DeadlockError::DeadlockError(std::vector<Blocked> blocked)
    : std::runtime_error(describe(blocked)), blocked_(std::move(blocked)) {}

Kernel::Kernel(std::uint64_t seed) : seed_(seed), rng_(seed) { install_builtin_handlers(); }

void Kernel::install_builtin_handlers() {
    handlers_.clear();
    handlers_.push_back({"closure", [this](Token seq) {
                             auto it = closures_.find(seq);
                             if (it == closures_.end()) {
                                 return;
                             }
                             auto fn = std::move(it->second);
                             closures_.erase(it);
                             fn();
                         }});
    handlers_.push_back({"task.resume", [this](Token id) { resume_task(id); }});
    resume_handler_ = 1;
}

HandlerId Kernel::register_handler(std::string name, std::function<void(Token)> fn) {
    handlers_.push_back({std::move(name), std::move(fn)});
    return static_cast<HandlerId>(handlers_.size() - 1);
}

EventId Kernel::schedule(SimTime delay, HandlerId handler, Token token) {
    if (!(delay >= 0) || std::isinf(delay)) {
        throw ArgumentError("schedule: delay must be a finite non-negative time, got " +
                            std::to_string(delay));
    }
    if (handler >= handlers_.size()) {
        throw ArgumentError("schedule: unknown handler id " + std::to_string(handler));
    }
    const std::uint64_t seq = next_seq_++;
    queue_.push(Event{now_ + delay, seq, handler, token});
    return seq;
}

EventId Kernel::schedule(SimTime delay, std::function<void()> fn) {
    const std::uint64_t seq = next_seq_;
    EventId id = schedule(delay, kClosureHandler, seq);
    closures_.emplace(seq, std::move(fn));
    return id;
}

SimTime Kernel::run() {
    while (!queue_.empty()) {
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.fire_time;
        if (trace_enabled_) {
            trace_.push_back({ev.fire_time, ev.seq, ev.handler, ev.token});
        }
        // Copy: a handler may register new handlers and reallocate the table.
        auto fn = handlers_[ev.handler].fn;
        fn(ev.token);
    }
    std::vector<DeadlockError::Blocked> blocked;
    for (const auto &t : tasks_) {
        if (t.state != TaskState::Finished) {
            blocked.push_back({t.name, t.reason.empty() ? "an unspecified condition" : t.reason});
        }
    }
    if (!blocked.empty()) {
        throw DeadlockError(std::move(blocked));
    }
    return now_;
}

void Kernel::reset() { reset(seed_); }

void Kernel::reset(std::uint64_t seed) {
    now_ = 0;
    next_seq_ = 0;
    seed_ = seed;
    rng_.seed(seed);
    queue_ = {};
    closures_.clear();
    tasks_.clear();
    trace_.clear();
    install_builtin_handlers();
}

TaskId Kernel::spawn(std::string name, std::function<void()> step) {
    tasks_.push_back(Task{std::move(name), std::move(step), TaskState::Runnable, {}, false});
    const auto id = static_cast<TaskId>(tasks_.size() - 1);
    tasks_[id].resume_pending = true;
    schedule(0, resume_handler_, id);
    return id;
}

void Kernel::block(TaskId id, std::string reason) {
    Task &t = tasks_.at(id);
    if (t.state == TaskState::Finished) {
        throw RuntimeFault("block: task '" + t.name + "' already finished");
    }
    t.state = TaskState::Blocked;
    t.reason = std::move(reason);
}

void Kernel::wake(TaskId id) {
    Task &t = tasks_.at(id);
    if (t.state == TaskState::Finished) {
        throw RuntimeFault("wake: task '" + t.name + "' already finished");
    }
    t.state = TaskState::Runnable;
    t.reason.clear();
    if (!t.resume_pending) {
        t.resume_pending = true;
        schedule(0, resume_handler_, id);
    }
}

void Kernel::finish(TaskId id) {
    Task &t = tasks_.at(id);
    t.state = TaskState::Finished;
    t.reason.clear();
}

TaskState Kernel::task_state(TaskId id) const { return tasks_.at(id).state; }

const std::string &Kernel::task_name(TaskId id) const { return tasks_.at(id).name; }

void Kernel::resume_task(Token id) {
    if (id >= tasks_.size()) {
        return;
    }
    tasks_[id].resume_pending = false;
    if (tasks_[id].state != TaskState::Runnable) {
        return;
    }
    auto step = tasks_[id].step;
    step();
}

} // namespace dqcsim::sim
