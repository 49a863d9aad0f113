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

#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "dqcsim/errors.hpp"
#include "dqcsim/sim/kernel.hpp"

using namespace dqcsim;
using sim::Kernel;

TEST_CASE("empty kernel returns zero", "[sim]") {
    Kernel k;
    CHECK(k.now() == 0);
    CHECK(k.run() == 0);
}

TEST_CASE("single event sets the final clock", "[sim]") {
    Kernel k;
    double seen = -1;
    k.schedule(7, [&] { seen = k.now(); });
    k.schedule(10, [] {});
    CHECK(k.run() == 10);
    CHECK(seen == 7);
}

TEST_CASE("zero delay fires before later events", "[sim]") {
    Kernel k;
    std::vector<int> order;
    k.schedule(3, [&] { order.push_back(2); });
    k.schedule(0, [&] { order.push_back(1); });
    k.run();
    CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("ties fire in insertion order", "[sim]") {
    Kernel k;
    std::vector<int> order;
    for (int i = 0; i < 20; ++i) {
        k.schedule(5, [&, i] { order.push_back(i); });
    }
    k.run();
    for (int i = 0; i < 20; ++i) {
        CHECK(order[i] == i);
    }
}

TEST_CASE("fractional delay is stored exactly", "[sim]") {
    Kernel k;
    const double d = 1e9 / 182;
    k.schedule(d, [] {});
    CHECK(k.run() == d);
    CHECK(k.now() == Catch::Approx(5494505.4945).margin(1e-4));
}

TEST_CASE("negative or non-finite delay is rejected", "[sim]") {
    Kernel k;
    CHECK_THROWS_AS(k.schedule(-1, [] {}), ArgumentError);
    CHECK_THROWS_AS(k.schedule(std::nan(""), [] {}), ArgumentError);
    CHECK_THROWS_AS(k.schedule(INFINITY, [] {}), ArgumentError);
}

TEST_CASE("trace is ordered by (time, seq) and the clock never decreases", "[sim]") {
    Kernel k(3);
    auto h = k.register_handler("noop", [](sim::Token) {});
    for (int i = 0; i < 200; ++i) {
        k.schedule(static_cast<double>(k.rng().below(50)), h, static_cast<sim::Token>(i));
    }
    // Handlers scheduling further events during the run.
    k.schedule(10, [&] {
        for (int i = 0; i < 10; ++i) {
            k.schedule(static_cast<double>(k.rng().below(5)), h, 1000);
        }
    });
    k.run();
    const auto &tr = k.trace();
    REQUIRE(tr.size() == 211);
    for (std::size_t i = 1; i < tr.size(); ++i) {
        CHECK(tr[i - 1].time <= tr[i].time);
        if (tr[i - 1].time == tr[i].time) {
            CHECK(tr[i - 1].seq < tr[i].seq);
        }
    }
}

namespace {
std::vector<sim::TraceEntry> replay(Kernel &k) {
    auto h = k.register_handler("noop", [](sim::Token) {});
    for (int i = 0; i < 50; ++i) {
        k.schedule(k.rng().uniform() * 100, h, k.rng().next());
    }
    k.run();
    return k.trace();
}
} // namespace

TEST_CASE("reset restores the clock and the random stream", "[sim]") {
    Kernel k(42);
    const auto first = replay(k);
    CHECK(k.now() > 0);
    k.reset();
    CHECK(k.now() == 0);
    CHECK(k.pending_events() == 0);
    CHECK(k.trace().empty());
    const auto second = replay(k);
    CHECK(first == second);
    k.reset(43);
    CHECK(replay(k) != first);
}

TEST_CASE("cooperative tasks block and wake", "[sim]") {
    Kernel k;
    int steps = 0;
    sim::TaskId t = 0;
    t = k.spawn("worker", [&] {
        ++steps;
        if (steps == 1) {
            k.block(t, "signal");
        } else {
            k.finish(t);
        }
    });
    k.schedule(4, [&] { k.wake(t); });
    CHECK(k.run() == 4);
    CHECK(steps == 2);
    CHECK(k.task_state(t) == sim::TaskState::Finished);
}

TEST_CASE("all tasks blocked on an empty queue is a deadlock naming each", "[sim]") {
    Kernel k;
    sim::TaskId a = 0, b = 0;
    a = k.spawn("alpha", [&] { k.block(a, "message from beta"); });
    b = k.spawn("beta", [&] { k.block(b, "message from alpha"); });
    try {
        k.run();
        FAIL("expected deadlock");
    } catch (const sim::DeadlockError &e) {
        REQUIRE(e.blocked().size() == 2);
        const std::string what = e.what();
        CHECK(what.find("alpha") != std::string::npos);
        CHECK(what.find("beta") != std::string::npos);
        CHECK(what.find("message from beta") != std::string::npos);
    }
}
