#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace secgate {

/// Time source for the whole pipeline. Everything downstream works in Unix
/// microseconds; second-granularity callers divide.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_us() const = 0;
    std::int64_t now_s() const { return now_us() / 1'000'000; }
};

class SystemClock final : public Clock {
public:
    std::int64_t now_us() const override {
        return std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }
};

/// Manually driven clock for deterministic tests and harness runs.
class SimClock final : public Clock {
public:
    explicit SimClock(std::int64_t start_us = 0) : t_us_(start_us) {}

    std::int64_t now_us() const override { return t_us_.load(std::memory_order_relaxed); }

    void advance_us(std::int64_t delta) { t_us_.fetch_add(delta, std::memory_order_relaxed); }
    void advance_s(std::int64_t delta) { advance_us(delta * 1'000'000); }
    void set_us(std::int64_t t) { t_us_.store(t, std::memory_order_relaxed); }
    void set_s(std::int64_t t) { set_us(t * 1'000'000); }

private:
    std::atomic<std::int64_t> t_us_;
};

}  // namespace secgate
