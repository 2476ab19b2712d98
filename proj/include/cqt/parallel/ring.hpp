#pragma once

// Worker pool with a ring transport. Each worker runs on its own thread and
// talks to its ring neighbours only through serialized messages.

#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <latch>
#include <memory>
#include <optional>
#include <algorithm>
#include <string>
#include <thread>
#include <vector>

#include "cqt/errors.hpp"
#include "cqt/parallel/channel.hpp"
#include "cqt/parallel/wire.hpp"

namespace cqt::parallel {

struct RingEndpoints {
    std::size_t recvSrc;
    std::size_t sendDst;

    friend bool operator==(const RingEndpoints &, const RingEndpoints &) = default;
};

inline RingEndpoints ring_topology(std::size_t numWorkers, std::size_t workerId) {
    if (numWorkers == 0) throw std::invalid_argument("worker count must be positive");
    if (workerId >= numWorkers) throw std::invalid_argument("worker id out of range");
    return {(workerId + numWorkers - 1) % numWorkers, (workerId + 1) % numWorkers};
}

/// Number of forwarding rounds needed for every worker to see every shard.
inline std::size_t circulation_rounds(std::size_t numWorkers) { return numWorkers == 0 ? 0 : numWorkers - 1; }

struct TransportStats {
    std::uint64_t bytes = 0;
    std::uint64_t messages = 0;
};

class RingTransport {
public:
    RingTransport(std::size_t workers, std::size_t capacity, std::chrono::milliseconds timeout)
        : workers_(workers), timeout_(timeout) {
        inboxes_.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i)
            inboxes_.push_back(std::make_unique<BoundedChannel<std::vector<std::byte>>>(capacity));
    }

    /// Sends to the ring successor of `from`.
    void send(std::size_t from, std::vector<std::byte> bytes) {
        bytes_.fetch_add(bytes.size(), std::memory_order_relaxed);
        messages_.fetch_add(1, std::memory_order_relaxed);
        inboxes_[ring_topology(workers_, from).sendDst]->send(std::move(bytes));
    }

    /// Receives from the ring predecessor of `worker`.
    std::vector<std::byte> receive(std::size_t worker) { return inboxes_[worker]->receive(timeout_); }

    void close_all() {
        for (auto &box : inboxes_) box->close();
    }

    TransportStats stats() const { return {bytes_.load(), messages_.load()}; }

private:
    std::size_t workers_;
    std::chrono::milliseconds timeout_;
    std::vector<std::unique_ptr<BoundedChannel<std::vector<std::byte>>>> inboxes_;
    std::atomic<std::uint64_t> bytes_{0};
    std::atomic<std::uint64_t> messages_{0};
};

/// Wall-clock split per worker, plus max-over-workers aggregates.
struct PhaseTiming {
    std::vector<double> totalSeconds;
    std::vector<double> computeSeconds;
    std::vector<double> messageSeconds;
    double maxTotal = 0.0;
    double maxCompute = 0.0;
    double maxMessage = 0.0;
    double wallSeconds = 0.0;
};

/// What one worker received during one circulation phase.
struct PhaseLog {
    std::string phase;
    std::vector<std::uint32_t> origins;
    std::vector<std::uint32_t> hops;
};

struct ExecutionReport {
    PhaseTiming timing;
    TransportStats transport;
    /// audit[worker] lists that worker's circulation phases in order.
    std::vector<std::vector<PhaseLog>> audit;
};

/// Called before each circulation round as hook(worker, phase, round); may throw.
using RoundHook = std::function<void(std::size_t, const std::string &, std::size_t)>;

class WorkerContext {
public:
    using Clock = std::chrono::steady_clock;

    WorkerContext(std::size_t id, std::size_t workers, RingTransport *transport, const RoundHook *hook)
        : id_(id), workers_(workers), transport_(transport), hook_(hook) {}

    std::size_t id() const noexcept { return id_; }
    std::size_t workers() const noexcept { return workers_; }

    template <typename Fn>
    decltype(auto) compute(Fn &&fn) {
        Timer t(computeSeconds_);
        return fn();
    }

    /// Forwards `own` around the ring for workers-1 rounds; fn(received) runs
    /// on each incoming shard. The buffer sent each round is the one last held.
    template <typename Fn>
    void circulate(const std::string &phase, RingMessage own, Fn &&fn) {
        PhaseLog log{phase, {}, {}};
        RingMessage current = std::move(own);
        current.originId = static_cast<std::uint32_t>(id_);
        current.hopCount = 0;
        for (std::size_t round = 0; round < circulation_rounds(workers_); ++round) {
            if (hook_ && *hook_) (*hook_)(id_, phase, round);
            {
                Timer t(messageSeconds_);
                current.senderId = static_cast<std::uint32_t>(id_);
                ++current.hopCount;
                transport_->send(id_, serialize(current));
                auto bytes = transport_->receive(id_);
                current = deserialize(bytes);
            }
            log.origins.push_back(current.originId);
            log.hops.push_back(current.hopCount);
            compute([&] { fn(static_cast<const RingMessage &>(current)); });
        }
        audit_.push_back(std::move(log));
    }

    double compute_seconds() const noexcept { return computeSeconds_; }
    double message_seconds() const noexcept { return messageSeconds_; }
    std::vector<PhaseLog> take_audit() { return std::move(audit_); }

private:
    struct Timer {
        explicit Timer(double &sink) : sink_(sink), start_(Clock::now()) {}
        ~Timer() { sink_ += std::chrono::duration<double>(Clock::now() - start_).count(); }
        double &sink_;
        Clock::time_point start_;
    };

    std::size_t id_;
    std::size_t workers_;
    RingTransport *transport_;
    const RoundHook *hook_;
    double computeSeconds_ = 0.0;
    double messageSeconds_ = 0.0;
    std::vector<PhaseLog> audit_;
};

/// Runs `workers` threads. Each calls setup(id) (untimed), waits for all the
/// others, then runs work(state, ctx) under the clock. Partial results come
/// back in worker-id order. Any worker failure closes the transport and the
/// whole run throws WorkerFailure; no partial results are returned.
template <typename Setup, typename Work>
auto run_workers(std::size_t workers, RingTransport *transport, const RoundHook *hook, Setup &&setup, Work &&work,
                 ExecutionReport &report) {
    using State = decltype(setup(std::size_t{0}));
    using Partial = decltype(work(std::declval<State &>(), std::declval<WorkerContext &>()));
    using Clock = std::chrono::steady_clock;

    std::vector<Partial> partials(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<double> totals(workers, 0.0), computes(workers, 0.0), messages(workers, 0.0);
    std::vector<std::vector<PhaseLog>> audits(workers);
    std::latch ready(static_cast<std::ptrdiff_t>(workers + 1));

    auto fail = [&](std::size_t p) {
        errors[p] = std::current_exception();
        if (transport) transport->close_all();
    };

    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (std::size_t p = 0; p < workers; ++p) {
            threads.emplace_back([&, p] {
                std::optional<State> state;
                try {
                    state.emplace(setup(p));
                } catch (...) {
                    fail(p);
                }
                ready.arrive_and_wait();
                if (!state) return;
                WorkerContext ctx(p, workers, transport, hook);
                const auto start = Clock::now();
                try {
                    partials[p] = work(*state, ctx);
                } catch (...) {
                    fail(p);
                }
                totals[p] = std::chrono::duration<double>(Clock::now() - start).count();
                computes[p] = ctx.compute_seconds();
                messages[p] = ctx.message_seconds();
                audits[p] = ctx.take_audit();
            });
        }
        ready.arrive_and_wait();
        const auto start = Clock::now();
        threads.clear();
        report.timing.wallSeconds = std::chrono::duration<double>(Clock::now() - start).count();
    }

    // Report the root cause rather than the ChannelClosed it triggered elsewhere.
    std::size_t culprit = workers;
    for (std::size_t p = 0; p < workers; ++p) {
        if (!errors[p]) continue;
        bool secondary = false;
        try {
            std::rethrow_exception(errors[p]);
        } catch (const ChannelClosed &) {
            secondary = true;
        } catch (...) {
        }
        if (!secondary) {
            culprit = p;
            break;
        }
        if (culprit == workers) culprit = p;
    }
    if (culprit != workers) {
        try {
            std::rethrow_exception(errors[culprit]);
        } catch (const std::exception &e) {
            throw WorkerFailure(culprit, e.what());
        } catch (...) {
            throw WorkerFailure(culprit, "unknown error");
        }
    }

    auto &t = report.timing;
    t.totalSeconds = std::move(totals);
    t.computeSeconds = std::move(computes);
    t.messageSeconds = std::move(messages);
    for (std::size_t p = 0; p < workers; ++p) {
        t.maxTotal = std::max(t.maxTotal, t.totalSeconds[p]);
        t.maxCompute = std::max(t.maxCompute, t.computeSeconds[p]);
        t.maxMessage = std::max(t.maxMessage, t.messageSeconds[p]);
    }
    if (transport) report.transport = transport->stats();
    report.audit = std::move(audits);
    return partials;
}

} // namespace cqt::parallel
