#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>

namespace cqt::parallel {

class ChannelClosed : public std::runtime_error {
public:
    ChannelClosed() : std::runtime_error("channel closed") {}
};

class ChannelTimeout : public std::runtime_error {
public:
    ChannelTimeout() : std::runtime_error("timed out waiting for a message") {}
};

/// Multi-producer multi-consumer FIFO with a fixed capacity. send() blocks
/// while full, receive() while empty; close() wakes everyone with ChannelClosed.
template <typename T>
class BoundedChannel {
public:
    explicit BoundedChannel(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw std::invalid_argument("channel capacity must be at least 1");
    }

    void send(T value) {
        std::unique_lock lock(mutex_);
        notFull_.wait(lock, [&] { return closed_ || queue_.size() < capacity_; });
        if (closed_) throw ChannelClosed();
        queue_.push_back(std::move(value));
        notEmpty_.notify_one();
    }

    /// A zero timeout waits indefinitely.
    T receive(std::chrono::milliseconds timeout = std::chrono::milliseconds::zero()) {
        std::unique_lock lock(mutex_);
        auto ready = [&] { return closed_ || !queue_.empty(); };
        if (timeout.count() > 0) {
            if (!notEmpty_.wait_for(lock, timeout, ready)) throw ChannelTimeout();
        } else {
            notEmpty_.wait(lock, ready);
        }
        if (queue_.empty()) throw ChannelClosed();
        T value = std::move(queue_.front());
        queue_.pop_front();
        notFull_.notify_one();
        return value;
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        notFull_.notify_all();
        notEmpty_.notify_all();
    }

    std::size_t capacity() const noexcept { return capacity_; }

private:
    std::size_t capacity_;
    std::mutex mutex_;
    std::condition_variable notFull_;
    std::condition_variable notEmpty_;
    std::deque<T> queue_;
    bool closed_ = false;
};

} // namespace cqt::parallel
