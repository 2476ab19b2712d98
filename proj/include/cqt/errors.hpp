#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cqt {

/// Malformed input text. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A node listed in more than one community.
class OverlapError : public std::runtime_error {
public:
    explicit OverlapError(std::uint64_t node)
        : std::runtime_error("node " + std::to_string(node) + " appears in more than one community"),
          node_(node) {}

    std::uint64_t node() const noexcept { return node_; }

private:
    std::uint64_t node_;
};

class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A metric whose formula is 0/0 for the given input and for which no convention applies.
class DegenerateMetric : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A parallel run aborted because one of its workers failed or timed out.
class WorkerFailure : public std::runtime_error {
public:
    WorkerFailure(std::size_t worker, const std::string &what)
        : std::runtime_error("worker " + std::to_string(worker) + ": " + what), worker_(worker) {}

    std::size_t worker() const noexcept { return worker_; }

private:
    std::size_t worker_;
};

} // namespace cqt
