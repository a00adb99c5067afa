#pragma once

#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>

namespace ase {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;
using Clock = std::function<Timestamp()>;

/// "2026-01-02T03:04:05.123456Z"
std::string format_timestamp(Timestamp t);
/// Inverse of format_timestamp; throws parse_error on malformed input.
Timestamp parse_timestamp(std::string_view s);

/// Wall clock that never returns the same value twice, so records created in
/// quick succession still order strictly by created_at.
class StrictClock {
public:
    Timestamp now();

private:
    std::mutex mu_;
    Timestamp last_{};
};

Clock system_clock();

/// Random RFC 4122 version-4 UUID string.
std::string new_uuid();

}  // namespace ase
