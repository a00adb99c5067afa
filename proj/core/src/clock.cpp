#include "ase/clock.hpp"

#include <array>
#include <cstdio>
#include <memory>
#include <random>

#include "ase/error.hpp"

namespace ase {

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02ld:%02ld:%02ld.%06ldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long>(hms.hours().count()),
                  static_cast<long>(hms.minutes().count()), static_cast<long>(hms.seconds().count()),
                  static_cast<long>(hms.subseconds().count()));
    return buf.data();
}

Timestamp parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    long us = 0;
    const std::string str(s);
    if (std::sscanf(str.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u.%6ldZ", &y, &mo, &d, &h, &mi, &sec, &us) != 7) {
        throw Error(ErrorCode::parse_error, "malformed timestamp '" + str + "'");
    }
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) {
        throw Error(ErrorCode::parse_error, "invalid timestamp '" + str + "'");
    }
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} + microseconds{us};
}

Timestamp StrictClock::now() {
    const auto t = std::chrono::time_point_cast<std::chrono::microseconds>(
        std::chrono::system_clock::now());
    std::lock_guard lock(mu_);
    last_ = t > last_ ? t : last_ + std::chrono::microseconds{1};
    return last_;
}

Clock system_clock() {
    auto clock = std::make_shared<StrictClock>();
    return [clock] { return clock->now(); };
}

std::string new_uuid() {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    const std::uint64_t hi = (rng() & 0xFFFFFFFFFFFF0FFFULL) | 0x0000000000004000ULL;
    const std::uint64_t lo = (rng() & 0x3FFFFFFFFFFFFFFFULL) | 0x8000000000000000ULL;
    std::array<char, 37> buf{};
    std::snprintf(buf.data(), buf.size(), "%08x-%04x-%04x-%04x-%012llx",
                  static_cast<unsigned>(hi >> 32), static_cast<unsigned>((hi >> 16) & 0xFFFF),
                  static_cast<unsigned>(hi & 0xFFFF), static_cast<unsigned>(lo >> 48),
                  static_cast<unsigned long long>(lo & 0xFFFFFFFFFFFFULL));
    return buf.data();
}

}  // namespace ase
