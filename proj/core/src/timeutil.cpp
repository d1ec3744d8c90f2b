#include "supplyrank/timeutil.hpp"

#include "supplyrank/error.hpp"

#include <fmt/format.h>

#include <charconv>

namespace supplyrank {

namespace {

bool read_fixed(std::string_view text, std::size_t pos, std::size_t width, int& out)
{
    if (pos + width > text.size()) {
        return false;
    }
    const char* first = text.data() + pos;
    const char* last = first + width;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

[[noreturn]] void bad_timestamp(std::string_view text)
{
    throw Error(ErrorKind::parse, fmt::format("invalid UTC timestamp '{}'", text));
}

} // namespace

Timestamp parse_utc(std::string_view text)
{
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!read_fixed(text, 0, 4, y) || text.size() < 10 || text[4] != '-' || text[7] != '-' ||
        !read_fixed(text, 5, 2, mo) || !read_fixed(text, 8, 2, d)) {
        bad_timestamp(text);
    }
    if (text.size() > 10) {
        const char sep = text[10];
        if ((sep != 'T' && sep != ' ') || text.size() < 19 || text[13] != ':' || text[16] != ':' ||
            !read_fixed(text, 11, 2, h) || !read_fixed(text, 14, 2, mi) || !read_fixed(text, 17, 2, s)) {
            bad_timestamp(text);
        }
        const std::string_view rest = text.substr(19);
        if (!(rest.empty() || rest == "Z" || rest == "+00:00")) {
            bad_timestamp(text);
        }
        if (h > 23 || mi > 59 || s > 60) {
            bad_timestamp(text);
        }
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        bad_timestamp(text);
    }
    return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} +
           std::chrono::seconds{s};
}

std::string format_utc(Timestamp t)
{
    const auto day = std::chrono::floor<std::chrono::days>(t);
    const std::chrono::year_month_day ymd{day};
    const std::chrono::hh_mm_ss hms{t - day};
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                       hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

std::string format_date(Timestamp t)
{
    const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(t)};
    return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                       static_cast<unsigned>(ymd.day()));
}

Timestamp now_utc()
{
    return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

Timestamp today_utc()
{
    return std::chrono::floor<std::chrono::days>(now_utc());
}

} // namespace supplyrank
