#include "volharvest/price_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "volharvest/error.hpp"

namespace volharvest {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    if (!parse_number(text.substr(0, 4), y) || !parse_number(text.substr(5, 2), m) ||
        !parse_number(text.substr(8, 2), d))
        return std::nullopt;
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(date.year()), unsigned(date.month()), unsigned(date.day()));
    return buf;
}

std::string format_rate(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::vector<PriceSeries> read_price_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw DataError("price file is empty");
    ++line_no;
    std::string_view header(line);
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    const auto names = split(header, ',');
    if (names.size() < 2 || names.front() != "date")
        throw DataError("header must be 'date' followed by at least one asset column", line_no);

    std::vector<PriceSeries> series;
    std::set<std::string_view> seen;
    for (std::size_t k = 1; k < names.size(); ++k) {
        if (names[k].empty()) throw DataError("empty asset name in header", line_no);
        if (!seen.insert(names[k]).second) throw DataError("duplicate asset '" + std::string(names[k]) + "'", line_no);
        series.push_back({std::string(names[k]), {}});
    }

    std::optional<Date> previous;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != names.size())
            throw DataError("expected " + std::to_string(names.size()) + " fields, found " +
                                std::to_string(fields.size()),
                            line_no);
        const auto date = parse_date(fields[0]);
        if (!date) throw DataError("malformed date '" + std::string(fields[0]) + "'", line_no);
        if (previous && !(*previous < *date)) throw DataError("dates must be strictly increasing", line_no);
        previous = date;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            if (fields[k].empty()) continue;
            double price = 0.0;
            if (!parse_number(fields[k], price))
                throw DataError("malformed price '" + std::string(fields[k]) + "'", line_no);
            if (!(price > 0.0)) throw DataError("price must be positive", line_no);
            series[k - 1].observations.push_back({*date, price});
        }
    }
    return series;
}

std::vector<PriceSeries> read_price_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    try {
        return read_price_csv(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_report_csv(std::ostream& out, const std::vector<BacktestReport>& reports) {
    out << kReportHeader << '\n';
    for (const auto& r : reports) {
        out << r.asset_a << ',' << r.asset_b << ',' << r.n_days << ',' << format_rate(r.ann_return_rebalanced) << ','
            << format_rate(r.ann_return_initial_balanced) << ',' << format_rate(r.ann_differential) << ','
            << format_rate(r.turnover) << ',' << format_rate(r.est_annual_cost_flat) << ','
            << format_rate(r.est_annual_cost_turnover) << '\n';
    }
}

}  // namespace volharvest
