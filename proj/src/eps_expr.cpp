#include "germnorm/eps_expr.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <vector>

#include "germnorm/errors.hpp"

namespace germnorm {

namespace {

std::string strip_spaces(const std::string& text) {
    std::string out;
    std::copy_if(text.begin(), text.end(), std::back_inserter(out),
                 [](unsigned char ch) { return !std::isspace(ch); });
    return out;
}

double parse_number(const std::string& token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || token.empty()) {
        throw InputError("eps: cannot parse '" + token + "' as a number");
    }
    return v;
}

} // namespace

EpsSequence<double> parse_eps(const std::string& text, std::size_t count) {
    const std::string expr = strip_spaces(text);
    if (expr.empty()) {
        throw InputError("eps: empty expression");
    }
    count = std::max<std::size_t>(count, 1);
    std::vector<double> logs(count);
    auto fill = [&](auto&& log_eps) {
        for (std::size_t k = 1; k <= count; ++k) {
            logs[k - 1] = log_eps(static_cast<double>(k));
        }
        return EpsSequence<double>::from_log_values(std::move(logs));
    };
    if (expr == "1/k") {
        return fill([](double k) { return -std::log(k); });
    }
    if (expr == "1/k^2") {
        return fill([](double k) { return -2.0 * std::log(k); });
    }
    if (expr == "2^-k") {
        return fill([](double k) { return -k * std::log(2.0); });
    }
    if (expr == "10^-k") {
        return fill([](double k) { return -k * std::log(10.0); });
    }

    std::vector<double> values;
    std::size_t start = 0;
    while (start <= expr.size()) {
        const std::size_t comma = expr.find(',', start);
        const std::size_t end = comma == std::string::npos ? expr.size() : comma;
        values.push_back(parse_number(expr.substr(start, end - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return EpsSequence<double>::from_values(values);
}

} // namespace germnorm
