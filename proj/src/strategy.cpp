#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "volharvest/error.hpp"
#include "volharvest/simulation.hpp"

namespace volharvest {

void StrategySpec::validate() const {
    switch (kind) {
        case Kind::balanced:
        case Kind::initial_balanced:
            if (!(theta >= 0.0 && theta <= 1.0)) throw PreconditionError("strategy weight theta must lie in [0,1]");
            break;
        case Kind::imbalanced:
            if (asset != 1 && asset != 2) throw PreconditionError("imbalanced strategy must hold asset 1 or 2");
            break;
    }
}

std::string StrategySpec::name() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::balanced: os << "balanced(" << theta << ")"; break;
        case Kind::imbalanced: os << "imbalanced(" << asset << ")"; break;
        case Kind::initial_balanced: os << "initial_balanced(" << theta << ")"; break;
    }
    return os.str();
}

StrategySpec StrategySpec::parse(const std::string& text) {
    std::string head = text;
    std::string arg;
    if (auto colon = text.find(':'); colon != std::string::npos) {
        head = text.substr(0, colon);
        arg = text.substr(colon + 1);
    }
    std::replace(head.begin(), head.end(), '_', '-');
    std::transform(head.begin(), head.end(), head.begin(), [](unsigned char c) { return std::tolower(c); });

    auto number = [&](double fallback) {
        if (arg.empty()) return fallback;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
        if (ec != std::errc{} || ptr != arg.data() + arg.size())
            throw PreconditionError("bad strategy argument in '" + text + "'");
        return value;
    };

    StrategySpec spec;
    if (head == "balanced") {
        spec = balanced(number(0.5));
    } else if (head == "imbalanced") {
        const double a = number(1.0);
        spec = imbalanced(a == 2.0 ? 2 : (a == 1.0 ? 1 : 0));
    } else if (head == "initial-balanced") {
        spec = initial_balanced(number(0.5));
    } else {
        throw PreconditionError("unknown strategy '" + text + "'");
    }
    spec.validate();
    return spec;
}

std::int64_t market_steps(const Market& market) {
    return std::visit([](const auto& m) { return m.steps; }, market);
}

void validate_market(const Market& market) {
    std::visit([](const auto& m) { m.validate(); }, market);
}

}  // namespace volharvest
