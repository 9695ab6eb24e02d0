#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace fdde::testing {

// Random expression built together with its text and its value at (x, xd).
// The text is fully parenthesised, so the value follows directly from the
// construction and does not depend on the parser under test.
struct Generated {
    std::string text;
    double value;
};

inline std::string shortest(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

class ExpressionGenerator {
public:
    ExpressionGenerator(std::uint64_t seed, double x, double xd) : rng_(seed), x_(x), xd_(xd) {}

    Generated make(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
        switch (pick(rng_)) {
        case 0: {
            static const double numbers[] = {0.0, 1.0, 2.0, 0.5, 3.25, 10.9, 1e-3, 4e5, 9.03, 0.1};
            std::uniform_int_distribution<int> n(0, 9);
            const double v = numbers[n(rng_)];
            return {shortest(v), v};
        }
        case 1: return {"x", x_};
        case 2: return {"xd", xd_};
        case 3: {
            auto o = make(depth - 1);
            return {"(-" + o.text + ")", -o.value};
        }
        case 4: {
            auto b = make(depth - 1);
            std::uniform_int_distribution<unsigned> e(1, 4);
            const unsigned k = e(rng_);
            double v = b.value;
            for (unsigned i = 1; i < k; ++i) v *= b.value;
            return {"(" + b.text + ")^" + std::to_string(k), v};
        }
        default: {
            auto l = make(depth - 1);
            auto r = make(depth - 1);
            std::uniform_int_distribution<int> op(0, 3);
            switch (op(rng_)) {
            case 0: return {"(" + l.text + " + " + r.text + ")", l.value + r.value};
            case 1: return {"(" + l.text + " - " + r.text + ")", l.value - r.value};
            case 2: return {"(" + l.text + "*" + r.text + ")", l.value * r.value};
            default: return {"(" + l.text + "/" + r.text + ")", l.value / r.value};
            }
        }
        }
    }

private:
    std::mt19937_64 rng_;
    double x_;
    double xd_;
};

inline bool same_bits(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

} // namespace fdde::testing
