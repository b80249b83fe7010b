#include "tsplate/moments.hpp"

#include <cmath>

namespace tsplate {

double PeriodicField::operator()(const Vec2& y) const {
    const double s = (y[0] - std::floor(y[0])) * n, t = (y[1] - std::floor(y[1])) * n;
    int i = static_cast<int>(std::floor(s)), j = static_cast<int>(std::floor(t));
    const double fs = s - i, ft = t - j;
    auto at = [&](int a, int b) {
        a %= n;
        b %= n;
        if (a < 0) a += n;
        if (b < 0) b += n;
        return values[a + n * b];
    };
    return (1 - fs) * (1 - ft) * at(i, j) + fs * (1 - ft) * at(i + 1, j) + (1 - fs) * ft * at(i, j + 1) +
           fs * ft * at(i + 1, j + 1);
}

double periodic_sample(const PeriodicField& f, double eps, const Vec2& x) {
    if (!(eps > 0)) throw std::invalid_argument("periodic_sample: eps must be positive");
    return f(x / eps);
}

Vec2 unfold_point(const Vec2& x, const Vec2& y, double eps) {
    // the small shift keeps points that sit on a cell face inside the cell they belong to
    const Vec2 c(std::floor(x[0] / eps + 1e-12), std::floor(x[1] / eps + 1e-12));
    return eps * (c + y);
}

}  // namespace tsplate
