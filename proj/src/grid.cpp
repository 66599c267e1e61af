#include "hj/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hj {

namespace {

void check(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("grid: " + what);
}

}  // namespace

void Grid1D::validate() const {
    check(std::isfinite(a) && std::isfinite(b) && b > a, "need finite b > a");
    check(n_x >= 1, "need n_x >= 1");
    check(std::isfinite(T) && T > 0.0, "need finite T > 0");
    check(n_t >= 2, "need n_t >= 2");
    check(std::isfinite(t0), "need finite t0");
}

void Grid2D::validate() const {
    check(std::isfinite(a1) && std::isfinite(b1) && b1 > a1, "need finite b1 > a1");
    check(std::isfinite(a2) && std::isfinite(b2) && b2 > a2, "need finite b2 > a2");
    check(n_x >= 1 && n_y >= 1, "need n_x, n_y >= 1");
    check(std::isfinite(T) && T > 0.0, "need finite T > 0");
    check(n_t >= 2, "need n_t >= 2");
    check(std::isfinite(t0), "need finite t0");
}

std::vector<double> sample_initial(const Grid1D& g, const std::function<double(double)>& g0) {
    std::vector<double> out(g.n_x);
    for (int i = 0; i < g.n_x; ++i) out[i] = g0(g.x(i));
    return out;
}

std::vector<double> sample_initial(const Grid2D& g, const std::function<double(double, double)>& g0) {
    std::vector<double> out((size_t)g.n_x * g.n_y);
    for (int j = 0; j < g.n_y; ++j)
        for (int i = 0; i < g.n_x; ++i) out[(size_t)j * g.n_x + i] = g0(g.x(i), g.y(j));
    return out;
}

}  // namespace hj
