#include "kslab/grid.hpp"

#include "kslab/fft.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kslab {

Grid Grid::periodic(const std::vector<int>& pts, const std::vector<double>& ext)
{
    if (pts.empty() || pts.size() > 3 || pts.size() != ext.size())
        throw std::invalid_argument("grid: need 1..3 matching points/extent entries");
    Grid g;
    g.kind = Kind::Periodic;
    g.dim = int(pts.size());
    for (int a = 0; a < g.dim; ++a) {
        if (pts[std::size_t(a)] < 8) throw std::invalid_argument("grid: points must be >= 8 per axis");
        if (!fft::is_pow2(std::size_t(pts[std::size_t(a)])))
            throw std::invalid_argument("grid: periodic axes need a power-of-two point count");
        if (!(ext[std::size_t(a)] > 0.0)) throw std::invalid_argument("grid: extent must be positive");
        g.points[std::size_t(a)] = pts[std::size_t(a)];
        g.extent[std::size_t(a)] = ext[std::size_t(a)];
    }
    return g;
}

Grid Grid::periodic_centered(const std::vector<int>& pts, const std::vector<double>& ext)
{
    Grid g = periodic(pts, ext);
    for (int a = 0; a < g.dim; ++a) g.origin[std::size_t(a)] = -0.5 * g.extent[std::size_t(a)];
    return g;
}

Grid Grid::interval(int pts, double length, BoundaryKind bc)
{
    if (pts < 8) throw std::invalid_argument("grid: points must be >= 8");
    if (!(length > 0.0)) throw std::invalid_argument("grid: length must be positive");
    if (bc == BoundaryKind::Navier && !fft::is_pow2(std::size_t(pts)))
        throw std::invalid_argument("grid: Navier intervals need a power-of-two point count");
    Grid g;
    g.kind = Kind::Interval;
    g.dim = 1;
    g.points[0] = pts;
    g.extent[0] = length;
    g.bc = bc;
    return g;
}

std::size_t Grid::size() const
{
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= std::size_t(points[std::size_t(a)]);
    return n;
}

double Grid::cell_volume() const
{
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing(a);
    return v;
}

double Grid::volume() const
{
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= extent[std::size_t(a)];
    return v;
}

bool Grid::same_layout(const Grid& o) const
{
    if (kind != o.kind || dim != o.dim) return false;
    for (int a = 0; a < dim; ++a) {
        if (points[std::size_t(a)] != o.points[std::size_t(a)]) return false;
        if (extent[std::size_t(a)] != o.extent[std::size_t(a)]) return false;
    }
    if (kind == Kind::Interval && bc != o.bc) return false;
    return true;
}

std::string Grid::describe() const
{
    std::ostringstream os;
    os << (kind == Kind::Periodic ? "periodic" : "interval") << " dim=" << dim << " points=";
    for (int a = 0; a < dim; ++a) os << (a ? "x" : "") << points[std::size_t(a)];
    os << " extent=";
    for (int a = 0; a < dim; ++a) os << (a ? "x" : "") << extent[std::size_t(a)];
    if (kind == Kind::Interval) os << (bc == BoundaryKind::Navier ? " navier" : " dirichlet");
    return os.str();
}

Field::Field(Grid g, std::vector<double> values)
    : grid_(g), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field: value count must equal grid size");
}

Field Field::zeros(const Grid& g) { return Field(g, std::vector<double>(g.size(), 0.0)); }

Field Field::sample(const Grid& g, const std::function<double(double)>& f)
{
    if (g.dim != 1) throw std::invalid_argument("field: 1d sampler on non-1d grid");
    std::vector<double> v(g.size());
    for (int i = 0; i < g.points[0]; ++i) v[std::size_t(i)] = f(g.coord(0, i));
    return Field(g, std::move(v));
}

Field Field::sample2(const Grid& g, const std::function<double(double, double)>& f)
{
    if (g.dim != 2) throw std::invalid_argument("field: 2d sampler on non-2d grid");
    std::vector<double> v(g.size());
    std::size_t idx = 0;
    for (int i = 0; i < g.points[0]; ++i)
        for (int j = 0; j < g.points[1]; ++j)
            v[idx++] = f(g.coord(0, i), g.coord(1, j));
    return Field(g, std::move(v));
}

Field Field::sample3(const Grid& g, const std::function<double(double, double, double)>& f)
{
    if (g.dim != 3) throw std::invalid_argument("field: 3d sampler on non-3d grid");
    std::vector<double> v(g.size());
    std::size_t idx = 0;
    for (int i = 0; i < g.points[0]; ++i)
        for (int j = 0; j < g.points[1]; ++j)
            for (int k = 0; k < g.points[2]; ++k)
                v[idx++] = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
    return Field(g, std::move(v));
}

bool Field::finite() const
{
    for (double x : values_)
        if (!std::isfinite(x)) return false;
    return true;
}

double Field::sup_norm() const
{
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
}

double Field::mean() const
{
    double s = 0.0;
    for (double x : values_) s += x;
    return s / double(values_.size());
}

Field& Field::operator+=(const Field& o)
{
    if (!grid_.same_layout(o.grid_)) throw std::invalid_argument("field: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& o)
{
    if (!grid_.same_layout(o.grid_)) throw std::invalid_argument("field: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Field& Field::operator*=(double s)
{
    for (double& x : values_) x *= s;
    return *this;
}

std::size_t flat_index(const Grid& g, int i, int j, int k)
{
    const auto& n = g.points;
    switch (g.dim) {
    case 1: return std::size_t(i);
    case 2: return std::size_t(i) * std::size_t(n[1]) + std::size_t(j);
    default:
        return (std::size_t(i) * std::size_t(n[1]) + std::size_t(j)) * std::size_t(n[2]) + std::size_t(k);
    }
}

} // namespace kslab
