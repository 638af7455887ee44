#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace kslab {

enum class BoundaryKind { Dirichlet, Navier };

// Discrete domain descriptor. Periodic boxes sample x_j = origin + j*h with
// h = extent/points on each axis. Interval grids are one-dimensional over
// (0, L); samples sit at x_i = i*L/points for i = 0..points-1, so the left
// boundary node is stored (its value is pinned to 0 by both BC kinds) and the
// right one is not.
struct Grid {
    enum class Kind { Periodic, Interval };

    Kind kind = Kind::Periodic;
    int dim = 1;
    std::array<int, 3> points{{1, 1, 1}};
    std::array<double, 3> extent{{0.0, 0.0, 0.0}};
    std::array<double, 3> origin{{0.0, 0.0, 0.0}};
    BoundaryKind bc = BoundaryKind::Navier; // Interval grids only

    static Grid periodic(const std::vector<int>& pts, const std::vector<double>& ext);
    // Periodic box [-ext/2, ext/2)^dim, used for kernel profiles and rescaling.
    static Grid periodic_centered(const std::vector<int>& pts, const std::vector<double>& ext);
    static Grid interval(int pts, double length, BoundaryKind bc);

    std::size_t size() const;
    double spacing(int axis) const { return extent[std::size_t(axis)] / points[std::size_t(axis)]; }
    double coord(int axis, int i) const { return origin[std::size_t(axis)] + i * spacing(axis); }
    double cell_volume() const;
    double volume() const;

    // Layout equality: what checkpoints and snapshots compare (origin is a
    // presentation offset and does not participate).
    bool same_layout(const Grid& o) const;

    std::string describe() const;
};

// Sampled real scalar state on a Grid. Immutable-by-convention value type:
// operations return fresh Fields.
class Field {
public:
    Field() = default;
    Field(Grid g, std::vector<double> values);

    static Field zeros(const Grid& g);
    static Field sample(const Grid& g, const std::function<double(double)>& f);
    static Field sample2(const Grid& g, const std::function<double(double, double)>& f);
    static Field sample3(const Grid& g, const std::function<double(double, double, double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool finite() const;
    double sup_norm() const;
    double mean() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, double s) { return a *= s; }
    friend Field operator*(double s, Field a) { return a *= s; }

private:
    Grid grid_;
    std::vector<double> values_;
};

using VectorField = std::vector<Field>;

std::size_t flat_index(const Grid& g, int i, int j = 0, int k = 0);

} // namespace kslab
