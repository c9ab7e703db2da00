#ifndef ATTSIM_GRID_HPP
#define ATTSIM_GRID_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace attsim {

// Rectangular cell grid shared by every map in the network.
struct Grid {
    int width = 40;
    int height = 40;

    int cells() const { return width * height; }
    int index(int x, int y) const { return y * width + x; }
    bool contains(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    friend bool operator==(const Grid&, const Grid&) = default;
};

inline void validate(const Grid& g) {
    if (g.width < 1 || g.height < 1)
        throw std::invalid_argument("grid dimensions must be >= 1");
}

// Flat row-major activity buffer tied to a grid.
class ActivityGrid {
public:
    ActivityGrid() = default;
    explicit ActivityGrid(Grid g, double value = 0.0)
        : grid_(g), v_(static_cast<std::size_t>(g.cells()), value) {
        validate(g);
    }

    const Grid& grid() const { return grid_; }
    double& at(int x, int y) { return v_[grid_.index(x, y)]; }
    double at(int x, int y) const { return v_[grid_.index(x, y)]; }
    double& operator[](int i) { return v_[i]; }
    double operator[](int i) const { return v_[i]; }
    int size() const { return static_cast<int>(v_.size()); }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    void fill(double value) { std::fill(v_.begin(), v_.end(), value); }
    double max() const;

    friend bool operator==(const ActivityGrid&, const ActivityGrid&) = default;

private:
    Grid grid_;
    std::vector<double> v_;
};

// a += s*b, cell-wise; grids must match.
void add_scaled(ActivityGrid& a, const ActivityGrid& b, double s);

// Accumulates amp * exp(-|x - center|^2 / (2 sigma^2)) over the whole grid.
void add_gaussian(ActivityGrid& g, double cx, double cy, double amp, double sigma);

} // namespace attsim

#endif
