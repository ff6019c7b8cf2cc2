#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sesf/core.hpp"

namespace sesf {

struct GallerySystem;

/// Parameters of a sample grid. All fields have the documented defaults.
struct GridSpec {
    double horizon = 200.0;
    /// Log-spaced times in [log_min, horizon].
    int log_points = 96;
    double log_min = 0.01;
    /// Uniform times 0, step, 2 step, ... up to horizon; 0 disables.
    double uniform_step = 2.0;
    /// Pair selection: 0 keeps every s <= t; otherwise only t - s <= band.
    double band = 0.0;
    std::vector<double> extra_t;
    /// Pairs added verbatim (t >= s >= 0, t <= horizon).
    std::vector<std::pair<double, double>> explicit_pairs;
    std::vector<double> x_samples{0.0};
    /// Random unit directions added to the axis vectors for matrix cocycles.
    int random_directions = 16;
    unsigned long long seed = 0;
};

struct SamplePair {
    double t = 0.0;
    double s = 0.0;
};

/// A contiguous run of pairs sharing one s, ordered by increasing t.
struct SGroup {
    double s = 0.0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// A finite, deterministic set of (t, s) pairs plus base points and unit directions.
class SampleGrid {
public:
    SampleGrid(const GridSpec& spec, std::size_t dim);

    const std::vector<double>& t_values() const noexcept { return t_values_; }
    /// Sorted by (s, t).
    const std::vector<SamplePair>& pairs() const noexcept { return pairs_; }
    const std::vector<SGroup>& groups() const noexcept { return groups_; }
    const std::vector<double>& x_samples() const noexcept { return x_samples_; }
    const std::vector<StateVector>& v_samples() const noexcept { return v_samples_; }
    double horizon() const noexcept { return horizon_; }
    const GridSpec& spec() const noexcept { return spec_; }

private:
    GridSpec spec_;
    double horizon_;
    std::vector<double> t_values_;
    std::vector<SamplePair> pairs_;
    std::vector<SGroup> groups_;
    std::vector<double> x_samples_;
    std::vector<StateVector> v_samples_;
};

/// Axis vectors followed by `random_directions` seeded random unit vectors (scalar: the single vector {1}).
std::vector<StateVector> unit_directions(std::size_t dim, int random_directions, unsigned long long seed);

/// Grid for a gallery system: the base spec plus the system's witness family (both its t and s values
/// join the time list, and its pairs are added explicitly).
SampleGrid default_grid(const GallerySystem& g, GridSpec base = {});

}  // namespace sesf
