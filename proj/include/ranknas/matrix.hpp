#pragma once

#include <cstddef>
#include <vector>

namespace ranknas {

/// Dense row-major matrix of doubles. 64-bit floats throughout so the
/// finite-difference gradient checks stay tight.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }

    size_t size() const { return data.size(); }
    bool operator==(const Matrix&) const = default;
};

} // namespace ranknas
