#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace teeshield {

size_t shape_numel(const std::vector<size_t>& shape);
std::string shape_str(const std::vector<size_t>& shape);

// Dense row-major tensor of 64-bit reals. Construction from data rejects
// NaN/Inf; ops re-check their outputs in debug builds.
class Tensor {
public:
    Tensor() = default;

    // Zero-filled tensor of the given shape.
    explicit Tensor(std::vector<size_t> shape);

    // Validated: product(shape) == data.size(), all elements finite.
    Tensor(std::vector<size_t> shape, std::vector<double> data);

    static Tensor scalar(double v) { return Tensor({1}, {v}); }

    const std::vector<size_t>& shape() const { return shape_; }
    size_t rank() const { return shape_.size(); }
    size_t numel() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](size_t i) { return data_[i]; }
    double operator[](size_t i) const { return data_[i]; }

    // Dimension accessor with bounds intent: shape()[d].
    size_t dim(size_t d) const { return shape_[d]; }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
    bool bitwise_equal(const Tensor& o) const {
        return shape_ == o.shape_ && data_ == o.data_;
    }

    // Returns a reshaped view-copy; numel must match.
    Tensor reshaped(std::vector<size_t> shape) const;

    // Throws NumericError naming `context` if any element is NaN/Inf.
    void check_finite(const char* context) const;

private:
    std::vector<size_t> shape_;
    std::vector<double> data_;
};

Tensor zeros_like(const Tensor& t);

// Elementwise helpers used across modules.
void axpy(double a, const Tensor& x, Tensor& y);  // y += a*x
double dot(const Tensor& a, const Tensor& b);
double max_abs(const Tensor& t);
double max_abs_diff(const Tensor& a, const Tensor& b);

// max |a-b| / max(|a|, |b|, floor) over all elements.
double max_rel_diff(const Tensor& a, const Tensor& b, double floor = 1e-4);

}  // namespace teeshield
