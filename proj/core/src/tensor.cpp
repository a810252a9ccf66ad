#include "teeshield/tensor.hpp"

#include <cmath>
#include <sstream>

#include "teeshield/errors.hpp"

namespace teeshield {

size_t shape_numel(const std::vector<size_t>& shape) {
    size_t n = 1;
    for (size_t d : shape) n *= d;
    return shape.empty() ? 0 : n;
}

std::string shape_str(const std::vector<size_t>& shape) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ",";
        os << shape[i];
    }
    os << "]";
    return os.str();
}

Tensor::Tensor(std::vector<size_t> shape)
    : shape_(std::move(shape)), data_(shape_numel(shape_), 0.0) {
    for (size_t d : shape_) {
        if (d == 0) throw ValidationError("tensor dimension must be positive, got shape " + shape_str(shape_));
    }
}

Tensor::Tensor(std::vector<size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    for (size_t d : shape_) {
        if (d == 0) throw ValidationError("tensor dimension must be positive, got shape " + shape_str(shape_));
    }
    if (shape_numel(shape_) != data_.size()) {
        throw ValidationError("tensor data length " + std::to_string(data_.size()) +
                              " does not match shape " + shape_str(shape_));
    }
    check_finite("construction");
}

Tensor Tensor::reshaped(std::vector<size_t> shape) const {
    if (shape_numel(shape) != numel()) {
        throw ValidationError("reshape " + shape_str(shape_) + " -> " + shape_str(shape) +
                              " changes element count");
    }
    Tensor out;
    out.shape_ = std::move(shape);
    out.data_ = data_;
    return out;
}

void Tensor::check_finite(const char* context) const {
    for (size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            throw NumericError(std::string("non-finite value in tensor (") + context +
                               ") at flat index " + std::to_string(i));
        }
    }
}

Tensor zeros_like(const Tensor& t) { return Tensor(t.shape()); }

void axpy(double a, const Tensor& x, Tensor& y) {
    if (!x.same_shape(y)) throw ValidationError("axpy shape mismatch");
    for (size_t i = 0; i < x.numel(); ++i) y[i] += a * x[i];
}

double dot(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw ValidationError("dot shape mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.numel(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(const Tensor& t) {
    double m = 0.0;
    for (size_t i = 0; i < t.numel(); ++i) m = std::max(m, std::fabs(t[i]));
    return m;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw ValidationError("max_abs_diff shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.numel(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

double max_rel_diff(const Tensor& a, const Tensor& b, double floor) {
    if (!a.same_shape(b)) throw ValidationError("max_rel_diff shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.numel(); ++i) {
        const double denom = std::max({std::fabs(a[i]), std::fabs(b[i]), floor});
        m = std::max(m, std::fabs(a[i] - b[i]) / denom);
    }
    return m;
}

}  // namespace teeshield
