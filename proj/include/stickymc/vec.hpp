// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>

#include "stickymc/errors.hpp"

namespace stickymc {

/// Hard cap on the spatial dimension. Chain states are stored inline and
/// copied by value in the per-step hot loop, so the cap keeps every state
/// allocation-free. Raise and recompile if a higher-dimensional domain is
/// ever needed.
inline constexpr int kMaxDim = 4;

/// Fixed-capacity vector with a runtime dimension d <= kMaxDim.
class Vec {
public:
    Vec() = default;

    Vec(std::initializer_list<double> init) {
        if (init.size() == 0 || init.size() > static_cast<std::size_t>(kMaxDim)) {
            throw contract_error("Vec: dimension must be in [1, " +
                                 std::to_string(kMaxDim) + "]");
        }
        n_ = static_cast<int>(init.size());
        int i = 0;
        for (double v : init) data_[i++] = v;
    }

    static Vec zeros(int dim) {
        check_dim(dim);
        Vec v;
        v.n_ = dim;
        v.data_.fill(0.0);
        return v;
    }

    int dim() const { return n_; }

    double operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return data_[static_cast<std::size_t>(i)]; }

    Vec operator+(const Vec& r) const {
        Vec out = *this;
        for (int i = 0; i < n_; ++i) out.data_[i] += r.data_[i];
        return out;
    }
    Vec operator-(const Vec& r) const {
        Vec out = *this;
        for (int i = 0; i < n_; ++i) out.data_[i] -= r.data_[i];
        return out;
    }
    Vec operator*(double s) const {
        Vec out = *this;
        for (int i = 0; i < n_; ++i) out.data_[i] *= s;
        return out;
    }
    friend Vec operator*(double s, const Vec& v) { return v * s; }

    Vec& operator+=(const Vec& r) {
        for (int i = 0; i < n_; ++i) data_[i] += r.data_[i];
        return *this;
    }

    double dot(const Vec& r) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += data_[i] * r.data_[i];
        return s;
    }

    double squared_norm() const { return dot(*this); }
    double norm() const { return std::sqrt(squared_norm()); }

    bool operator==(const Vec& r) const {
        if (n_ != r.n_) return false;
        for (int i = 0; i < n_; ++i)
            if (data_[i] != r.data_[i]) return false;
        return true;
    }

    static void check_dim(int dim) {
        if (dim < 1 || dim > kMaxDim) {
            throw contract_error("Vec: dimension must be in [1, " +
                                 std::to_string(kMaxDim) + "], got " +
                                 std::to_string(dim));
        }
    }

private:
    std::array<double, kMaxDim> data_{};
    int n_ = 0;
};

/// Square matrix with runtime side length d <= kMaxDim, row-major.
class Mat {
public:
    Mat() = default;

    static Mat zeros(int dim) {
        Vec::check_dim(dim);
        Mat m;
        m.n_ = dim;
        m.data_.fill(0.0);
        return m;
    }

    static Mat identity(int dim) {
        Mat m = zeros(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat diag(const Vec& d) {
        Mat m = zeros(d.dim());
        for (int i = 0; i < d.dim(); ++i) m(i, i) = d[i];
        return m;
    }

    int dim() const { return n_; }

    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i * n_ + j)];
    }
    double& operator()(int i, int j) {
        return data_[static_cast<std::size_t>(i * n_ + j)];
    }

    Vec operator*(const Vec& v) const {
        Vec out = Vec::zeros(n_);
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (int j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
            out[i] = s;
        }
        return out;
    }

    /// this * transpose(this)
    Mat times_transpose() const {
        Mat out = zeros(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                double s = 0.0;
                for (int k = 0; k < n_; ++k) s += (*this)(i, k) * (*this)(j, k);
                out(i, j) = s;
            }
        return out;
    }

private:
    std::array<double, kMaxDim * kMaxDim> data_{};
    int n_ = 0;
};

inline void require_same_dim(const Vec& a, int dim, const char* where) {
    if (a.dim() != dim) {
        throw contract_error(std::string(where) + ": dimension mismatch (" +
                             std::to_string(a.dim()) + " vs " +
                             std::to_string(dim) + ")");
    }
}

} // namespace stickymc
