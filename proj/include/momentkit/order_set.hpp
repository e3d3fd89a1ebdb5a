#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <vector>

#include "method.hpp"

namespace momentkit {

struct OrderIndex {
    int n = 0;
    int m = 0;
    friend bool operator==(const OrderIndex&, const OrderIndex&) = default;
    friend auto operator<=>(const OrderIndex&, const OrderIndex&) = default;
};

// Membership test for a family, ignoring the bound K.
inline bool is_legal_order(Family f, int n, int m) {
    const int am = std::abs(m);
    switch (order_shape(f)) {
        case OrderShape::zernike: return n >= 0 && am <= n && (n - am) % 2 == 0;
        case OrderShape::pseudo_zernike: return n >= 0 && am <= n;
        case OrderShape::signed_n: return true;
        case OrderShape::positive: return n >= 1;
        case OrderShape::nonnegative: return n >= 0;
    }
    return false;
}

class OrderSet {
public:
    OrderSet(MethodSpec method, int K) : method_(method), K_(K) {
        if (K < 0) throw DomainError("order bound K must be >= 0");
        const Family f = method.family();
        const int n_lo = order_shape(f) == OrderShape::signed_n ? -K : 0;
        for (int n = n_lo; n <= K; ++n)
            for (int m = -K; m <= K; ++m)
                if (is_legal_order(f, n, m)) indices_.push_back({n, m});
        const std::size_t w = 2 * static_cast<std::size_t>(K) + 1;
        lookup_.assign(w * w, -1);
        for (std::size_t i = 0; i < indices_.size(); ++i)
            lookup_[slot(indices_[i].n, indices_[i].m)] = static_cast<long>(i);
    }

    const MethodSpec& method() const { return method_; }
    int K() const { return K_; }
    const std::vector<OrderIndex>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    const OrderIndex& operator[](std::size_t i) const { return indices_[i]; }
    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

    // Position of (n, m) in the set, or -1.
    long find(int n, int m) const {
        if (std::abs(m) > K_ || std::abs(n) > K_) return -1;
        return lookup_[slot(n, m)];
    }

private:
    std::size_t slot(int n, int m) const {
        const std::size_t w = 2 * static_cast<std::size_t>(K_) + 1;
        return static_cast<std::size_t>(n + K_) * w + static_cast<std::size_t>(m + K_);
    }

    MethodSpec method_;
    int K_ = 0;
    std::vector<OrderIndex> indices_;
    std::vector<long> lookup_;
};

inline OrderSet order_set(const MethodSpec& method, int K) { return OrderSet(method, K); }

// Closed-form cardinality of the order set.
inline std::size_t order_set_size(Family f, int K) {
    const auto k = static_cast<std::size_t>(K);
    switch (order_shape(f)) {
        case OrderShape::zernike: return (k + 1) * (k + 2) / 2;
        case OrderShape::pseudo_zernike: return (k + 1) * (k + 1);
        case OrderShape::signed_n: return (2 * k + 1) * (2 * k + 1);
        case OrderShape::positive: return k * (2 * k + 1);
        case OrderShape::nonnegative: return (k + 1) * (2 * k + 1);
    }
    return 0;
}

}  // namespace momentkit
