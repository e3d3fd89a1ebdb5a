#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "geometry.hpp"
#include "order_set.hpp"

namespace momentkit {

// Coefficients M_nm for every index of order_set(method, K), in OrderSet order.
class MomentSet {
public:
    MomentSet(const MethodSpec& method, int K, const Scheme& scheme)
        : set_(method, K), scheme_(scheme), values_(set_.size()) {}

    const MethodSpec& method() const { return set_.method(); }
    int K() const { return set_.K(); }
    const Scheme& scheme() const { return scheme_; }
    const OrderSet& orders() const { return set_; }
    std::size_t size() const { return values_.size(); }
    // Side of the image the moments were computed from (0 if unknown).
    int image_size() const { return image_size_; }
    void set_image_size(int N) { image_size_ = N; }

    const std::vector<complex>& values() const { return values_; }
    std::vector<complex>& values() { return values_; }
    complex& operator[](std::size_t i) { return values_[i]; }
    const complex& operator[](std::size_t i) const { return values_[i]; }

    bool contains(int n, int m) const { return set_.find(n, m) >= 0; }
    const complex& at(int n, int m) const {
        const long i = set_.find(n, m);
        if (i < 0) throw DomainError("(" + std::to_string(n) + ", " + std::to_string(m) + ") is not in the order set");
        return values_[static_cast<std::size_t>(i)];
    }
    complex& at(int n, int m) { return const_cast<complex&>(std::as_const(*this).at(n, m)); }

private:
    OrderSet set_;
    Scheme scheme_;
    std::vector<complex> values_;
    int image_size_ = 0;
};

// Counters filled by the decomposition routines.
struct DecomposeStats {
    std::uint64_t kernel_evaluations = 0;  // radial-kernel evaluations (all slots at one point count once)
    std::uint64_t samples = 0;             // image samples that entered the sums
};

struct ExecOptions {
    int threads = 1;
    DecomposeStats* stats = nullptr;
};

}  // namespace momentkit
