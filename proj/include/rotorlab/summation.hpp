#pragma once

// Accurate reductions for ensemble averages whose terms largely cancel.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace rotorlab {

/// Neumaier-compensated running sum.
template <class T>
class CompensatedSum {
public:
    CompensatedSum& operator+=(T x) {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }

    /// Fold in another partial sum without rounding its carry away.
    CompensatedSum& operator+=(const CompensatedSum& other) {
        *this += other.sum_;
        carry_ += other.carry_;
        return *this;
    }

    T value() const { return sum_ + carry_; }

private:
    T sum_{};
    T carry_{};
};

template <class T>
class CompensatedSum<std::complex<T>> {
public:
    CompensatedSum& operator+=(std::complex<T> z) {
        re_ += z.real();
        im_ += z.imag();
        return *this;
    }

    CompensatedSum& operator+=(const CompensatedSum& other) {
        re_ += other.re_;
        im_ += other.im_;
        return *this;
    }

    std::complex<T> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum<T> re_;
    CompensatedSum<T> im_;
};

namespace detail {

template <class T>
CompensatedSum<T> pairwise_partial(std::span<const T> xs) {
    constexpr std::size_t leaf = 32;
    CompensatedSum<T> acc;
    if (xs.size() <= leaf) {
        for (const T& x : xs) acc += x;
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    acc = pairwise_partial(xs.first(half));
    acc += pairwise_partial(xs.subspan(half));
    return acc;
}

} // namespace detail

/// Pairwise summation with compensated leaves. The split points depend only
/// on the length, so the result is independent of how the terms were produced.
template <class T>
T pairwise_sum(std::span<const T> xs) {
    return detail::pairwise_partial(xs).value();
}

} // namespace rotorlab
