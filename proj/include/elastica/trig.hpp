#ifndef ELASTICA_TRIG_HPP
#define ELASTICA_TRIG_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace elastica {

// Finite trigonometric sum  c0 + sum_k (c_k cos(k s) + s_k sin(k s)).
// Used to hold the expansion coefficient functions exactly, so that values
// and derivatives can be evaluated without discretization error.
class TrigPoly {
public:
    TrigPoly() = default;

    // term  amp * cos(k s - phase)
    void add_cos(int k, double amp, double phase = 0.0) {
        if (k == 0) {
            c0_ += amp * std::cos(phase);
            return;
        }
        ensure(k);
        cos_[static_cast<size_t>(k)] += amp * std::cos(phase);
        sin_[static_cast<size_t>(k)] += amp * std::sin(phase);
    }

    // term  amp * sin(k s - phase)
    void add_sin(int k, double amp, double phase = 0.0) {
        if (k == 0) {
            c0_ -= amp * std::sin(phase);
            return;
        }
        ensure(k);
        cos_[static_cast<size_t>(k)] -= amp * std::sin(phase);
        sin_[static_cast<size_t>(k)] += amp * std::cos(phase);
    }

    void add_const(double c) { c0_ += c; }

    double operator()(double s) const {
        double v = c0_;
        for (size_t k = 1; k < cos_.size(); ++k)
            v += cos_[k] * std::cos(double(k) * s) + sin_[k] * std::sin(double(k) * s);
        return v;
    }

    TrigPoly derivative() const {
        TrigPoly d;
        d.ensure(max_freq());
        for (size_t k = 1; k < cos_.size(); ++k) {
            d.cos_[k] = double(k) * sin_[k];
            d.sin_[k] = -double(k) * cos_[k];
        }
        return d;
    }

    double mean() const { return c0_; }

    double cos_coeff(int k) const {
        if (k == 0) return c0_;
        return (static_cast<size_t>(k) < cos_.size()) ? cos_[static_cast<size_t>(k)] : 0.0;
    }
    double sin_coeff(int k) const {
        return (k >= 1 && static_cast<size_t>(k) < sin_.size()) ? sin_[static_cast<size_t>(k)] : 0.0;
    }

    int max_freq() const { return cos_.empty() ? 0 : int(cos_.size()) - 1; }

    TrigPoly& operator*=(double a) {
        c0_ *= a;
        for (auto& c : cos_) c *= a;
        for (auto& c : sin_) c *= a;
        return *this;
    }

    TrigPoly& operator+=(const TrigPoly& o) {
        ensure(o.max_freq());
        c0_ += o.c0_;
        for (size_t k = 1; k < o.cos_.size(); ++k) {
            cos_[k] += o.cos_[k];
            sin_[k] += o.sin_[k];
        }
        return *this;
    }

private:
    void ensure(int k) {
        if (static_cast<size_t>(k) >= cos_.size()) {
            cos_.resize(static_cast<size_t>(k) + 1, 0.0);
            sin_.resize(static_cast<size_t>(k) + 1, 0.0);
        }
    }

    double c0_ = 0.0;
    std::vector<double> cos_;  // cos_[k], k >= 1; index 0 unused
    std::vector<double> sin_;
};

} // namespace elastica

#endif
