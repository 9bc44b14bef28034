#pragma once

#include <cmath>
#include <cstddef>

namespace synthlab {

// Neumaier compensated accumulator. Order-dependent, so callers that need
// thread-count-independent results must feed it in a fixed order.
class NeumaierSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    void add(const NeumaierSum& other) {
        add(other.sum_);
        add(other.comp_);
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace synthlab
