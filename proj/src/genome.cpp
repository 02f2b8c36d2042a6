#include "coev/genome.hpp"

#include <cmath>
#include <utility>

namespace coev {

BitGenome BitGenome::from_string(std::string_view text) {
    BitGenome g(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') {
            g.set(i, true);
        } else if (text[i] != '0') {
            throw std::invalid_argument("BitGenome: symbol outside {0,1} at position " + std::to_string(i));
        }
    }
    return g;
}

std::string BitGenome::to_string() const {
    std::string out(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if ((*this)[i]) {
            out[i] = '1';
        }
    }
    return out;
}

double Bound::apply(double value) const {
    if (periodic) {
        const double width = high - low;
        double wrapped = std::fmod(value - low, width);
        if (wrapped < 0.0) {
            wrapped += width;
        }
        // fmod can round up to exactly `width` for tiny negative inputs.
        if (wrapped >= width) {
            wrapped = 0.0;
        }
        return low + wrapped;
    }
    if (value < low) {
        return low;
    }
    if (value > high) {
        return high;
    }
    return value;
}

RealGenome::RealGenome(std::vector<double> values, std::vector<Bound> bounds)
    : values_(std::move(values)), bounds_(std::move(bounds)) {
    if (values_.size() != bounds_.size()) {
        throw std::invalid_argument("RealGenome: values and bounds differ in length");
    }
    for (const Bound& b : bounds_) {
        if (!(b.low <= b.high) || (b.periodic && !(b.low < b.high && std::isfinite(b.high - b.low)))) {
            throw std::invalid_argument("RealGenome: malformed bound");
        }
    }
    for (std::size_t d = 0; d < values_.size(); ++d) {
        values_[d] = bounds_[d].apply(values_[d]);
    }
}

bool RealGenome::within_bounds() const {
    for (std::size_t d = 0; d < values_.size(); ++d) {
        const Bound& b = bounds_[d];
        if (b.periodic ? !(values_[d] >= b.low && values_[d] < b.high) : !(values_[d] >= b.low && values_[d] <= b.high)) {
            return false;
        }
    }
    return true;
}

} // namespace coev
