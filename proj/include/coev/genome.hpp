#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coev {

/// Direction in which the objective improves.
enum class Sense { maximize, minimize };

/// True iff `candidate` is strictly better than `reference` under `sense`.
constexpr bool strictly_better(double candidate, double reference, Sense sense) noexcept {
    return sense == Sense::maximize ? candidate > reference : candidate < reference;
}

/// Fixed-length bit string of at most 64 symbols, packed in one word.
///
/// Position 0 is the leftmost character of the textual form. Bits beyond
/// `size()` are always zero.
class BitGenome {
  public:
    static constexpr std::size_t max_length = 64;

    BitGenome() = default;

    /// All-zero genome of the given length.
    explicit BitGenome(std::size_t length) : length_(checked_length(length)) {}

    BitGenome(std::size_t length, std::uint64_t bits)
        : length_(checked_length(length)), bits_(bits & mask_for(length)) {}

    /// Parses a string over {0, 1}.
    static BitGenome from_string(std::string_view text);

    std::size_t size() const noexcept { return length_; }
    std::uint64_t word() const noexcept { return bits_; }

    bool operator[](std::size_t pos) const noexcept { return (bits_ >> pos) & 1U; }

    void set(std::size_t pos, bool value) noexcept {
        const std::uint64_t bit = std::uint64_t{1} << pos;
        bits_ = value ? (bits_ | bit) : (bits_ & ~bit);
    }

    void flip(std::size_t pos) noexcept { bits_ ^= std::uint64_t{1} << pos; }

    BitGenome complement() const noexcept { return BitGenome(length_, ~bits_); }

    std::string to_string() const;

    /// Mask with the low `length` bits set.
    static constexpr std::uint64_t mask_for(std::size_t length) noexcept {
        return length >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << length) - 1;
    }

    friend bool operator==(const BitGenome&, const BitGenome&) = default;

  private:
    static std::size_t checked_length(std::size_t length) {
        if (length > max_length) {
            throw std::invalid_argument("BitGenome: length exceeds 64");
        }
        return length;
    }

    std::size_t length_ = 0;
    std::uint64_t bits_ = 0;
};

/// Number of positions where the two genomes disagree.
inline std::size_t hamming_distance(const BitGenome& a, const BitGenome& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming_distance: length mismatch");
    }
    return static_cast<std::size_t>(std::popcount(a.word() ^ b.word()));
}

/// Closed interval for one real dimension. A periodic dimension wraps into
/// [low, high) instead of being clamped.
struct Bound {
    double low;
    double high;
    bool periodic = false;

    double apply(double value) const;

    friend bool operator==(const Bound&, const Bound&) = default;
};

/// Bounded real vector.
class RealGenome {
  public:
    RealGenome() = default;
    RealGenome(std::vector<double> values, std::vector<Bound> bounds);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t d) const { return values_[d]; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<Bound>& bounds() const noexcept { return bounds_; }

    /// Sets dimension d, then clamps (or wraps) it into its bound.
    void set(std::size_t d, double value) { values_[d] = bounds_[d].apply(value); }

    bool within_bounds() const;

    friend bool operator==(const RealGenome&, const RealGenome&) = default;

  private:
    std::vector<double> values_;
    std::vector<Bound> bounds_;
};

/// A genome and its fitness, absent until evaluated.
template <class G>
struct Individual {
    G genome;
    std::optional<double> fitness;

    bool evaluated() const noexcept { return fitness.has_value(); }
};

} // namespace coev
