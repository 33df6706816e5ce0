#ifndef ABO_RNG_HPP
#define ABO_RNG_HPP

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

namespace abo {

/// Name recorded in experiment summaries so other implementations can
/// reproduce the streams.
inline constexpr std::string_view kRngAlgorithm = "splitmix64-counter/v1";

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// FNV-1a over the bytes of a purpose tag.
std::uint64_t hash_tag(std::string_view tag) noexcept;

/**
 * Counter-based generator. A stream is identified by (seed, run_id, tag):
 *
 *   key   = mix64(mix64(mix64(seed) ^ run_id) ^ fnv1a(tag))
 *   u64_n = mix64(key + (n + 1) * 0x9E3779B97F4A7C15)
 *
 * uniform() takes the top 53 bits; normal() is Box-Muller on two
 * consecutive uniforms (the cosine branch only), so one normal draw
 * consumes exactly two counters.
 */
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t run_id, std::string_view tag) noexcept;

    /// Derive an independent child stream.
    [[nodiscard]] CounterRng split(std::string_view tag, std::uint64_t index = 0) const noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1).
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal() noexcept;

    Eigen::VectorXd uniform_vector(Eigen::Index n) noexcept;
    Eigen::VectorXd normal_vector(Eigen::Index n) noexcept;

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

private:
    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Gray-code Sobol sequence (Joe-Kuo direction numbers), up to 10 dimensions.
class SobolSequence {
public:
    static constexpr int kMaxDim = 10;

    explicit SobolSequence(int dim);

    /// Next point in [0, 1)^d. The first point is the origin.
    Eigen::VectorXd next();

    [[nodiscard]] int dim() const noexcept { return dim_; }

private:
    int dim_;
    std::uint32_t index_ = 0;
    std::uint32_t state_[kMaxDim] = {};
    std::uint32_t directions_[kMaxDim][32] = {};
};

} // namespace abo

#endif // ABO_RNG_HPP
