#include "abo/rng.hpp"

#include <cmath>
#include <numbers>

#include "abo/errors.hpp"

namespace abo {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

struct JoeKuo {
    unsigned s;
    unsigned a;
    unsigned m[5];
};

// Dimensions 2..10 of new-joe-kuo-6.21201.
constexpr JoeKuo kJoeKuo[SobolSequence::kMaxDim - 1] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
};

} // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_tag(std::string_view tag) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t run_id, std::string_view tag) noexcept
    : key_(mix64(mix64(mix64(seed) ^ run_id) ^ hash_tag(tag))) {}

CounterRng CounterRng::split(std::string_view tag, std::uint64_t index) const noexcept {
    return CounterRng(mix64(mix64(key_ ^ hash_tag(tag)) + index * kGolden));
}

std::uint64_t CounterRng::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double CounterRng::normal() noexcept {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::VectorXd CounterRng::uniform_vector(Eigen::Index n) noexcept {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform();
    return v;
}

Eigen::VectorXd CounterRng::normal_vector(Eigen::Index n) noexcept {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
}

SobolSequence::SobolSequence(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw ContractViolation("SobolSequence supports 1.." + std::to_string(kMaxDim) +
                                " dimensions, got " + std::to_string(dim));
    }
    for (int k = 0; k < 32; ++k) directions_[0][k] = 1u << (31 - k);
    for (int j = 1; j < dim; ++j) {
        const JoeKuo& jk = kJoeKuo[j - 1];
        auto& v = directions_[j];
        for (unsigned k = 0; k < jk.s && k < 32; ++k) v[k] = jk.m[k] << (31 - k);
        for (unsigned k = jk.s; k < 32; ++k) {
            v[k] = v[k - jk.s] ^ (v[k - jk.s] >> jk.s);
            for (unsigned i = 1; i < jk.s; ++i) {
                if ((jk.a >> (jk.s - 1 - i)) & 1u) v[k] ^= v[k - i];
            }
        }
    }
}

Eigen::VectorXd SobolSequence::next() {
    Eigen::VectorXd x(dim_);
    for (int j = 0; j < dim_; ++j) x(j) = static_cast<double>(state_[j]) / 4294967296.0;
    // Gray-code update: flip the direction at the lowest zero bit of the index.
    unsigned c = 0;
    for (std::uint32_t n = index_; n & 1u; n >>= 1) ++c;
    for (int j = 0; j < dim_; ++j) state_[j] ^= directions_[j][c];
    ++index_;
    return x;
}

} // namespace abo
