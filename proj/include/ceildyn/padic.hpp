#pragma once

/**
 * @file padic.hpp
 * @brief The p-adic squaring map alpha -> alpha * (F_p(alpha) + 1) on truncated
 * p-adic numbers, and prefix trees of the set of alpha in p^-k Z_p whose
 * iterates never fall into p^-(k-1) Z_p.
 *
 * An element alpha of pole order at most k is stored as beta = p^k * alpha,
 * a p-adic integer known modulo p^W. F_p(alpha) is then beta div p^k, so each
 * step consumes one block of k digits.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "ceildyn/arith.hpp"

namespace ceildyn {

class PadicWindow {
public:
    /// Embeds q (whose denominator may contain at most p^k) with W valid digits.
    static PadicWindow from_rational(const Rational& q, std::uint64_t p, std::uint64_t k, std::uint64_t W);
    /// Window on an explicit scaled value beta mod p^W.
    static PadicWindow from_scaled(const BigInt& beta, std::uint64_t p, std::uint64_t k, std::uint64_t W);

    std::uint64_t prime() const { return p_; }
    std::uint64_t pole_order() const { return k_; }
    std::uint64_t valid_digits() const { return w_; }
    /// beta = p^k * alpha reduced into [0, p^W).
    const BigInt& scaled() const { return beta_; }
    /// Base-p digits of beta, least significant first, length W.
    std::vector<unsigned> unit_digits() const;
    /// True iff alpha lies in p^-(k-1) Z_p, i.e. p divides beta (needs W >= 1).
    bool drops_pole() const;

    friend bool operator==(const PadicWindow&, const PadicWindow&) = default;

private:
    std::uint64_t p_ = 2;
    std::uint64_t k_ = 1;
    std::uint64_t w_ = 0;
    BigInt beta_;
};

/// One application of the map; the result has k fewer valid digits.
/// Throws PrecisionExhausted unless valid_digits > k.
PadicWindow fp_step(const PadicWindow& w);

struct PrefixTree {
    std::uint64_t p = 3;
    std::uint64_t k = 1;
    /// levels[l-1] holds the surviving prefixes of length l*k as integers in [0, p^(lk)), sorted.
    std::vector<std::vector<BigInt>> levels;
    /// children[l-1][i] = number of level l+1 prefixes extending levels[l-1][i]
    /// (empty for the deepest level).
    std::vector<std::vector<std::uint64_t>> children;

    std::uint64_t branching() const;
    bool contains(std::uint64_t level, const BigInt& prefix) const;
};

/// Builds levels 1..depth. A prefix survives when none of the iterates whose
/// unit status it determines is divisible by p. Rejects p^k < 3 and asserts
/// that every node below the root has exactly phi(p^k) children.
PrefixTree omega_prefix_tree(std::uint64_t p, std::uint64_t k, std::uint64_t depth, unsigned workers = 1);

/// 1 - log(1 + 1/(p-1)) / (k log p)
double hausdorff_dimension(std::uint64_t p, std::uint64_t k);

struct MeasureBounds {
    double lower = 0;
    double upper = 0;
};

/// ((1 - 1/p)^(1 - 1/k) (p^k - p^(k-1)), p^k - p^(k-1))
MeasureBounds hausdorff_measure_bounds(std::uint64_t p, std::uint64_t k);

/// Slope of log|W_l| against l*k*log p between level 1 and the deepest level.
double box_dimension_estimate(const PrefixTree& tree);

/// {"p","k","levels":[{"level","prefixes":[digit strings, least significant first],"children":[...]}]}
std::string tree_to_json(const PrefixTree& tree);

}  // namespace ceildyn
