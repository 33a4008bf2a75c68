#include "ceildyn/padic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "ceildyn/parallel.hpp"

namespace ceildyn {

namespace {

BigInt modulus_of(std::uint64_t p, std::uint64_t W) { return pow_ui(p, W); }

// True iff no iterate whose residue mod p is fixed by beta mod p^W is divisible by p.
bool prefix_survives(const BigInt& beta, std::uint64_t p, std::uint64_t k, std::uint64_t W) {
    PadicWindow w = PadicWindow::from_scaled(beta, p, k, W);
    while (true) {
        if (w.drops_pole()) return false;
        if (w.valid_digits() <= k) return true;
        w = fp_step(w);
    }
}

std::string digit_string(const BigInt& value, std::uint64_t p, std::uint64_t len) {
    std::string out;
    BigInt v = value;
    for (std::uint64_t i = 0; i < len; ++i) {
        const unsigned long digit = mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
        if (p > 10 && i > 0) out += ',';
        out += std::to_string(digit);
    }
    return out;
}

}  // namespace

PadicWindow PadicWindow::from_rational(const Rational& q, std::uint64_t p, std::uint64_t k, std::uint64_t W) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    BigInt rest = q.den();
    const std::uint64_t pole = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), BigInt(static_cast<unsigned long>(p)).get_mpz_t());
    if (pole > k) throw std::invalid_argument("pole order exceeds k");
    const BigInt mod = modulus_of(p, W);
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), rest.get_mpz_t(), mod.get_mpz_t()) == 0 && mod != 1)
        throw std::invalid_argument("denominator not invertible");
    BigInt beta = q.num() * pow_ui(p, k - pole) * inv;
    return from_scaled(beta, p, k, W);
}

PadicWindow PadicWindow::from_scaled(const BigInt& beta, std::uint64_t p, std::uint64_t k, std::uint64_t W) {
    if (p < 2) throw std::invalid_argument("p must be at least 2");
    if (k < 1) throw std::invalid_argument("pole order must be at least 1");
    PadicWindow w;
    w.p_ = p;
    w.k_ = k;
    w.w_ = W;
    w.beta_ = mod_nonneg(beta, modulus_of(p, W));
    return w;
}

std::vector<unsigned> PadicWindow::unit_digits() const {
    std::vector<unsigned> out;
    out.reserve(w_);
    BigInt v = beta_;
    for (std::uint64_t i = 0; i < w_; ++i) {
        out.push_back(static_cast<unsigned>(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p_))));
    }
    return out;
}

bool PadicWindow::drops_pole() const {
    if (w_ < 1) throw PrecisionExhausted("no valid digit left");
    return mpz_divisible_ui_p(beta_.get_mpz_t(), static_cast<unsigned long>(p_)) != 0;
}

PadicWindow fp_step(const PadicWindow& w) {
    const std::uint64_t k = w.pole_order();
    if (w.valid_digits() <= k) throw PrecisionExhausted("p-adic window too short for another step");
    const std::uint64_t W = w.valid_digits() - k;
    BigInt integral_part;
    mpz_fdiv_q(integral_part.get_mpz_t(), w.scaled().get_mpz_t(), pow_ui(w.prime(), k).get_mpz_t());
    return PadicWindow::from_scaled(w.scaled() * (integral_part + 1), w.prime(), k, W);
}

std::uint64_t PrefixTree::branching() const {
    return euler_phi(pow_ui(p, k).get_ui());
}

bool PrefixTree::contains(std::uint64_t level, const BigInt& prefix) const {
    if (level < 1 || level > levels.size()) return false;
    return std::binary_search(levels[level - 1].begin(), levels[level - 1].end(), prefix);
}

PrefixTree omega_prefix_tree(std::uint64_t p, std::uint64_t k, std::uint64_t depth, unsigned workers) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const BigInt block = pow_ui(p, k);
    if (block < 3) throw std::invalid_argument("p^k must be at least 3 for a branching ratio of 2 or more");
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    if (static_cast<double>(depth * k) * std::log2(static_cast<double>(p)) > 64.0)
        throw std::invalid_argument("tree depth exceeds the digit budget");
    const std::uint64_t blocks = block.get_ui();

    PrefixTree tree;
    tree.p = p;
    tree.k = k;
    const std::uint64_t want = tree.branching();

    std::vector<BigInt> first;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        if (prefix_survives(BigInt(static_cast<unsigned long>(b)), p, k, k)) first.emplace_back(static_cast<unsigned long>(b));
    }
    tree.levels.push_back(std::move(first));

    for (std::uint64_t level = 1; level < depth; ++level) {
        const auto& parents = tree.levels.back();
        const BigInt shift = pow_ui(p, level * k);
        const std::uint64_t W = (level + 1) * k;
        auto kids = parallel_range(0, static_cast<std::int64_t>(parents.size()) - 1, workers, [&](std::int64_t i) {
            std::vector<BigInt> out;
            for (std::uint64_t b = 0; b < blocks; ++b) {
                BigInt child = parents[static_cast<std::size_t>(i)] + shift * static_cast<unsigned long>(b);
                if (prefix_survives(child, p, k, W)) out.push_back(std::move(child));
            }
            return out;
        });
        std::vector<std::uint64_t> counts;
        std::vector<BigInt> next;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (kids[i].size() != want)
                throw InvariantViolation("prefix " + parents[i].get_str() + " at level " + std::to_string(level) + " has " +
                                         std::to_string(kids[i].size()) + " children, expected " + std::to_string(want));
            counts.push_back(kids[i].size());
            for (auto& c : kids[i]) next.push_back(std::move(c));
        }
        std::sort(next.begin(), next.end());
        tree.children.push_back(std::move(counts));
        tree.levels.push_back(std::move(next));
    }
    tree.children.emplace_back();
    return tree;
}

double hausdorff_dimension(std::uint64_t p, std::uint64_t k) {
    if (p < 2 || k < 1) throw std::invalid_argument("need p >= 2 and k >= 1");
    return 1.0 - std::log1p(1.0 / static_cast<double>(p - 1)) / (static_cast<double>(k) * std::log(static_cast<double>(p)));
}

MeasureBounds hausdorff_measure_bounds(std::uint64_t p, std::uint64_t k) {
    if (p < 2 || k < 1) throw std::invalid_argument("need p >= 2 and k >= 1");
    const double pd = static_cast<double>(p);
    const double b = std::pow(pd, static_cast<double>(k)) - std::pow(pd, static_cast<double>(k - 1));
    const double exponent = 1.0 - 1.0 / static_cast<double>(k);
    return {std::pow(1.0 - 1.0 / pd, exponent) * b, b};
}

double box_dimension_estimate(const PrefixTree& tree) {
    const std::size_t L = tree.levels.size();
    if (L < 2) throw std::invalid_argument("box dimension needs at least two levels");
    const double top = std::log(static_cast<double>(tree.levels.back().size()));
    const double bottom = std::log(static_cast<double>(tree.levels.front().size()));
    return (top - bottom) /
           (static_cast<double>((L - 1) * tree.k) * std::log(static_cast<double>(tree.p)));
}

std::string tree_to_json(const PrefixTree& tree) {
    nlohmann::ordered_json j;
    j["p"] = tree.p;
    j["k"] = tree.k;
    j["levels"] = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < tree.levels.size(); ++l) {
        nlohmann::ordered_json level;
        level["level"] = l + 1;
        level["prefixes"] = nlohmann::ordered_json::array();
        for (const auto& prefix : tree.levels[l]) level["prefixes"].push_back(digit_string(prefix, tree.p, (l + 1) * tree.k));
        level["children"] = l < tree.children.size() ? tree.children[l] : std::vector<std::uint64_t>{};
        j["levels"].push_back(std::move(level));
    }
    return j.dump();
}

}  // namespace ceildyn
