#ifndef QCLUSTER_LAURENT_HPP
#define QCLUSTER_LAURENT_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

// Exact multivariate Laurent polynomials over the integers.
//
// Polynomials are kept in a canonical form at all times: terms are stored in
// a map keyed by dense exponent vectors (lexicographic order), zero
// coefficients are never stored, and the text serialization is a pure
// function of the term map. Two polynomials over the same registry are equal
// iff their serializations are byte-equal.

namespace qcluster {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class RegistryMismatch : public std::logic_error {
public:
    explicit RegistryMismatch(const std::string& what) : std::logic_error(what) {}
};

// Thrown when an exact division has no Laurent-polynomial result. During
// mutation this signals a violation of the Laurent phenomenon and must abort
// the run; it is never swallowed.
class NonExactDivision : public std::runtime_error {
public:
    explicit NonExactDivision(const std::string& what) : std::runtime_error(what) {}
};

// An ordered set of variable names. Indices are stable for the registry's
// lifetime; all polynomials over one registry share it by pointer.
class VarRegistry {
public:
    explicit VarRegistry(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (!index_.emplace(names_[i], i).second)
                throw std::invalid_argument("VarRegistry: duplicate variable name '" + names_[i] + "'");
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    bool contains(std::string_view n) const { return index_.find(std::string(n)) != index_.end(); }

    std::size_t index(std::string_view n) const {
        auto it = index_.find(std::string(n));
        if (it == index_.end())
            throw std::out_of_range("VarRegistry: unknown variable '" + std::string(n) + "'");
        return it->second;
    }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

using RegistryPtr = std::shared_ptr<const VarRegistry>;

inline RegistryPtr make_registry(std::vector<std::string> names) {
    return std::make_shared<VarRegistry>(std::move(names));
}

// Dense exponent vector, one entry per registered variable. Negative entries
// are legal everywhere (the ring is Laurent in every generator).
using ExpVec = std::vector<int>;

class LaurentPoly {
public:
    using TermMap = std::map<ExpVec, BigInt>;

    LaurentPoly() = default;

    static LaurentPoly zero(RegistryPtr reg) { return LaurentPoly(std::move(reg)); }

    static LaurentPoly constant(RegistryPtr reg, BigInt c) {
        LaurentPoly p(std::move(reg));
        if (c != 0) p.terms_[ExpVec(p.reg_->size(), 0)] = std::move(c);
        return p;
    }

    static LaurentPoly generator(RegistryPtr reg, std::string_view name) {
        LaurentPoly p(std::move(reg));
        ExpVec e(p.reg_->size(), 0);
        e[p.reg_->index(name)] = 1;
        p.terms_[std::move(e)] = 1;
        return p;
    }

    static LaurentPoly monomial(RegistryPtr reg, ExpVec e, BigInt c) {
        LaurentPoly p(std::move(reg));
        if (e.size() != p.reg_->size())
            throw std::invalid_argument("LaurentPoly::monomial: exponent vector has wrong length");
        if (c != 0) p.terms_[std::move(e)] = std::move(c);
        return p;
    }

    const RegistryPtr& registry() const { return reg_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->second == 1 &&
               is_zero_vec(terms_.begin()->first);
    }

    bool is_monomial() const { return terms_.size() == 1; }

    std::size_t term_count() const { return terms_.size(); }

    bool all_coefficients_positive() const {
        for (const auto& [e, c] : terms_)
            if (c < 0) return false;
        return true;
    }

    LaurentPoly operator-() const {
        LaurentPoly r(*this);
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        check_same_registry(a, b, "add");
        LaurentPoly r(a);
        for (const auto& [e, c] : b.terms_) {
            auto it = r.terms_.find(e);
            if (it == r.terms_.end()) {
                r.terms_.emplace(e, c);
            } else {
                it->second += c;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        check_same_registry(a, b, "mul");
        LaurentPoly r(a.reg_ ? a.reg_ : b.reg_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                ExpVec e(ea);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                BigInt c = ca * cb;
                auto it = r.terms_.find(e);
                if (it == r.terms_.end()) {
                    r.terms_.emplace(std::move(e), std::move(c));
                } else {
                    it->second += c;
                    if (it->second == 0) r.terms_.erase(it);
                }
            }
        }
        return r;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    LaurentPoly pow(unsigned n) const {
        LaurentPoly r = constant(reg_, 1);
        LaurentPoly base(*this);
        while (n) {
            if (n & 1u) r = r * base;
            base = base * base;
            n >>= 1u;
        }
        return r;
    }

    // Inverse of a single-term polynomial. Coefficient must be a unit.
    LaurentPoly monomial_inverse() const {
        if (terms_.size() != 1)
            throw NonExactDivision("monomial_inverse: not a monomial");
        const auto& [e, c] = *terms_.begin();
        if (c != 1 && c != -1)
            throw NonExactDivision("monomial_inverse: coefficient is not a unit");
        ExpVec inv(e);
        for (auto& x : inv) x = -x;
        return monomial(reg_, std::move(inv), c);
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }
    friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
        return a.terms_ < b.terms_;
    }

    // Returns r with r*q == p, or throws NonExactDivision. Strategy: strip the
    // content monomial of both operands, then ordinary multivariate long
    // division in lexicographic order with a remainder-must-vanish check.
    static LaurentPoly exact_div(const LaurentPoly& p, const LaurentPoly& q) {
        check_same_registry(p, q, "exact_div");
        if (q.is_zero()) throw std::invalid_argument("exact_div: division by zero");
        if (p.is_zero()) return zero(p.reg_);

        const std::size_t nv = p.reg_->size();
        ExpVec mp = min_exponents(p), mq = min_exponents(q);
        TermMap phat = shift_terms(p.terms_, mp, -1);
        TermMap qhat = shift_terms(q.terms_, mq, -1);

        // Long division of phat by qhat; both are genuine polynomials now.
        TermMap quot;
        const auto& qlead = *qhat.rbegin();
        while (!phat.empty()) {
            const auto& plead = *phat.rbegin();
            ExpVec de(nv);
            for (std::size_t i = 0; i < nv; ++i) {
                de[i] = plead.first[i] - qlead.first[i];
                if (de[i] < 0)
                    throw NonExactDivision("exact_div: leading monomial not divisible");
            }
            BigInt dc = plead.second / qlead.second;
            if (dc * qlead.second != plead.second)
                throw NonExactDivision("exact_div: leading coefficient not divisible");
            quot.emplace(de, dc);
            // phat -= (dc * x^de) * qhat
            for (const auto& [e, c] : qhat) {
                ExpVec t(e);
                for (std::size_t i = 0; i < nv; ++i) t[i] += de[i];
                auto it = phat.find(t);
                BigInt sub = dc * c;
                if (it == phat.end()) {
                    phat.emplace(std::move(t), -sub);
                } else {
                    it->second -= sub;
                    if (it->second == 0) phat.erase(it);
                }
            }
        }

        LaurentPoly r(p.reg_);
        ExpVec shift(nv);
        for (std::size_t i = 0; i < nv; ++i) shift[i] = mp[i] - mq[i];
        r.terms_ = shift_terms(quot, shift, +1);
        return r;
    }

    // Substitute positive values for every variable occurring in the
    // polynomial and evaluate in double precision.
    double eval(const std::map<std::string, double>& assignment) const {
        std::vector<double> vals(reg_ ? reg_->size() : 0, 0.0);
        std::vector<bool> have(vals.size(), false);
        for (const auto& [n, v] : assignment) {
            if (reg_ && reg_->contains(n)) {
                vals[reg_->index(n)] = v;
                have[reg_->index(n)] = true;
            }
        }
        double sum = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = static_cast<double>(c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!have[i])
                    throw std::out_of_range("eval: missing value for variable '" + reg_->name(i) + "'");
                if (vals[i] == 0.0 && e[i] < 0)
                    throw std::domain_error("eval: zero value for variable '" + reg_->name(i) +
                                            "' with negative exponent");
                t *= std::pow(vals[i], e[i]);
            }
            sum += t;
        }
        return sum;
    }

    // Exact evaluation over the rationals (used by the basis rank check).
    BigRat eval_rational(const std::vector<BigRat>& values) const {
        if (reg_ && values.size() != reg_->size())
            throw std::invalid_argument("eval_rational: wrong number of values");
        BigRat sum = 0;
        for (const auto& [e, c] : terms_) {
            BigRat t(c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (values[i] == 0)
                    throw std::domain_error("eval_rational: zero value for '" + reg_->name(i) + "'");
                BigRat p = values[i];
                int k = e[i];
                if (k < 0) {
                    p = BigRat(boost::multiprecision::denominator(p), boost::multiprecision::numerator(p));
                    k = -k;
                }
                for (int j = 0; j < k; ++j) t *= p;
            }
            sum += t;
        }
        return sum;
    }

    // Ring homomorphism given by images of the generators. Any generator that
    // occurs with a negative exponent must map to an invertible monomial.
    LaurentPoly substitute(const RegistryPtr& target,
                           const std::map<std::string, LaurentPoly>& images) const {
        LaurentPoly r = zero(target);
        for (const auto& [e, c] : terms_) {
            LaurentPoly t = constant(target, c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                auto it = images.find(reg_->name(i));
                if (it == images.end())
                    throw std::out_of_range("substitute: no image for '" + reg_->name(i) + "'");
                const LaurentPoly& img = it->second;
                t = t * (e[i] > 0 ? img.pow(static_cast<unsigned>(e[i]))
                                  : img.monomial_inverse().pow(static_cast<unsigned>(-e[i])));
            }
            r += t;
        }
        return r;
    }

    // Canonical text form: terms in ascending lexicographic exponent order,
    // factors `coeff * v1^e1 * ...` with variables in registry order.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            BigInt a = c;
            if (first) {
                if (a < 0) { out << "-"; a = -a; }
            } else {
                out << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            bool any_var = !is_zero_vec(e);
            bool printed = false;
            if (a != 1 || !any_var) {
                out << a;
                printed = true;
            }
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (printed) out << "*";
                out << reg_->name(i);
                if (e[i] != 1) out << "^" << e[i];
                printed = true;
            }
        }
        return out.str();
    }

    // Inverse of to_string, for golden tests and JSON import.
    static LaurentPoly parse(const RegistryPtr& reg, std::string_view text) {
        LaurentPoly result = zero(reg);
        std::size_t pos = 0;
        auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
        skip_ws();
        if (text.substr(pos) == "0") return result;
        bool first = true;
        while (pos < text.size()) {
            skip_ws();
            int sign = 1;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
                if (text[pos] == '-') sign = -1;
                ++pos;
            } else if (!first) {
                throw std::invalid_argument("parse: expected '+' or '-'");
            }
            skip_ws();
            BigInt coeff = 1;
            ExpVec e(reg->size(), 0);
            bool expect_factor = true;
            while (expect_factor) {
                skip_ws();
                if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                    std::size_t start = pos;
                    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                    coeff *= BigInt(std::string(text.substr(start, pos - start)));
                } else {
                    std::size_t start = pos;
                    while (pos < text.size() &&
                           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                        ++pos;
                    if (start == pos) throw std::invalid_argument("parse: expected factor");
                    std::string name(text.substr(start, pos - start));
                    int exp = 1;
                    if (pos < text.size() && text[pos] == '^') {
                        ++pos;
                        int es = 1;
                        if (pos < text.size() && text[pos] == '-') { es = -1; ++pos; }
                        std::size_t es_start = pos;
                        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                        if (es_start == pos) throw std::invalid_argument("parse: expected exponent");
                        exp = es * std::stoi(std::string(text.substr(es_start, pos - es_start)));
                    }
                    e[reg->index(name)] += exp;
                }
                skip_ws();
                if (pos < text.size() && text[pos] == '*') { ++pos; } else { expect_factor = false; }
            }
            result += monomial(reg, std::move(e), sign * coeff);
            first = false;
            skip_ws();
        }
        return result;
    }

private:
    explicit LaurentPoly(RegistryPtr reg) : reg_(std::move(reg)) {}

    static bool is_zero_vec(const ExpVec& e) {
        return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    }

    static void check_same_registry(const LaurentPoly& a, const LaurentPoly& b, const char* op) {
        if (a.reg_ && b.reg_ && a.reg_ != b.reg_)
            throw RegistryMismatch(std::string(op) + ": operands use different registries");
    }

    static ExpVec min_exponents(const LaurentPoly& p) {
        ExpVec m = p.terms_.begin()->first;
        for (const auto& [e, c] : p.terms_)
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
        return m;
    }

    static TermMap shift_terms(const TermMap& terms, const ExpVec& by, int dir) {
        TermMap out;
        for (const auto& [e, c] : terms) {
            ExpVec t(e);
            for (std::size_t i = 0; i < t.size(); ++i) t[i] += dir * by[i];
            out.emplace(std::move(t), c);
        }
        return out;
    }

    RegistryPtr reg_;
    TermMap terms_;
};

inline LaurentPoly operator*(const BigInt& c, const LaurentPoly& p) {
    return LaurentPoly::constant(p.registry(), c) * p;
}

}  // namespace qcluster

#endif  // QCLUSTER_LAURENT_HPP
