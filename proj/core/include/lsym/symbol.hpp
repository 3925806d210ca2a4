#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lsym {

enum class SymbolKind {
    Independent,   // the independent variable, t
    Dependent,     // a dependent variable: y, r2, w1
    DerivCoord,    // derivative coordinate of a dependent variable: y', y''
    Parameter,     // a constant: a, b, p
    Function,      // an arbitrary function of t and its derivatives: f, f', q''
};

/// Interned symbol. Two symbols compare equal iff name, kind and order
/// match; the interner guarantees one id per such triple and is safe for
/// concurrent use.
class Symbol {
public:
    static Symbol independent(const std::string& name);
    static Symbol dependent(const std::string& name);
    /// k-th derivative coordinate of a dependent variable, k >= 1
    /// (deriv(y, 0) is y itself).
    static Symbol deriv(Symbol dependent, int order);
    static Symbol parameter(const std::string& name);
    /// d-th derivative of an arbitrary function of t, d >= 0.
    static Symbol function(const std::string& name, int order = 0);

    const std::string& name() const;
    SymbolKind kind() const;
    /// Derivative order (DerivCoord and Function kinds; 0 otherwise).
    int order() const;
    /// For a DerivCoord, the underlying dependent variable.
    Symbol base() const;
    /// Bump a DerivCoord or Function one derivative order up.
    Symbol raised() const;

    /// Prime-suffix display form: "y'", "f''".
    std::string display() const;

    std::uint32_t id() const { return id_; }
    bool operator==(const Symbol& o) const { return id_ == o.id_; }
    bool operator!=(const Symbol& o) const { return id_ != o.id_; }
    bool operator<(const Symbol& o) const { return id_ < o.id_; }

private:
    explicit Symbol(std::uint32_t id) : id_(id) {}
    std::uint32_t id_;
    friend class SymbolRegistry;
};

}  // namespace lsym
