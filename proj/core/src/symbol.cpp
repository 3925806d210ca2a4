#include "lsym/symbol.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace lsym {

namespace {

struct SymbolData {
    std::string name;
    SymbolKind kind;
    int order;
    std::uint32_t base;  // DerivCoord: id of the dependent variable
};

}  // namespace

class SymbolRegistry {
public:
    static SymbolRegistry& instance() {
        static SymbolRegistry reg;
        return reg;
    }

    Symbol intern(const std::string& name, SymbolKind kind, int order, std::uint32_t base) {
        Key key{name, kind, order};
        {
            std::shared_lock lock(mu_);
            auto it = index_.find(key);
            if (it != index_.end()) return Symbol(it->second);
        }
        std::unique_lock lock(mu_);
        auto it = index_.find(key);
        if (it != index_.end()) return Symbol(it->second);
        auto id = static_cast<std::uint32_t>(data_.size());
        data_.push_back(SymbolData{name, kind, order, base});
        index_.emplace(std::move(key), id);
        return Symbol(id);
    }

    const SymbolData& get(std::uint32_t id) const {
        std::shared_lock lock(mu_);
        return data_.at(id);
    }

private:
    using Key = std::tuple<std::string, SymbolKind, int>;
    mutable std::shared_mutex mu_;
    std::map<Key, std::uint32_t> index_;
    std::vector<SymbolData> data_;
};

Symbol Symbol::independent(const std::string& name) {
    return SymbolRegistry::instance().intern(name, SymbolKind::Independent, 0, 0);
}

Symbol Symbol::dependent(const std::string& name) {
    return SymbolRegistry::instance().intern(name, SymbolKind::Dependent, 0, 0);
}

Symbol Symbol::deriv(Symbol dep, int order) {
    if (order < 0) throw std::invalid_argument("negative derivative order");
    if (order == 0) return dep;
    auto& reg = SymbolRegistry::instance();
    const auto& d = reg.get(dep.id_);
    if (d.kind == SymbolKind::DerivCoord)
        return deriv(Symbol(d.base), d.order + order);
    if (d.kind != SymbolKind::Dependent)
        throw std::invalid_argument("derivative coordinate of a non-dependent symbol");
    return reg.intern(d.name, SymbolKind::DerivCoord, order, dep.id_);
}

Symbol Symbol::parameter(const std::string& name) {
    return SymbolRegistry::instance().intern(name, SymbolKind::Parameter, 0, 0);
}

Symbol Symbol::function(const std::string& name, int order) {
    if (order < 0) throw std::invalid_argument("negative derivative order");
    return SymbolRegistry::instance().intern(name, SymbolKind::Function, order, 0);
}

const std::string& Symbol::name() const { return SymbolRegistry::instance().get(id_).name; }
SymbolKind Symbol::kind() const { return SymbolRegistry::instance().get(id_).kind; }
int Symbol::order() const { return SymbolRegistry::instance().get(id_).order; }

Symbol Symbol::base() const {
    const auto& d = SymbolRegistry::instance().get(id_);
    return d.kind == SymbolKind::DerivCoord ? Symbol(d.base) : *this;
}

Symbol Symbol::raised() const {
    const auto& d = SymbolRegistry::instance().get(id_);
    switch (d.kind) {
        case SymbolKind::Dependent: return deriv(*this, 1);
        case SymbolKind::DerivCoord: return deriv(Symbol(d.base), d.order + 1);
        case SymbolKind::Function: return function(d.name, d.order + 1);
        default: throw std::invalid_argument("cannot raise derivative order of " + d.name);
    }
}

std::string Symbol::display() const {
    const auto& d = SymbolRegistry::instance().get(id_);
    std::string s = d.name;
    if (d.kind == SymbolKind::DerivCoord || d.kind == SymbolKind::Function)
        s.append(static_cast<std::size_t>(d.order), '\'');
    return s;
}

}  // namespace lsym
