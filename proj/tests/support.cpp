#include "support.hpp"

namespace lsym::testing {

Expr random_expr(std::mt19937_64& rng, int depth, const std::vector<Symbol>& syms) {
    std::uniform_int_distribution<int> op_d(0, depth <= 0 ? 1 : 9);
    std::uniform_int_distribution<int> small(-6, 6);
    std::uniform_int_distribution<std::size_t> pick(0, syms.size() - 1);
    switch (op_d(rng)) {
        case 0: {
            int n = small(rng);
            int d = std::abs(small(rng)) + 1;
            return Expr::rational(n, d);
        }
        case 1: return Expr::symbol(syms[pick(rng)]);
        case 2: return random_expr(rng, depth - 1, syms) + random_expr(rng, depth - 1, syms);
        case 3: return random_expr(rng, depth - 1, syms) - random_expr(rng, depth - 1, syms);
        case 4:
        case 5: return random_expr(rng, depth - 1, syms) * random_expr(rng, depth - 1, syms);
        case 6: {
            Expr num = random_expr(rng, depth - 1, syms);
            Expr den = random_expr(rng, depth - 1, syms);
            try {
                return num / den;
            } catch (const Error&) {
                return num;
            }
        }
        case 7: {
            std::uniform_int_distribution<int> e_d(0, 3);
            return random_expr(rng, depth - 1, syms).ipow(e_d(rng));
        }
        case 8: return Expr::exp(random_expr(rng, std::min(depth - 1, 2), syms));
        default: {
            Expr arg = random_expr(rng, std::min(depth - 1, 2), syms);
            if (arg.is_rational_constant() && arg.rational_value() <= 0)
                arg = arg * arg + Expr::integer(1);
            return Expr::log(arg + Expr::integer(2));
        }
    }
}

PointField random_point_field(std::mt19937_64& rng, Symbol depvar) {
    Expr t = Expr::symbol(Symbol::independent("t"));
    Expr y = Expr::symbol(depvar);
    std::uniform_int_distribution<int> c_d(-3, 3);
    std::uniform_int_distribution<int> e_d(-2, 2);
    auto component = [&]() {
        Expr acc;
        for (int k = 0; k < 3; ++k)
            acc += Expr::integer(c_d(rng)) * t.ipow(e_d(rng)) * y.ipow(e_d(rng));
        return acc;
    };
    return PointField(component(), component());
}

std::vector<Expr> classical_prolong(const PointField& X, const SecondOrderODE& ode) {
    Symbol yp = ode.yp(), ypp = ode.ypp();
    Expr eta1 = total_derivative(X.eta) - Expr::symbol(yp) * total_derivative(X.tau);
    Expr eta2 = total_derivative(eta1) - Expr::symbol(ypp) * total_derivative(X.tau);
    eta2 = substitute(eta2, {{ypp, ode.phi}});
    return {eta1, eta2};
}

const std::vector<std::pair<std::string, std::string>>& corpus_equations() {
    static const std::vector<std::pair<std::string, std::string>> eqs = {
        {"kamke-542", "y'' = y'^2/y + f'(t)*y^(p+1) + p*f(t)*y'*y^p"},
        {"painleve-ince-V", "y'' = -2*y*y' + q(t)*y' + q'(t)*y"},
        {"painleve-ince-XIV", "y'' = y'^2/y + (Q(t)*y + S(t)/y)*y' + Q'(t)*y^2 - S'(t)"},
        {"painleve-ince-XV",
         "y'' = y'^2/y + y'/y + r(t)*y^2 - y*r''(t)/r(t) + y*r'(t)^2/r(t)^2"},
        {"painleve-ince-XVI", "y'' = y'^2/y - q'(t)*y'/y + y^3 - q(t)*y^2 + q''(t)"},
        {"ex4-catalano", "y'' = (t*y' - t*y^2 + y^2)*exp(-1/y) + 2*y'^2/y + y'"},
        {"ex5-catalano",
         "y'' = 2*y'^2/y + (t*exp(t/y) - 4/t)*y' - (3*y^2/t + y)*exp(t/y) + t*y^2 + 2*y/t^2"},
        {"murro-eq38", "y'' = 3*y'^2/y - y^4/2 - y/2"},
        {"volterra-r2", "r2'' = -(b*exp(r2) + a)*(a - r2')"},
    };
    return eqs;
}

}  // namespace lsym::testing
