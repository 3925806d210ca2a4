#include "corpus.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lsym/linalg.hpp"
#include "lsym/parse.hpp"

namespace lsym::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

CorpusEntry parse_corpus_entry(const std::string& text, const std::string& origin) {
    CorpusEntry entry;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::CorpusParseError,
                        origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key == "id") {
            entry.id = value;
        } else if (key == "ode") {
            entry.ode_text = value;
        } else if (key == "lambda") {
            entry.expected_lambda = value;
        } else if (key == "symmetry") {
            auto comma = value.find(',');
            if (comma == std::string::npos)
                throw Error(ErrorCode::CorpusParseError,
                            origin + ":" + std::to_string(lineno) +
                                ": symmetry needs \"tau, eta\"");
            entry.expected_symmetries.emplace_back(trim(value.substr(0, comma)),
                                                   trim(value.substr(comma + 1)));
        } else if (key == "integral") {
            entry.expected_integrals.push_back(value);
        } else if (key == "basis_hint") {
            entry.basis_hints.push_back(value);
        } else if (key == "window") {
            try {
                entry.window = std::stoi(value);
            } catch (const std::exception&) {
                throw Error(ErrorCode::CorpusParseError,
                            origin + ":" + std::to_string(lineno) + ": bad window value");
            }
        } else {
            throw Error(ErrorCode::CorpusParseError,
                        origin + ":" + std::to_string(lineno) + ": unknown key " + key);
        }
    }
    if (entry.id.empty() || entry.ode_text.empty() || entry.expected_lambda.empty())
        throw Error(ErrorCode::CorpusParseError,
                    origin + ": an entry needs at least id, ode and lambda");
    return entry;
}

CorpusEntry load_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::CorpusParseError, "cannot open corpus file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_corpus_entry(ss.str(), path);
}

std::vector<CorpusEntry> load_corpus_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<CorpusEntry> entries;
    if (!fs::is_directory(dir))
        throw Error(ErrorCode::CorpusParseError, "corpus directory not found: " + dir);
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".ode") entries.push_back(load_corpus_file(e.path()));
    std::sort(entries.begin(), entries.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
    if (entries.empty())
        throw Error(ErrorCode::CorpusParseError, "no .ode entries under " + dir);
    return entries;
}

namespace {

// first integrals match up to the trivial gauge c*I + b with rational
// constants, c nonzero
bool integrals_match(const Expr& derived, const Expr& expected) {
    auto coords = express_linear({derived, Expr::integer(1)}, expected);
    return coords && (*coords)[0] != 0;
}

}  // namespace

CorpusResult run_corpus_entry(const CorpusEntry& entry) {
    auto t0 = std::chrono::steady_clock::now();
    CorpusResult res;
    res.id = entry.id;
    auto fail = [&](const std::string& why) { res.failures.push_back(why); };

    try {
        SecondOrderODE ode = parse_ode(entry.ode_text);
        ParseContext ctx;
        ctx.dependents = {ode.depvar.name()};

        auto lj = lambda_from_divergence(ode);
        Expr expected_lambda = parse_expr(entry.expected_lambda, ctx);
        if (!is_zero(lj.lambda - expected_lambda))
            fail("lambda_J mismatch: got " + render(lj.lambda));

        AnalysisOptions opt;
        opt.window = entry.window;
        opt.extra_generators = entry.basis_hints;

        AnsatzBasis basis = AnsatzBasis::point_fields(ode, entry.window);
        AnsatzBasis inv_basis = AnsatzBasis::invariants(ode, entry.window);
        for (const auto& h : entry.basis_hints) {
            Expr e = parse_expr(h, ctx);
            basis.add(e);
            inv_basis.add(e);
        }
        Expr lambda = lj.zero_divergence ? Expr() : lj.lambda;
        auto found = solve_determining(ode, lambda, basis);

        for (const auto& [tau_s, eta_s] : entry.expected_symmetries) {
            LambdaSymmetry expected = LambdaSymmetry::certify(
                ode, PointField(parse_expr(tau_s, ctx), parse_expr(eta_s, ctx)), lambda);
            bool matched = false;
            for (const auto& s : found)
                if (is_equivalent(ode, s, expected)) matched = true;
            if (!matched)
                fail("expected symmetry (" + tau_s + ", " + eta_s +
                     ") has no equivalent among the " + std::to_string(found.size()) +
                     " found");
        }

        if (!entry.expected_integrals.empty()) {
            // derive one integral through the pipeline and verify the
            // expected ones directly
            std::optional<Expr> derived;
            try {
                auto pairs = find_invariants(ode, found.front(), inv_basis);
                Expr G = reduce_ode(ode, pairs[0],
                                    AnsatzBasis::reduced_rhs(reduced_t(), reduced_y(), 5));
                if (auto I = integrate_reduced(G))
                    derived = substitute(
                        *I, {{reduced_t(), pairs[0].t1}, {reduced_y(), pairs[0].y1}});
            } catch (const Error&) {
                // fall through; the absence is reported below
            }
            for (const auto& i_s : entry.expected_integrals) {
                Expr expected = parse_expr(i_s, ctx);
                if (!check_first_integral(ode, FirstIntegral{expected})) {
                    fail("expected integral does not verify: " + i_s);
                    continue;
                }
                if (!derived) {
                    fail("pipeline derived no integral to compare with " + i_s);
                    continue;
                }
                if (!integrals_match(*derived, expected))
                    fail("derived integral " + render(*derived) + " does not match " + i_s);
            }
        }
    } catch (const Error& e) {
        fail(e.what());
    }

    res.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    res.passed = res.failures.empty();
    return res;
}

}  // namespace lsym::cli
